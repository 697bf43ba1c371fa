// Copyright 2026 The lmn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lmn/percolation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include "lmn/error.h"
#include "lmn/rng.h"

namespace lmn {

namespace {

constexpr uint64_t kPercolationStream = 0x706572636f6cULL;

class DisjointSets {
   public:
    explicit DisjointSets(int size) : parent_(size), rank_(size, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    void reset() {
        std::iota(parent_.begin(), parent_.end(), 0);
        std::fill(rank_.begin(), rank_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
    }

   private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

void check_link(PureLinkState link) {
    require(std::isfinite(link.phi0) && link.phi0 >= 0.5 && link.phi0 <= 1.0, ErrorCode::kDomain,
            "phi0 must lie in [0.5, 1]");
}

bool crosses(int n, double p, RandomStream &rng, DisjointSets &sets) {
    sets.reset();
    const int left = n * n;
    const int right = n * n + 1;
    for (int y = 0; y < n; ++y) {
        sets.unite(left, y * n);
        sets.unite(right, y * n + n - 1);
    }
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int s = y * n + x;
            if (x + 1 < n && rng.bernoulli(p)) {
                sets.unite(s, s + 1);
            }
            if (y + 1 < n && rng.bernoulli(p)) {
                sets.unite(s, s + n);
            }
        }
    }
    return sets.find(left) == sets.find(right);
}

}  // namespace

double twirl_to_flip_rate(PureLinkState link) {
    check_link(link);
    const double d = std::sqrt(link.phi0) - std::sqrt(link.phi1());
    return 0.5 * d * d;
}

TwirledLink twirl(PureLinkState link) {
    check_link(link);
    TwirledLink out;
    out.flip_rate = twirl_to_flip_rate(link);
    out.phi_plus = 1.0 - out.flip_rate;
    out.phi_minus = out.flip_rate;
    return out;
}

double percolation_bound(double p_star) {
    require(std::isfinite(p_star) && p_star >= 0.0 && p_star <= 1.0, ErrorCode::kDomain,
            "percolation threshold must lie in [0, 1]");
    return 1.0 - 0.5 * p_star;
}

double decoding_bound(double eps_star) {
    require(std::isfinite(eps_star) && eps_star >= 0.0 && eps_star <= 0.5, ErrorCode::kDomain,
            "eps_star must lie in [0, 0.5]");
    double lo = 0.5;
    double hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (twirl_to_flip_rate({mid}) < eps_star) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double simulate_bond_percolation(int n, double p, int64_t trials, uint64_t seed, int workers) {
    require(n >= 2, ErrorCode::kInvalidArgument, "grid size must be at least 2");
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorCode::kDomain, "p must lie in [0, 1]");
    require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be positive");
    require(workers >= 1, ErrorCode::kInvalidArgument, "workers must be positive");

    std::vector<char> hit(trials, 0);
    std::atomic<int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            DisjointSets sets(n * n + 2);
            for (int64_t t; (t = next.fetch_add(1)) < trials;) {
                RandomStream rng = RandomStream::derive(
                    seed, {kPercolationStream, static_cast<uint64_t>(n), std::bit_cast<uint64_t>(p),
                           static_cast<uint64_t>(t)});
                hit[t] = crosses(n, p, rng, sets) ? 1 : 0;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(trials);
        }
    };
    const int threads = static_cast<int>(std::min<int64_t>(workers, trials));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) {
            pool.emplace_back(work);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    int64_t count = 0;
    for (char h : hit) {
        count += h;
    }
    return static_cast<double>(count) / static_cast<double>(trials);
}

}  // namespace lmn
