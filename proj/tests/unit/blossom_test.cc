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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "lmn/blossom.h"
#include "lmn/error.h"

namespace lmn {
namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

// Exact minimum over all matchings by dynamic programming on subsets: the
// lowest unresolved vertex either takes the boundary or pairs with a later one.
int64_t subset_oracle(const CostMatrix &c) {
    const int n = c.size();
    std::vector<int64_t> best(size_t{1} << n, kInf);
    best[(size_t{1} << n) - 1] = 0;
    for (int64_t mask = (int64_t{1} << n) - 2; mask >= 0; --mask) {
        int i = 0;
        while (mask >> i & 1) {
            ++i;
        }
        int64_t b = kInf;
        if (c.boundary_cost(i) != kForbiddenCost && best[mask | (1 << i)] < kInf) {
            b = c.boundary_cost(i) + best[mask | (1 << i)];
        }
        for (int j = i + 1; j < n; ++j) {
            if (!(mask >> j & 1) && c.at(i, j) != kForbiddenCost) {
                const int64_t rest = best[mask | (1 << i) | (1 << j)];
                if (rest < kInf) {
                    b = std::min(b, c.at(i, j) + rest);
                }
            }
        }
        best[mask] = b;
    }
    return best[0];
}

int64_t cost_of(const CostMatrix &c, const std::vector<int> &mate) {
    int64_t total = 0;
    for (int i = 0; i < c.size(); ++i) {
        if (mate[i] == kUnmatched) {
            EXPECT_NE(c.boundary_cost(i), kForbiddenCost);
            total += c.boundary_cost(i);
        } else {
            EXPECT_EQ(mate[mate[i]], i);
            if (mate[i] > i) {
                total += c.at(i, mate[i]);
            }
        }
    }
    return total;
}

CostMatrix random_instance(std::mt19937_64 &rng, int n, int max_cost, bool boundary) {
    CostMatrix c(n);
    std::uniform_int_distribution<int> cost(0, max_cost);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            c.set(i, j, cost(rng));
        }
        if (boundary) {
            c.set_boundary(i, cost(rng));
        }
    }
    return c;
}

// Points on a line give metric costs with many ties, which stresses blossoms.
CostMatrix metric_instance(std::mt19937_64 &rng, int n, bool boundary) {
    std::uniform_int_distribution<int> coord(0, 12);
    std::vector<std::pair<int, int>> pts(n);
    for (auto &p : pts) {
        p = {coord(rng), coord(rng)};
    }
    CostMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            c.set(i, j, std::abs(pts[i].first - pts[j].first) + std::abs(pts[i].second - pts[j].second));
        }
        if (boundary) {
            c.set_boundary(i, 1 + std::min({pts[i].first, pts[i].second, 12 - pts[i].first, 12 - pts[i].second}));
        }
    }
    return c;
}

TEST(BlossomTest, EmptyAndSinglePair) {
    CostMatrix empty(0);
    EXPECT_TRUE(min_weight_matching(empty).empty());
    CostMatrix two(2);
    two.set(0, 1, 7);
    EXPECT_EQ(min_weight_matching(two), (std::vector<int>{1, 0}));
}

TEST(BlossomTest, OddPerfectInstanceIsRejected) {
    CostMatrix three(3);
    three.set(0, 1, 1);
    three.set(1, 2, 1);
    three.set(0, 2, 1);
    try {
        min_weight_matching(three);
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::kMalformedSyndrome);
    }
}

TEST(BlossomTest, PerfectMatchingMatchesSubsetOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1500; ++trial) {
        const int n = 2 * (1 + trial % 7);
        const CostMatrix c = trial % 2 ? random_instance(rng, n, 20, false) : metric_instance(rng, n, false);
        for (int k : {1, 3, 10}) {
            MatchingOptions options;
            options.candidates_per_vertex = k;
            const std::vector<int> mate = min_weight_matching(c, options);
            for (int m : mate) {
                ASSERT_NE(m, kUnmatched);
            }
            ASSERT_EQ(cost_of(c, mate), subset_oracle(c)) << "trial " << trial << " k " << k;
        }
    }
}

TEST(BlossomTest, BoundaryMatchingMatchesSubsetOracle) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 1500; ++trial) {
        const int n = 1 + trial % 13;
        const CostMatrix c = trial % 2 ? random_instance(rng, n, 20, true) : metric_instance(rng, n, true);
        for (int k : {1, 4, 10}) {
            MatchingOptions options;
            options.candidates_per_vertex = k;
            ASSERT_EQ(cost_of(c, min_weight_matching(c, options)), subset_oracle(c)) << "trial " << trial;
        }
    }
}

TEST(BlossomTest, ForbiddenPairsAreAvoided) {
    // 0-1 and 2-3 are forbidden, leaving the crossing pairs.
    CostMatrix c(4);
    c.set(0, 1, kForbiddenCost);
    c.set(2, 3, kForbiddenCost);
    c.set(0, 2, 5);
    c.set(1, 3, 5);
    c.set(0, 3, 9);
    c.set(1, 2, 9);
    EXPECT_EQ(min_weight_matching(c), (std::vector<int>{2, 3, 0, 1}));
}

TEST(BlossomTest, DeterministicForFixedOptions) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const CostMatrix c = metric_instance(rng, 12, trial % 2 == 0);
        EXPECT_EQ(min_weight_matching(c), min_weight_matching(c));
    }
}

TEST(BlossomTest, SolverDualsCertifyOptimality) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 15;
        std::vector<WeightedEdge> edges;
        std::uniform_int_distribution<int> w(1, 30);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng() % 3) {
                    edges.push_back({i, j, w(rng)});
                }
            }
        }
        for (bool maxcard : {false, true}) {
            BlossomMatcher m(n, edges, maxcard);
            m.solve(false);
            EXPECT_TRUE(m.verify_optimum()) << "trial " << trial << " maxcard " << maxcard;
            for (const WeightedEdge &e : edges) {
                EXPECT_GE(m.reduced_cost(e.u, e.v, e.weight), 0);
            }
            if (maxcard && m.is_perfect()) {
                BlossomMatcher warm(n, edges, true);
                warm.solve(true);
                if (warm.is_perfect()) {
                    EXPECT_TRUE(warm.verify_optimum()) << "trial " << trial;
                }
            }
        }
    }
}

TEST(BlossomTest, PerfectMatchingSurvivesForbiddenPairs) {
    // Sparse allowed pairs where a greedy start can strand vertices.
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 800; ++trial) {
        const int n = 2 * (2 + trial % 6);
        CostMatrix c(n);
        std::uniform_int_distribution<int> cost(0, 25);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                c.set(i, j, rng() % 3 == 0 ? cost(rng) : kForbiddenCost);
            }
        }
        const int64_t expected = subset_oracle(c);
        if (expected >= kInf) {
            EXPECT_THROW(min_weight_matching(c), Error);
            continue;
        }
        for (int k : {1, 10}) {
            MatchingOptions options;
            options.candidates_per_vertex = k;
            ASSERT_EQ(cost_of(c, min_weight_matching(c, options)), expected) << "trial " << trial;
        }
    }
}

TEST(BlossomTest, StatsAreReported) {
    std::mt19937_64 rng(15);
    const CostMatrix c = metric_instance(rng, 20, false);
    MatchingStats stats;
    MatchingOptions options;
    options.candidates_per_vertex = 2;
    min_weight_matching(c, options, &stats);
    EXPECT_GE(stats.rounds, 1);
    EXPECT_GT(stats.candidate_edges, 0);
}

}  // namespace
}  // namespace lmn
