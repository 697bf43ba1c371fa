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

#include "lmn/noise.h"

#include <algorithm>
#include <cmath>

#include "lmn/error.h"

namespace lmn {

namespace {

void require_probability(double p, const char *what) {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorCode::kDomain, what);
}

// Bisection for the root of an increasing function on [lo, hi].
template <typename F>
double bisect_increasing(F f, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

constexpr double kLow = 1e-12;
constexpr double kTolerance = 1e-13;

}  // namespace

void NoiseParams::validate_and_complete() {
    require_probability(eps_b, "eps_b must lie in [0, 1]");
    require_probability(eps_c, "eps_c must lie in [0, 1]");
    require_probability(beta, "beta must lie in [0, 1]");
    require_probability(delta, "delta must lie in [0, 1]");
    require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::kDomain, "gamma must be non-negative");
    require(std::isfinite(T0) && T0 >= 0.0, ErrorCode::kDomain, "T0 must be non-negative");
    require(m >= 1 && m % 2 == 1, ErrorCode::kInvalidArgument, "m must be an odd positive integer");
    if (gamma > 0.0 && T0 > 0.0) {
        mu = gamma * T0;
    }
    require_probability(mu, "mu must lie in [0, 1]");
}

double binary_entropy(double p) {
    require_probability(p, "binary_entropy: p must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double solve_entropy_threshold(double checks_info_bits, int channels_per_check) {
    require(channels_per_check >= 1, ErrorCode::kInvalidArgument, "channels_per_check must be positive");
    require(checks_info_bits > 0.0 && checks_info_bits <= channels_per_check, ErrorCode::kDomain,
            "checks_info_bits must lie in (0, channels_per_check]");
    const double target = checks_info_bits / channels_per_check;
    if (target >= 1.0) {
        return 0.5;
    }
    return bisect_increasing([target](double x) { return binary_entropy(x) - target; }, kLow, 0.5, kTolerance);
}

double threshold_with_measurement_error(double eps_c) {
    require(std::isfinite(eps_c) && eps_c >= 0.0 && eps_c <= 0.5, ErrorCode::kDomain, "eps_c must lie in [0, 0.5]");
    const double bits = 1.0 - binary_entropy(eps_c);
    if (bits <= 0.0) {
        return 0.0;
    }
    return solve_entropy_threshold(bits, 2);
}

double effective_flip_probability(double eps_b, double eps_c) {
    require_probability(eps_b, "eps_b must lie in [0, 1]");
    require_probability(eps_c, "eps_c must lie in [0, 1]");
    return std::min(1.0, eps_b + 3.0 * eps_c);
}

ErrorBudget error_budget(const NoiseParams &params) {
    NoiseParams p = params;
    p.validate_and_complete();
    ErrorBudget out;
    out.components.push_back({"base", 4.0 * p.beta + 2.0 * p.delta + 0.5 * p.mu, true});
    out.components.push_back({"repeated-checks", 0.5 * p.m * p.beta, true});
    // Second-order readout error after majority voting, charged as a bit flip.
    out.components.push_back({"measurement-residual", 0.25 * (p.beta + p.delta), p.m == 3});
    double total = 0.0;
    for (const auto &c : out.components) {
        total += c.value;
    }
    out.eps_b_phys = std::min(1.0, total);
    out.eps_p_phys = out.eps_b_phys;
    out.F0_pumped = std::clamp(1.0 - 1.25 * p.beta - 0.75 * p.mu, 0.0, 1.0);
    return out;
}

EdgeSet sample_edge_errors(const Lattice &lattice, double eps_b, RandomStream &rng) {
    require_probability(eps_b, "eps_b must lie in [0, 1]");
    EdgeSet out(lattice.num_edges());
    for (int e = 0; e < lattice.num_edges(); ++e) {
        if (rng.bernoulli(eps_b)) {
            out.set(e);
        }
    }
    return out;
}

std::vector<int> sample_check_errors(const Lattice &lattice, double eps_c, RandomStream &rng) {
    require_probability(eps_c, "eps_c must lie in [0, 1]");
    std::vector<int> out;
    for (int s = 0; s < lattice.num_sites(); ++s) {
        if (rng.bernoulli(eps_c)) {
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace lmn
