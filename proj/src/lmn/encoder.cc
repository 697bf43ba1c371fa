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

#include "lmn/encoder.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lmn/error.h"
#include "lmn/noise.h"

namespace lmn {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

void require_probability(double p, const char *what) {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorCode::kDomain, what);
}

constexpr double kBisectionTolerance = 1e-10;

}  // namespace

LogicalRates logical_rates(double eps, CodeParams code, LogicalMode mode) {
    require_probability(eps, "eps must lie in [0, 1]");
    require(code.t >= 0, ErrorCode::kInvalidArgument, "t must be non-negative");
    const int n = code.n();
    const int t = code.t;
    LogicalRates out;
    out.mode = mode;
    switch (mode) {
        case LogicalMode::kLeadingOrder:
            out.eps_p_tilde = binomial(n, t + 1) * std::pow(eps, t + 1);
            out.eps_b_tilde = n * eps;
            break;
        case LogicalMode::kExactSum:
        case LogicalMode::kSurvivalFactors: {
            const bool survival = mode == LogicalMode::kSurvivalFactors;
            auto term = [&](int j) {
                double v = binomial(n, j) * std::pow(eps, j);
                return survival ? v * std::pow(1.0 - eps, n - j) : v;
            };
            for (int j = t + 1; j <= n; ++j) {
                out.eps_p_tilde += term(j);
            }
            for (int j = 0; j <= t; ++j) {
                out.eps_b_tilde += term(2 * j + 1);
            }
            break;
        }
    }
    out.eps_p_tilde = std::clamp(out.eps_p_tilde, 0.0, 1.0);
    out.eps_b_tilde = std::clamp(out.eps_b_tilde, 0.0, 1.0);
    return out;
}

NetworkRates network_rates(const LogicalRates &logical, int n, const PinfModel &pinf) {
    require(n >= 2, ErrorCode::kInvalidArgument, "lattice size must be at least 2");
    require_probability(logical.eps_p_tilde, "eps_p_tilde must lie in [0, 1]");
    require_probability(logical.eps_b_tilde, "eps_b_tilde must lie in [0, 1]");
    NetworkRates out;
    const double links = 2.0 * n * (n - 1.0);
    // 1 - (1 - x)^links without cancellation for tiny x and huge exponents.
    out.eps_p_net = logical.eps_p_tilde >= 1.0 ? 1.0 : -std::expm1(links * std::log1p(-logical.eps_p_tilde));
    out.eps_b_net = std::clamp(1.0 - pinf(logical.eps_b_tilde), 0.0, 1.0);
    return out;
}

BellWeights final_state(double eps_b_net, double eps_p_net) {
    require_probability(eps_b_net, "eps_b_net must lie in [0, 1]");
    require_probability(eps_p_net, "eps_p_net must lie in [0, 1]");
    const double b = eps_b_net;
    const double p = eps_p_net;
    return {(1.0 - b) * (1.0 - p), b * (1.0 - p), (1.0 - b) * p, b * p};
}

double distillable_entanglement(double eps_b_net, double eps_p_net) {
    return 1.0 - binary_entropy(eps_b_net) - binary_entropy(eps_p_net);
}

double distillable_entanglement_single(double fidelity) {
    return 1.0 - binary_entropy(fidelity);
}

double achieved_entanglement(double eps, int n, CodeParams code, const PinfModel &pinf, LogicalMode mode) {
    const LogicalRates logical = logical_rates(eps, code, mode);
    if (logical.eps_b_tilde > pinf.max_eps()) {
        return -std::numeric_limits<double>::infinity();
    }
    const NetworkRates net = network_rates(logical, n, pinf);
    // Beyond one half the entropy decreases again; those rates are useless.
    if (net.eps_b_net > 0.5 || net.eps_p_net > 0.5) {
        return -std::numeric_limits<double>::infinity();
    }
    return distillable_entanglement(net.eps_b_net, net.eps_p_net);
}

NetworkEstimate plan_resources(double E_target, int n, const PinfModel &pinf, const PlannerOptions &options) {
    require(std::isfinite(E_target) && E_target > 0.0 && E_target < 1.0, ErrorCode::kDomain,
            "E_target must lie in (0, 1)");
    require(n >= 2, ErrorCode::kInvalidArgument, "lattice size must be at least 2");
    require(options.t_max >= 1, ErrorCode::kInvalidArgument, "t_max must be at least 1");

    int best_t = -1;
    double best_eps = 0.0;
    for (int t = 1; t <= options.t_max; ++t) {
        const CodeParams code{t};
        auto feasible = [&](double eps) {
            return achieved_entanglement(eps, n, code, pinf, options.mode) >= E_target;
        };
        // Walk a geometric grid to the first infeasible rate, then bisect;
        // this keeps the answer on the first feasible interval.
        constexpr int kSteps = 400;
        const double lo_grid = 1e-7;
        const double ratio = std::pow(0.5 / lo_grid, 1.0 / kSteps);
        double lo = 0.0;
        double hi = -1.0;
        double x = lo_grid;
        for (int i = 0; i <= kSteps; ++i, x *= ratio) {
            if (!feasible(x)) {
                hi = x;
                break;
            }
            lo = x;
        }
        if (hi < 0.0) {
            lo = 0.5;
        } else {
            while (hi - lo > kBisectionTolerance) {
                const double mid = 0.5 * (lo + hi);
                if (feasible(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        if (lo > best_eps) {
            best_eps = lo;
            best_t = t;
        }
    }
    if (best_t < 0 || best_eps < options.eps_floor) {
        fail(ErrorCode::kInfeasible, "no code size reaches the target entanglement at a tolerable error rate");
    }

    NetworkEstimate out;
    out.E_target = E_target;
    out.n = n;
    out.t = best_t;
    out.eps_phys = best_eps;
    out.logical = logical_rates(best_eps, CodeParams{best_t}, options.mode);
    const NetworkRates net = network_rates(out.logical, n, pinf);
    out.eps_p_net = net.eps_p_net;
    out.eps_b_net = net.eps_b_net;
    out.state_coeffs = final_state(net.eps_b_net, net.eps_p_net);
    out.E = distillable_entanglement(net.eps_b_net, net.eps_p_net);
    out.qubits_per_station = station_qubit_budget(CodeParams{best_t}).total;
    return out;
}

QubitBudget station_qubit_budget(CodeParams code) {
    require(code.t >= 0, ErrorCode::kInvalidArgument, "t must be non-negative");
    const int n = code.n();
    QubitBudget out;
    out.roles = {{"links", 4 * n}, {"check", n}, {"ancilla", 2}};
    out.itemized_total = 5 * n + 2;
    out.total = 5 * n;
    return out;
}

}  // namespace lmn
