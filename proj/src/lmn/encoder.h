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

#ifndef LMN_ENCODER_H_
#define LMN_ENCODER_H_

#include <array>
#include <string>
#include <vector>

#include "lmn/montecarlo.h"

namespace lmn {

/// Redundancy code protecting t phase errors with n = 2t + 1 qubits per link.
struct CodeParams {
    int t = 0;
    int n() const noexcept {
        return 2 * t + 1;
    }
};

enum class LogicalMode {
    kExactSum,         // both sums as printed, without survival factors
    kLeadingOrder,     // C(n, t+1) eps^(t+1) and n eps
    kSurvivalFactors,  // binomial probabilities including (1 - eps)^(n - j)
};

struct LogicalRates {
    double eps_p_tilde = 0.0;
    double eps_b_tilde = 0.0;
    LogicalMode mode = LogicalMode::kExactSum;
};

struct NetworkRates {
    double eps_p_net = 0.0;
    double eps_b_net = 0.0;
};

/// Weights of the Bell states (Phi+, Psi+, Phi-, Psi-).
using BellWeights = std::array<double, 4>;

struct NetworkEstimate {
    double E_target = 0.0;
    int n = 0;  // lattice size
    int t = 0;
    double eps_phys = 0.0;
    LogicalRates logical;
    double eps_p_net = 0.0;
    double eps_b_net = 0.0;
    BellWeights state_coeffs{};
    double E = 0.0;
    int qubits_per_station = 0;
};

struct PlannerOptions {
    int t_max = 12;
    LogicalMode mode = LogicalMode::kExactSum;
    /// Tolerable rates below this count as infeasible.
    double eps_floor = 1e-3;
};

LogicalRates logical_rates(double eps, CodeParams code, LogicalMode mode = LogicalMode::kExactSum);

/// Phase errors accumulate over the 2N(N-1) links; the bit-flip rate is
/// 1 - P_inf at the logical flip rate.
NetworkRates network_rates(const LogicalRates &logical, int n, const PinfModel &pinf);

BellWeights final_state(double eps_b_net, double eps_p_net);

/// 1 - H2(eps_b) - H2(eps_p).
double distillable_entanglement(double eps_b_net, double eps_p_net);
/// 1 - H2(F) for a two-state mixture of fidelity F.
double distillable_entanglement_single(double fidelity);

/// Distillable entanglement reached with elementary error rate eps and code t.
/// Returns -infinity when the rates leave the physical or model domain.
double achieved_entanglement(double eps, int n, CodeParams code, const PinfModel &pinf,
                             LogicalMode mode = LogicalMode::kExactSum);

/// For each t in [1, t_max], the largest eps reaching E_target; returns the t
/// with the largest such eps (ties to the smaller t). Throws kInfeasible.
NetworkEstimate plan_resources(double E_target, int n, const PinfModel &pinf, const PlannerOptions &options = {});

struct QubitRole {
    std::string role;
    int count = 0;
};

struct QubitBudget {
    std::vector<QubitRole> roles;  // links 4n, check n, ancilla 2
    int itemized_total = 0;        // 5n + 2
    int total = 0;                 // 5n
};

QubitBudget station_qubit_budget(CodeParams code);

}  // namespace lmn

#endif  // LMN_ENCODER_H_
