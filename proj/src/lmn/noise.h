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

#ifndef LMN_NOISE_H_
#define LMN_NOISE_H_

#include <string>
#include <vector>

#include "lmn/lattice.h"
#include "lmn/rng.h"

namespace lmn {

/// Scalar error probabilities of one network configuration.
struct NoiseParams {
    double eps_b = 0.0;  // channel bit flip, per edge
    double eps_c = 0.0;  // parity-check readout error
    double beta = 0.0;   // two-qubit gate
    double delta = 0.0;  // single-qubit measurement
    double mu = 0.0;     // memory error per storage window
    double gamma = 0.0;  // memory decay rate
    double T0 = 0.0;     // storage window
    int m = 3;           // parity-check repetitions, odd

    /// Checks ranges and fills mu from gamma * T0 when both are given.
    void validate_and_complete();
};

struct BudgetComponent {
    std::string label;
    double value = 0.0;
    bool calibrated = true;
};

struct ErrorBudget {
    double eps_b_phys = 0.0;
    double eps_p_phys = 0.0;
    double F0_pumped = 1.0;
    std::vector<BudgetComponent> components;
};

/// H2(p) in bits, with H2(0) = H2(1) = 0.
double binary_entropy(double p);

/// The root in (0, 0.5) of channels_per_check * H2(x) = checks_info_bits.
double solve_entropy_threshold(double checks_info_bits, int channels_per_check);

/// Root of 2 H2(x) = 1 - H2(eps_c).
double threshold_with_measurement_error(double eps_c);

/// eps_b + 3 eps_c, capped at 1.
double effective_flip_probability(double eps_b, double eps_c);

ErrorBudget error_budget(const NoiseParams &params);

EdgeSet sample_edge_errors(const Lattice &lattice, double eps_b, RandomStream &rng);
/// Sorted ids of sites whose parity readout is flipped.
std::vector<int> sample_check_errors(const Lattice &lattice, double eps_c, RandomStream &rng);

}  // namespace lmn

#endif  // LMN_NOISE_H_
