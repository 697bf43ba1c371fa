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

#ifndef LMN_PERCOLATION_H_
#define LMN_PERCOLATION_H_

#include <cstdint>

namespace lmn {

/// sqrt(phi0)|00> + sqrt(1 - phi0)|11>, with phi0 >= 1/2.
struct PureLinkState {
    double phi0 = 1.0;
    double phi1() const noexcept {
        return 1.0 - phi0;
    }
};

/// Phi+/Phi- mixture produced by twirling a pure link; the Phi- weight acts
/// as the bit-flip rate once the link is rotated into the flip basis.
struct TwirledLink {
    double flip_rate = 0.0;  // (sqrt(phi0) - sqrt(phi1))^2 / 2
    double phi_plus = 0.0;
    double phi_minus = 0.0;
};

double twirl_to_flip_rate(PureLinkState link);
TwirledLink twirl(PureLinkState link);

/// Largest phi0 for which Procrustean conversion, succeeding with probability
/// 2 phi1, still percolates: 1 - p_star / 2.
double percolation_bound(double p_star = 0.5);

/// phi0 in [1/2, 1] whose twirled flip rate equals eps_star.
double decoding_bound(double eps_star);

/// Fraction of trials whose open bonds join the left and right columns of an
/// n x n site grid.
double simulate_bond_percolation(int n, double p, int64_t trials, uint64_t seed, int workers = 1);

}  // namespace lmn

#endif  // LMN_PERCOLATION_H_
