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

#ifndef LMN_MONTECARLO_H_
#define LMN_MONTECARLO_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lmn/lattice.h"

namespace lmn {

struct SweepConfig {
    LatticeSpec lattice;
    std::vector<double> eps_grid;
    int64_t trials = 1;
    uint64_t master_seed = 0;
    int workers = 1;
};

struct PointEstimate {
    LatticeKind kind = LatticeKind::kSquareTorus;
    int n = 0;
    double eps_b = 0.0;
    int64_t trials = 0;
    double p_agree = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(trials)
    uint64_t seed = 0;
};

/// Mean agreement probability over `trials` decoded instances. Trial i draws
/// from a stream keyed by (seed, lattice, eps_b, i), so the estimate does not
/// depend on `workers`.
PointEstimate run_point(const LatticeSpec &spec, double eps_b, int64_t trials, uint64_t seed, int workers = 1);

std::vector<PointEstimate> run_sweep(const SweepConfig &config);

enum class PinfKind { kQuadraticSmallEps, kTableInterpolated };

/// Large-lattice agreement probability as a function of the flip rate.
struct PinfModel {
    PinfKind kind = PinfKind::kTableInterpolated;
    std::vector<std::pair<double, double>> table;  // (eps, P_inf), eps strictly increasing
    double coefficient = 0.0;                      // 1 - c x^2 law; also the table's fallback below its first knot
    bool has_fallback = false;

    static constexpr double kQuadraticDomain = 0.05;

    static PinfModel quadratic(double coefficient);
    static PinfModel interpolated(std::vector<std::pair<double, double>> knots, double fallback_coefficient,
                                  bool has_fallback);

    /// Throws kDomain outside the model's range.
    double operator()(double eps) const;
    /// Largest eps the model accepts.
    double max_eps() const;
};

/// Fits P_N = P_inf + a / N at every eps (at least three sizes each) and
/// tabulates P_inf.
PinfModel extrapolate_pinf(const std::vector<PointEstimate> &estimates);

struct SmallEpsFit {
    double coefficient = 0.0;
    double relative_rms = 0.0;  // sqrt(sum r^2 / sum y^2) with y = 1 - P_inf
    bool poor_fit = false;      // relative_rms above kPoorFitThreshold
    int knots = 0;

    static constexpr double kPoorFitThreshold = 0.1;
};

/// Least-squares c in P_inf = 1 - c x^2 over table knots with 0 < x <= eps_max.
SmallEpsFit fit_small_eps_coefficient(const PinfModel &model, double eps_max = 0.04);

struct ThresholdEstimate {
    double eps_star = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<double> crossings;  // one per consecutive pair of sizes
    std::string method = "pairwise-linear-crossing";
};

/// Mean crossing of the P_N curves of consecutive sizes. `curves` maps N to
/// its points; grids are matched on common eps values. Throws kNoCrossing if
/// some pair of curves does not cross inside the grid.
ThresholdEstimate estimate_threshold(const std::map<int, std::vector<PointEstimate>> &curves);

/// Groups points by lattice size.
std::map<int, std::vector<PointEstimate>> group_by_size(const std::vector<PointEstimate> &points);

}  // namespace lmn

#endif  // LMN_MONTECARLO_H_
