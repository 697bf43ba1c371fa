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

#include <cmath>
#include <functional>

#include "lmn/error.h"
#include "lmn/montecarlo.h"

namespace lmn {
namespace {

const LatticeSpec kTorus16{LatticeKind::kSquareTorus, 16};

PointEstimate point(int n, double eps, double p, double se = 1e-3) {
    PointEstimate e;
    e.n = n;
    e.eps_b = eps;
    e.p_agree = p;
    e.std_error = se;
    e.trials = 1000;
    return e;
}

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::kInternal;
}

// ---- run_point / run_sweep -------------------------------------------------

TEST(RunPointTest, NoiselessIsExact) {
    const PointEstimate e = run_point(kTorus16, 0.0, 200, 1);
    EXPECT_EQ(e.p_agree, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.trials, 200);
    EXPECT_EQ(e.n, 16);
}

TEST(RunPointTest, SmallEpsFollowsQuadraticLaw) {
    const PointEstimate e = run_point(kTorus16, 0.05, 10000, 7);
    EXPECT_NEAR(e.p_agree, 1.0 - 6 * 0.05 * 0.05, std::max(3 * e.std_error, 0.005));
    EXPECT_GT(e.std_error, 0.0);
}

TEST(RunPointTest, DisorderedPhaseGivesCoinFlip) {
    // Each trial scores 0.5 + 2 (f - 1/2)^2 for labelled fraction f, so a
    // finite lattice sits above 0.5 by about 2 Var(f) ~ 1 / (2 N^2) for
    // uncorrelated labels.
    const PointEstimate e = run_point(kTorus16, 0.3, 2000, 3);
    EXPECT_GE(e.p_agree, 0.5);
    EXPECT_LE(e.p_agree, 0.5 + 3 * e.std_error + 1.0 / (16 * 16));
}

TEST(RunPointTest, IndependentOfWorkerCount) {
    for (LatticeKind kind : {LatticeKind::kSquarePlanar, LatticeKind::kSquareTorus, LatticeKind::kTriangularTorus}) {
        const LatticeSpec spec{kind, 8};
        const PointEstimate one = run_point(spec, 0.08, 500, 11, 1);
        const PointEstimate three = run_point(spec, 0.08, 500, 11, 3);
        EXPECT_EQ(one.p_agree, three.p_agree);
        EXPECT_EQ(one.std_error, three.std_error);
        EXPECT_EQ(run_point(spec, 0.08, 500, 11, 1).p_agree, one.p_agree);
        EXPECT_NE(run_point(spec, 0.08, 500, 12, 1).p_agree, one.p_agree);
    }
}

TEST(RunPointTest, StderrShrinksAsRootTrials) {
    const LatticeSpec spec{LatticeKind::kSquareTorus, 8};
    const PointEstimate a = run_point(spec, 0.1, 4000, 5);
    const PointEstimate b = run_point(spec, 0.1, 8000, 6);
    EXPECT_NEAR(b.std_error / a.std_error, 1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(RunPointTest, RejectsBadArguments) {
    EXPECT_EQ(code_of([] { run_point(kTorus16, 0.6, 10, 1); }), ErrorCode::kDomain);
    EXPECT_EQ(code_of([] { run_point(kTorus16, 0.1, 0, 1); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([] { run_point(kTorus16, 0.1, 10, 1, 0); }), ErrorCode::kInvalidArgument);
}

TEST(RunSweepTest, ZeroGridAndDeterminism) {
    SweepConfig cfg;
    cfg.lattice = {LatticeKind::kSquareTorus, 6};
    cfg.eps_grid = {0.0};
    cfg.trials = 50;
    cfg.master_seed = 9;
    for (const auto &p : run_sweep(cfg)) {
        EXPECT_EQ(p.p_agree, 1.0);
    }
    cfg.eps_grid = {0.02, 0.06, 0.1};
    const auto first = run_sweep(cfg);
    cfg.workers = 2;
    const auto second = run_sweep(cfg);
    ASSERT_EQ(first.size(), 3u);
    for (size_t i = 0; i < first.size(); ++i) {
        EXPECT_EQ(first[i].p_agree, second[i].p_agree);
        EXPECT_EQ(first[i].eps_b, cfg.eps_grid[i]);
        EXPECT_EQ(first[i].seed, 9u);
    }
}

TEST(RunSweepTest, PointsDoNotDependOnTheRestOfTheGrid) {
    SweepConfig cfg;
    cfg.lattice = {LatticeKind::kSquareTorus, 6};
    cfg.trials = 300;
    cfg.master_seed = 4;
    cfg.eps_grid = {0.05, 0.1};
    const auto coarse = run_sweep(cfg);
    cfg.eps_grid = {0.05, 0.075, 0.1};
    const auto fine = run_sweep(cfg);
    EXPECT_EQ(coarse[0].p_agree, fine[0].p_agree);
    EXPECT_EQ(coarse[1].p_agree, fine[2].p_agree);
}

TEST(RunSweepTest, RejectsUnsortedGrid) {
    SweepConfig cfg;
    cfg.lattice = {LatticeKind::kSquareTorus, 6};
    cfg.eps_grid = {0.1, 0.05};
    EXPECT_EQ(code_of([&] { run_sweep(cfg); }), ErrorCode::kInvalidArgument);
    cfg.eps_grid = {};
    EXPECT_EQ(code_of([&] { run_sweep(cfg); }), ErrorCode::kInvalidArgument);
}

TEST(RunSweepTest, MonotoneCurvesAndSizeOrdering) {
    std::map<int, std::vector<PointEstimate>> curves;
    for (int n : {6, 12}) {
        SweepConfig cfg;
        cfg.lattice = {LatticeKind::kSquareTorus, n};
        cfg.eps_grid = {0.02, 0.05, 0.08, 0.14, 0.18};
        cfg.trials = 1500;
        cfg.master_seed = 13;
        curves[n] = run_sweep(cfg);
        for (size_t i = 1; i < curves[n].size(); ++i) {
            const auto &lo = curves[n][i - 1];
            const auto &hi = curves[n][i];
            EXPECT_LE(hi.p_agree, lo.p_agree + 3 * std::hypot(lo.std_error, hi.std_error)) << n << " " << hi.eps_b;
        }
    }
    for (size_t i = 0; i < 5; ++i) {
        const auto &small = curves[6][i];
        const auto &large = curves[12][i];
        const double slack = 3 * std::hypot(small.std_error, large.std_error);
        if (small.eps_b < 0.08) {
            EXPECT_GE(large.p_agree, small.p_agree - slack);
        } else if (small.eps_b > 0.13) {
            EXPECT_LE(large.p_agree, small.p_agree + slack);
        }
    }
}

// ---- P_inf models ---------------------------------------------------------------

TEST(PinfModelTest, QuadraticDomain) {
    const PinfModel m = PinfModel::quadratic(6.0);
    EXPECT_DOUBLE_EQ(m(0.0), 1.0);
    EXPECT_NEAR(m(0.05), 0.985, 1e-15);
    EXPECT_EQ(m.max_eps(), 0.05);
    EXPECT_EQ(code_of([&] { m(0.06); }), ErrorCode::kDomain);
    EXPECT_EQ(code_of([&] { m(-0.01); }), ErrorCode::kDomain);
    EXPECT_EQ(code_of([] { PinfModel::quadratic(-1); }), ErrorCode::kInvalidArgument);
}

TEST(PinfModelTest, TableInterpolatesAndFallsBack) {
    const PinfModel m = PinfModel::interpolated({{0.01, 0.99}, {0.03, 0.95}}, 100.0, true);
    EXPECT_DOUBLE_EQ(m(0.01), 0.99);
    EXPECT_NEAR(m(0.02), 0.97, 1e-15);
    EXPECT_NEAR(m(0.005), 1 - 100 * 0.005 * 0.005, 1e-15);
    EXPECT_EQ(m.max_eps(), 0.03);
    EXPECT_EQ(code_of([&] { m(0.031); }), ErrorCode::kDomain);
    const PinfModel line = PinfModel::interpolated({{0.02, 0.96}}, 0.0, false);
    EXPECT_NEAR(line(0.01), 0.98, 1e-15);
    EXPECT_EQ(code_of([] { PinfModel::interpolated({{0.02, 0.9}, {0.01, 0.95}}, 0, false); }),
              ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([] { PinfModel::interpolated({}, 0, false); }), ErrorCode::kInsufficientData);
}

TEST(ExtrapolateTest, ConstantAcrossSizes) {
    std::vector<PointEstimate> pts;
    for (int n : {8, 16, 32}) {
        pts.push_back(point(n, 0.0, 1.0));
        pts.push_back(point(n, 0.05, 0.97));
    }
    const PinfModel m = extrapolate_pinf(pts);
    ASSERT_EQ(m.table.size(), 2u);
    EXPECT_DOUBLE_EQ(m.table[0].second, 1.0);
    EXPECT_NEAR(m.table[1].second, 0.97, 1e-14);
}

TEST(ExtrapolateTest, RecoversInverseSizeLaw) {
    std::vector<PointEstimate> pts;
    for (int n : {8, 12, 16, 32}) {
        pts.push_back(point(n, 0.04, 0.9 + 0.4 / n));
    }
    EXPECT_NEAR(extrapolate_pinf(pts).table[0].second, 0.9, 1e-12);
}

TEST(ExtrapolateTest, NeedsThreeSizes) {
    std::vector<PointEstimate> pts = {point(8, 0.02, 0.99), point(16, 0.02, 0.99)};
    EXPECT_EQ(code_of([&] { extrapolate_pinf(pts); }), ErrorCode::kInsufficientData);
}

TEST(ExtrapolateTest, MeasuredKnotNearLargestSize) {
    std::vector<PointEstimate> pts;
    for (int n : {8, 16, 32}) {
        pts.push_back(run_point({LatticeKind::kSquareTorus, n}, 0.02, 3000, 17));
    }
    EXPECT_NEAR(extrapolate_pinf(pts).table[0].second, pts.back().p_agree, 0.005);
}

TEST(SmallEpsFitTest, ExactQuadraticRecovery) {
    std::vector<std::pair<double, double>> knots;
    for (double e : {0.005, 0.01, 0.02, 0.03, 0.04, 0.06}) {
        knots.emplace_back(e, 1 - 6 * e * e);
    }
    const SmallEpsFit fit = fit_small_eps_coefficient(PinfModel::interpolated(knots, 0, false));
    EXPECT_NEAR(fit.coefficient, 6.0, 1e-6);
    EXPECT_EQ(fit.knots, 5);
    EXPECT_FALSE(fit.poor_fit);
}

TEST(SmallEpsFitTest, LinearTableIsFlagged) {
    std::vector<std::pair<double, double>> knots;
    for (double e : {0.005, 0.01, 0.02, 0.03, 0.04}) {
        knots.emplace_back(e, 1 - e);
    }
    EXPECT_TRUE(fit_small_eps_coefficient(PinfModel::interpolated(knots, 0, false)).poor_fit);
}

TEST(SmallEpsFitTest, NeedsFourKnotsAndATable) {
    const PinfModel few = PinfModel::interpolated({{0.01, 0.9994}, {0.02, 0.9976}, {0.1, 0.9}}, 0, false);
    EXPECT_EQ(code_of([&] { fit_small_eps_coefficient(few); }), ErrorCode::kInsufficientData);
    EXPECT_EQ(code_of([] { fit_small_eps_coefficient(PinfModel::quadratic(6)); }), ErrorCode::kInvalidArgument);
}

// ---- threshold ---------------------------------------------------------------------

std::map<int, std::vector<PointEstimate>> synthetic_curves(const std::vector<double> &grid, double crossing) {
    std::map<int, std::vector<PointEstimate>> curves;
    for (int n : {8, 16, 32}) {
        for (double e : grid) {
            curves[n].push_back(point(n, e, 0.75 + (crossing - e) * 0.05 * n));
        }
    }
    return curves;
}

TEST(ThresholdTest, SyntheticCrossingOnAGridPoint) {
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) {
        grid.push_back(i / 100.0);
    }
    const ThresholdEstimate t = estimate_threshold(synthetic_curves(grid, 0.10));
    EXPECT_DOUBLE_EQ(t.eps_star, 0.10);
    ASSERT_EQ(t.crossings.size(), 2u);
    for (double c : t.crossings) {
        EXPECT_EQ(c, 0.10);
    }
    EXPECT_LE(t.ci_low, 0.10);
    EXPECT_GE(t.ci_high, 0.10);
    EXPECT_EQ(t.method, "pairwise-linear-crossing");
}

TEST(ThresholdTest, SyntheticCrossingBetweenGridPoints) {
    const ThresholdEstimate t = estimate_threshold(synthetic_curves({0.05, 0.08, 0.11, 0.14}, 0.0937));
    EXPECT_NEAR(t.eps_star, 0.0937, 1e-12);
}

TEST(ThresholdTest, NoCrossing) {
    std::map<int, std::vector<PointEstimate>> curves;
    for (int n : {8, 16}) {
        for (double e : {0.01, 0.02, 0.03}) {
            curves[n].push_back(point(n, e, 1 - e + 0.001 * n));
        }
    }
    EXPECT_EQ(code_of([&] { estimate_threshold(curves); }), ErrorCode::kNoCrossing);
    curves.erase(16);
    EXPECT_EQ(code_of([&] { estimate_threshold(curves); }), ErrorCode::kInsufficientData);
}

TEST(ThresholdTest, GroupBySizeSortsByEps) {
    const auto g = group_by_size({point(8, 0.2, 0.5), point(16, 0.1, 0.6), point(8, 0.1, 0.7)});
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g.at(8)[0].eps_b, 0.1);
    EXPECT_EQ(g.at(8)[1].eps_b, 0.2);
}

}  // namespace
}  // namespace lmn
