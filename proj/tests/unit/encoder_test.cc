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
#include <limits>

#include "lmn/encoder.h"
#include "lmn/error.h"

namespace lmn {
namespace {

double choose(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double h2(double p) {
    return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// 1 - 6 x^2 tabulated past the quadratic model's domain.
PinfModel quadratic_table() {
    std::vector<std::pair<double, double>> knots;
    for (int i = 1; i <= 40; ++i) {
        const double x = i * 0.005;
        knots.emplace_back(x, std::max(0.0, 1 - 6 * x * x));
    }
    return PinfModel::interpolated(knots, 6.0, true);
}

TEST(LogicalRatesTest, UnencodedLimit) {
    for (LogicalMode mode : {LogicalMode::kExactSum, LogicalMode::kLeadingOrder}) {
        const LogicalRates r = logical_rates(0.03, {0}, mode);
        EXPECT_DOUBLE_EQ(r.eps_b_tilde, 0.03);
        EXPECT_DOUBLE_EQ(r.eps_p_tilde, 0.03);
    }
}

TEST(LogicalRatesTest, TwoErrorCodeExamples) {
    const double e = 0.0138;
    const LogicalRates lead = logical_rates(e, {2}, LogicalMode::kLeadingOrder);
    EXPECT_NEAR(lead.eps_b_tilde, 0.069, 1e-12);
    EXPECT_NEAR(lead.eps_p_tilde, 10 * e * e * e, 1e-18);
    EXPECT_NEAR(lead.eps_p_tilde, 2.63e-5, 5e-8);
    const LogicalRates exact = logical_rates(e, {2});
    EXPECT_NEAR(exact.eps_b_tilde, 5 * e + 10 * std::pow(e, 3) + std::pow(e, 5), 1e-16);
    EXPECT_NEAR(exact.eps_b_tilde, 0.06903, 5e-6);
    EXPECT_NEAR(exact.eps_p_tilde, 10 * std::pow(e, 3) + 5 * std::pow(e, 4) + std::pow(e, 5), 1e-18);
}

TEST(LogicalRatesTest, SumsMatchBinomialOracle) {
    for (int t = 0; t <= 8; ++t) {
        const int n = 2 * t + 1;
        for (double e : {0.001, 0.01, 0.05, 0.2}) {
            double odd = 0.0, upper = 0.0, upper_survival = 0.0;
            for (int j = 0; j <= t; ++j) {
                odd += choose(n, 2 * j + 1) * std::pow(e, 2 * j + 1);
            }
            for (int j = t + 1; j <= n; ++j) {
                upper += choose(n, j) * std::pow(e, j);
                upper_survival += choose(n, j) * std::pow(e, j) * std::pow(1 - e, n - j);
            }
            const LogicalRates r = logical_rates(e, {t});
            EXPECT_NEAR(r.eps_b_tilde, std::min(1.0, odd), 1e-12 * odd);
            EXPECT_NEAR(r.eps_p_tilde, std::min(1.0, upper), 1e-12 * upper);
            const LogicalRates s = logical_rates(e, {t}, LogicalMode::kSurvivalFactors);
            EXPECT_NEAR(s.eps_p_tilde, upper_survival, 1e-12 * upper);
        }
    }
}

TEST(LogicalRatesTest, LeadingOrderTracksExactSum) {
    for (int t = 1; t <= 6; ++t) {
        for (int i = 1; i <= 20; ++i) {
            const double e = i * 0.001;
            const LogicalRates exact = logical_rates(e, {t});
            const LogicalRates lead = logical_rates(e, {t}, LogicalMode::kLeadingOrder);
            EXPECT_LE(std::abs(lead.eps_b_tilde - exact.eps_b_tilde), 0.05 * exact.eps_b_tilde) << t << " " << e;
            EXPECT_LE(std::abs(lead.eps_p_tilde - exact.eps_p_tilde), 0.05 * exact.eps_p_tilde) << t << " " << e;
        }
    }
}

TEST(LogicalRatesTest, ClampedAndValidated) {
    const LogicalRates r = logical_rates(0.9, {3});
    EXPECT_LE(r.eps_b_tilde, 1.0);
    EXPECT_LE(r.eps_p_tilde, 1.0);
    EXPECT_THROW(logical_rates(-0.1, {1}), Error);
    EXPECT_THROW(logical_rates(0.1, {-1}), Error);
}

TEST(NetworkRatesTest, Examples) {
    const PinfModel quad = PinfModel::quadratic(6.0);
    LogicalRates r;
    r.eps_b_tilde = 0.01;
    r.eps_p_tilde = 0.0;
    EXPECT_EQ(network_rates(r, 10, quad).eps_p_net, 0.0);
    r.eps_p_tilde = 2.63e-5;
    // The plain power form cancels to about 1e-14.
    EXPECT_NEAR(network_rates(r, 10, quad).eps_p_net, 1 - std::pow(1 - 2.63e-5, 180), 1e-13);
    EXPECT_NEAR(network_rates(r, 10, quad).eps_p_net, 4.7e-3, 5e-5);
    r.eps_b_tilde = 0.069;
    EXPECT_THROW(network_rates(r, 10, quad), Error);
    EXPECT_NEAR(network_rates(r, 10, quadratic_table()).eps_b_net, 6 * 0.069 * 0.069, 2e-4);
    EXPECT_THROW(network_rates(r, 1, quadratic_table()), Error);
}

TEST(FinalStateTest, Examples) {
    const BellWeights pure = final_state(0, 0);
    EXPECT_EQ(pure, (BellWeights{1, 0, 0, 0}));
    const BellWeights mixed = final_state(0.5, 0.5);
    for (double w : mixed) {
        EXPECT_DOUBLE_EQ(w, 0.25);
    }
    const BellWeights w = final_state(0.0286, 0.0047);
    EXPECT_NEAR(w[0], 0.9668, 5e-5);
    EXPECT_NEAR(w[1], 0.0285, 5e-5);
    EXPECT_NEAR(w[2], 0.0046, 5e-5);
    EXPECT_NEAR(w[3], 0.0001, 5e-5);
}

TEST(FinalStateTest, WeightsSumToOne) {
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const BellWeights w = final_state(i / 20.0, j / 40.0);
            EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-15);
            for (double v : w) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
        }
    }
}

TEST(EntanglementTest, Examples) {
    EXPECT_EQ(distillable_entanglement(0, 0), 1.0);
    EXPECT_NEAR(distillable_entanglement(0.0286, 0.0047), 1 - h2(0.0286) - h2(0.0047), 1e-14);
    EXPECT_NEAR(distillable_entanglement(0.0286, 0.0047), 0.77, 0.01);
    EXPECT_EQ(distillable_entanglement_single(0.5), 0.0);
    EXPECT_EQ(distillable_entanglement_single(1.0), 1.0);
    EXPECT_DOUBLE_EQ(distillable_entanglement(0.5, 0.5), -1.0);
}

TEST(EntanglementTest, DecreasingInEachRate) {
    for (int i = 1; i <= 50; ++i) {
        const double a = (i - 1) / 100.0, b = i / 100.0;
        EXPECT_GT(distillable_entanglement(a, 0.05), distillable_entanglement(b, 0.05));
        EXPECT_GT(distillable_entanglement(0.05, a), distillable_entanglement(0.05, b));
    }
}

TEST(PlannerTest, OutputIsConsistentAndMaximal) {
    const PinfModel pinf = quadratic_table();
    for (double target : {0.25, 0.5, 0.75}) {
        for (int n : {10, 100, 1000}) {
            const NetworkEstimate est = plan_resources(target, n, pinf);
            EXPECT_GE(est.t, 1);
            EXPECT_EQ(est.qubits_per_station, 5 * (2 * est.t + 1));
            EXPECT_GE(est.E, target - 1e-9);
            EXPECT_NEAR(est.E, achieved_entanglement(est.eps_phys, n, {est.t}, pinf), 1e-12);
            EXPECT_LT(achieved_entanglement(est.eps_phys * 1.01, n, {est.t}, pinf), target);
            const NetworkRates net = network_rates(est.logical, n, pinf);
            EXPECT_DOUBLE_EQ(net.eps_b_net, est.eps_b_net);
            EXPECT_DOUBLE_EQ(net.eps_p_net, est.eps_p_net);
            EXPECT_EQ(est.state_coeffs, final_state(est.eps_b_net, est.eps_p_net));
            // No other code size tolerates a visibly larger rate.
            for (int t = 1; t <= 12; ++t) {
                EXPECT_LT(achieved_entanglement(est.eps_phys * 1.001, n, {t}, pinf), target) << t;
            }
        }
    }
}

TEST(PlannerTest, CodeSizeGrowsWithNetworkSize) {
    const PinfModel pinf = quadratic_table();
    for (double target : {0.25, 0.5, 0.75}) {
        int prev_t = 0;
        double prev_eps = 1.0;
        for (int n : {10, 100, 1000, 10000, 100000}) {
            const NetworkEstimate est = plan_resources(target, n, pinf);
            EXPECT_GE(est.t, prev_t) << target << " " << n;
            EXPECT_LT(est.eps_phys, prev_eps);
            prev_t = est.t;
            prev_eps = est.eps_phys;
        }
    }
}

TEST(PlannerTest, NearPerfectTargetIsInfeasible) {
    try {
        plan_resources(0.999, 10, quadratic_table());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    }
    EXPECT_THROW(plan_resources(1.0, 10, quadratic_table()), Error);
    EXPECT_THROW(plan_resources(0.0, 10, quadratic_table()), Error);
}

TEST(PlannerTest, OutsideModelDomainCountsAsFailure) {
    const double below = -std::numeric_limits<double>::infinity();
    EXPECT_EQ(achieved_entanglement(0.045, 10, {1}, PinfModel::quadratic(6.0)), below);
}

TEST(QubitBudgetTest, Examples) {
    const QubitBudget unencoded = station_qubit_budget({0});
    EXPECT_EQ(unencoded.itemized_total, 7);
    EXPECT_EQ(unencoded.total, 5);
    int sum = 0;
    for (const auto &r : unencoded.roles) {
        sum += r.count;
    }
    EXPECT_EQ(sum, 7);
    EXPECT_EQ(station_qubit_budget({3}).total, 35);
    EXPECT_EQ(station_qubit_budget({6}).total, 65);
    EXPECT_LE(station_qubit_budget({3}).total, 40);
}

}  // namespace
}  // namespace lmn
