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

#include "lmn/error.h"
#include "lmn/percolation.h"

namespace lmn {
namespace {

TEST(TwirlTest, Examples) {
    EXPECT_NEAR(twirl_to_flip_rate({0.5}), 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(twirl_to_flip_rate({1.0}), 0.5);
    EXPECT_NEAR(twirl_to_flip_rate({0.81}), (0.9 - std::sqrt(0.19)) * (0.9 - std::sqrt(0.19)) / 2, 1e-15);
    EXPECT_NEAR(twirl_to_flip_rate({0.81}), 0.1077, 5e-5);
}

TEST(TwirlTest, MixtureWeights) {
    const TwirledLink link = twirl({0.81});
    EXPECT_DOUBLE_EQ(link.phi_minus, link.flip_rate);
    EXPECT_DOUBLE_EQ(link.phi_plus + link.phi_minus, 1.0);
    // Overlap of the pure state with the ideal pair.
    const double overlap = (std::sqrt(0.81) + std::sqrt(0.19)) * (std::sqrt(0.81) + std::sqrt(0.19)) / 2;
    EXPECT_NEAR(link.phi_plus, overlap, 1e-15);
    EXPECT_EQ(twirl({0.5}).phi_plus, 1.0);
}

TEST(TwirlTest, RejectsInvalidLinks) {
    EXPECT_THROW(twirl_to_flip_rate({0.4}), Error);
    EXPECT_THROW(twirl_to_flip_rate({1.2}), Error);
}

TEST(TwirlTest, MonotoneOnValidRange) {
    double prev = -1.0;
    for (int i = 0; i <= 500; ++i) {
        const double r = twirl_to_flip_rate({0.5 + i / 1000.0});
        EXPECT_GT(r, prev);
        prev = r;
    }
}

TEST(BoundTest, PercolationExamples) {
    EXPECT_DOUBLE_EQ(percolation_bound(), 0.75);
    EXPECT_NEAR(percolation_bound(0.3475), 0.826, 5e-4);
    EXPECT_DOUBLE_EQ(percolation_bound(1.0), 0.5);
}

TEST(BoundTest, DecodingExamples) {
    EXPECT_NEAR(decoding_bound(0.11), 0.8130, 2e-4);
    EXPECT_NEAR(twirl_to_flip_rate({decoding_bound(0.1094)}), 0.1094, 1e-12);
    EXPECT_NEAR(decoding_bound(0.1094), 0.8121, 1e-4);
    EXPECT_NEAR(decoding_bound(1e-12), 0.5, 1e-5);
    EXPECT_NEAR(decoding_bound(0.0), 0.5, 1e-12);
    EXPECT_NEAR(decoding_bound(0.5), 1.0, 1e-12);
    EXPECT_THROW(decoding_bound(-0.1), Error);
    EXPECT_THROW(decoding_bound(0.6), Error);
}

TEST(BoundTest, DecodingInvertsTheTwirl) {
    for (int i = 1; i < 500; ++i) {
        const double phi0 = 0.5 + i / 1000.0;
        EXPECT_NEAR(decoding_bound(twirl_to_flip_rate({phi0})), phi0, 1e-9) << phi0;
    }
}

TEST(BoundTest, DecodingBeatsPercolationAboveCrossover) {
    const double crossover = twirl_to_flip_rate({0.75});
    EXPECT_NEAR(crossover, (std::sqrt(0.75) - 0.5) * (std::sqrt(0.75) - 0.5) / 2, 1e-15);
    EXPECT_NEAR(crossover, 0.0670, 5e-5);
    EXPECT_GT(decoding_bound(0.11), percolation_bound());
    for (int i = 1; i <= 40; ++i) {
        const double eps = crossover + i * (0.49 - crossover) / 40;
        EXPECT_GT(decoding_bound(eps), percolation_bound());
    }
    EXPECT_LT(decoding_bound(crossover * 0.9), percolation_bound());
}

TEST(BondPercolationTest, Extremes) {
    EXPECT_EQ(simulate_bond_percolation(16, 0.0, 100, 1), 0.0);
    EXPECT_EQ(simulate_bond_percolation(16, 1.0, 100, 1), 1.0);
    EXPECT_THROW(simulate_bond_percolation(1, 0.5, 10, 1), Error);
}

TEST(BondPercolationTest, CriticalPointOnSelfDualLattice) {
    const double p = simulate_bond_percolation(64, 0.5, 10000, 2);
    EXPECT_GE(p, 0.4);
    EXPECT_LE(p, 0.6);
    EXPECT_LT(simulate_bond_percolation(64, 0.4, 500, 3), 0.1);
    EXPECT_GT(simulate_bond_percolation(64, 0.6, 500, 3), 0.9);
}

TEST(BondPercolationTest, Deterministic) {
    EXPECT_EQ(simulate_bond_percolation(20, 0.5, 300, 8, 1), simulate_bond_percolation(20, 0.5, 300, 8, 3));
}

}  // namespace
}  // namespace lmn
