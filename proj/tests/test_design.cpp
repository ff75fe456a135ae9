// Copyright 2026 The ionsel Authors
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

#include <random>

#include "ionsel/design.hpp"
#include "ionsel/protocols.hpp"
#include "oracles.hpp"

using namespace ionsel;

namespace {

RamanParams params(double eta2) {
    RamanParams p;
    p.g1 = 1e6;
    p.g2 = 1e6;
    p.delta = 1e8;
    p.eta1 = 0.1;
    p.eta2 = eta2;
    p.nu = 1e7;
    return p;
}

DesignConstraints loose() {
    DesignConstraints c;
    c.min_selectivity = 10.0;
    c.max_pi_time = 1e-3;
    c.grid_points = 5;
    c.refine_sweeps = 2;
    return c;
}

}  // namespace

TEST(Feasibility, SelectivityTwenty) {
    auto r = feasibility(params(0.002), Selector::ajc(0));
    EXPECT_NEAR(r.selectivity, 20.0, 1e-12);
    EXPECT_TRUE(r.ld_valid);
    EXPECT_DOUBLE_EQ(r.dispersive_margin, 100.0);
}

TEST(Feasibility, PaperTimingScenario) {
    auto p = params(0.002);
    p.g1 = p.g2 = 1e7;
    p.eta2 = 1e5 * p.delta / (2.0 * p.g1 * p.g2);
    auto r = feasibility(p, Selector::ajc(0));
    EXPECT_NEAR(r.omega_eff, 1e5, 1e-6);
    EXPECT_NEAR(r.pi_time_paper, std::numbers::pi * 1e-5, 1e-17);
    EXPECT_LT(r.pi_time_paper, 1e-4);
    EXPECT_NEAR(r.decoherence_ratio, std::numbers::pi * 1e-3, 1e-15);
    EXPECT_LT(r.decoherence_ratio, 0.01);
}

TEST(Feasibility, AdiabaticFlagFollowsRatio) {
    auto p = params(0.002);
    p.delta = 10.0 * p.g1;  // Delta / g = 10, Omega_eff = 2 eta2 g / 10
    auto r = feasibility(p, Selector::ajc(0));
    EXPECT_DOUBLE_EQ(r.adiabatic_ratio, std::abs(p.delta) / effective_coupling(p));
    EXPECT_EQ(r.adiabatic_valid, r.adiabatic_ratio >= 10.0 && r.dispersive_margin >= 10.0);
    p.eta2 = 0.29;
    p.delta = 1.0 * p.g1;
    auto bad = feasibility(p, Selector::ajc(0));
    EXPECT_LT(bad.adiabatic_ratio, 10.0);
    EXPECT_FALSE(bad.adiabatic_valid);
    DesignThresholds th;
    th.min_adiabatic_ratio = 0.1;
    th.min_dispersive_margin = 0.5;
    EXPECT_TRUE(feasibility(p, Selector::ajc(0), th).adiabatic_valid);
}

TEST(Feasibility, ConsistentWithHamiltoniansBitwise) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        RamanParams p = params(0.001 + 0.1 * u(rng));
        p.g1 *= 1 + u(rng);
        auto r = feasibility(p, Selector::ajc(1));
        EXPECT_EQ(r.selectivity, selectivity(p));
        EXPECT_EQ(r.omega_eff, effective_coupling(p));
        EXPECT_EQ(r.pi_time_derived, pi_time(p, Selector::ajc(1)).derived);
        EXPECT_EQ(r.ld_valid, p.eta1 < 0.3 && p.eta2 < 0.3);
    }
}

TEST(LeakageBound, ArithmeticAtSelectivityTwenty) {
    EXPECT_NEAR(leakage_bound(params(0.002), 1, 0), 8.0 / 408.0, 1e-12);
    EXPECT_THROW(leakage_bound(params(0.002), 2, 2), InvalidArgument);
}

TEST(LeakageBound, VanishesAsSelectivityGrows) {
    double prev = 1.0;
    for (double eta2 : {0.02, 0.002, 0.0002, 0.00002}) {
        double b = leakage_bound(params(eta2), 1, 0);
        EXPECT_LT(b, prev);
        prev = b;
    }
    // S = 2000: 8 / (8 + 4e6)
    EXPECT_NEAR(prev, 8.0 / (8.0 + 4e6), 1e-15);
}

TEST(LeakageBound, DecreasesWithDistanceFromResonance) {
    auto p = params(0.002);
    for (int n0 : {0, 3}) {
        double prev = 1.0;
        for (int n = n0 + 1; n <= n0 + 10; ++n) {
            double b = leakage_bound(p, n, n0);
            EXPECT_LT(b, prev);
            prev = b;
        }
    }
}

TEST(LeakageBound, BoundsIntegratedLeakageForRandomDraws) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        RamanParams p = params(0.002);
        p.g1 = 1e6 * (0.5 + u(rng));
        p.g2 = 1e6 * (0.5 + u(rng));
        p.eta1 = 0.05 + 0.15 * u(rng);
        double s_target = 5.0 + 95.0 * u(rng);
        p.eta2 = 4.0 * p.eta1 * p.eta1 * (p.g1 / p.g2) / s_target;
        ASSERT_GE(selectivity(p), 5.0 - 1e-9);
        int n0 = static_cast<int>(rng() % 3);
        auto sel = Selector::ajc(n0);
        auto space = ion_mode_space(n0 + 4);
        Propagator prop(selective_hamiltonian(p, sel, space));
        double t = pi_time(p, sel).derived;
        for (int n : {n0 + 1, n0 + 2}) {
            auto psi0 = basis_state(space, BasisLabel{{Level::g}, n});
            int watch = basis_index(space, BasisLabel{{Level::e}, n + 1});
            double observed = 0.0;
            for (int k = 1; k <= 2000; ++k) observed = std::max(observed, std::norm(prop.apply(t * k / 2000, psi0)[watch]));
            EXPECT_LE(observed, 1.1 * leakage_bound(p, n, n0));
        }
    }
}

TEST(Search, ReturnsPointSatisfyingConstraints) {
    auto c = loose();
    auto r = search(c);
    EXPECT_GE(r.report.selectivity, c.min_selectivity);
    EXPECT_LE(r.report.pi_time_derived, c.max_pi_time);
    EXPECT_TRUE(r.report.ld_valid);
    EXPECT_TRUE(r.report.adiabatic_valid);
    // Self-consistency: recomputed report equals the returned one.
    auto again = feasibility(r.params, Selector::ajc(0));
    EXPECT_EQ(again.pi_time_derived, r.report.pi_time_derived);
    EXPECT_EQ(again.selectivity, r.report.selectivity);
    EXPECT_GE(r.params.g1, c.g1.lo);
    EXPECT_LE(r.params.g1, c.g1.hi);
}

TEST(Search, UniqueGridPoint) {
    DesignConstraints c;
    c.g1 = {2e6, 2e6};
    c.g2 = {1e6, 1e6};
    c.delta = {1e8, 1e8};
    c.eta1 = {0.1, 0.1};
    c.eta2 = {0.004, 0.004};
    c.min_selectivity = 5;
    c.max_pi_time = 1e-2;
    auto r = search(c);
    EXPECT_DOUBLE_EQ(r.params.g1, 2e6);
    EXPECT_DOUBLE_EQ(r.params.eta2, 0.004);
    EXPECT_NEAR(r.report.selectivity, 4.0 * 0.01 / 0.004 * 2.0, 1e-9);
}

TEST(Search, ImpossibleSelectivityIsInfeasible) {
    auto c = loose();
    c.min_selectivity = 1e6;
    c.eta1 = {0.05, 0.1};
    c.eta2 = {0.01, 0.02};
    EXPECT_THROW(search(c), Infeasible);
}

TEST(Search, ParallelAndSerialAgree) {
    auto c = loose();
    auto a = search(c, 1);
    auto b = search(c, 4);
    EXPECT_EQ(a.params.g1, b.params.g1);
    EXPECT_EQ(a.params.g2, b.params.g2);
    EXPECT_EQ(a.params.delta, b.params.delta);
    EXPECT_EQ(a.params.eta1, b.params.eta1);
    EXPECT_EQ(a.params.eta2, b.params.eta2);
}

TEST(Search, RelaxingPiTimeKeepsSelectivityAboveMinimum) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 6; ++i) {
        auto c = loose();
        c.grid_points = 4;
        c.min_selectivity = 2.0 + 30.0 * u(rng);
        c.max_pi_time = 1e-4 * (1.0 + 10.0 * u(rng));
        auto relaxed = c;
        relaxed.max_pi_time *= 1.0 + 5.0 * u(rng);
        try {
            auto r = search(relaxed);
            EXPECT_GE(r.report.selectivity, c.min_selectivity);
            auto tight = search(c);
            EXPECT_LE(r.report.pi_time_derived, tight.report.pi_time_derived * (1 + 1e-12));
        } catch (const Infeasible&) {
        }
    }
}

TEST(Search, ValidatesBounds) {
    auto c = loose();
    c.g1 = {2.0, 1.0};
    EXPECT_THROW(search(c), InvalidArgument);
    c = loose();
    c.grid_points = 0;
    EXPECT_THROW(search(c), InvalidArgument);
}
