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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ionsel/core/errors.hpp"
#include "ionsel/core/parallel.hpp"
#include "ionsel/evolution.hpp"
#include "ionsel/hamiltonians.hpp"

namespace ionsel {

/// Validity thresholds of the dispersive regime. Conventional margins, all configurable.
struct DesignThresholds {
    double max_eta = 0.3;             // Lamb-Dicke: eta1, eta2 < max_eta
    double min_adiabatic_ratio = 10;  // Delta / Omega_eff
    double min_dispersive_margin = 10;  // Delta / max(g1, g2)
    double decoherence_time = 10e-3;  // s
};

struct FeasibilityReport {
    double selectivity;
    double omega_eff;
    double pi_time_derived;
    double pi_time_paper;
    double dispersive_margin;
    bool ld_valid;
    double adiabatic_ratio;
    bool adiabatic_valid;
    double decoherence_ratio;  // paper-convention pi-time / decoherence time
};

inline FeasibilityReport feasibility(const RamanParams& p, const Selector& sel, const DesignThresholds& th = {}) {
    p.validate();
    if (sel.coupling_quanta() < 1) throw InvalidArgument("selector has no coupling");
    FeasibilityReport r{};
    r.selectivity = selectivity(p);
    r.omega_eff = effective_coupling(p);
    PiTime t = pi_time(p, sel);
    r.pi_time_derived = t.derived;
    r.pi_time_paper = t.paper;
    r.dispersive_margin = std::abs(p.delta) / std::max(p.g1, p.g2);
    r.ld_valid = p.eta1 < th.max_eta && p.eta2 < th.max_eta;
    r.adiabatic_ratio = std::abs(p.delta) / std::abs(r.omega_eff);
    r.adiabatic_valid = r.adiabatic_ratio >= th.min_adiabatic_ratio && r.dispersive_margin >= th.min_dispersive_margin;
    r.decoherence_ratio = t.paper / th.decoherence_time;
    return r;
}

/// Generalized-Rabi ceiling Omega_R^2 / (Omega_R^2 + delta^2) on the population that subspace n
/// exchanges while subspace n0 is driven, Omega_R = 2 Omega_eff sqrt(n+1) (AJC) or sqrt(n) (JC).
inline double leakage_bound(const RamanParams& p, int n, int n0, SubspaceKind kind = SubspaceKind::AJC) {
    if (n == n0) throw InvalidArgument("leakage_bound: n equals n0 (resonant subspace)");
    if (n < 0 || n0 < 0) throw InvalidArgument("leakage_bound: Fock numbers must be >= 0");
    int quanta = kind == SubspaceKind::AJC ? n + 1 : n;
    if (quanta == 0) return 0.0;
    double rabi = 2.0 * std::abs(effective_coupling(p)) * std::sqrt(static_cast<double>(quanta));
    double det = residual_detuning(p, n, n0);
    return rabi * rabi / (rabi * rabi + det * det);
}

/// Closed interval searched geometrically (both ends > 0).
struct ParamRange {
    double lo;
    double hi;
};

struct DesignConstraints {
    double min_selectivity = 10.0;
    double max_pi_time = 1e-4;  // s, derived convention
    ParamRange g1{1e5, 1e7};
    ParamRange g2{1e5, 1e7};
    ParamRange delta{1e6, 1e9};
    ParamRange eta1{0.01, 0.29};
    ParamRange eta2{1e-4, 0.29};
    double nu = 2.0 * 3.141592653589793 * 1e6;  // carried into the result, not searched
    int grid_points = 9;                         // per parameter
    int refine_sweeps = 4;
    DesignThresholds thresholds{};
    int n0 = 0;
    SubspaceKind kind = SubspaceKind::AJC;

    void validate() const {
        for (const auto* r : {&g1, &g2, &delta, &eta1, &eta2})
            if (!(r->lo > 0.0 && r->lo <= r->hi && std::isfinite(r->hi)))
                throw InvalidArgument("parameter bounds must satisfy 0 < lo <= hi");
        if (eta1.hi >= 1.0 || eta2.hi >= 1.0) throw InvalidArgument("Lamb-Dicke bounds must be < 1");
        if (grid_points < 1) throw InvalidArgument("grid_points must be >= 1");
        if (refine_sweeps < 0) throw InvalidArgument("refine_sweeps must be >= 0");
        if (!(max_pi_time > 0.0)) throw InvalidArgument("max_pi_time must be positive");
        if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
        Selector{kind, n0}.validate(n0 + 1);
    }
};

struct DesignResult {
    RamanParams params;
    FeasibilityReport report;
};

namespace detail {

inline double geometric_point(const ParamRange& r, int i, int n) {
    if (n == 1 || r.lo == r.hi) return r.lo;
    return r.lo * std::pow(r.hi / r.lo, static_cast<double>(i) / (n - 1));
}

inline RamanParams from_coords(const std::array<double, 5>& x, double nu) {
    RamanParams p;
    p.g1 = x[0];
    p.g2 = x[1];
    p.delta = x[2];
    p.eta1 = x[3];
    p.eta2 = x[4];
    p.nu = nu;
    return p;
}

/// pi-time if every constraint holds, otherwise nullopt.
inline std::optional<double> admissible(const std::array<double, 5>& x, const DesignConstraints& c) {
    FeasibilityReport r = feasibility(from_coords(x, c.nu), Selector{c.kind, c.n0}, c.thresholds);
    if (r.selectivity < c.min_selectivity || !r.ld_valid || !r.adiabatic_valid) return std::nullopt;
    if (r.pi_time_derived > c.max_pi_time) return std::nullopt;
    return r.pi_time_derived;
}

}  // namespace detail

/// Geometric grid over (g1, g2, Delta, eta1, eta2), then coordinate refinement: each sweep
/// rescans every coordinate over 21 points of a shrinking geometric window around the
/// incumbent. Minimizes the derived pi-time subject to selectivity, pi-time and validity
/// constraints. Grid points are scored in parallel and merged by grid index, so the
/// winner does not depend on the thread count. Throws Infeasible if no grid point qualifies.
inline DesignResult search(const DesignConstraints& c, int threads = 1) {
    c.validate();
    const std::array<ParamRange, 5> ranges{c.g1, c.g2, c.delta, c.eta1, c.eta2};
    const int n = c.grid_points;
    std::size_t total = 1;
    for (int k = 0; k < 5; ++k) total *= static_cast<std::size_t>(n);

    auto coords = [&](std::size_t idx) {
        std::array<double, 5> x{};
        for (int k = 4; k >= 0; --k) {
            x[static_cast<std::size_t>(k)] = detail::geometric_point(ranges[static_cast<std::size_t>(k)],
                                                                      static_cast<int>(idx % n), n);
            idx /= static_cast<std::size_t>(n);
        }
        return x;
    };

    std::vector<double> score(total, std::numeric_limits<double>::infinity());
    parallel_for(total, threads, [&](std::size_t i) {
        if (auto t = detail::admissible(coords(i), c)) score[i] = *t;
    });
    auto best_it = std::min_element(score.begin(), score.end());  // first minimum: lowest grid index
    if (!std::isfinite(*best_it)) throw Infeasible("no grid point satisfies the design constraints");
    std::array<double, 5> best = coords(static_cast<std::size_t>(best_it - score.begin()));
    double best_t = *best_it;

    double span = 1.0;  // log-window relative to one grid spacing
    for (int sweep = 0; sweep < c.refine_sweeps; ++sweep) {
        for (int k = 0; k < 5; ++k) {
            const auto& r = ranges[static_cast<std::size_t>(k)];
            if (r.lo == r.hi) continue;
            double step = std::log(r.hi / r.lo) / std::max(1, n - 1) * span;
            double centre = std::log(best[static_cast<std::size_t>(k)]);
            for (int j = -10; j <= 10; ++j) {
                double v = std::exp(centre + step * j / 10.0);
                v = std::clamp(v, r.lo, r.hi);
                auto x = best;
                x[static_cast<std::size_t>(k)] = v;
                if (auto t = detail::admissible(x, c); t && *t < best_t) {
                    best_t = *t;
                    best = x;
                }
            }
        }
        span *= 0.5;
    }
    RamanParams p = detail::from_coords(best, c.nu);
    return {p, feasibility(p, Selector{c.kind, c.n0}, c.thresholds)};
}

}  // namespace ionsel
