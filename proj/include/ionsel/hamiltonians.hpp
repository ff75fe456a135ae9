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

#include <Eigen/Sparse>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ionsel/core/errors.hpp"
#include "ionsel/core/linalg.hpp"
#include "ionsel/core/operators.hpp"
#include "ionsel/core/space.hpp"

namespace ionsel {

inline constexpr double kHbar = 1.054571817e-34;  // J s

/// eta = k sqrt(hbar / (2 m nu)) for wave number k [1/m], mass [kg] and trap frequency nu [rad/s].
inline double lamb_dicke_parameter(double k, double mass, double nu) {
    if (!(k > 0.0 && mass > 0.0 && nu > 0.0)) throw InvalidArgument("Lamb-Dicke parameter needs k, m, nu > 0");
    return k * std::sqrt(kHbar / (2.0 * mass * nu));
}

/// Raman-drive hardware parameters. All frequencies are angular (rad/s), hbar = 1.
struct RamanParams {
    double g1 = 0.0;     // standing-wave coupling, g <-> c
    double g2 = 0.0;     // travelling-wave coupling, e <-> c
    double delta = 0.0;  // Raman detuning from |c>
    double eta1 = 0.0;
    double eta2 = 0.0;
    double nu = 0.0;  // trap frequency
    // Only the three-level model needs the bare level and laser frequencies.
    std::optional<double> omega_e;
    std::optional<double> omega_c;
    std::optional<double> omega1;
    std::optional<double> omega2;

    void validate() const {
        auto finite = [](double x) { return std::isfinite(x); };
        if (!(finite(g1) && g1 > 0.0)) throw InvalidArgument("g1 must be positive");
        if (!(finite(g2) && g2 > 0.0)) throw InvalidArgument("g2 must be positive");
        if (!(finite(nu) && nu > 0.0)) throw InvalidArgument("nu must be positive");
        if (!(finite(delta) && delta != 0.0)) throw InvalidArgument("delta must be non-zero");
        if (!(eta1 > 0.0 && eta1 < 1.0)) throw InvalidArgument("eta1 must lie in (0, 1)");
        if (!(eta2 > 0.0 && eta2 < 1.0)) throw InvalidArgument("eta2 must lie in (0, 1)");
    }
};

/// Fills omega1/omega2 so that omega1 = omega_c - delta and omega1 - omega2 = omega_e + nu,
/// i.e. the two-photon process drives the first blue sideband of g <-> e.
inline RamanParams with_blue_sideband_lasers(RamanParams p, double omega_e, double omega_c) {
    p.omega_e = omega_e;
    p.omega_c = omega_c;
    p.omega1 = omega_c - p.delta;
    p.omega2 = *p.omega1 - omega_e - p.nu;
    return p;
}

enum class SubspaceKind { JC, AJC };

/// Resonant subspace {|g,n0>, |e,n0+1>} (AJC) or {|g,n0>, |e,n0-1>} (JC).
struct Selector {
    SubspaceKind kind = SubspaceKind::AJC;
    int n0 = 0;

    static Selector ajc(int n0) { return {SubspaceKind::AJC, n0}; }
    static Selector jc(int n0) { return {SubspaceKind::JC, n0}; }

    /// Fock number paired with |e> in the selected subspace.
    int partner() const { return kind == SubspaceKind::AJC ? n0 + 1 : n0 - 1; }

    /// Number of quanta entering the coupling matrix element sqrt(.)
    int coupling_quanta() const { return kind == SubspaceKind::AJC ? n0 + 1 : n0; }

    void validate(int cutoff) const {
        if (n0 < 0) throw InvalidArgument("selector n0 must be >= 0");
        if (kind == SubspaceKind::JC && n0 < 1) throw InvalidArgument("JC selector needs n0 >= 1");
        if (n0 + 1 > cutoff)
            throw InvalidArgument("selector n0 = " + std::to_string(n0) + " needs mode cutoff >= " +
                                  std::to_string(n0 + 1));
    }
};

// ---------------------------------------------------------------------------
// Closed-form quantities

/// Omega_eff = 2 eta2 g1 g2 / Delta
inline double effective_coupling(const RamanParams& p) { return 2.0 * p.eta2 * p.g1 * p.g2 / p.delta; }

/// Light shift of |g, n> from the standing wave.
inline double ground_stark_energy(const RamanParams& p, int n) {
    const double s = p.g1 * p.g1 / p.delta;
    return -4.0 * (s - p.eta1 * p.eta1 * s * (2.0 * n + 1.0));
}

/// Light shift of |e> from the travelling wave.
inline double excited_stark_energy(const RamanParams& p) { return -p.g2 * p.g2 / p.delta; }

/// Uncompensated detuning of the AJC subspace {|g,n0>, |e,n0+1>}.
inline double bare_detuning(const RamanParams& p, int n0) {
    const double s1 = p.g1 * p.g1 / p.delta;
    const double s2 = p.g2 * p.g2 / p.delta;
    return -4.0 * p.eta1 * p.eta1 * s1 * (2.0 * n0 + 1.0) + (4.0 * s1 - s2);
}

/// Detuning of subspace n once subspace n0 has been compensated.
inline double residual_detuning(const RamanParams& p, int n, int n0) {
    return -8.0 * p.eta1 * p.eta1 * (p.g1 * p.g1 / p.delta) * static_cast<double>(n - n0);
}

/// S = 4 (eta1^2 / eta2) (g1 / g2)
inline double selectivity(const RamanParams& p) { return 4.0 * (p.eta1 * p.eta1 / p.eta2) * (p.g1 / p.g2); }

// ---------------------------------------------------------------------------
// Two-level Hamiltonians on TwoLevel ⊗ Mode

namespace detail {

inline const ModeSpace& require_ion_mode(const SpaceDescriptor& space) {
    if (space.size() != 2 || !space.has_mode() || space.internal(0).kind != InternalKind::TwoLevel)
        throw DimensionMismatch("expected a TwoLevel ⊗ Mode space");
    return space.mode();
}

inline int ion_mode_index(int dm, Level l, int n) { return static_cast<int>(l) * dm + n; }

}  // namespace detail

/// g (sigma^dag a + sigma a^dag)
inline Operator jc_hamiltonian(double g, const SpaceDescriptor& space) {
    const auto& mode = detail::require_ion_mode(space);
    auto [a, ad] = mode_ladder(mode);
    Operator sm = atomic_transition(two_level(), Level::g, Level::e);  // |g><e|
    Operator sp = sm.adjoint();
    return Complex(g) * (tensor(sp, a) + tensor(sm, ad));
}

/// g (sigma^dag a^dag + sigma a)
inline Operator ajc_hamiltonian(double g, const SpaceDescriptor& space) {
    const auto& mode = detail::require_ion_mode(space);
    auto [a, ad] = mode_ladder(mode);
    Operator sm = atomic_transition(two_level(), Level::g, Level::e);
    Operator sp = sm.adjoint();
    return Complex(g) * (tensor(sp, ad) + tensor(sm, a));
}

namespace detail {

/// Light-shift diagonal plus a sideband coupling i Omega e^{i phase}(|e><g| L - h.c.),
/// where L = a^dag (AJC) or a (JC).
inline Operator raman_two_level(const RamanParams& p, const SpaceDescriptor& space, SubspaceKind kind,
                                double excited_offset, double phase) {
    const auto& mode = require_ion_mode(space);
    const int dm = mode.dim();
    const double omega = effective_coupling(p);
    const Complex coupling = kI * omega * std::polar(1.0, phase);
    Matrix h = Matrix::Zero(2 * dm, 2 * dm);
    for (int n = 0; n < dm; ++n) {
        h(ion_mode_index(dm, Level::g, n), ion_mode_index(dm, Level::g, n)) = ground_stark_energy(p, n);
        h(ion_mode_index(dm, Level::e, n), ion_mode_index(dm, Level::e, n)) = excited_stark_energy(p) + excited_offset;
    }
    for (int n = 0; n < dm; ++n) {
        int m = kind == SubspaceKind::AJC ? n + 1 : n - 1;
        if (m < 0 || m >= dm) continue;
        double amp = std::sqrt(static_cast<double>(kind == SubspaceKind::AJC ? n + 1 : n));
        int ie = ion_mode_index(dm, Level::e, m);
        int ig = ion_mode_index(dm, Level::g, n);
        h(ie, ig) = coupling * amp;
        h(ig, ie) = std::conj(coupling) * amp;
    }
    return Operator(space, std::move(h));
}

}  // namespace detail

/// Adiabatically eliminated Raman Hamiltonian: number-dependent light shift of |g>, constant
/// shift of |e>, and the blue-sideband coupling i Omega_eff (|e><g| a^dag - |g><e| a).
inline Operator effective_hamiltonian(const RamanParams& p, const SpaceDescriptor& space) {
    return detail::raman_two_level(p, space, SubspaceKind::AJC, 0.0, 0.0);
}

/// Effective Hamiltonian with |e> shifted by -bare_detuning(n0) so that the selected
/// subspace is exactly resonant. The JC variant mirrors the coupling to
/// i Omega_eff (|e><g| a - |g><e| a^dag) and keeps the same light-shift diagonal.
/// `laser_phase` rotates the coupling phase (pi gives the inverse rotation).
inline Operator selective_hamiltonian(const RamanParams& p, const Selector& sel, const SpaceDescriptor& space,
                                      double laser_phase = 0.0) {
    const auto& mode = detail::require_ion_mode(space);
    sel.validate(mode.cutoff());
    return detail::raman_two_level(p, space, sel.kind, -bare_detuning(p, sel.n0), laser_phase);
}

/// Embeds an operator on (TwoLevel ⊗ Mode) into a space of several two-level ions and one
/// mode, acting on internal factor `ion` and as the identity on the other ions.
inline Operator embed_ion_mode(const Operator& op, const SpaceDescriptor& space, int ion) {
    const auto& mode = detail::require_ion_mode(op.space());
    if (!space.has_mode() || !(space.mode() == mode)) throw DimensionMismatch("mode factors differ");
    const int ions = space.internal_count();
    if (ion < 0 || ion >= ions) throw InvalidArgument("ion index out of range");
    for (int i = 0; i < ions; ++i)
        if (space.internal(i).kind != InternalKind::TwoLevel) throw DimensionMismatch("expected two-level ions");
    const int dm = mode.dim();
    Matrix out = Matrix::Zero(space.dim(), space.dim());
    for (int r = 0; r < space.dim(); ++r) {
        auto lr = space.decompose(r);
        for (int c = 0; c < space.dim(); ++c) {
            auto lc = space.decompose(c);
            bool spectators_match = true;
            for (int i = 0; i < ions; ++i)
                if (i != ion && lr[static_cast<std::size_t>(i)] != lc[static_cast<std::size_t>(i)])
                    spectators_match = false;
            if (!spectators_match) continue;
            out(r, c) = op(lr[static_cast<std::size_t>(ion)] * dm + lr.back(),
                           lc[static_cast<std::size_t>(ion)] * dm + lc.back());
        }
    }
    return Operator(space, std::move(out));
}

/// Selective Hamiltonian acting on `target_ion` of a two-ion register sharing one mode.
inline Operator two_ion_selective(const RamanParams& p, int target_ion, const Selector& sel,
                                  const SpaceDescriptor& space, double laser_phase = 0.0) {
    if (space.internal_count() != 2) throw DimensionMismatch("expected TwoLevel ⊗ TwoLevel ⊗ Mode");
    if (target_ion < 0 || target_ion > 1) throw InvalidArgument("target ion must be 0 or 1");
    auto local = selective_hamiltonian(p, sel, ion_mode_space(space.mode().cutoff()), laser_phase);
    return embed_ion_mode(local, space, target_ion);
}

// ---------------------------------------------------------------------------
// Three-level Raman model

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// H(t) = H_static + sum_k (M_k e^{i w_k t} + M_k^dag e^{-i w_k t}).
class HarmonicHamiltonian {
   public:
    struct Term {
        SparseMatrix m;
        SparseMatrix m_adj;
        double omega;
    };

    HarmonicHamiltonian(SpaceDescriptor space, SparseMatrix static_part)
        : space_(std::move(space)), static_(std::move(static_part)) {}

    void add(const SparseMatrix& m, double omega) {
        SparseMatrix adj = m.adjoint();
        terms_.push_back({m, adj, omega});
    }

    const SpaceDescriptor& space() const { return space_; }
    const std::vector<Term>& terms() const { return terms_; }
    int dim() const { return space_.dim(); }

    Operator at(double t) const {
        Matrix h = Matrix(static_);
        for (const auto& term : terms_) {
            Complex ph = std::polar(1.0, term.omega * t);
            h += ph * Matrix(term.m) + std::conj(ph) * Matrix(term.m_adj);
        }
        return Operator(space_, std::move(h));
    }

    /// out = H(t) psi
    template <typename In, typename Out>
    void apply(double t, const In& psi, Out& out) const {
        out = static_ * psi;
        for (const auto& term : terms_) {
            Complex ph = std::polar(1.0, term.omega * t);
            out += ph * (term.m * psi);
            out += std::conj(ph) * (term.m_adj * psi);
        }
    }

    /// Bound on |H(t)| entries over all t, used to seed step sizes.
    double scale() const {
        double s = static_.size() ? Matrix(static_).cwiseAbs().maxCoeff() : 0.0;
        for (const auto& term : terms_) s += 2.0 * Matrix(term.m).cwiseAbs().maxCoeff();
        return s;
    }

    /// Adds the first-order admixture that adiabatic following of the oscillating terms
    /// builds up under a slow switch-on: c_k = sum_terms (<k|M^dag|s> - <k|M|s>) / omega.
    /// The result is renormalized.
    PureState dress(const PureState& psi) const {
        if (!(psi.space() == space_)) throw DimensionMismatch("state and Hamiltonian act on different spaces");
        Vector v = psi.amplitudes();
        for (const auto& term : terms_) {
            if (term.omega == 0.0) continue;
            v += (term.m_adj * psi.amplitudes() - term.m * psi.amplitudes()) / term.omega;
        }
        return PureState::normalized(space_, std::move(v));
    }

    double max_frequency() const {
        double w = 0.0;
        for (const auto& term : terms_) w = std::max(w, std::abs(term.omega));
        return w;
    }

   private:
    SpaceDescriptor space_;
    SparseMatrix static_;
    std::vector<Term> terms_;
};

/// Three-level (g, e, c) ion with a standing wave on g <-> c and a travelling wave on e <-> c,
/// in the interaction picture of nu a^dag a + omega_e |e><e| + omega_c |c><c| after the optical
/// rotating-wave approximation. cos(eta1 x) is kept to second order and exp(-i eta2 x) to first
/// order in the Lamb-Dicke parameters, x = a e^{-i nu t} + a^dag e^{i nu t}.
/// `excited_shift` adds a static light shift to |e> (used for subspace compensation).
inline HarmonicHamiltonian three_level_model(const RamanParams& p, const SpaceDescriptor& space,
                                             double excited_shift = 0.0) {
    if (space.size() != 2 || !space.has_mode() || space.internal(0).kind != InternalKind::ThreeLevel)
        throw DimensionMismatch("expected a ThreeLevel ⊗ Mode space");
    if (!p.omega_e || !p.omega_c || !p.omega1 || !p.omega2)
        throw InvalidArgument("three-level model needs omega_e, omega_c, omega1 and omega2");
    const auto& mode = space.mode();
    const int dm = mode.dim();
    auto [a_op, ad_op] = mode_ladder(mode);
    const Matrix a = a_op.matrix();
    const Matrix ad = ad_op.matrix();
    const Matrix id = Matrix::Identity(dm, dm);
    const Matrix num = ad * a;
    const InternalSpace ion = three_level();
    const Matrix gc = atomic_transition(ion, Level::g, Level::c).matrix();
    const Matrix ec = atomic_transition(ion, Level::e, Level::c).matrix();
    const Matrix ee = level_projector(ion, Level::e).matrix();

    auto sparse = [](const Matrix& m) -> SparseMatrix { return m.sparseView(0.0, 0.0); };

    const double th1 = *p.omega1 - *p.omega_c;
    const double th2 = *p.omega2 + *p.omega_e - *p.omega_c;
    const double e1 = p.eta1 * p.eta1;

    HarmonicHamiltonian h(space, sparse(excited_shift * kron(ee, id)));
    // 2 g1 cos(eta1 x) |g><c|
    h.add(sparse(kron(gc, 2.0 * p.g1 * (id - 0.5 * e1 * (2.0 * num + id)))), th1);
    h.add(sparse(kron(gc, -p.g1 * e1 * (a * a))), th1 - 2.0 * p.nu);
    h.add(sparse(kron(gc, -p.g1 * e1 * (ad * ad))), th1 + 2.0 * p.nu);
    // g2 exp(-i eta2 x) |e><c|
    h.add(sparse(kron(ec, Complex(p.g2) * id)), th2);
    h.add(sparse(kron(ec, -kI * p.eta2 * p.g2 * a)), th2 - p.nu);
    h.add(sparse(kron(ec, -kI * p.eta2 * p.g2 * ad)), th2 + p.nu);
    return h;
}

inline Operator three_level_hamiltonian(const RamanParams& p, double t, const SpaceDescriptor& space,
                                        double excited_shift = 0.0) {
    return three_level_model(p, space, excited_shift).at(t);
}

}  // namespace ionsel
