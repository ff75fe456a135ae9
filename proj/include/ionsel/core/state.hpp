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

#include <cmath>
#include <concepts>
#include <initializer_list>
#include <utility>
#include <vector>

#include "ionsel/core/linalg.hpp"
#include "ionsel/core/space.hpp"

namespace ionsel {

/// State vector over a composite space. The constructor checks only the
/// dimension so that propagators can report norm drift; use normalized() or the
/// factory functions below when a unit vector is required.
class PureState {
   public:
    PureState(SpaceDescriptor space, Vector amplitudes) : space_(std::move(space)), amps_(std::move(amplitudes)) {
        if (amps_.size() != space_.dim()) throw DimensionMismatch("amplitude vector does not match space dimension");
    }

    static PureState normalized(SpaceDescriptor space, Vector amplitudes) {
        double n = amplitudes.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
        return PureState(std::move(space), amplitudes / n);
    }

    const SpaceDescriptor& space() const { return space_; }
    const Vector& amplitudes() const { return amps_; }
    Complex operator[](Eigen::Index i) const { return amps_(i); }
    int dim() const { return static_cast<int>(amps_.size()); }
    double norm() const { return amps_.norm(); }

   private:
    SpaceDescriptor space_;
    Vector amps_;
};

/// Density matrix over a composite space.
class MixedState {
   public:
    MixedState(SpaceDescriptor space, Matrix rho) : space_(std::move(space)), rho_(std::move(rho)) {
        if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim())
            throw DimensionMismatch("density matrix does not match space dimension");
    }

    explicit MixedState(const PureState& psi)
        : MixedState(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint()) {}

    /// Throws InvalidArgument unless Hermitian, unit trace and positive within tolerance.
    void validate(double tol = 1e-12, double positivity_tol = 1e-10) const {
        if (hermiticity_defect(rho_) > tol) throw InvalidArgument("density matrix is not Hermitian");
        if (std::abs(trace() - 1.0) > tol) throw InvalidArgument("density matrix trace differs from 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -positivity_tol) throw InvalidArgument("density matrix is not positive");
    }

    const SpaceDescriptor& space() const { return space_; }
    const Matrix& matrix() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    double trace() const { return rho_.trace().real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }

   private:
    SpaceDescriptor space_;
    Matrix rho_;
};

template <typename S>
concept QuantumState = std::same_as<S, PureState> || std::same_as<S, MixedState>;

// ---------------------------------------------------------------------------
// Factories

inline PureState basis_state(const SpaceDescriptor& space, int index) {
    if (index < 0 || index >= space.dim()) throw InvalidArgument("basis index out of range");
    Vector v = Vector::Zero(space.dim());
    v(index) = 1.0;
    return PureState(space, std::move(v));
}

inline PureState basis_state(const SpaceDescriptor& space, const BasisLabel& label) {
    return basis_state(space, basis_index(space, label));
}

inline PureState fock_state(const ModeSpace& mode, int n) {
    if (n < 0 || n > mode.cutoff()) throw InvalidArgument("Fock number outside truncated space");
    return basis_state(SpaceDescriptor(mode), n);
}

inline PureState internal_state(const InternalSpace& s, Level l) { return basis_state(SpaceDescriptor(s), s.index(l)); }

/// Coherent state with analytic amplitudes e^{-|b|^2/2} b^n / sqrt(n!), renormalized
/// over the truncated space.
inline PureState coherent_state(const ModeSpace& mode, Complex beta) {
    Vector v(mode.dim());
    Complex amp = std::exp(-0.5 * std::norm(beta));
    for (int n = 0; n < mode.dim(); ++n) {
        v(n) = amp;
        amp *= beta / std::sqrt(static_cast<double>(n + 1));
    }
    return PureState::normalized(SpaceDescriptor(mode), std::move(v));
}

/// Thermal (geometric) Fock distribution p_n ∝ (nbar/(1+nbar))^n, renormalized over the
/// truncated space.
inline MixedState thermal_state(const ModeSpace& mode, double nbar) {
    if (!(nbar >= 0.0)) throw InvalidArgument("mean phonon number must be >= 0");
    Eigen::VectorXd p(mode.dim());
    double ratio = nbar / (1.0 + nbar);
    double w = 1.0;
    for (int n = 0; n < mode.dim(); ++n) {
        p(n) = w;
        w *= ratio;
    }
    p /= p.sum();
    return MixedState(SpaceDescriptor(mode), p.cast<Complex>().asDiagonal());
}

/// Diagonal mixture of Fock states with the given (renormalized) weights.
inline MixedState fock_mixture(const ModeSpace& mode, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) > mode.dim()) throw DimensionMismatch("more weights than Fock levels");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(mode.dim());
    for (std::size_t n = 0; n < weights.size(); ++n) {
        if (weights[n] < 0.0) throw InvalidArgument("negative population weight");
        p(static_cast<Eigen::Index>(n)) = weights[n];
    }
    if (!(p.sum() > 0.0)) throw InvalidArgument("population weights sum to zero");
    p /= p.sum();
    return MixedState(SpaceDescriptor(mode), p.cast<Complex>().asDiagonal());
}

inline MixedState to_mixed(const PureState& psi) { return MixedState(psi); }
inline const MixedState& to_mixed(const MixedState& rho) { return rho; }

// ---------------------------------------------------------------------------
// Composition

inline PureState tensor(const PureState& a, const PureState& b) {
    return PureState(SpaceDescriptor::concat(a.space(), b.space()), kron(a.amplitudes(), b.amplitudes()));
}

inline MixedState tensor(const MixedState& a, const MixedState& b) {
    return MixedState(SpaceDescriptor::concat(a.space(), b.space()), kron(a.matrix(), b.matrix()));
}

inline MixedState tensor(const PureState& a, const MixedState& b) { return tensor(MixedState(a), b); }
inline MixedState tensor(const MixedState& a, const PureState& b) { return tensor(a, MixedState(b)); }

inline PureState tensor(std::initializer_list<PureState> states) {
    if (states.size() == 0) throw InvalidArgument("tensor of an empty list");
    auto it = states.begin();
    PureState out = *it++;
    for (; it != states.end(); ++it) out = tensor(out, *it);
    return out;
}

/// Re-express a mode-only state in a larger (or equal) truncation by zero padding.
inline PureState embed(const PureState& psi, int cutoff) {
    const ModeSpace& m = psi.space().mode();
    if (psi.space().size() != 1) throw InvalidArgument("embed expects a mode-only state");
    if (cutoff < m.cutoff()) throw InvalidArgument("embed cannot shrink the truncation");
    Vector v = Vector::Zero(cutoff + 1);
    v.head(m.dim()) = psi.amplitudes();
    return PureState(ModeSpace(cutoff), std::move(v));
}

inline MixedState embed(const MixedState& rho, int cutoff) {
    const ModeSpace& m = rho.space().mode();
    if (rho.space().size() != 1) throw InvalidArgument("embed expects a mode-only state");
    if (cutoff < m.cutoff()) throw InvalidArgument("embed cannot shrink the truncation");
    Matrix r = Matrix::Zero(cutoff + 1, cutoff + 1);
    r.topLeftCorner(m.dim(), m.dim()) = rho.matrix();
    return MixedState(ModeSpace(cutoff), std::move(r));
}

}  // namespace ionsel
