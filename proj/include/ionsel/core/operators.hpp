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
#include <initializer_list>
#include <string>
#include <utility>

#include "ionsel/core/linalg.hpp"
#include "ionsel/core/space.hpp"
#include "ionsel/core/state.hpp"

namespace ionsel {

/// Square matrix tagged with the space it acts on.
class Operator {
   public:
    Operator(SpaceDescriptor space, Matrix m) : space_(std::move(space)), m_(std::move(m)) {
        if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
            throw DimensionMismatch("operator matrix does not match space dimension");
    }

    const SpaceDescriptor& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    Operator adjoint() const { return Operator(space_, m_.adjoint()); }
    bool hermitian(double rel_tol = 1e-12) const { return is_hermitian(m_, rel_tol); }

    Operator& operator+=(const Operator& o) {
        require_same(o);
        m_ += o.m_;
        return *this;
    }
    Operator& operator-=(const Operator& o) {
        require_same(o);
        m_ -= o.m_;
        return *this;
    }
    Operator& operator*=(Complex s) {
        m_ *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Complex s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator& a, const Operator& b) {
        a.require_same(b);
        return Operator(a.space_, a.m_ * b.m_);
    }

    PureState apply(const PureState& psi) const {
        require_same_space(psi.space());
        return PureState(psi.space(), m_ * psi.amplitudes());
    }

    /// A rho A^dagger
    MixedState conjugate(const MixedState& rho) const {
        require_same_space(rho.space());
        return MixedState(rho.space(), m_ * rho.matrix() * m_.adjoint());
    }

    Complex expectation(const PureState& psi) const {
        require_same_space(psi.space());
        return psi.amplitudes().dot(m_ * psi.amplitudes());
    }
    Complex expectation(const MixedState& rho) const {
        require_same_space(rho.space());
        return (m_ * rho.matrix()).trace();
    }

   private:
    void require_same(const Operator& o) const { require_same_space(o.space_); }
    void require_same_space(const SpaceDescriptor& s) const {
        if (!(s == space_)) throw DimensionMismatch("operands act on different spaces");
    }

    SpaceDescriptor space_;
    Matrix m_;
};

inline Operator identity(const SpaceDescriptor& space) {
    return Operator(space, Matrix::Identity(space.dim(), space.dim()));
}

/// Truncated ladder operators (a, a^dagger) with <n-1|a|n> = sqrt(n).
inline std::pair<Operator, Operator> mode_ladder(const ModeSpace& mode) {
    Matrix a = Matrix::Zero(mode.dim(), mode.dim());
    for (int n = 1; n < mode.dim(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix ad = a.adjoint();
    return {Operator(mode, std::move(a)), Operator(mode, std::move(ad))};
}

inline Operator number_operator(const ModeSpace& mode) {
    Matrix nm = Matrix::Zero(mode.dim(), mode.dim());
    for (int n = 0; n < mode.dim(); ++n) nm(n, n) = static_cast<double>(n);
    return Operator(mode, std::move(nm));
}

/// |lower><upper|
inline Operator atomic_transition(const InternalSpace& space, Level lower, Level upper) {
    if (lower == upper) throw InvalidArgument("transition needs two distinct levels");
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    m(space.index(lower), space.index(upper)) = 1.0;
    return Operator(space, std::move(m));
}

/// |level><level|
inline Operator level_projector(const InternalSpace& space, Level level) {
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    m(space.index(level), space.index(level)) = 1.0;
    return Operator(space, std::move(m));
}

inline Operator tensor(const Operator& a, const Operator& b) {
    return Operator(SpaceDescriptor::concat(a.space(), b.space()), kron(a.matrix(), b.matrix()));
}

inline Operator tensor(std::initializer_list<Operator> ops) {
    if (ops.size() == 0) throw InvalidArgument("tensor of an empty list");
    auto it = ops.begin();
    Operator out = *it++;
    for (; it != ops.end(); ++it) out = tensor(out, *it);
    return out;
}

/// Lifts an operator on a single factor of `space` to the whole space.
inline Operator lift(const Operator& local, const SpaceDescriptor& space, int factor) {
    if (factor < 0 || factor >= static_cast<int>(space.size())) throw InvalidArgument("factor index out of range");
    if (!(local.space() == SpaceDescriptor(std::vector<Factor>{space.factors()[static_cast<std::size_t>(factor)]})))
        throw DimensionMismatch("local operator does not match the chosen factor");
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < static_cast<int>(space.size()); ++k) {
        int d = factor_dim(space.factors()[static_cast<std::size_t>(k)]);
        out = kron(out, k == factor ? local.matrix() : Matrix::Identity(d, d));
    }
    return Operator(space, std::move(out));
}

/// Probability that a Poisson(x) variable exceeds n_max, summed directly over the tail.
inline double poisson_tail_above(double x, int n_max) {
    if (x <= 0.0) return 0.0;
    double total = 0.0;
    int n_stop = n_max + 60 + static_cast<int>(x + 12.0 * std::sqrt(x));
    for (int n = n_max + 1; n <= n_stop; ++n)
        total += std::exp(-x + n * std::log(x) - std::lgamma(static_cast<double>(n) + 1.0));
    return total;
}

/// Largest accepted loss of displaced-vacuum norm beyond the cutoff.
inline constexpr double kDisplacementTruncationTol = 1e-6;

/// D(alpha) = exp(alpha a^dagger - conj(alpha) a), exponentiated on the truncated space.
/// Throws TruncationError if the exact displaced vacuum loses more than
/// kDisplacementTruncationTol of its norm above the cutoff.
inline Operator displacement(const ModeSpace& mode, Complex alpha) {
    double loss = poisson_tail_above(std::norm(alpha), mode.cutoff());
    if (loss >= kDisplacementTruncationTol)
        throw TruncationError("displacement |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                              " too large for cutoff " + std::to_string(mode.cutoff()));
    if (alpha == Complex(0.0)) return identity(mode);
    auto [a, ad] = mode_ladder(mode);
    // alpha a^dag - alpha* a = -i K with K = i(alpha a^dag - alpha* a) Hermitian
    Matrix k = kI * (alpha * ad.matrix() - std::conj(alpha) * a.matrix());
    k = 0.5 * (k + k.adjoint()).eval();
    return Operator(mode, expm_hermitian(k, 1.0));
}

}  // namespace ionsel
