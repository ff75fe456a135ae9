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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

#include "ionsel/core/errors.hpp"

namespace ionsel {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest entry magnitude. Used as the scale for relative tolerances.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// max_ij |m_ij - conj(m_ji)|
inline double hermiticity_defect(const Matrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double rel_tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    return hermiticity_defect(m) <= rel_tol * max_abs(m) + 1e-300;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Spectral decomposition H = V diag(w) V^dagger of a Hermitian matrix.
class HermitianSpectrum {
   public:
    explicit HermitianSpectrum(const Matrix& h) {
        if (!is_hermitian(h)) throw NonHermitian("matrix is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
        values_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    const Eigen::VectorXd& values() const { return values_; }
    const Matrix& vectors() const { return vectors_; }

    /// exp(-i H t)
    Matrix propagator(double t) const {
        Vector phases = (values_.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

    /// f(H) for a real function applied to the spectrum.
    template <typename F>
    Matrix apply(F&& f) const {
        Vector mapped(values_.size());
        for (Eigen::Index i = 0; i < values_.size(); ++i) mapped(i) = f(values_(i));
        return vectors_ * mapped.asDiagonal() * vectors_.adjoint();
    }

   private:
    Eigen::VectorXd values_;
    Matrix vectors_;
};

/// exp(-i H t) for Hermitian H.
inline Matrix expm_hermitian(const Matrix& h, double t) { return HermitianSpectrum(h).propagator(t); }

/// Principal square root of a positive semidefinite Hermitian matrix; tiny negative
/// eigenvalues from rounding are clamped to zero.
inline Matrix sqrtm_psd(const Matrix& m) {
    return HermitianSpectrum(m).apply([](double x) { return std::sqrt(std::max(x, 0.0)); });
}

}  // namespace ionsel
