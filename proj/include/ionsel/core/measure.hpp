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

#include <vector>

#include "ionsel/core/linalg.hpp"
#include "ionsel/core/operators.hpp"
#include "ionsel/core/space.hpp"
#include "ionsel/core/state.hpp"

namespace ionsel {

/// Below this Born probability a heralded post-state is undefined.
inline constexpr double kHeraldThreshold = 1e-14;

/// Composite indices whose `factor`-th internal label equals `level`.
inline std::vector<int> level_indices(const SpaceDescriptor& space, int factor, Level level) {
    int li = space.internal(factor).index(level);
    std::vector<int> out;
    for (int k = 0; k < space.dim(); ++k)
        if (space.decompose(k)[static_cast<std::size_t>(factor)] == li) out.push_back(k);
    return out;
}

inline double probability_on(const PureState& psi, const std::vector<int>& idx) {
    double p = 0.0;
    for (int k : idx) p += std::norm(psi[k]);
    return p;
}

inline double probability_on(const MixedState& rho, const std::vector<int>& idx) {
    double p = 0.0;
    for (int k : idx) p += rho.matrix()(k, k).real();
    return p;
}

/// Born probability of finding internal factor `factor` in `level`; never throws on zero.
template <QuantumState S>
double level_probability(const S& state, Level level, int factor = 0) {
    return probability_on(state, level_indices(state.space(), factor, level));
}

template <QuantumState S>
struct Measurement {
    double probability;
    S post;
};

/// Projective measurement of one internal factor. Throws ZeroProbability when the
/// outcome probability is below kHeraldThreshold.
inline Measurement<PureState> measure_internal(const PureState& psi, Level level, int factor = 0) {
    auto idx = level_indices(psi.space(), factor, level);
    double p = probability_on(psi, idx) / psi.amplitudes().squaredNorm();
    if (p < kHeraldThreshold)
        throw ZeroProbability(std::string("outcome '") + level_name(level) + "' has zero probability");
    Vector v = Vector::Zero(psi.dim());
    for (int k : idx) v(k) = psi[k];
    return {std::min(p, 1.0), PureState::normalized(psi.space(), std::move(v))};
}

inline Measurement<MixedState> measure_internal(const MixedState& rho, Level level, int factor = 0) {
    auto idx = level_indices(rho.space(), factor, level);
    double p = probability_on(rho, idx) / rho.trace();
    if (p < kHeraldThreshold)
        throw ZeroProbability(std::string("outcome '") + level_name(level) + "' has zero probability");
    Matrix r = Matrix::Zero(rho.dim(), rho.dim());
    for (int i : idx)
        for (int j : idx) r(i, j) = rho.matrix()(i, j);
    r /= r.trace().real();
    return {std::min(p, 1.0), MixedState(rho.space(), std::move(r))};
}

/// Fock populations P_n (n = 0..cutoff) with internal factors traced out.
inline std::vector<double> fock_populations(const PureState& psi) {
    const int dm = psi.space().mode_dim();
    if (!psi.space().has_mode()) throw InvalidArgument("state has no mode factor");
    std::vector<double> p(static_cast<std::size_t>(dm), 0.0);
    for (int k = 0; k < psi.dim(); ++k) p[static_cast<std::size_t>(k % dm)] += std::norm(psi[k]);
    return p;
}

inline std::vector<double> fock_populations(const MixedState& rho) {
    const int dm = rho.space().mode_dim();
    if (!rho.space().has_mode()) throw InvalidArgument("state has no mode factor");
    std::vector<double> p(static_cast<std::size_t>(dm), 0.0);
    for (int k = 0; k < rho.dim(); ++k) p[static_cast<std::size_t>(k % dm)] += rho.matrix()(k, k).real();
    return p;
}

/// Partial trace over all internal factors.
inline MixedState reduce_to_mode(const MixedState& rho) {
    const ModeSpace& mode = rho.space().mode();
    const int dm = mode.dim();
    const int blocks = rho.dim() / dm;
    Matrix r = Matrix::Zero(dm, dm);
    for (int b = 0; b < blocks; ++b) r += rho.matrix().block(b * dm, b * dm, dm, dm);
    return MixedState(mode, std::move(r));
}

inline MixedState reduce_to_mode(const PureState& psi) {
    const ModeSpace& mode = psi.space().mode();
    const int dm = mode.dim();
    const int blocks = psi.dim() / dm;
    Matrix r = Matrix::Zero(dm, dm);
    for (int b = 0; b < blocks; ++b) {
        auto seg = psi.amplitudes().segment(b * dm, dm);
        r += seg * seg.adjoint();
    }
    return MixedState(mode, std::move(r));
}

/// Motional amplitudes conditioned on one product internal configuration, unnormalized.
inline Vector mode_block(const PureState& psi, const std::vector<Level>& levels) {
    const int dm = psi.space().mode_dim();
    int start = basis_index(psi.space(), BasisLabel{levels, 0});
    return psi.amplitudes().segment(start, dm);
}

// ---------------------------------------------------------------------------
// Fidelity

inline double fidelity(const PureState& a, const PureState& b) {
    if (!(a.space() == b.space())) throw DimensionMismatch("fidelity of states on different spaces");
    return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

inline double fidelity(const PureState& a, const MixedState& rho) {
    if (!(a.space() == rho.space())) throw DimensionMismatch("fidelity of states on different spaces");
    return std::clamp(a.amplitudes().dot(rho.matrix() * a.amplitudes()).real(), 0.0, 1.0);
}

inline double fidelity(const MixedState& rho, const PureState& a) { return fidelity(a, rho); }

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const MixedState& rho, const MixedState& sigma) {
    if (!(rho.space() == sigma.space())) throw DimensionMismatch("fidelity of states on different spaces");
    Matrix s = sqrtm_psd(rho.matrix());
    Matrix inner = s * sigma.matrix() * s;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
    return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace ionsel
