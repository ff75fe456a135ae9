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

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "ionsel/core/linalg.hpp"
#include "ionsel/core/measure.hpp"
#include "ionsel/core/operators.hpp"
#include "ionsel/core/state.hpp"
#include "ionsel/hamiltonians.hpp"

namespace ionsel {

// ---------------------------------------------------------------------------
// Constant Hamiltonians

/// Cached spectral decomposition of a time-independent Hamiltonian.
class Propagator {
   public:
    explicit Propagator(const Operator& h) : space_(h.space()), spectrum_(h.matrix()) {}

    const SpaceDescriptor& space() const { return space_; }
    const HermitianSpectrum& spectrum() const { return spectrum_; }

    Matrix unitary(double t) const { return spectrum_.propagator(t); }

    PureState apply(double t, const PureState& psi) const {
        check(psi.space());
        const Matrix& v = spectrum_.vectors();
        Vector c = v.adjoint() * psi.amplitudes();
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -spectrum_.values()(k) * t);
        return PureState(psi.space(), v * c);
    }

    MixedState apply(double t, const MixedState& rho) const {
        check(rho.space());
        Matrix u = unitary(t);
        return MixedState(rho.space(), u * rho.matrix() * u.adjoint());
    }

   private:
    void check(const SpaceDescriptor& s) const {
        if (!(s == space_)) throw DimensionMismatch("state and Hamiltonian act on different spaces");
    }

    SpaceDescriptor space_;
    HermitianSpectrum spectrum_;
};

/// exp(-i H t) applied to a state. Throws NonHermitian for non-Hermitian H.
template <QuantumState S>
S propagate_const(const Operator& h, double t, const S& state) {
    return Propagator(h).apply(t, state);
}

// ---------------------------------------------------------------------------
// Time-dependent Hamiltonians

using HamiltonianFn = std::function<Operator(double)>;

struct TimeDependentOptions {
    double tol = 1e-10;           // target accuracy of final amplitudes
    double min_step = 1e-300;     // StepFailure below this
    long max_steps = 50'000'000;  // StepFailure above this
};

namespace detail {

using OdeState = std::vector<Complex>;

inline constexpr double kLocalToleranceRatio = 1e-3;

/// Integrates d psi/dt = -i H(t) psi with an adaptive Runge-Kutta-Fehlberg 7(8) stepper.
/// `apply_h(t, in, out)` must write H(t) in into out (Eigen maps).
template <typename ApplyH>
Vector integrate_schrodinger(ApplyH&& apply_h, double t0, double t1, const Vector& psi0, double first_step,
                             const TimeDependentOptions& opt) {
    namespace odeint = boost::numeric::odeint;
    if (!(opt.tol > 0.0)) throw InvalidArgument("integration tolerance must be positive");
    if (!(t1 >= t0)) throw InvalidArgument("integration end precedes start");
    OdeState x(psi0.data(), psi0.data() + psi0.size());
    if (t1 == t0) return psi0;
    const Eigen::Index n = psi0.size();
    auto rhs = [&](const OdeState& in, OdeState& out, double t) {
        Eigen::Map<const Vector> vin(in.data(), n);
        Eigen::Map<Vector> vout(out.data(), n);
        apply_h(t, vin, vout);
        vout *= Complex(0.0, -1.0);
    };
    // Local errors accumulate over many fast oscillations; the per-step tolerance is kept three
    // decades below the requested final accuracy.
    const double local = opt.tol * kLocalToleranceRatio;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<OdeState>>(local, local);
    double t = t0;
    double dt = std::min(first_step, t1 - t0);
    long steps = 0;
    while (t < t1) {
        if (t + dt > t1) dt = t1 - t;
        auto result = stepper.try_step(rhs, x, t, dt);
        if (result == odeint::fail) {
            if (dt < opt.min_step || dt < 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t))
                throw StepFailure("step size underflow at t = " + std::to_string(t));
        }
        if (++steps > opt.max_steps) throw StepFailure("step budget exhausted at t = " + std::to_string(t));
        if (t1 - t <= 1e-15 * std::max(std::abs(t1), 1e-300)) t = t1;
    }
    return Eigen::Map<const Vector>(x.data(), n);
}

template <typename ApplyH, QuantumState S>
S propagate_with(ApplyH&& apply_h, double t0, double t1, const S& state, double first_step,
                 const TimeDependentOptions& opt) {
    if constexpr (std::same_as<S, PureState>) {
        return PureState(state.space(), integrate_schrodinger(apply_h, t0, t1, state.amplitudes(), first_step, opt));
    } else {
        // rho = sum_k p_k |v_k><v_k|; each component evolves independently.
        Eigen::SelfAdjointEigenSolver<Matrix> es(state.matrix());
        Matrix out = Matrix::Zero(state.dim(), state.dim());
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            double pk = es.eigenvalues()(k);
            if (pk < 1e-15) continue;
            Vector v = integrate_schrodinger(apply_h, t0, t1, es.eigenvectors().col(k), first_step, opt);
            out += pk * v * v.adjoint();
        }
        return MixedState(state.space(), std::move(out));
    }
}

}  // namespace detail

/// Evolves `state` from t0 to t1 under a harmonic (sum of Fourier terms) Hamiltonian.
template <QuantumState S>
S propagate_timedep(const HarmonicHamiltonian& h, double t0, double t1, const S& state,
                    const TimeDependentOptions& opt = {}) {
    if (!(state.space() == h.space())) throw DimensionMismatch("state and Hamiltonian act on different spaces");
    double rate = std::max(h.scale(), h.max_frequency());
    double first = rate > 0.0 ? 0.01 / rate : (t1 - t0);
    auto apply = [&h](double t, const auto& in, auto& out) { h.apply(t, in, out); };
    return detail::propagate_with(apply, t0, t1, state, first, opt);
}

/// Evolves `state` from t0 to t1 under an arbitrary Hamiltonian builder.
template <QuantumState S>
S propagate_timedep(const HamiltonianFn& builder, double t0, double t1, const S& state,
                    const TimeDependentOptions& opt = {}) {
    Operator h0 = builder(t0);
    if (!(state.space() == h0.space())) throw DimensionMismatch("state and Hamiltonian act on different spaces");
    if (!h0.hermitian()) throw NonHermitian("Hamiltonian builder returned a non-Hermitian matrix");
    double scale = max_abs(h0.matrix());
    double first = scale > 0.0 ? 0.01 / scale : (t1 - t0);
    auto apply = [&builder](double t, const auto& in, auto& out) { out = builder(t).matrix() * in; };
    return detail::propagate_with(apply, t0, t1, state, first, opt);
}

// ---------------------------------------------------------------------------
// Pulse durations

struct PiTime {
    double derived;                 // pi / (2 Omega_eff sqrt(m)): first complete transfer
    double paper;                   // pi / (Omega_eff sqrt(m)): twice the derived value
    std::optional<double> refined;  // located numerically on selective_hamiltonian
};

namespace detail {

/// P(t) = |<w| U(t) |psi0>|^2 and its derivative from a spectral decomposition.
class TransferProbability {
   public:
    TransferProbability(const Propagator& prop, const Vector& psi0, int watch) : values_(prop.spectrum().values()) {
        const Matrix& v = prop.spectrum().vectors();
        Vector c = v.adjoint() * psi0;
        weights_ = v.row(watch).transpose().cwiseProduct(c);
    }

    Complex amplitude(double t) const {
        Complex a = 0.0;
        for (Eigen::Index k = 0; k < weights_.size(); ++k) a += weights_(k) * std::polar(1.0, -values_(k) * t);
        return a;
    }

    double operator()(double t) const { return std::norm(amplitude(t)); }

    double derivative(double t) const {
        Complex a = 0.0, da = 0.0;
        for (Eigen::Index k = 0; k < weights_.size(); ++k) {
            Complex ph = weights_(k) * std::polar(1.0, -values_(k) * t);
            a += ph;
            da += Complex(0.0, -values_(k)) * ph;
        }
        return 2.0 * (std::conj(a) * da).real();
    }

    /// Largest angular frequency present in P(t).
    double bandwidth() const {
        double lo = INFINITY, hi = -INFINITY;
        for (Eigen::Index k = 0; k < weights_.size(); ++k) {
            if (std::abs(weights_(k)) < 1e-14) continue;
            lo = std::min(lo, values_(k));
            hi = std::max(hi, values_(k));
        }
        return hi > lo ? hi - lo : 0.0;
    }

   private:
    Eigen::VectorXd values_;
    Vector weights_;
};

/// First local maximum of f on (0, t_max]: uniform scan, golden-section search, then
/// bisection on the sign of f' to resolve below the flat top of the maximum.
inline std::optional<double> first_maximum(const TransferProbability& f, double step, double t_max) {
    double prev = f(0.0), t_prev = 0.0;
    double t = step, cur = f(t);
    while (t < t_max) {
        double t_next = t + step, next = f(t_next);
        if (cur >= prev && cur > next && cur > 1e-12) {
            double a = t_prev, b = t_next;
            const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
            double f1 = f(x1), f2 = f(x2);
            while (b - a > 1e-12) {
                if (f1 < f2) {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (b - a);
                    f2 = f(x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - phi * (b - a);
                    f1 = f(x1);
                }
                if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * b) break;
            }
            double best = 0.5 * (a + b);
            double lo = t_prev, hi = t_next;
            if (f.derivative(lo) > 0.0 && f.derivative(hi) < 0.0) {
                for (int it = 0; it < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (f.derivative(mid) > 0.0 ? lo : hi) = mid;
                }
                best = 0.5 * (lo + hi);
            }
            return best;
        }
        t_prev = t;
        prev = cur;
        t = t_next;
        cur = next;
    }
    return std::nullopt;
}

}  // namespace detail

/// pi-pulse duration for the selected subspace. With `refine`, the first transfer maximum of
/// |g,n0> -> |e,partner> under selective_hamiltonian is also located numerically.
inline PiTime pi_time(const RamanParams& p, const Selector& sel, bool refine = false) {
    const double omega = std::abs(effective_coupling(p));
    const double root = std::sqrt(static_cast<double>(sel.coupling_quanta()));
    if (sel.coupling_quanta() < 1) throw InvalidArgument("selector has no coupling");
    PiTime out{std::numbers::pi / (2.0 * omega * root), std::numbers::pi / (omega * root), std::nullopt};
    if (refine) {
        auto space = ion_mode_space(sel.n0 + 2);
        Propagator prop(selective_hamiltonian(p, sel, space));
        Vector psi0 = basis_state(space, BasisLabel{{Level::g}, sel.n0}).amplitudes();
        int watch = basis_index(space, BasisLabel{{Level::e}, sel.partner()});
        detail::TransferProbability f(prop, psi0, watch);
        double bw = f.bandwidth();
        if (bw > 0.0) {
            double period = 2.0 * std::numbers::pi / bw;
            out.refined = detail::first_maximum(f, period / 64.0, 1e4 * period);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rabi scans

struct Trace {
    std::vector<double> times;
    Eigen::MatrixXd populations;  // rows: times, cols: watched basis states
};

namespace detail {

inline void check_times(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) throw InvalidArgument("scan times must be finite and >= 0");
        if (i > 0 && !(times[i] > times[i - 1])) throw InvalidArgument("scan times must be strictly increasing");
    }
}

template <QuantumState S>
double population(const S& state, int idx) {
    if constexpr (std::same_as<S, PureState>) return std::norm(state[idx]);
    else return state.matrix()(idx, idx).real();
}

}  // namespace detail

/// Populations of `watch` basis states along exp(-i H t) state0.
template <QuantumState S>
Trace rabi_scan(const Operator& h, const S& state0, const std::vector<double>& times,
                const std::vector<BasisLabel>& watch) {
    detail::check_times(times);
    std::vector<int> idx;
    for (const auto& w : watch) idx.push_back(basis_index(state0.space(), w));
    Propagator prop(h);
    Trace tr{times, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(idx.size()))};
    for (std::size_t i = 0; i < times.size(); ++i) {
        S s = prop.apply(times[i], state0);
        for (std::size_t j = 0; j < idx.size(); ++j)
            tr.populations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = detail::population(s, idx[j]);
    }
    return tr;
}

/// Time-dependent variant; state0 is taken at t = 0.
template <QuantumState S>
Trace rabi_scan(const HarmonicHamiltonian& h, const S& state0, const std::vector<double>& times,
                const std::vector<BasisLabel>& watch, const TimeDependentOptions& opt = {}) {
    detail::check_times(times);
    std::vector<int> idx;
    for (const auto& w : watch) idx.push_back(basis_index(state0.space(), w));
    Trace tr{times, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(idx.size()))};
    S s = state0;
    double t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        s = propagate_timedep(h, t, times[i], s, opt);
        t = times[i];
        for (std::size_t j = 0; j < idx.size(); ++j)
            tr.populations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = detail::population(s, idx[j]);
    }
    return tr;
}

}  // namespace ionsel
