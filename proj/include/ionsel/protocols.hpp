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

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ionsel/core/measure.hpp"
#include "ionsel/core/operators.hpp"
#include "ionsel/core/parallel.hpp"
#include "ionsel/core/state.hpp"
#include "ionsel/evolution.hpp"
#include "ionsel/hamiltonians.hpp"

namespace ionsel {

/// `Ideal` rotates only the selected two-level subspace exactly. `Effective` evolves the
/// full space under the selective Hamiltonian and reports the result in the frame of that
/// Hamiltonian's diagonal (the light-shift frame), so the static light-shift phases of
/// off-resonant states are not counted as errors.
enum class ExecutionMode { Ideal, Effective };

template <QuantumState S>
struct ProtocolResult {
    double herald_probability;
    S post_state;  // heralded motional state
    double duration;
    Level herald_level;
};

// ---------------------------------------------------------------------------
// Selective pulses

namespace detail {

/// (|g,n0>, |e,partner>) composite index pairs for `ion`, one per spectator configuration.
inline std::vector<std::pair<int, int>> subspace_pairs(const SpaceDescriptor& space, int ion, const Selector& sel) {
    std::vector<std::pair<int, int>> pairs;
    const int dm = space.mode_dim();
    const int n_int = space.internal_count();
    for (int k = 0; k < space.dim(); ++k) {
        auto labels = space.decompose(k);
        if (labels[static_cast<std::size_t>(ion)] != static_cast<int>(Level::g) || labels.back() != sel.n0) continue;
        labels[static_cast<std::size_t>(ion)] = static_cast<int>(Level::e);
        labels.back() = sel.partner();
        pairs.emplace_back(k, space.index(labels));
    }
    (void)dm;
    (void)n_int;
    return pairs;
}

/// exp(-i t [[0, conj(c)], [c, 0]]) in the (|g>, |e>) basis with c = i Omega sqrt(m) e^{i phase}.
inline Eigen::Matrix2cd resonant_rotation(double omega_sqrt_m, double t, double phase) {
    Complex c = kI * omega_sqrt_m * std::polar(1.0, phase);
    double mag = std::abs(c);
    Eigen::Matrix2cd h;
    h << 0.0, std::conj(c), c, 0.0;
    if (mag == 0.0) return Eigen::Matrix2cd::Identity();
    return std::cos(mag * t) * Eigen::Matrix2cd::Identity() - kI * std::sin(mag * t) * (h / mag);
}

inline PureState rotate_pairs(const PureState& psi, const std::vector<std::pair<int, int>>& pairs,
                              const Eigen::Matrix2cd& u) {
    Vector v = psi.amplitudes();
    for (auto [i, j] : pairs) {
        Complex a = v(i), b = v(j);
        v(i) = u(0, 0) * a + u(0, 1) * b;
        v(j) = u(1, 0) * a + u(1, 1) * b;
    }
    return PureState(psi.space(), std::move(v));
}

inline MixedState rotate_pairs(const MixedState& rho, const std::vector<std::pair<int, int>>& pairs,
                               const Eigen::Matrix2cd& u) {
    Matrix r = rho.matrix();
    for (auto [i, j] : pairs) {
        Eigen::RowVectorXcd ri = r.row(i), rj = r.row(j);
        r.row(i) = u(0, 0) * ri + u(0, 1) * rj;
        r.row(j) = u(1, 0) * ri + u(1, 1) * rj;
    }
    Eigen::Matrix2cd ud = u.adjoint();
    for (auto [i, j] : pairs) {
        Vector ci = r.col(i), cj = r.col(j);
        r.col(i) = ci * ud(0, 0) + cj * ud(1, 0);
        r.col(j) = ci * ud(0, 1) + cj * ud(1, 1);
    }
    return MixedState(rho.space(), std::move(r));
}

/// Selective Hamiltonian for `ion` on a space of one or more two-level ions and a mode.
inline Operator pulse_hamiltonian(const RamanParams& p, const SpaceDescriptor& space, int ion, const Selector& sel,
                                  double phase) {
    auto local = selective_hamiltonian(p, sel, ion_mode_space(space.mode().cutoff()), phase);
    return space.internal_count() == 1 ? local : embed_ion_mode(local, space, ion);
}

/// e^{i D t} e^{-i H t}, D = diag(H).
inline Matrix light_shift_frame_unitary(const Operator& h, double t) {
    Matrix u = expm_hermitian(h.matrix(), t);
    for (Eigen::Index k = 0; k < u.rows(); ++k) u.row(k) *= std::polar(1.0, h.matrix()(k, k).real() * t);
    return u;
}

template <QuantumState S>
S apply_unitary(const Matrix& u, const S& state) {
    if constexpr (std::same_as<S, PureState>) return PureState(state.space(), u * state.amplitudes());
    else return MixedState(state.space(), u * state.matrix() * u.adjoint());
}

}  // namespace detail

/// Applies a selective pulse of the given duration to internal factor `ion`.
template <QuantumState S>
S selective_pulse(const S& state, const RamanParams& p, int ion, const Selector& sel, double duration,
                  ExecutionMode mode, double phase = 0.0) {
    const auto& space = state.space();
    sel.validate(space.mode().cutoff());
    if (mode == ExecutionMode::Ideal) {
        double rate = std::abs(effective_coupling(p)) * std::sqrt(static_cast<double>(sel.coupling_quanta()));
        return detail::rotate_pairs(state, detail::subspace_pairs(space, ion, sel),
                                    detail::resonant_rotation(rate, duration, phase));
    }
    Operator h = detail::pulse_hamiltonian(p, space, ion, sel, phase);
    return detail::apply_unitary(detail::light_shift_frame_unitary(h, duration), state);
}

namespace detail {

template <QuantumState S>
const ModeSpace& require_motional(const S& motional) {
    if (motional.space().size() != 1 || !motional.space().has_mode())
        throw InvalidArgument("expected a motional (mode-only) state");
    return motional.space().mode();
}

template <QuantumState S>
S heralded_motion(const S& full, Level level) {
    if constexpr (std::same_as<S, PureState>) {
        return PureState::normalized(full.space().mode(), mode_block(full, {level}));
    } else {
        return reduce_to_mode(full);
    }
}

/// Ion in `level` ⊗ motional state.
template <QuantumState S>
S prepare_ion(const S& motional, Level level) {
    PureState ion = internal_state(two_level(), level);
    if constexpr (std::same_as<S, PureState>) return tensor(ion, motional);
    else return tensor(MixedState(ion), motional);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fock-state generation

/// Ion in |g>, selective AJC pi-pulse on {|g,n0>, |e,n0+1>}; finding |e> heralds |n0+1>
/// with probability P_{n0}.
template <QuantumState S>
ProtocolResult<S> generate_fock(const S& motional, int n0, const RamanParams& p, ExecutionMode mode) {
    const auto& m = detail::require_motional(motional);
    Selector sel = Selector::ajc(n0);
    sel.validate(m.cutoff());
    if (fock_populations(motional)[static_cast<std::size_t>(n0)] < kHeraldThreshold)
        throw ZeroProbability("initial state has no population in |" + std::to_string(n0) + ">");
    double t = pi_time(p, sel).derived;
    S after = selective_pulse(detail::prepare_ion(motional, Level::g), p, 0, sel, t, mode);
    auto meas = measure_internal(after, Level::e);
    return {meas.probability, detail::heralded_motion(meas.post, Level::e), t, Level::e};
}

// ---------------------------------------------------------------------------
// Selective cooling

/// Ion in |e>, selective AJC pi-pulse on {|g,0>, |e,1>} maps |e,1> -> |g,0>; finding |g>
/// heralds the motional ground state with probability P_1.
template <QuantumState S>
ProtocolResult<S> selective_cool(const S& motional, const RamanParams& p, ExecutionMode mode) {
    const auto& m = detail::require_motional(motional);
    Selector sel = Selector::ajc(0);
    sel.validate(m.cutoff());
    if (fock_populations(motional)[1] < kHeraldThreshold)
        throw ZeroProbability("cooling needs population in |1>");
    double t = pi_time(p, sel).derived;
    S after = selective_pulse(detail::prepare_ion(motional, Level::e), p, 0, sel, t, mode);
    auto meas = measure_internal(after, Level::g);
    return {meas.probability, detail::heralded_motion(meas.post, Level::g), t, Level::g};
}

// ---------------------------------------------------------------------------
// Population measurement

struct MeasurementRecord {
    long shots;
    long excited_counts;
    std::uint64_t seed;
};

struct PopulationEstimate {
    double estimate;
    double exact;  // herald probability of the simulated pulse
    std::optional<MeasurementRecord> record;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform53(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Herald probability of the Fock-generation pulse with pulses cached per n0, so that
/// repeated measurements (Wigner scans) reuse the effective-mode unitaries.
class PopulationMeter {
   public:
    PopulationMeter(const RamanParams& p, int cutoff, ExecutionMode mode) : p_(p), cutoff_(cutoff), mode_(mode) {}

    template <QuantumState S>
    double operator()(const S& motional, int n0) {
        return level_probability(pulse(prepare_ion(motional, Level::g), n0), Level::e);
    }

    template <QuantumState S>
    S pulse(const S& full, int n0) {
        Selector sel = Selector::ajc(n0);
        sel.validate(cutoff_);
        double t = pi_time(p_, sel).derived;
        if (mode_ == ExecutionMode::Ideal) return selective_pulse(full, p_, 0, sel, t, mode_);
        auto it = cache_.find(n0);
        if (it == cache_.end()) {
            Operator h = pulse_hamiltonian(p_, full.space(), 0, sel, 0.0);
            it = cache_.emplace(n0, light_shift_frame_unitary(h, t)).first;
        }
        return apply_unitary(it->second, full);
    }

   private:
    RamanParams p_;
    int cutoff_;
    ExecutionMode mode_;
    std::map<int, Matrix> cache_;
};

/// Moves the ion from `from` to |g>, motion untouched. For a pure state the ion must already
/// be in `from` (a heralded branch); population elsewhere would be discarded.
inline PureState reset_ion(const PureState& psi, Level from) {
    const int dm = psi.space().mode_dim();
    Vector v = Vector::Zero(psi.dim());
    v.head(dm) = mode_block(psi, {from});
    return PureState::normalized(psi.space(), std::move(v));
}

inline MixedState reset_ion(const MixedState& rho, Level) {
    const int dm = rho.space().mode_dim();
    Matrix r = Matrix::Zero(rho.dim(), rho.dim());
    r.topLeftCorner(dm, dm) = reduce_to_mode(rho).matrix();
    return MixedState(rho.space(), std::move(r));
}

}  // namespace detail

/// Estimates P_{n0} as the probability of finding |e> after the Fock-generation pulse.
/// `shots` empty means the exact Born probability; otherwise Bernoulli sampling with `seed`.
template <QuantumState S>
PopulationEstimate measure_population(const S& motional, int n0, const RamanParams& p, std::optional<long> shots,
                                      ExecutionMode mode, std::uint64_t seed = 0) {
    const auto& m = detail::require_motional(motional);
    detail::PopulationMeter meter(p, m.cutoff(), mode);
    double exact = std::clamp(meter(motional, n0), 0.0, 1.0);
    if (!shots) return {exact, exact, std::nullopt};
    if (*shots < 1) throw InvalidArgument("shots must be >= 1");
    std::mt19937_64 rng(seed);
    long hits = 0;
    for (long s = 0; s < *shots; ++s)
        if (detail::uniform53(rng) < exact) ++hits;
    return {static_cast<double>(hits) / static_cast<double>(*shots), exact, MeasurementRecord{*shots, hits, seed}};
}

/// Repeated selective measurement. Element 0 is the plain herald probability. Round k takes
/// the |e>-heralded branch (motion ideally |n0+k>), resets the ion to |g> without touching the
/// motion, drives a pi-pulse on {|g,n0+k>, |e,n0+k+1>} and multiplies the estimate by the
/// probability of finding |e> again. Off-resonant contaminants of the heralded branch stay in
/// |g> and are filtered out round by round.
template <QuantumState S>
std::vector<double> refine_population(const S& motional, int n0, const RamanParams& p, int rounds,
                                      ExecutionMode mode) {
    const auto& m = detail::require_motional(motional);
    if (rounds < 0) throw InvalidArgument("rounds must be >= 0");
    if (n0 + rounds + 1 > m.cutoff()) throw InvalidArgument("refinement rounds overflow the mode cutoff");
    detail::PopulationMeter meter(p, m.cutoff(), mode);
    S branch = meter.pulse(detail::prepare_ion(motional, Level::g), n0);
    double estimate = std::clamp(level_probability(branch, Level::e), 0.0, 1.0);
    std::vector<double> out{estimate};
    for (int k = 1; k <= rounds; ++k) {
        if (estimate < kHeraldThreshold) {
            out.push_back(0.0);
            continue;
        }
        branch = detail::reset_ion(measure_internal(branch, Level::e).post, Level::e);
        branch = meter.pulse(branch, n0 + k);
        estimate *= std::clamp(level_probability(branch, Level::e), 0.0, 1.0);
        out.push_back(estimate);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Wigner function

enum class WignerConvention { Paper, Standard };
enum class WignerMethod { Oracle, Protocol };

struct WignerGrid {
    std::vector<Complex> alphas;
    std::vector<double> values;
    WignerConvention convention;
};

struct WignerOptions {
    WignerConvention convention = WignerConvention::Paper;
    WignerMethod method = WignerMethod::Oracle;
    ExecutionMode dynamics = ExecutionMode::Ideal;  // protocol method only
    std::optional<RamanParams> params;              // required by the protocol method
    int threads = 1;
};

/// W(alpha) = 2 sum_n (-1)^n P_n(-alpha), P_n(a) = <n| D(a) rho D(a)^dag |n>.
/// Oracle: parity of the displaced density matrix. Protocol: every P_n from the selective
/// population measurement on the displaced state (embedded one level higher so that the top
/// Fock level has a partner). Standard convention divides by pi.
inline WignerGrid wigner(const MixedState& motional, const std::vector<Complex>& grid, const WignerOptions& opt) {
    const auto& m = detail::require_motional(motional);
    if (opt.method == WignerMethod::Protocol && !opt.params)
        throw InvalidArgument("protocol Wigner reconstruction needs Raman parameters");
    // D(-alpha) needs the same truncation check for every point; fail before threading.
    for (const auto& a : grid) (void)poisson_tail_above(std::norm(a), m.cutoff());
    WignerGrid out{grid, std::vector<double>(grid.size(), 0.0), opt.convention};
    const double scale = opt.convention == WignerConvention::Paper ? 1.0 : 1.0 / std::numbers::pi;
    parallel_for(grid.size(), opt.threads, [&](std::size_t i) {
        Operator d = displacement(m, -grid[i]);
        MixedState shifted = d.conjugate(motional);
        double w = 0.0;
        if (opt.method == WignerMethod::Oracle) {
            for (int n = 0; n < m.dim(); ++n) w += (n % 2 ? -1.0 : 1.0) * shifted.matrix()(n, n).real();
        } else {
            MixedState ext = embed(shifted, m.cutoff() + 1);
            detail::PopulationMeter meter(*opt.params, m.cutoff() + 1, opt.dynamics);
            for (int n = 0; n < m.dim(); ++n) w += (n % 2 ? -1.0 : 1.0) * meter(ext, n);
        }
        out.values[i] = 2.0 * w * scale;
    });
    return out;
}

inline WignerGrid wigner(const PureState& motional, const std::vector<Complex>& grid, const WignerOptions& opt) {
    return wigner(MixedState(motional), grid, opt);
}

// ---------------------------------------------------------------------------
// Controlled-phase gate

/// Ion `mapped` is swapped onto the motion and back; ion `target` receives the conditional
/// 2pi-pulse.
struct CpgIons {
    int mapped = 0;
    int target = 1;
};

/// Total duration of the three CPG pulses.
inline double cpg_duration(const RamanParams& p) {
    return 2.0 * pi_time(p, Selector::jc(1)).derived + 2.0 * pi_time(p, Selector::jc(2)).derived;
}

/// Three-step controlled-phase gate on two ions sharing one mode:
/// (1) selective JC pi-pulse on {|g_j,1>, |e_j,0>} maps qubit j onto the motion;
/// (2) selective JC 2pi-pulse on {|g_k,2>, |e_k,1>} flips the sign of |e_k,1>;
/// (3) the inverse of (1) (laser phase pi) maps the motion back.
/// Returns the full (ion, ion, mode) state.
inline PureState cpg(const PureState& qubits, const RamanParams& p, ExecutionMode mode, const PureState& motional,
                     CpgIons ions = {}) {
    const auto& qs = qubits.space();
    if (qs.size() != 2 || qs.has_mode() || qs.internal(0).kind != InternalKind::TwoLevel ||
        qs.internal(1).kind != InternalKind::TwoLevel)
        throw DimensionMismatch("cpg expects a TwoLevel ⊗ TwoLevel register");
    const auto& m = detail::require_motional(motional);
    if (m.cutoff() < 3) throw InvalidArgument("cpg needs mode cutoff >= 3 (the 2pi-pulse uses |2>)");
    if (ions.mapped == ions.target || ions.mapped < 0 || ions.mapped > 1 || ions.target < 0 || ions.target > 1)
        throw InvalidArgument("cpg ions must be 0 and 1 in some order");
    PureState state = tensor(qubits, motional);
    const Selector map_sel = Selector::jc(1);
    const Selector phase_sel = Selector::jc(2);
    const double t_map = pi_time(p, map_sel).derived;
    const double t_phase = 2.0 * pi_time(p, phase_sel).derived;
    state = selective_pulse(state, p, ions.mapped, map_sel, t_map, mode);
    state = selective_pulse(state, p, ions.target, phase_sel, t_phase, mode);
    state = selective_pulse(state, p, ions.mapped, map_sel, t_map, mode, std::numbers::pi);
    return state;
}

inline PureState cpg(const PureState& qubits, const RamanParams& p, ExecutionMode mode, int cutoff = 3) {
    return cpg(qubits, p, mode, fock_state(ModeSpace(cutoff), 0));
}

/// Amplitudes <q, mode=0 | state> on the 4-dimensional register basis |gg>, |ge>, |eg>, |ee>.
inline Eigen::Vector4cd register_amplitudes(const PureState& full, int fock = 0) {
    Eigen::Vector4cd out;
    for (int q = 0; q < 4; ++q)
        out(q) = full[basis_index(full.space(), BasisLabel{{q / 2 ? Level::e : Level::g, q % 2 ? Level::e : Level::g}, fock})];
    return out;
}

struct CpgProcess {
    Eigen::Matrix4cd map;  // <a, 0| U |b, 0>
    double process_fidelity;
    double min_mode_return;  // min over register basis inputs of P(mode = |0>)
};

/// Process fidelity |tr(CZ^dag M)|^2 / 16 of the CPG restricted to mode |0> in and out.
inline CpgProcess cpg_process(const RamanParams& p, ExecutionMode mode, int cutoff = 3) {
    CpgProcess out{Eigen::Matrix4cd::Zero(), 0.0, 1.0};
    auto reg = SpaceDescriptor({two_level(), two_level()});
    for (int b = 0; b < 4; ++b) {
        PureState fin = cpg(basis_state(reg, b), p, mode, cutoff);
        out.map.col(b) = register_amplitudes(fin);
        out.min_mode_return = std::min(out.min_mode_return, fock_populations(fin)[0]);
    }
    Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
    cz(3, 3) = -1.0;
    out.process_fidelity = std::norm((cz.adjoint() * out.map).trace()) / 16.0;
    return out;
}

}  // namespace ionsel
