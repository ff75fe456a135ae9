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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "ionsel/design.hpp"
#include "ionsel/protocols.hpp"
#include "oracles.hpp"

using namespace ionsel;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

RamanParams with_selectivity(double s) {
    RamanParams p{1e6, 1e6, 1e8, 0.1, 0.0, 1e7};
    p.eta2 = 4.0 * p.eta1 * p.eta1 / s;
    return p;
}

RamanParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RamanParams p;
    p.g1 = 1e5 * std::pow(100.0, u(rng));
    p.g2 = 1e5 * std::pow(100.0, u(rng));
    p.delta = 200.0 * std::max(p.g1, p.g2) * (1.0 + u(rng));
    p.eta1 = 0.01 + 0.2 * u(rng);
    p.eta2 = 0.001 + 0.2 * u(rng);
    p.nu = 1e7;
    return p;
}

// Closed forms written out independently of the library.
double ground_energy(const RamanParams& p, int n) {
    double a = p.g1 * p.g1 / p.delta;
    return -4.0 * a + 4.0 * p.eta1 * p.eta1 * a * (2.0 * n + 1.0);
}
double excited_energy(const RamanParams& p) { return -p.g2 * p.g2 / p.delta; }

Complex elem(const Operator& h, Level a, int na, Level b, int nb) {
    return h(basis_index(h.space(), BasisLabel{{a}, na}), basis_index(h.space(), BasisLabel{{b}, nb}));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    auto t0 = Clock::now();
    auto p = with_selectivity(100);
    const double om = effective_coupling(p);
    auto space = ion_mode_space(20);
    double worst = 0.0;
    for (int n0 : {0, 1, 2, 5}) {
        auto sel = Selector::ajc(n0);
        Propagator prop(selective_hamiltonian(p, sel, space));
        auto psi0 = basis_state(space, BasisLabel{{Level::g}, n0});
        int watch = basis_index(space, BasisLabel{{Level::e}, n0 + 1});
        // Least-squares fit of P(t) = sin^2(w t) on the rising quarter period, linearised as asin(sqrt P) = w t.
        const double guess = om * std::sqrt(n0 + 1.0);
        double sxy = 0.0, sxx = 0.0;
        for (int k = 1; k <= 40; ++k) {
            double t = 0.9 * (std::numbers::pi / 2.0) / guess * k / 40.0;
            double pe = std::norm(prop.apply(t, psi0)[watch]);
            double y = std::asin(std::sqrt(std::min(pe, 1.0)));
            sxy += t * y;
            sxx += t * t;
        }
        double w = sxy / sxx;
        worst = std::max(worst, rel_err(w, guess));
    }
    double rt = seconds_since(t0);
    o.detail << "max rel err " << worst << ", runtime " << rt << " s ";
    o.require(worst <= 1e-6, "rel err <= 1e-6");
    o.require(rt < 1.0, "runtime < 1 s");
    return o;
}

Outcome criterion2() {
    Outcome o;
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        auto p = random_params(rng);
        auto space = ion_mode_space(8);
        auto h = effective_hamiltonian(p, space);
        for (int n0 = 0; n0 < 7; ++n0) {
            double want = excited_energy(p) - ground_energy(p, n0);
            double gap = (elem(h, Level::e, n0 + 1, Level::e, n0 + 1) - elem(h, Level::g, n0, Level::g, n0)).real();
            worst = std::max({worst, rel_err(gap, want), rel_err(bare_detuning(p, n0), want)});
        }
        const int n0 = static_cast<int>(rng() % 4);
        auto hs = selective_hamiltonian(p, Selector::ajc(n0), space);
        for (int n = 0; n < 7; ++n) {
            if (n == n0) continue;
            double want = ground_energy(p, n0) - ground_energy(p, n);
            double gap = (elem(hs, Level::e, n + 1, Level::e, n + 1) - elem(hs, Level::g, n, Level::g, n)).real();
            worst = std::max({worst, rel_err(gap, want), rel_err(residual_detuning(p, n, n0), want)});
        }
    }
    o.detail << "100 draws, max rel err " << worst << " ";
    o.require(worst <= 1e-10, "rel err <= 1e-10");
    return o;
}

Outcome criterion3() {
    Outcome o;
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        auto p = random_params(rng);
        int n0 = static_cast<int>(rng() % 5);
        double want = 4.0 * (p.eta1 * p.eta1 / p.eta2) * (p.g1 / p.g2);
        double omega_eff = 2.0 * p.eta2 * p.g1 * p.g2 / p.delta;
        double ratio = std::abs(residual_detuning(p, n0 + 1, n0)) / effective_coupling(p);
        worst = std::max({worst, rel_err(ratio, want), rel_err(selectivity(p), want),
                          rel_err(effective_coupling(p), omega_eff)});
    }
    o.detail << "100 draws, max rel err " << worst << " ";
    o.require(worst <= 1e-12, "rel err <= 1e-12");
    return o;
}

Outcome criterion4() {
    Outcome o;
    // Omega_eff = 2 eta2 g1 g2 / Delta = 1e5 rad/s
    RamanParams p{1e7, 1e7, 1e9, 0.1, 0.5, 1e7};
    auto r = feasibility(p, Selector::ajc(0), DesignThresholds{});
    double tau = r.pi_time_paper;
    double want = std::numbers::pi / 1e5;
    double ratio = tau / 10e-3;
    o.detail << "Omega_eff " << r.omega_eff << ", pi-time " << tau << " s, ratio to 10 ms " << ratio << " ";
    o.require(rel_err(r.omega_eff, 1e5) <= 1e-12, "Omega_eff = 1e5");
    o.require(rel_err(tau, want) <= 1e-12, "pi-time = pi/1e5");
    o.require(tau < 1e-4, "pi-time < 0.1 ms");
    o.require(rel_err(r.decoherence_ratio, ratio) <= 1e-12 && ratio < 0.01, "ratio < 0.01");
    return o;
}

Outcome criterion5() {
    Outcome o;
    auto t0 = Clock::now();
    const int cutoff = 20;
    auto space = ion_mode_space(cutoff);
    {
        auto p = with_selectivity(20);
        const int n0 = 2;
        auto sel = Selector::ajc(n0);
        Propagator prop(selective_hamiltonian(p, sel, space));
        double t = pi_time(p, sel).derived;
        for (int n : {1, 3}) {
            auto psi0 = basis_state(space, BasisLabel{{Level::g}, n});
            int watch = basis_index(space, BasisLabel{{Level::e}, n + 1});
            double observed = 0.0;
            for (int k = 1; k <= 4000; ++k) observed = std::max(observed, std::norm(prop.apply(t * k / 4000, psi0)[watch]));
            double bound = leakage_bound(p, n, n0);
            double omega_r = 2.0 * effective_coupling(p) * std::sqrt(n + 1.0);
            double oracle_bound = oracle::generalized_rabi_max(omega_r, 20.0 * effective_coupling(p) * (n - n0));
            o.detail << "S=20 n=" << n << " leak " << observed << " bound " << bound << "; ";
            o.require(rel_err(bound, oracle_bound) <= 1e-12, "bound matches generalized Rabi");
            o.require(observed <= bound * (1.0 + 1e-9), "leak <= bound");
            o.require(observed >= 0.9 * bound, "leak within 10% of bound");
        }
    }
    {
        auto p = with_selectivity(100);
        ModeSpace m(cutoff);
        // n0 = 2 is reported but not gated; see README (leakage from two neighbours).
        for (int n0 : {0, 1, 2}) {
            auto r = generate_fock(coherent_state(m, 1.0), n0, p, ExecutionMode::Effective);
            double f = fidelity(r.post_state, fock_state(m, n0 + 1));
            o.detail << "S=100 n0=" << n0 << " F " << f << "; ";
            if (n0 < 2) o.require(f >= 0.999, "Fock fidelity >= 0.999");
        }
    }
    double rt = seconds_since(t0);
    o.detail << "runtime " << rt << " s ";
    o.require(rt < 10.0, "runtime < 10 s");
    return o;
}

double g_timedep_drift = 0.0;

Outcome criterion6() {
    Outcome o;
    auto t0 = Clock::now();
    const double g = 1e6;
    const int cutoff = 10;
    RamanParams p{g, g, 100.0 * g, 0.1, 0.1, 2.0 * std::sqrt(2.0) * g};
    p = with_blue_sideband_lasers(p, 2e15, 3e15);
    auto space = three_level_mode_space(cutoff);
    auto h = three_level_model(p, space, -bare_detuning(p, 0));
    auto psi = h.dress(basis_state(space, BasisLabel{{Level::g}, 0}));
    double t_pi = pi_time(p, Selector::ajc(0)).derived;
    std::vector<double> times;
    for (int k = 1; k <= 100; ++k) times.push_back(t_pi * k / 100);
    std::vector<BasisLabel> watch{{{Level::e}, 1}};
    for (int n = 0; n <= cutoff; ++n) watch.push_back({{Level::c}, n});
    auto tr = rabi_scan(h, psi, times, watch);
    double max_c = 0.0;
    for (Eigen::Index i = 0; i < tr.populations.rows(); ++i)
        max_c = std::max(max_c, tr.populations.row(i).tail(cutoff + 1).sum());
    double pe_three = tr.populations(tr.populations.rows() - 1, 0);

    auto two = ion_mode_space(cutoff);
    auto eff = propagate_const(selective_hamiltonian(p, Selector::ajc(0), two), t_pi,
                               basis_state(two, BasisLabel{{Level::g}, 0}));
    double pe_eff = std::norm(eff[basis_index(two, BasisLabel{{Level::e}, 1})]);

    auto fin = propagate_timedep(h, 0.0, t_pi, psi);
    g_timedep_drift = std::abs(fin.norm() - 1.0);
    double bound = 4.0 * (g / p.delta) * (g / p.delta);
    double rt = seconds_since(t0);
    o.detail << "P_e three-level " << pe_three << " effective " << pe_eff << ", max c " << max_c << " (bound " << bound
             << "), runtime " << rt << " s ";
    o.require(std::abs(pe_three - pe_eff) <= 0.05, "flop within 5%");
    o.require(max_c <= bound, "c population <= 4 (g/Delta)^2");
    o.require(rt < 60.0, "runtime < 60 s");
    return o;
}

Outcome criterion7() {
    Outcome o;
    auto p = with_selectivity(20);
    ModeSpace m(20);
    auto fock = generate_fock(coherent_state(m, 1.0), 2, p, ExecutionMode::Ideal);
    double want_fock = oracle::poisson(1.0, 2);
    auto cool = selective_cool(thermal_state(m, 0.5), p, ExecutionMode::Ideal);
    double f_cool = fidelity(fock_state(m, 0), cool.post_state);
    auto meas = measure_population(coherent_state(m, 1.0), 0, p, std::nullopt, ExecutionMode::Ideal);
    o.detail << "Fock herald " << fock.herald_probability << ", cool herald " << cool.herald_probability << " F "
             << f_cool << ", P0 " << meas.estimate << " ";
    o.require(std::abs(fock.herald_probability - want_fock) <= 1e-6, "Fock herald e^-1/2");
    o.require(std::abs(cool.herald_probability - 2.0 / 9.0) <= 1e-3, "cool herald 2/9");
    o.require(f_cool >= 0.999, "cooled fidelity >= 0.999");
    o.require(std::abs(meas.estimate - std::exp(-1.0)) <= 1e-6, "P0 = e^-1");
    return o;
}

Outcome criterion8() {
    Outcome o;
    const int threads = default_thread_count();
    {
        WignerOptions opt;
        ModeSpace m(12);
        double w0 = wigner(fock_state(m, 0), {0.0}, opt).values[0];
        double w1 = wigner(fock_state(m, 1), {0.0}, opt).values[0];
        o.detail << "W_vac(0) " << w0 << ", W_1(0) " << w1 << "; ";
        o.require(std::abs(w0 - 2.0) <= 1e-12 && std::abs(w1 + 2.0) <= 1e-12, "vacuum 2, Fock-1 -2");
    }
    auto t0 = Clock::now();
    ModeSpace m(40);
    const Complex beta(0.5, -0.3);
    std::vector<Complex> grid;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) grid.emplace_back(-2.0 + 0.1 * i, -2.0 + 0.1 * j);
    WignerOptions proto;
    proto.method = WignerMethod::Protocol;
    proto.params = with_selectivity(20);
    proto.threads = threads;
    auto wp = wigner(coherent_state(m, beta), grid, proto);
    double rt = seconds_since(t0);
    WignerOptions direct;
    direct.threads = threads;
    auto wd = wigner(coherent_state(m, beta), grid, direct);
    double d_oracle = 0.0, d_closed = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        d_oracle = std::max(d_oracle, std::abs(wp.values[i] - wd.values[i]));
        if (std::abs(grid[i]) <= 2.0) d_closed = std::max(d_closed, std::abs(wp.values[i] - oracle::coherent_wigner(grid[i], beta)));
    }
    o.detail << "41x41 protocol vs parity oracle " << d_oracle << ", vs closed form " << d_closed << ", runtime " << rt
             << " s ";
    o.require(d_oracle <= 1e-8, "protocol vs oracle 1e-8");
    o.require(d_closed <= 1e-3, "closed form 1e-3");
    o.require(rt < 30.0, "runtime < 30 s");
    return o;
}

Outcome criterion9() {
    Outcome o;
    auto p = with_selectivity(20);
    auto reg_space = SpaceDescriptor({two_level(), two_level()});
    Vector u(4);
    u << 0.5, 0.5, 0.5, 0.5;
    auto a = register_amplitudes(cpg(PureState(reg_space, u), p, ExecutionMode::Ideal));
    Eigen::Vector4cd want(0.5, 0.5, 0.5, -0.5);
    double f_uniform = std::norm(want.dot(a));
    std::string signs;
    for (int i = 0; i < 4; ++i) signs += a(i).real() > 0 ? '+' : '-';
    auto ideal = cpg_process(p, ExecutionMode::Ideal);
    auto eff = cpg_process(p, ExecutionMode::Effective);
    std::mt19937_64 rng(19);
    std::normal_distribution<double> nd;
    double worst_twice = 0.0;
    for (int k = 0; k < 20; ++k) {
        Vector v(4);
        for (int i = 0; i < 4; ++i) v(i) = Complex(nd(rng), nd(rng));
        auto in = PureState::normalized(reg_space, v);
        auto once = register_amplitudes(cpg(in, p, ExecutionMode::Ideal));
        auto twice = register_amplitudes(cpg(PureState(reg_space, Vector(once)), p, ExecutionMode::Ideal));
        worst_twice = std::max(worst_twice, (twice - Eigen::Vector4cd(in.amplitudes())).cwiseAbs().maxCoeff());
    }
    o.detail << "signs " << signs << ", ideal F " << ideal.process_fidelity << ", effective F " << eff.process_fidelity
             << " mode return " << eff.min_mode_return << ", cpg^2 err " << worst_twice << " ";
    o.require(signs == "+++-", "signs + + + -");
    o.require(std::abs(f_uniform - 1.0) <= 1e-10 && std::abs(ideal.process_fidelity - 1.0) <= 1e-10, "ideal F = 1");
    o.require(eff.process_fidelity >= 0.99, "effective F >= 0.99");
    o.require(eff.min_mode_return >= 0.99, "mode return >= 0.99");
    o.require(worst_twice <= 1e-10, "cpg^2 = identity");
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(IONSEL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion10() {
    Outcome o;
    auto p = with_selectivity(20);
    auto space = ion_mode_space(20);
    std::mt19937_64 rng(10);
    std::normal_distribution<double> nd;
    double const_drift = 0.0;
    for (int k = 0; k < 10; ++k) {
        Vector v(space.dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(nd(rng), nd(rng));
        auto psi = PureState::normalized(space, v);
        auto sel = Selector::ajc(k % 4);
        double t = pi_time(p, sel).derived * (1.0 + 3.0 * k);
        auto out = propagate_const(selective_hamiltonian(p, sel, space), t, psi);
        const_drift = std::max(const_drift, std::abs(out.norm() - 1.0));
    }
    o.detail << "constant-H drift " << const_drift << ", time-dependent drift " << g_timedep_drift << "; ";
    o.require(const_drift <= 1e-10, "constant drift <= 1e-10");
    o.require(g_timedep_drift <= 1e-7, "time-dependent drift <= 1e-7");

    const std::string dir(IONSEL_CONFIG_DIR);
    const auto tmp = std::filesystem::temp_directory_path();
    int identical = 0, total = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (entry.path().extension() != ".json") continue;
        std::string cmd = name.substr(0, name.find_first_of("_."));
        std::string a = (tmp / ("ionsel_acc_a_" + std::to_string(::getpid()) + name)).string();
        std::string b = (tmp / ("ionsel_acc_b_" + std::to_string(::getpid()) + name)).string();
        std::string args = cmd + " --config " + entry.path().string() + " --seed 5 --out ";
        ++total;
        if (run_cli(args + a) == 0 && run_cli(args + b) == 0) {
            std::string ta = read_file(a);
            if (!ta.empty() && ta == read_file(b)) ++identical;
        }
        std::filesystem::remove(a);
        std::filesystem::remove(b);
    }
    o.detail << "CLI reruns byte-identical " << identical << "/" << total << " ";
    o.require(total > 0 && identical == total, "byte-identical reruns");
    return o;
}

}  // namespace

int main() {
    // 6 runs before 10 so the time-dependent drift is available.
    std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
    int failed = 0;
    for (auto& [id, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail.str() << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
