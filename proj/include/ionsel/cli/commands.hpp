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
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ionsel/cli/config.hpp"
#include "ionsel/cli/output.hpp"
#include "ionsel/core/parallel.hpp"
#include "ionsel/design.hpp"
#include "ionsel/evolution.hpp"
#include "ionsel/hamiltonians.hpp"
#include "ionsel/protocols.hpp"
#include "ionsel/version.hpp"

namespace ionsel::cli {

/// Exit codes: one per error class, disjoint.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPhysics = 3;
inline constexpr int kExitNumerical = 4;

inline int exit_code(const Error& e) {
    switch (e.error_class()) {
        case ErrorClass::kConfig:
            return kExitConfig;
        case ErrorClass::kPhysics:
            return kExitPhysics;
        case ErrorClass::kNumerical:
            return kExitNumerical;
    }
    return kExitInternal;
}

struct RunOptions {
    std::optional<std::uint64_t> seed;  // overrides the config's seed
    int threads = 1;
};

struct RunResult {
    std::string text;
    std::optional<std::string> output_path;  // from the config; the command line takes precedence
};

using MotionalState = std::variant<PureState, MixedState>;

namespace detail {

inline RamanParams read_params(Section s) {
    RamanParams p;
    p.g1 = s.number("g1");
    p.g2 = s.number("g2");
    p.delta = s.number("delta");
    p.eta1 = s.number("eta1");
    p.eta2 = s.number("eta2");
    p.nu = s.number("nu");
    auto oe = s.optional_number("omega_e");
    auto oc = s.optional_number("omega_c");
    s.finish();
    if (oe.has_value() != oc.has_value()) throw ConfigError("params: omega_e and omega_c go together");
    p.validate();
    if (oe) p = with_blue_sideband_lasers(p, *oe, *oc);
    return p;
}

inline ExecutionMode read_mode(Section& s) {
    return s.choice("mode", {"ideal", "effective"}, "ideal") == "ideal" ? ExecutionMode::Ideal : ExecutionMode::Effective;
}

inline int read_cutoff(Section& s, int fallback) {
    long long c = s.integer("cutoff", fallback);
    if (c < 1 || c > 400) throw ConfigError("'cutoff' must lie in [1, 400]");
    return static_cast<int>(c);
}

inline int read_nonneg_int(Section& s, const std::string& key, std::optional<long long> fallback = std::nullopt) {
    long long v = fallback && !s.has(key) ? *fallback : s.integer(key);
    if (v < 0 || v > 1'000'000) throw ConfigError("'" + key + "' must be a non-negative integer");
    return static_cast<int>(v);
}

inline MotionalState read_motional(Section s, int cutoff) {
    ModeSpace m(cutoff);
    std::string type = s.choice("type", {"fock", "coherent", "thermal", "amplitudes", "populations"}, "");
    MotionalState out = fock_state(m, 0);
    if (type == "fock") {
        int n = read_nonneg_int(s, "n");
        if (n > cutoff) throw ConfigError("'" + s.path() + ".n' exceeds the cutoff");
        out = fock_state(m, n);
    } else if (type == "coherent") {
        Complex beta(s.number("re"), s.number("im", 0.0));
        if (poisson_tail_above(std::norm(beta), cutoff) >= kDisplacementTruncationTol)
            throw TruncationError("coherent amplitude too large for the cutoff");
        out = coherent_state(m, beta);
    } else if (type == "thermal") {
        double nbar = s.number("nbar");
        if (nbar < 0.0) throw ConfigError("'" + s.path() + ".nbar' must be >= 0");
        out = thermal_state(m, nbar);
    } else if (type == "amplitudes") {
        auto re = s.numbers("re");
        std::vector<double> im = s.has("im") ? s.numbers("im") : std::vector<double>(re.size(), 0.0);
        if (re.size() != im.size()) throw ConfigError("'" + s.path() + "': re and im lengths differ");
        if (re.empty() || static_cast<int>(re.size()) > cutoff + 1)
            throw ConfigError("'" + s.path() + "': need 1..cutoff+1 amplitudes");
        Vector v = Vector::Zero(m.dim());
        for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
        try {
            out = PureState::normalized(m, std::move(v));
        } catch (const InvalidArgument& e) {
            throw ConfigError("'" + s.path() + "': " + e.what());
        }
    } else {
        auto w = s.numbers("p");
        if (w.empty() || static_cast<int>(w.size()) > cutoff + 1)
            throw ConfigError("'" + s.path() + "': need 1..cutoff+1 populations");
        out = fock_mixture(m, w);
    }
    s.finish();
    return out;
}

inline std::string motional_kind(const MotionalState& s) { return std::holds_alternative<PureState>(s) ? "pure" : "mixed"; }

inline BasisLabel parse_label(const std::string& text, const std::string& key) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("'" + key + "' label must look like \"g,0\"");
    BasisLabel b;
    try {
        b.levels = {parse_level(text.substr(0, comma))};
        std::size_t used = 0;
        b.n = std::stoi(text.substr(comma + 1), &used);
        if (used != text.size() - comma - 1 || b.n < 0) throw std::invalid_argument("n");
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' label '" + text + "' is malformed");
    }
    return b;
}

inline std::string label_name(const BasisLabel& b) {
    return std::string(level_name(b.levels.at(0))) + "," + std::to_string(b.n);
}

inline Selector read_selector(Section s) {
    Selector sel;
    sel.kind = s.choice("kind", {"ajc", "jc"}, "ajc") == "ajc" ? SubspaceKind::AJC : SubspaceKind::JC;
    sel.n0 = read_nonneg_int(s, "n0");
    s.finish();
    return sel;
}

inline OrderedJson provenance(const std::string& command, std::uint64_t seed, const std::string& mode) {
    OrderedJson j;
    j["artifact"] = "ionsel";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["mode"] = mode;
    return j;
}

inline OrderedJson populations_json(const MotionalState& s) {
    return std::visit([](const auto& st) { return OrderedJson(fock_populations(st)); }, s);
}

template <typename Fn>
auto visit_motional(const MotionalState& s, Fn&& fn) {
    return std::visit(std::forward<Fn>(fn), s);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return v;
}

/// Shared envelope: the echoed config (with the effective seed), the result and provenance.
struct Context {
    std::string command;
    Json config;  // echoed, seed resolved
    std::uint64_t seed;
    int threads;
};

inline std::string json_envelope(const Context& ctx, const std::string& mode, OrderedJson result) {
    OrderedJson out;
    out["inputs"] = OrderedJson::parse(ctx.config.dump());
    out["result"] = std::move(result);
    out["provenance"] = provenance(ctx.command, ctx.seed, mode);
    return dump_json(out);
}

inline std::vector<std::string> csv_provenance(const Context& ctx, const std::string& mode) {
    return {"ionsel " + std::string(kVersion) + " " + ctx.command + " seed=" + std::to_string(ctx.seed) +
                " mode=" + mode,
            "config " + ctx.config.dump()};
}

// ---------------------------------------------------------------------------

inline std::string cmd_rabi(Section& s, const Context& ctx) {
    RamanParams p = read_params(s.section("params"));
    int cutoff = read_cutoff(s, 10);
    std::string model = s.choice("model", {"selective", "effective", "jc", "ajc", "three_level"}, "selective");
    Selector sel = s.has("selector") ? read_selector(s.section("selector")) : Selector::ajc(0);
    sel.validate(cutoff);

    Section ts = s.section("times");
    int points = static_cast<int>(ts.integer("points"));
    if (points < 1) throw ConfigError("'times.points' must be >= 1 (empty time grid)");
    std::optional<double> stop = ts.optional_number("stop");
    std::optional<double> stop_pi = ts.optional_number("stop_pi");
    ts.finish();
    if (stop.has_value() == stop_pi.has_value()) throw ConfigError("'times' needs exactly one of stop, stop_pi");
    double t_end = stop ? *stop : *stop_pi * pi_time(p, sel).derived;
    if (!(t_end > 0.0)) throw ConfigError("'times' end must be positive");
    std::vector<double> times = points == 1 ? std::vector<double>{t_end} : linspace(0.0, t_end, points);

    bool three = model == "three_level";
    SpaceDescriptor space = three ? three_level_mode_space(cutoff) : ion_mode_space(cutoff);
    BasisLabel init{{Level::g}, sel.n0};
    if (s.has("initial")) init = parse_label(s.string("initial"), "initial");
    std::vector<BasisLabel> watch{{{Level::g}, sel.n0}, {{Level::e}, sel.partner()}};
    if (s.has("watch")) {
        watch.clear();
        const Json& w = s.raw("watch");
        if (!w.is_array()) throw ConfigError("'watch' must be an array of labels");
        for (const auto& x : w) {
            if (!x.is_string()) throw ConfigError("'watch' must be an array of labels");
            watch.push_back(parse_label(x.get<std::string>(), "watch"));
        }
    }
    for (const auto& lab : watch) (void)basis_index(space, lab);
    PureState psi0 = basis_state(space, init);

    Trace tr;
    if (three) {
        TimeDependentOptions opt;
        opt.tol = s.number("tol", opt.tol);
        bool dressed = true;
        if (s.has("dressed")) {
            const Json& d = s.raw("dressed");
            if (!d.is_boolean()) throw ConfigError("'dressed' must be a boolean");
            dressed = d.get<bool>();
        }
        if (sel.kind != SubspaceKind::AJC) throw ConfigError("three_level model drives the AJC sideband only");
        if (!p.omega_e) throw ConfigError("three_level model needs params.omega_e and params.omega_c");
        s.finish();
        HarmonicHamiltonian h = three_level_model(p, space, -bare_detuning(p, sel.n0));
        tr = rabi_scan(h, dressed ? h.dress(psi0) : psi0, times, watch, opt);
    } else {
        Operator h = identity(space);
        if (model == "selective") {
            h = selective_hamiltonian(p, sel, space);
        } else if (model == "effective") {
            h = effective_hamiltonian(p, space);
        } else {
            double g = s.number("coupling");
            h = model == "jc" ? jc_hamiltonian(g, space) : ajc_hamiltonian(g, space);
        }
        s.finish();
        tr = rabi_scan(h, psi0, times, watch);
    }

    std::vector<std::string> header{"t"};
    for (const auto& lab : watch) header.push_back("P(" + label_name(lab) + ")");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (Eigen::Index j = 0; j < tr.populations.cols(); ++j)
            row.push_back(tr.populations(static_cast<Eigen::Index>(i), j));
        rows.push_back(std::move(row));
    }
    return write_csv(csv_provenance(ctx, model), header, rows);
}

inline std::string cmd_fock(Section& s, const Context& ctx) {
    RamanParams p = read_params(s.section("params"));
    int cutoff = read_cutoff(s, 20);
    ExecutionMode mode = read_mode(s);
    int n0 = read_nonneg_int(s, "n0");
    MotionalState motional = read_motional(s.section("motional"), cutoff);
    s.finish();
    OrderedJson r;
    visit_motional(motional, [&](const auto& st) {
        auto res = generate_fock(st, n0, p, mode);
        r["herald_level"] = level_name(res.herald_level);
        r["herald_probability"] = res.herald_probability;
        r["duration"] = res.duration;
        r["target_fock"] = n0 + 1;
        r["fidelity_with_target"] = fidelity(res.post_state, fock_state(ModeSpace(cutoff), n0 + 1));
        r["post_populations"] = fock_populations(res.post_state);
    });
    return json_envelope(ctx, mode == ExecutionMode::Ideal ? "ideal" : "effective", r);
}

inline std::string cmd_cool(Section& s, const Context& ctx) {
    RamanParams p = read_params(s.section("params"));
    int cutoff = read_cutoff(s, 20);
    ExecutionMode mode = read_mode(s);
    MotionalState motional = read_motional(s.section("motional"), cutoff);
    s.finish();
    OrderedJson r;
    visit_motional(motional, [&](const auto& st) {
        auto res = selective_cool(st, p, mode);
        r["herald_level"] = level_name(res.herald_level);
        r["herald_probability"] = res.herald_probability;
        r["duration"] = res.duration;
        r["fidelity_with_ground"] = fidelity(res.post_state, fock_state(ModeSpace(cutoff), 0));
        r["post_populations"] = fock_populations(res.post_state);
    });
    return json_envelope(ctx, mode == ExecutionMode::Ideal ? "ideal" : "effective", r);
}

inline std::string cmd_measure(Section& s, const Context& ctx) {
    RamanParams p = read_params(s.section("params"));
    int cutoff = read_cutoff(s, 20);
    ExecutionMode mode = read_mode(s);
    int n0 = read_nonneg_int(s, "n0");
    std::optional<long> shots;
    if (s.has("shots")) {
        long long v = s.integer("shots");
        if (v < 1) throw ConfigError("'shots' must be >= 1");
        shots = static_cast<long>(v);
    }
    int rounds = read_nonneg_int(s, "rounds", 0);
    MotionalState motional = read_motional(s.section("motional"), cutoff);
    s.finish();
    if (n0 + 1 > cutoff) throw ConfigError("'n0' needs cutoff >= n0 + 1");
    OrderedJson r;
    visit_motional(motional, [&](const auto& st) {
        auto est = measure_population(st, n0, p, shots, mode, ctx.seed);
        r["n0"] = n0;
        r["estimate"] = est.estimate;
        r["exact"] = est.exact;
        if (est.record) {
            r["shots"] = est.record->shots;
            r["excited_counts"] = est.record->excited_counts;
            r["seed"] = est.record->seed;
            r["standard_error"] = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(est.record->shots));
        }
        if (rounds > 0) r["refinement"] = refine_population(st, n0, p, rounds, mode);
    });
    return json_envelope(ctx, mode == ExecutionMode::Ideal ? "ideal" : "effective", r);
}

inline std::string cmd_wigner(Section& s, const Context& ctx) {
    int cutoff = read_cutoff(s, 20);
    WignerOptions opt;
    opt.convention = s.choice("convention", {"paper", "standard"}, "paper") == "paper" ? WignerConvention::Paper
                                                                                        : WignerConvention::Standard;
    opt.method = s.choice("method", {"oracle", "protocol"}, "oracle") == "oracle" ? WignerMethod::Oracle
                                                                                  : WignerMethod::Protocol;
    opt.dynamics = read_mode(s);
    opt.threads = ctx.threads;
    if (s.has("params")) opt.params = read_params(s.section("params"));
    MotionalState motional = read_motional(s.section("motional"), cutoff);

    std::vector<Complex> grid;
    Section g = s.section("grid");
    if (g.has("points")) {
        const Json& pts = g.raw("points");
        if (!pts.is_array() || pts.empty()) throw ConfigError("'grid.points' must be a non-empty array of [re, im]");
        for (const auto& pt : pts) {
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
                throw ConfigError("'grid.points' entries must be [re, im]");
            grid.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
    } else {
        auto axis = [&](const std::string& key) {
            Section a = g.section(key);
            double lo = a.number("min"), hi = a.number("max");
            long long n = a.integer("points");
            a.finish();
            if (n < 1 || !(lo <= hi)) throw ConfigError("'grid." + key + "' needs min <= max and points >= 1");
            return linspace(lo, hi, static_cast<int>(n));
        };
        auto re = axis("re");
        auto im = axis("im");
        for (double y : im)
            for (double x : re) grid.emplace_back(x, y);
    }
    g.finish();
    s.finish();
    std::string mode = opt.method == WignerMethod::Oracle ? "oracle" : (opt.dynamics == ExecutionMode::Ideal ? "protocol-ideal" : "protocol-effective");
    WignerGrid w = visit_motional(motional, [&](const auto& st) { return wigner(to_mixed(st), grid, opt); });
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i].real(), grid[i].imag(), w.values[i]});
    return write_csv(csv_provenance(ctx, mode), {"re", "im", "W"}, rows);
}

inline OrderedJson amplitudes_json(const Eigen::Vector4cd& v) {
    OrderedJson re = OrderedJson::array(), im = OrderedJson::array();
    for (int i = 0; i < 4; ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    OrderedJson j;
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline std::string cmd_cpg(Section& s, const Context& ctx) {
    RamanParams p = read_params(s.section("params"));
    int cutoff = read_cutoff(s, 3);
    ExecutionMode mode = read_mode(s);
    Eigen::Vector4cd in = Eigen::Vector4cd::Constant(0.5);
    if (auto reg = s.optional_section("register")) {
        auto re = reg->numbers("re");
        std::vector<double> im = reg->has("im") ? reg->numbers("im") : std::vector<double>(4, 0.0);
        reg->finish();
        if (re.size() != 4 || im.size() != 4) throw ConfigError("'register' needs 4 re and 4 im values (gg, ge, eg, ee)");
        for (int i = 0; i < 4; ++i) in(i) = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
        if (!(in.norm() > 0.0)) throw ConfigError("'register' amplitudes are all zero");
        in.normalize();
    }
    s.finish();
    if (cutoff < 3) throw ConfigError("'cutoff' must be >= 3 for the controlled-phase gate");
    auto reg_space = SpaceDescriptor({two_level(), two_level()});
    PureState out = cpg(PureState(reg_space, Vector(in)), p, mode, cutoff);
    Eigen::Vector4cd amps = register_amplitudes(out);
    Eigen::Vector4cd ideal = in;
    ideal(3) = -ideal(3);
    OrderedJson signs = OrderedJson::array();
    for (int i = 0; i < 4; ++i) {
        if (std::abs(in(i)) < 1e-12) signs.push_back("0");
        else signs.push_back((amps(i) / in(i)).real() >= 0.0 ? "+" : "-");
    }
    CpgProcess proc = cpg_process(p, mode, cutoff);
    OrderedJson r;
    r["input"] = amplitudes_json(in);
    r["output"] = amplitudes_json(amps);
    r["signs"] = signs;
    r["state_fidelity"] = std::norm(ideal.dot(amps));
    r["mode_return"] = fock_populations(out)[0];
    OrderedJson table = OrderedJson::array();
    const char* names[4] = {"gg", "ge", "eg", "ee"};
    for (int b = 0; b < 4; ++b) {
        OrderedJson row;
        row["input"] = names[b];
        row["output_re"] = proc.map(b, b).real();
        row["output_im"] = proc.map(b, b).imag();
        table.push_back(row);
    }
    r["truth_table"] = table;
    r["process_fidelity"] = proc.process_fidelity;
    r["min_mode_return"] = proc.min_mode_return;
    r["duration"] = cpg_duration(p);
    return json_envelope(ctx, mode == ExecutionMode::Ideal ? "ideal" : "effective", r);
}

inline DesignThresholds read_thresholds(std::optional<Section> s) {
    DesignThresholds th;
    if (!s) return th;
    th.max_eta = s->number("max_eta", th.max_eta);
    th.min_adiabatic_ratio = s->number("min_adiabatic_ratio", th.min_adiabatic_ratio);
    th.min_dispersive_margin = s->number("min_dispersive_margin", th.min_dispersive_margin);
    th.decoherence_time = s->number("decoherence_time", th.decoherence_time);
    s->finish();
    if (!(th.decoherence_time > 0.0)) throw ConfigError("'thresholds.decoherence_time' must be positive");
    return th;
}

inline OrderedJson report_json(const FeasibilityReport& r) {
    OrderedJson j;
    j["selectivity"] = r.selectivity;
    j["omega_eff"] = r.omega_eff;
    j["pi_time_derived"] = r.pi_time_derived;
    j["pi_time_paper"] = r.pi_time_paper;
    j["dispersive_margin"] = r.dispersive_margin;
    j["ld_valid"] = r.ld_valid;
    j["adiabatic_ratio"] = r.adiabatic_ratio;
    j["adiabatic_valid"] = r.adiabatic_valid;
    j["decoherence_ratio"] = r.decoherence_ratio;
    return j;
}

inline OrderedJson params_json(const RamanParams& p) {
    OrderedJson j;
    j["g1"] = p.g1;
    j["g2"] = p.g2;
    j["delta"] = p.delta;
    j["eta1"] = p.eta1;
    j["eta2"] = p.eta2;
    j["nu"] = p.nu;
    return j;
}

inline std::string cmd_design(Section& s, const Context& ctx) {
    std::string task = s.choice("task", {"feasibility", "search"}, "feasibility");
    DesignThresholds th = read_thresholds(s.optional_section("thresholds"));
    OrderedJson r;
    if (task == "feasibility") {
        RamanParams p = read_params(s.section("params"));
        Selector sel = s.has("selector") ? read_selector(s.section("selector")) : Selector::ajc(0);
        s.finish();
        sel.validate(sel.n0 + 1);
        r["report"] = report_json(feasibility(p, sel, th));
        OrderedJson leak = OrderedJson::array();
        for (int d = 1; d <= 3; ++d) {
            OrderedJson e;
            e["n"] = sel.n0 + d;
            e["bound"] = leakage_bound(p, sel.n0 + d, sel.n0, sel.kind);
            leak.push_back(e);
        }
        r["leakage_bound"] = leak;
    } else {
        Section c = s.section("constraints");
        DesignConstraints dc;
        dc.thresholds = th;
        dc.min_selectivity = c.number("min_selectivity", dc.min_selectivity);
        dc.max_pi_time = c.number("max_pi_time", dc.max_pi_time);
        auto range = [&](const std::string& key, ParamRange& r) {
            if (auto b = c.optional_section(key)) {
                r.lo = b->number("min");
                r.hi = b->number("max");
                b->finish();
            }
        };
        range("g1", dc.g1);
        range("g2", dc.g2);
        range("delta", dc.delta);
        range("eta1", dc.eta1);
        range("eta2", dc.eta2);
        dc.nu = c.number("nu", dc.nu);
        dc.grid_points = static_cast<int>(c.integer("grid_points", dc.grid_points));
        dc.refine_sweeps = static_cast<int>(c.integer("refine_sweeps", dc.refine_sweeps));
        dc.n0 = static_cast<int>(c.integer("n0", dc.n0));
        if (c.has("kind")) dc.kind = c.choice("kind", {"ajc", "jc"}, "ajc") == "ajc" ? SubspaceKind::AJC : SubspaceKind::JC;
        c.finish();
        s.finish();
        DesignResult res = search(dc, ctx.threads);
        r["params"] = params_json(res.params);
        r["report"] = report_json(res.report);
    }
    return json_envelope(ctx, task, r);
}

inline const std::map<std::string, std::function<std::string(Section&, const Context&)>>& command_table() {
    static const std::map<std::string, std::function<std::string(Section&, const Context&)>> table{
        {"rabi", cmd_rabi}, {"fock", cmd_fock},     {"cool", cmd_cool}, {"measure", cmd_measure},
        {"wigner", cmd_wigner}, {"cpg", cmd_cpg}, {"design", cmd_design}};
    return table;
}

}  // namespace detail

inline std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : detail::command_table()) out.push_back(k);
    return out;
}

/// Runs one command on a parsed config. Throws ionsel::Error subclasses; see exit_code().
inline RunResult run_command(const std::string& command, const Json& config, const RunOptions& opt = {}) {
    const auto& table = detail::command_table();
    auto it = table.find(command);
    if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
    Json cfg = config;
    Section root(cfg, "");
    RunResult out;
    std::uint64_t seed = root.unsigned_integer("seed", 0);
    if (opt.seed) seed = *opt.seed;
    if (root.has("output")) out.output_path = root.string("output");
    cfg["seed"] = seed;
    detail::Context ctx{command, cfg, seed, std::max(1, opt.threads)};
    Section body(config, "");
    (void)body.unsigned_integer("seed", 0);
    if (body.has("output")) (void)body.string("output");
    out.text = it->second(body, ctx);
    body.finish();
    return out;
}

inline RunResult run_command(const std::string& command, const std::string& config_text, const RunOptions& opt = {}) {
    return run_command(command, parse_config(config_text), opt);
}

}  // namespace ionsel::cli
