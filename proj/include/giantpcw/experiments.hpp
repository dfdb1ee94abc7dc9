// command implementations: config -> table
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "giantpcw/atom.hpp"
#include "giantpcw/bloch.hpp"
#include "giantpcw/boundstate.hpp"
#include "giantpcw/circuit.hpp"
#include "giantpcw/config.hpp"
#include "giantpcw/csv.hpp"
#include "giantpcw/interactions.hpp"
#include "giantpcw/topo.hpp"

namespace giantpcw {

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> v = {"bands",         "bloch",          "gk",
                                               "boundstate",    "chirality-scan", "coupling-scan",
                                               "shift-scan",    "poles",          "pump"};
    return v;
}

struct Overrides {
    std::optional<double> dk_km;  // in units of km
    std::optional<int> harmonics;
};

namespace schema {

inline SectionSpec circuit() {
    return {true,
            {{"d0", {Dim::length, "1 um"}},
             {"Cg", {Dim::capacitance, "0.4 fF"}},
             {"CJ", {Dim::capacitance, "90 fF"}},
             {"L0", {Dim::inductance, "0.2 nH"}},
             {"alpha0", {Dim::none, "0.3"}},
             {"delta_alpha", {Dim::none, "0.045"}},
             {"km", {Dim::wavenumber, "3000 cyc/m"}}}};
}

inline SectionSpec modulation() {
    return {false, {{"kind", {Dim::text, "cosine"}}, {"shift", {Dim::length, "0 lambda_m"}}}};
}

inline SectionSpec numerics() {
    return {false,
            {{"dk", {Dim::wavenumber, "1e-4 km"}},
             {"harmonics", {Dim::integer, "10"}},
             {"samples_per_lambda", {Dim::integer, "16"}},
             {"span", {Dim::length, "6 L_eff"}},
             {"fit_window", {Dim::wavenumber, "0.003 km"}},
             {"lin_window", {Dim::wavenumber, "0.003 km"}}}};
}

inline SectionSpec atom(bool required) {
    return {required,
            {{"legs", {Dim::integer, "2"}},
             {"x_minus", {Dim::length, "0 lambda_m"}},
             {"g_minus", {Dim::rate, "0.02 MHz"}},
             {"x_plus", {Dim::length, "0.5 lambda_m"}},
             {"g_plus", {Dim::rate, "0.068 MHz"}},
             {"delta0", {Dim::rate, "0.1 gap"}}}};
}

inline SectionSpec scan(Dim d, const std::string& var) {
    return {true,
            {{"variable", {Dim::text, var}},
             {"from", {d, ""}},
             {"to", {d, ""}},
             {"steps", {Dim::integer, ""}}}};
}

inline SectionSpec dimer() {
    return {true,
            {{"Dq", {Dim::length, "2 L_eff"}},
             {"offset_A", {Dim::length, "-0.5 lambda_m"}},
             {"offset_B", {Dim::length, "0.5 lambda_m"}},
             {"g", {Dim::rate, "0.02 MHz"}},
             {"ratio", {Dim::none, "1"}},
             {"delta0", {Dim::rate, "0.1 gap"}}}};
}

}  // namespace schema

inline Schema command_schema(const std::string& cmd) {
    Schema s;
    if (cmd == "pump") {
        s["pump"] = {true,
                     {{"ncells", {Dim::integer, "6"}},
                      {"pump_delta", {Dim::none, "0.9"}},
                      {"Omega_p", {Dim::rate, "0.3 J0"}},
                      {"T", {Dim::time, "100 1/J0"}},
                      {"cycles", {Dim::integer, "3"}},
                      {"dt", {Dim::time, "0.01 1/J0"}},
                      {"J_min", {Dim::rate, "0.1 J0"}},
                      {"initial", {Dim::integer, "0"}}}};
        return s;
    }
    s["circuit"] = schema::circuit();
    s["modulation"] = schema::modulation();
    s["numerics"] = schema::numerics();
    if (cmd == "bloch")
        s["bloch"] = {false,
                      {{"k_offsets", {Dim::wavenumber, "0, 0.01, 0.02 km", true}},
                       {"x_from", {Dim::length, "-1 lambda_m"}},
                       {"x_to", {Dim::length, "1 lambda_m"}},
                       {"samples", {Dim::integer, "401"}}}};
    if (cmd == "gk" || cmd == "boundstate") s["atom"] = schema::atom(true);
    if (cmd == "chirality-scan") {
        s["atom"] = schema::atom(true);
        s["scan"] = schema::scan(Dim::length, "x_plus");
    }
    if (cmd == "coupling-scan") {
        s["dimer"] = schema::dimer();
        s["scan"] = schema::scan(Dim::length, "Dq");
    }
    if (cmd == "shift-scan") {
        s["dimer"] = schema::dimer();
        s["scan"] = schema::scan(Dim::length, "shift");
    }
    if (cmd == "poles") {
        s["poles"] = {true, {{"g0", {Dim::rate, "0.8 MHz"}}, {"Dq", {Dim::length, "0 lambda_m"}}}};
        s["scan"] = schema::scan(Dim::rate, "delta0p");
    }
    return s;
}

// Band structure and the scales the rest of a run depends on.
struct System {
    CircuitParams circuit;
    ModulationProfile profile;
    BandStructure bs;
    EffectiveMass em;
    UnitContext ctx;
    int samples{16};
    double lin_window{};
    Warnings warnings;
};

inline Waveform parse_waveform(const Config& c) {
    const auto& k = c.get_text("modulation", "kind");
    if (k == "cosine") return Waveform::cosine;
    if (k == "square") return Waveform::square;
    throw ConfigError(c.source, c.entry("modulation", "kind").line,
                      "modulation kind must be cosine or square, got '" + k + "'");
}

inline CircuitParams read_circuit(const Config& c) {
    CircuitParams p;
    UnitContext ctx;
    p.d0 = c.get("circuit", "d0");
    p.Cg = c.get("circuit", "Cg");
    ctx.Cg = p.Cg;
    p.CJ = c.get("circuit", "CJ", ctx);
    p.L0 = c.get("circuit", "L0");
    p.alpha0 = c.get("circuit", "alpha0");
    p.delta_alpha = c.get("circuit", "delta_alpha");
    p.km = c.get("circuit", "km");
    validate(p);
    return p;
}

inline System build_system(const Config& c, const Overrides& o = {}, std::optional<double> shift = {}) {
    System s;
    s.circuit = read_circuit(c);
    s.ctx.lambda_m = s.circuit.lambda_m();
    s.ctx.km = s.circuit.km;
    s.ctx.Cg = s.circuit.Cg;
    s.warnings = check(s.circuit);
    s.profile.base = s.circuit;
    s.profile.kind = parse_waveform(c);
    s.profile.shift = shift ? *shift : c.get("modulation", "shift", s.ctx);
    const double dk = o.dk_km ? *o.dk_km * s.circuit.km : c.get("numerics", "dk", s.ctx);
    const int Nh = o.harmonics ? *o.harmonics : c.get_int("numerics", "harmonics");
    s.bs = band_structure(s.profile, dk, Nh);
    for (const auto& w : s.bs.warnings) s.warnings.push_back(w);
    s.ctx.gap = s.bs.gap();
    s.em = effective_mass_fit(s.bs, 1, c.get("numerics", "fit_window", s.ctx));
    for (const auto& w : s.em.warnings) s.warnings.push_back(w);
    s.samples = c.get_int("numerics", "samples_per_lambda");
    s.lin_window = c.get("numerics", "lin_window", s.ctx);
    return s;
}

inline double to_MHz(double w) { return w / (2 * std::numbers::pi * 1e6); }
inline double to_GHz(double w) { return w / (2 * std::numbers::pi * 1e9); }

inline void note_system(Table& t, const System& s) {
    t.note("gap_GHz", to_GHz(s.bs.gap()));
    t.note("band_top_GHz", to_GHz(s.bs.band_top()));
    t.note("band2_bottom_GHz", to_GHz(s.bs.band2_bottom()));
    t.note("alpha_m", s.em.alpha_m);
    t.note("fit_residual", s.em.residual);
    t.note("dk_over_km", (s.bs.k[1] - s.bs.k[0]) / s.bs.km());
    t.note("harmonics", s.bs.Nh);
    for (const auto& w : s.warnings) t.warnings.push_back(w);
}

inline GiantAtom read_atom(const Config& c, System& s) {
    const double delta0 = c.get("atom", "delta0", s.ctx);
    if (!(delta0 > 0)) throw ConfigError(c.source, c.entry("atom", "delta0").line, "delta0 must be positive");
    s.ctx.L_eff = decay_length(s.em.alpha_m, delta0);
    const int legs = c.get_int("atom", "legs");
    if (legs != 1 && legs != 2) throw ConfigError(c.source, c.entry("atom", "legs").line, "legs must be 1 or 2");
    std::vector<Leg> v = {{c.get("atom", "x_minus", s.ctx), c.get("atom", "g_minus", s.ctx)}};
    if (legs == 2) v.push_back({c.get("atom", "x_plus", s.ctx), c.get("atom", "g_plus", s.ctx)});
    auto a = make_atom(v, delta0);
    for (const auto& w : validate(a, s.ctx.lambda_m)) s.warnings.push_back(w);
    return a;
}

inline std::vector<double> scan_points(const Config& c, const UnitContext& ctx) {
    const int n = c.get_int("scan", "steps");
    if (n < 1) throw ConfigError(c.source, c.entry("scan", "steps").line, "steps must be at least 1");
    const double a = c.get("scan", "from", ctx), b = c.get("scan", "to", ctx);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

struct BoundStateRun {
    BoundStateSolution sol;
    ChiralityReport chi;
    std::optional<double> W;
    CouplingLinearization lin;
    AnalyticBoundState ana;
};

inline BoundStateRun run_bound_state(const GiantAtom& a, const System& s, double span_Leff = 6.0) {
    BoundStateRun r;
    const double delta0 = *a.delta0;
    const double L = decay_length(s.em.alpha_m, delta0);
    r.sol = bound_state(a, s.bs, default_xgrid(a, s.bs, L, s.samples, span_Leff), std::nullopt, L);
    r.lin = linearize_gk(a, s.bs, s.lin_window);
    r.ana = analytic_bound_state(r.lin, s.em, delta0);
    r.chi = chirality(r.sol, r.ana.chirality());
    if (a.legs.size() == 2) r.W = visibility(r.sol);
    return r;
}

inline Table cmd_bands(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    Table t{"bands", {"k_over_km", "omega1_GHz", "omega2_GHz"}, {"1", "GHz", "GHz"}};
    note_system(t, s);
    for (std::size_t j = 0; j < s.bs.size(); ++j)
        t.add_row({s.bs.k[j] / s.bs.km(), to_GHz(s.bs.omega[0][j]), to_GHz(s.bs.omega[1][j])});
    return t;
}

inline Table cmd_bloch(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    const auto offs = c.get_list("bloch", "k_offsets", s.ctx);
    Table t{"bloch", {"x_over_lambda_m", "inductance_factor"}, {"1", "1"}};
    std::vector<std::size_t> idx;
    for (double d : offs) {
        idx.push_back(s.bs.nearest_index(s.bs.k0() - d));
        const std::string tag = format_number(s.bs.dk_from_edge(idx.back()) / s.bs.km());
        t.columns.push_back("abs_u_dk=" + tag);
        t.columns.push_back("arg_u_dk=" + tag);
        t.units.push_back("1");
        t.units.push_back("rad");
    }
    note_system(t, s);
    const int n = c.get_int("bloch", "samples");
    const double x0 = c.get("bloch", "x_from", s.ctx), x1 = c.get("bloch", "x_to", s.ctx);
    const auto& p = s.circuit;
    for (int i = 0; i < n; ++i) {
        const double x = n == 1 ? x0 : x0 + (x1 - x0) * i / (n - 1);
        std::vector<double> row = {x / p.lambda_m(), inverse_inductance(s.profile, x) * p.L0 / p.d0};
        for (auto j : idx) {
            const cplx u = s.bs.u(0, j, x);
            row.push_back(std::abs(u));
            row.push_back(std::arg(u));
        }
        t.add_row(row);
    }
    return t;
}

inline Table cmd_gk(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    const auto a = read_atom(c, s);
    Table t{"gk",
            {"dk_over_km", "re_g_MHz", "im_g_MHz", "abs_g_MHz", "re_lin_MHz", "im_lin_MHz"},
            {"1", "MHz", "MHz", "MHz", "MHz", "MHz"}};
    note_system(t, s);
    const auto g = coupling_gk(a, s.bs);
    const auto lin = linearize_gk(a, s.bs, s.lin_window);
    for (const auto& w : lin.warnings) t.warnings.push_back(w);
    t.note("A_MHz", to_MHz(lin.A));
    t.note("B_MHz_m", to_MHz(lin.B));
    t.note("linearization_error", lin.error);
    t.note("B_kappa_over_A", lin.B * std::sqrt(*a.delta0 / s.em.alpha_m) / lin.A);
    std::vector<std::size_t> order(s.bs.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](auto x, auto y) { return s.bs.dk_from_edge(x) < s.bs.dk_from_edge(y); });
    for (auto j : order) {
        const double d = s.bs.dk_from_edge(j);
        if (std::abs(d) > 2 * s.lin_window) continue;
        const auto gj = g(static_cast<Eigen::Index>(j));
        t.add_row({d / s.bs.km(), to_MHz(gj.real()), to_MHz(gj.imag()), to_MHz(std::abs(gj)),
                   to_MHz(lin.A), to_MHz(lin.B * d)});
    }
    return t;
}

inline Table cmd_boundstate(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    const auto a = read_atom(c, s);
    const double span = c.get("numerics", "span", s.ctx) / *s.ctx.L_eff;
    const auto r = run_bound_state(a, s, span);
    const double lm = s.ctx.lambda_m, sc = std::sqrt(lm);
    Table t{"boundstate",
            {"x_over_lambda_m", "abs_phi", "re_phi", "im_phi", "abs_phi_minus", "abs_phi_plus",
             "delta_theta", "envelope_analytic"},
            {"1", "lambda_m^-1/2", "lambda_m^-1/2", "lambda_m^-1/2", "lambda_m^-1/2", "lambda_m^-1/2",
             "rad", "1"}};
    note_system(t, s);
    for (const auto& w : r.sol.warnings) t.warnings.push_back(w);
    for (const auto& w : r.lin.warnings) t.warnings.push_back(w);
    t.note("delta0_MHz", to_MHz(r.sol.delta0));
    t.note("eps_b_MHz", to_MHz(r.sol.eps_b));
    t.note("cos_theta", r.sol.cos_theta);
    t.note("L_eff_over_lambda_m", r.ana.L_eff / lm);
    t.note("Cb", r.chi.Cb);
    t.note("Cb_analytic", r.ana.chirality());
    if (r.W) t.note("W", *r.W);
    t.note("A_MHz", to_MHz(r.lin.A));
    t.note("B_kappa_over_A", r.lin.B / (r.ana.L_eff * r.lin.A));
    const double xr = a.x_plus();
    const double xl = a.x_minus();
    auto env = r.ana;
    double peak = 0.0;
    for (Eigen::Index i = 0; i < r.sol.phi_total.size(); ++i) peak = std::max(peak, std::abs(r.sol.phi_total(i)));
    const double emax = std::max(std::abs(env.Cminus), std::abs(env.Cplus));
    env.Am = emax > 0 ? peak * sc / emax : 0.0;
    const auto dth = a.legs.size() == 2 ? r.sol.delta_theta() : Eigen::VectorXd::Zero(r.sol.phi_total.size());
    for (std::size_t i = 0; i < r.sol.xgrid.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double x = r.sol.xgrid[i];
        const cplx f = r.sol.phi_total(ii) * sc;
        const double outside = x < xl ? x - xl : (x > xr ? x - xr : 0.0);
        const double e = x < xl   ? env.Am * std::abs(env.Cminus) * std::exp(outside / env.L_eff)
                         : x > xr ? env.Am * std::abs(env.Cplus) * std::exp(-outside / env.L_eff)
                                  : NAN;
        t.add_row({x / lm, std::abs(f), f.real(), f.imag(), std::abs(r.sol.phi_legs.front()(ii)) * sc,
                   std::abs(r.sol.phi_legs.back()(ii)) * sc, dth(ii), e});
    }
    return t;
}

inline Table cmd_chirality_scan(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    const auto base = read_atom(c, s);
    const auto& var = c.get_text("scan", "variable");
    if (var != "x_plus" && var != "small_atom")
        throw ConfigError(c.source, c.entry("scan", "variable").line,
                          "chirality-scan variable must be x_plus or small_atom");
    const auto xs = scan_points(c, s.ctx);
    const double lm = s.ctx.lambda_m;
    Table t{"chirality-scan", {var + "_over_lambda_m", "Cb", "Cb_analytic", "W", "eps_b_MHz"},
            {"1", "1", "1", "1", "MHz"}};
    note_system(t, s);
    t.note("L_eff_over_lambda_m", *s.ctx.L_eff / lm);
    std::vector<std::vector<double>> rows(xs.size());
    std::vector<Warnings> warn(xs.size());
    const auto n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        GiantAtom a = base;
        if (var == "x_plus") {
            if (a.legs.size() != 2) a.legs.push_back(base.legs.front());
            a.legs[1].x = xs[i];
            if (base.legs.size() == 2) a.legs[1].g = base.legs[1].g;
        } else {
            a.legs = {{xs[i], base.legs.front().g}};
        }
        const auto r = run_bound_state(a, s);
        warn[i] = r.lin.warnings;
        rows[i] = {xs[i] / lm, r.chi.Cb, r.ana.chirality(), r.W ? *r.W : NAN, to_MHz(r.sol.eps_b)};
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.add_row(rows[i]);
        for (const auto& w : warn[i]) t.warnings.push_back("at " + format_number(rows[i][0]) + ": " + w);
    }
    return t;
}

struct DimerSetup {
    double delta0{}, offA{}, offB{}, g{}, ratio{}, Dq{};
};

inline DimerSetup read_dimer(const Config& c, System& s) {
    DimerSetup d;
    d.delta0 = c.get("dimer", "delta0", s.ctx);
    if (!(d.delta0 > 0)) throw ConfigError(c.source, c.entry("dimer", "delta0").line, "delta0 must be positive");
    s.ctx.L_eff = decay_length(s.em.alpha_m, d.delta0);
    d.offA = c.get("dimer", "offset_A", s.ctx);
    d.offB = c.get("dimer", "offset_B", s.ctx);
    d.g = c.get("dimer", "g", s.ctx);
    d.ratio = c.get("dimer", "ratio", s.ctx);
    d.Dq = c.get("dimer", "Dq", s.ctx);
    return d;
}

// Dq rounded to whole modulation periods.
inline double whole_periods(double x, double lambda_m) { return std::round(x / lambda_m) * lambda_m; }

inline Table cmd_coupling_scan(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    const auto d = read_dimer(c, s);
    const auto Ds = scan_points(c, s.ctx);
    const double lm = s.ctx.lambda_m;
    Table t{"coupling-scan", {"Dq_over_lambda_m", "J_AB_MHz", "J_BA_MHz", "abs_ratio"},
            {"1", "MHz", "MHz", "1"}};
    note_system(t, s);
    t.note("L_eff_over_lambda_m", *s.ctx.L_eff / lm);
    std::vector<std::vector<double>> rows(Ds.size());
    const auto n = static_cast<long>(Ds.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const auto cp = coupling_pair(make_dimer(Ds[i], d.offA, d.offB, d.g, d.ratio, d.delta0), s.bs);
        rows[i] = {Ds[i] / lm, to_MHz(cp.J_AB), to_MHz(cp.J_BA), std::abs(cp.J_AB / cp.J_BA)};
    }
    for (auto& r : rows) t.add_row(r);
    return t;
}

inline Table cmd_shift_scan(const Config& c, const Overrides& o) {
    auto s0 = build_system(c, o);
    const auto d = read_dimer(c, s0);
    const auto shifts = scan_points(c, s0.ctx);
    const double lm = s0.ctx.lambda_m;
    const double Dq = whole_periods(d.Dq, lm);
    Table t{"shift-scan", {"shift_over_lambda_m", "J_AB_MHz", "J_BA_MHz", "abs_ratio"},
            {"1", "MHz", "MHz", "1"}};
    note_system(t, s0);
    t.note("Dq_over_lambda_m", Dq / lm);
    for (double ds : shifts) {
        auto s = build_system(c, o, ds);
        const auto cp = coupling_pair(make_dimer(Dq, d.offA, d.offB, d.g, d.ratio, d.delta0), s.bs);
        t.add_row({ds / lm, to_MHz(cp.J_AB), to_MHz(cp.J_BA), std::abs(cp.J_AB / cp.J_BA)});
    }
    return t;
}

inline Table cmd_poles(const Config& c, const Overrides& o) {
    auto s = build_system(c, o);
    const double g0 = c.get("poles", "g0", s.ctx);
    const double Dq = c.get("poles", "Dq", s.ctx);
    const double dk = s.bs.k[1] - s.bs.k[0];
    const double L = 2 * std::numbers::pi / dk;
    const auto ds = scan_points(c, s.ctx);
    Table t{"poles",
            {"delta0p_MHz", "z0_MHz", "J1_MHz", "abs_res0", "gamma_c_MHz", "re_z1_MHz", "im_z1_MHz",
             "abs_res1"},
            {"MHz", "MHz", "MHz", "1", "MHz", "MHz", "MHz", "1"}};
    note_system(t, s);
    t.note("L_m", L);
    for (double d0p : ds) {
        if (!(d0p > 0)) throw ConfigError(c.source, c.entry("scan", "from").line, "delta0' must be positive");
        const auto pa = find_poles(g0, s.em.alpha_m, d0p, L, Dq);
        const double J1 = simplified_sigma(g0, s.em.alpha_m, d0p, Dq, L, 0.0).real();
        t.add_row({to_MHz(d0p), to_MHz(pa.z0), to_MHz(J1), std::abs(pa.res0), to_MHz(pa.gamma_c),
                   pa.z1 ? to_MHz(pa.z1->real()) : NAN, pa.z1 ? to_MHz(pa.z1->imag()) : NAN,
                   pa.res1 ? std::abs(*pa.res1) : NAN});
    }
    return t;
}

inline Table cmd_pump(const Config& c, const Overrides&) {
    UnitContext ctx;
    PumpSchedule ps;
    ps.pump_delta = c.get("pump", "pump_delta");
    ps.Omega_p = c.get("pump", "Omega_p", ctx);
    ps.T = c.get("pump", "T", ctx);
    const double jmin = c.get("pump", "J_min", ctx);
    if (jmin > 0) ps.J_min = jmin;
    const int nc = c.get_int("pump", "ncells");
    const auto run = evolve_pump(nc, ps, c.get_int("pump", "cycles"), c.get_int("pump", "initial"),
                                 c.get("pump", "dt", ctx));
    Table t{"pump", {"t_J0"}, {"1/J0"}};
    for (int i = 0; i < 2 * nc; ++i) {
        t.columns.push_back("pop_" + std::to_string(i));
        t.units.push_back("1");
    }
    for (std::size_t i = 0; i < run.fidelity_per_cycle.size(); ++i)
        t.note("fidelity_cycle_" + std::to_string(i + 1), run.fidelity_per_cycle[i]);
    t.note("max_norm_drift", run.max_norm_drift);
    const auto [a0, b0, q0] = pump_schedule_at(ps, 0.0);
    const auto [a1, b1, q1] = pump_schedule_at(ps, 0.5 * ps.T);
    if (a0 != b0) t.note("winding_t0", winding_number(a0, b0));
    if (a1 != b1) t.note("winding_tT2", winding_number(a1, b1));
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        std::vector<double> row = {run.times[i]};
        for (Eigen::Index j = 0; j < run.site_populations[i].size(); ++j) row.push_back(run.site_populations[i](j));
        t.add_row(row);
    }
    return t;
}

inline Table run_command(const std::string& cmd, const Config& c, const Overrides& o = {}) {
    static const std::map<std::string, std::function<Table(const Config&, const Overrides&)>> table = {
        {"bands", cmd_bands},
        {"bloch", cmd_bloch},
        {"gk", cmd_gk},
        {"boundstate", cmd_boundstate},
        {"chirality-scan", cmd_chirality_scan},
        {"coupling-scan", cmd_coupling_scan},
        {"shift-scan", cmd_shift_scan},
        {"poles", cmd_poles},
        {"pump", cmd_pump},
    };
    auto it = table.find(cmd);
    if (it == table.end()) throw DomainError("unknown command " + cmd);
    return it->second(c, o);
}

}  // namespace giantpcw
