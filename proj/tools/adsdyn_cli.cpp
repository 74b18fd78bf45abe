// adsdyn command line
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "adsdyn/adsdyn.hpp"

using namespace adsdyn;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string config;
    std::string alpha;
    std::string variant = "auto";
    double m = 0, T = 1, dt = -1, L = 24, spread = 0.1;
    int n = 2000, sample_every = 0;
    std::string init, init_dot, out, spec;
    bool snapshots = false;
    std::uint64_t seed = 1;
};

Variant pick_variant(const std::string& s) {
    if (s == "printed") return Variant::printed;
    if (s == "shifted") return Variant::shifted;
    if (s == "auto") return default_variant();
    throw usage_error("--variant must be printed, shifted or auto");
}

BoundaryTriple need_alpha(const Common& c) {
    if (c.alpha.empty()) throw usage_error("--alpha is required");
    return parse_alpha(c.alpha);
}

// builtin data: zero, graviton, static:<m>, bump:<a>,<b>[,<scale>]; otherwise a csv path
VCoords load_data(const std::string& s, double L, int n) {
    CutoffSpec chi = CutoffSpec::defaults(L);
    VCoords v;
    v.chi = chi;
    v.psi_r = RadialGridField(L, n);
    if (s.empty() || s == "zero") return v;
    if (s == "graviton") return static_profile(0.0, L, n);
    if (s.rfind("static:", 0) == 0) return static_profile(parse_double(s.substr(7), "static"), L, n);
    if (s.rfind("bump:", 0) == 0) {
        auto p = parse_list(s.substr(5), 0, "bump");
        if (p.size() < 2 || p.size() > 3 || !(p[0] > 0 && p[0] < p[1])) throw usage_error("bump:<a>,<b>[,<scale>]");
        double sc = p.size() == 3 ? p[2] : 1.0;
        for (int i = 0; i < n; ++i) {
            double z = v.psi_r.z(i);
            v.psi_r.values[i] = sc * std::pow(z, 2.5) * bump(z, p[0], p[1]);
        }
        return v;
    }
    std::ifstream f(s);
    if (!f) throw usage_error("cannot open data file " + s);
    RadialGridField g = read_csv(f);
    if (g.n != n || std::abs(g.L - L) > 1e-9 * L)
        throw usage_error("data file grid (L=" + std::to_string(g.L) + ", n=" + std::to_string(g.n) +
                          ") differs from --L/--n");
    return extract_vcoords(g, chi);
}

void ensure_dir(const std::string& d) {
    if (d.empty()) throw usage_error("--out is required");
    fs::create_directories(d);
}

json manifest(const std::string& cmd, const Common& c, const std::vector<std::string>& argv) {
    json j;
    j["command"] = cmd;
    j["argv"] = argv;
    j["version"] = kVersion;
    j["parameters"] = {{"alpha", c.alpha}, {"m", c.m},       {"T", c.T},        {"dt", c.dt},
                       {"L", c.L},         {"n", c.n},       {"spread", c.spread}, {"init", c.init},
                       {"init_dot", c.init_dot}, {"sample_every", c.sample_every}, {"snapshots", c.snapshots}};
    j["seed"] = c.seed;
    j["variant"] = to_string(pick_variant(c.variant));
    j["tolerances"] = {{"cfl", 0.5}, {"constraint_tol", 1e-8}, {"fit_cond_sq_max", 1e12}};
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    j["wall_clock"] = ts.str();
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    f << j.dump(2) << "\n";
}

json report_json(const EnergyReport& e) {
    return {{"total", e.total},
            {"singular_part", e.singular_part},
            {"regular_part", e.regular_part},
            {"cross_part", e.cross_part},
            {"mass", e.mass}};
}

double resolve_dt(const Common& c) { return c.dt > 0 ? c.dt : 0.5 * c.L / c.n; }

int cmd_check_alpha(const Common& c) {
    BoundaryTriple a = need_alpha(c);
    AlphaClass k = is_admissible(a);
    json j = {{"admissible", k.admissible},
              {"branch", to_string(k.branch)},
              {"positivity", k.admissible ? to_string(k.positivity) : "n/a"},
              {"sigma0", sigma0_contains(a)},
              {"zin", zin_value(a, +1)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_derive(const Common& c) {
    BoundaryTriple a = need_alpha(c);
    ExtensionParams p = find_extension_params(a, c.spread);
    BoundaryTriple b = alpha_from_params(p);
    json j = {{"mu0", p.mus.mu0},       {"mu1", p.mus.mu1},       {"mu2", p.mus.mu2},
              {"gamma1", p.gamma1},     {"gamma2", p.gamma2},     {"lambda0", p.lambda0},
              {"alpha_roundtrip", {b.a0, b.a1, b.a2}}};
    std::cout << std::setprecision(17) << j.dump(2) << "\n";
    return 0;
}

int cmd_spectrum(const Common& c) {
    BoundaryTriple a = need_alpha(c);
    Variant v = pick_variant(c.variant);
    SpectrumReport r = negative_eigenvalues(a, v);
    json j = {{"variant", to_string(v)},
              {"eigenvalues", r.eigenvalues},
              {"lambda_squared", r.roots},
              {"count", r.count},
              {"zero_mode", r.zero_mode}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_energy(const Common& c) {
    BoundaryTriple a = need_alpha(c);
    if (c.init.empty()) throw usage_error("--state is required");
    ExtensionParams p = find_extension_params(a, c.spread);
    std::ifstream fs_(c.init);
    if (!fs_) throw usage_error("cannot open " + c.init);
    RadialGridField f = read_csv(fs_);
    RadialGridField g(f.L, f.n);
    if (!c.init_dot.empty()) {
        std::ifstream gs(c.init_dot);
        if (!gs) throw usage_error("cannot open " + c.init_dot);
        g = read_csv(gs);
    }
    CutoffSpec chi = CutoffSpec::defaults(f.L);
    VCoords vf = extract_vcoords(f, chi), vg = extract_vcoords(g, chi);
    EnergyReport e = energy_full(vf, vg, p, c.m);
    json j = report_json(e);
    j["norm0_sq"] = inner_h0(vf, vf, p);
    std::cout << j.dump(2) << "\n";
    return 0;
}

void write_snapshot(const std::string& dir, double t, double L, const Vec& psi) {
    std::ostringstream nm;
    nm << dir << "/snap_" << std::fixed << std::setprecision(4) << t << ".csv";
    RadialGridField f(L, (int)psi.size());
    f.values = psi;
    std::ofstream o(nm.str());
    write_csv(o, f);
}

int cmd_evolve(const Common& c, const std::vector<std::string>& argv) {
    BoundaryTriple a = need_alpha(c);
    if (c.init.empty()) throw usage_error("--init is required");
    ensure_dir(c.out);
    ExtensionParams p = find_extension_params(a, c.spread);
    EvolveOptions o;
    o.L = c.L;
    o.n = c.n;
    o.sample_every = c.sample_every;
    o.snapshots = c.snapshots;
    Evolver ev(a, p, c.m, o);
    VCoords f = load_data(c.init, c.L, c.n), g = load_data(c.init_dot, c.L, c.n);
    Trajectory tr = ev.run(ev.initial(f, g), c.T, resolve_dt(c));
    std::ofstream t(c.out + "/trace.csv");
    t << "t,energy,v_m1,phi0,phi1,phi2,constraint\n" << std::setprecision(17);
    for (auto& s : tr.samples) {
        t << s.t << "," << s.energy.total << "," << s.c.v_m1 << "," << s.c.v0 << "," << s.c.v1 << "," << s.c.v2 << ","
          << s.c.constraint << "\n";
        if (c.snapshots) write_snapshot(c.out, s.t, c.L, s.psi);
    }
    json j = manifest("evolve", c, argv);
    j["extension_params"] = {{"mu", {p.mus.mu0, p.mus.mu1, p.mus.mu2}},
                             {"gamma", {p.gamma1, p.gamma2}},
                             {"lambda0", p.lambda0}};
    j["growing"] = tr.growing;
    write_json(c.out + "/run.json", j);
    return 0;
}

int cmd_friedrichs(const Common& c, const std::vector<std::string>& argv) {
    if (c.init.empty()) throw usage_error("--init is required");
    ensure_dir(c.out);
    RadialGridField f = synthesize(load_data(c.init, c.L, c.n)), g = synthesize(load_data(c.init_dot, c.L, c.n));
    FriedrichsTrajectory tr = friedrichs_evolve(f, g, c.m, c.T, resolve_dt(c), c.sample_every, c.snapshots);
    std::ofstream t(c.out + "/trace.csv");
    t << "t,energy,norm,phi2\n" << std::setprecision(17);
    for (auto& s : tr.samples) {
        t << s.t << "," << s.energy << "," << s.norm << "," << s.v2 << "\n";
        if (c.snapshots) write_snapshot(c.out, s.t, c.L, s.psi);
    }
    write_json(c.out + "/run.json", manifest("friedrichs", c, argv));
    return 0;
}

int cmd_graviton(const Common& c, const std::vector<std::string>& argv) {
    BoundaryTriple a = need_alpha(c);
    ensure_dir(c.out);
    ExtensionParams p = find_extension_params(a, c.spread);
    EvolveOptions o;
    o.L = c.L;
    o.n = c.n;
    o.sample_every = c.sample_every;
    o.graviton_projection = true;
    Evolver ev(a, p, c.m, o);
    VCoords f = load_data(c.init.empty() ? "graviton" : c.init, c.L, c.n), g = load_data(c.init_dot, c.L, c.n);
    Trajectory tr = ev.run(ev.initial(f, g), c.T, resolve_dt(c));
    GravitonSplit s = graviton_split(tr, a, p, c.m, f, g);
    std::ofstream t(c.out + "/graviton.csv");
    t << "t,closed_form,projected,residual\n" << std::setprecision(17);
    for (size_t k = 0; k < s.t.size(); ++k)
        t << s.t[k] << "," << s.closed_form[k] << "," << s.projected[k] << "," << s.residual[k] << "\n";
    write_json(c.out + "/run.json", manifest("graviton", c, argv));
    return 0;
}

// spec.json: {"L":..,"n":..,"x":{"lo":[..],"hi":[..],"n":[..]},"modes":[{"xi":[..],"amplitude":[re,im],"f":"..","g":".."}]}
int cmd_synth(const Common& c, const std::vector<std::string>& argv) {
    BoundaryTriple a = need_alpha(c);
    if (c.spec.empty()) throw usage_error("--spec is required");
    ensure_dir(c.out);
    std::ifstream in(c.spec);
    if (!in) throw usage_error("cannot open " + c.spec);
    json js;
    try {
        in >> js;
    } catch (const std::exception& e) {
        throw usage_error(std::string("spec.json: ") + e.what());
    }
    PlaneWaveSpec spec;
    spec.L = js.value("L", c.L);
    spec.n = js.value("n", c.n);
    spec.z_stride = js.value("z_stride", 20);
    spec.z_max = js.value("z_max", -1.0);
    if (js.contains("x")) {
        auto& x = js["x"];
        for (int d = 0; d < 3; ++d) {
            spec.x.lo[d] = x.at("lo").at(d).get<double>();
            spec.x.hi[d] = x.at("hi").at(d).get<double>();
            spec.x.n[d] = x.at("n").at(d).get<int>();
        }
    }
    if (!js.contains("modes") || js["modes"].empty()) throw usage_error("spec.json: no modes");
    for (auto& mj : js["modes"]) {
        ModeSpec ms;
        for (int d = 0; d < 3; ++d) ms.xi[d] = mj.at("xi").at(d).get<double>();
        if (mj.contains("amplitude")) ms.amplitude = {mj["amplitude"].at(0).get<double>(), mj["amplitude"].at(1).get<double>()};
        ms.weight = mj.value("weight", 1.0);
        ms.f = load_data(mj.value("f", std::string("zero")), spec.L, spec.n);
        ms.g = load_data(mj.value("g", std::string("zero")), spec.L, spec.n);
        spec.modes.push_back(std::move(ms));
    }
    ExtensionParams p = find_extension_params(a, c.spread);
    EvolveOptions o;
    o.sample_every = c.sample_every;
    o.snapshots = true;
    double dt = c.dt > 0 ? c.dt : 0.5 * spec.L / spec.n;
    auto runs = run_modes(spec, a, p, c.T, dt, o);
    for (size_t k = 0; k < runs.size(); ++k) {
        std::ofstream t(c.out + "/mode_" + std::to_string(k) + ".csv");
        t << "t,energy,v_m1,phi0,phi1,phi2\n" << std::setprecision(17);
        for (auto& s : runs[k].traj.samples)
            t << s.t << "," << s.energy.total << "," << s.c.v_m1 << "," << s.c.v0 << "," << s.c.v1 << "," << s.c.v2 << "\n";
    }
    std::ofstream e(c.out + "/energy.csv");
    e << "t,ads_energy\n" << std::setprecision(17);
    const auto& s0 = runs[0].traj.samples;
    for (size_t k = 0; k < s0.size(); ++k) {
        e << s0[k].t << "," << ads_energy(spec, runs, k) << "\n";
        std::ostringstream nm;
        nm << c.out << "/field_" << std::fixed << std::setprecision(4) << s0[k].t << ".csv";
        std::ofstream fo(nm.str());
        fo << "x1,x2,x3,z,value\n" << std::setprecision(17);
        for (auto& q : assemble(spec, runs, s0[k].t))
            fo << q.x1 << "," << q.x2 << "," << q.x3 << "," << q.z << "," << q.value.real() << "\n";
    }
    json j = manifest("synth", c, argv);
    j["spec"] = js;
    j["threads"] = worker_count(spec.modes.size());
    double mhi = 0;
    for (auto& ms : spec.modes) mhi = std::max(mhi, ms.m());
    auto th = kappa_zero_threshold(p, std::max(mhi, 1.0) * 4, 200, c.seed, spec.L, 600, 12);
    j["kappa_zero_threshold"] = {{"M", th.M}, {"found", th.found}, {"evaluations", th.evaluations}};
    write_json(c.out + "/run.json", j);
    return 0;
}

int cmd_sel_test() {
    int fails = 0;
    auto report = [&](const char* name, bool ok, double val) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " " << val << "\n";
        fails += !ok;
    };
    double x = 0.3, rel = std::abs(k2_series(x).reassemble() - bessel_k2(x)) / bessel_k2(x);
    report("k2_series", rel < 1e-9, rel);
    BoundaryTriple a{-1, 1, 0};
    BoundaryTriple b = alpha_from_params(find_extension_params(a));
    double rt = std::abs(b.a0 - a.a0) + std::abs(b.a1 - a.a1) + std::abs(b.a2 - a.a2);
    report("atlas_roundtrip", rt < 1e-8, rt);
    VariantVerdict v = resolve_variant(variant_probe_set());
    report("variant_unique", v.unique, v.worst_zero);
    std::cout << "variant " << to_string(v.winner) << "\n";
    return fails ? 3 : 0;
}

void add_common(CLI::App* s, Common& c, bool alpha, bool evo) {
    if (alpha) {
        s->add_option("--alpha", c.alpha, "boundary triple a0,a1,a2");
        s->add_option("--spread", c.spread, "relative spread of mu1, mu2 around the root");
    }
    if (evo) {
        s->add_option("--m", c.m, "mode frequency |xi|");
        s->add_option("--T", c.T, "final time");
        s->add_option("--dt", c.dt, "time step (default 0.5 h)");
        s->add_option("--L", c.L, "radial domain length");
        s->add_option("--n", c.n, "radial cells");
        s->add_option("--init", c.init, "initial field: csv path or zero|graviton|static:<m>|bump:<a>,<b>[,<s>]");
        s->add_option("--init-dot", c.init_dot, "initial velocity, same forms");
        s->add_option("--out", c.out, "output directory");
        s->add_option("--sample-every", c.sample_every, "steps between samples");
        s->add_flag("--snapshots", c.snapshots, "write field snapshots");
    }
}

// config keys (grid.n, grid.L, alpha, m, T, dt, seed, variant) fill values the flags did not set
void apply_config(CLI::App& app, Common& c) {
    if (c.config.empty()) return;
    Config cf = load_config(c.config);
    for (auto& w : cf.warnings) std::cerr << "warning: " << w << "\n";
    auto unset = [&](const char* flag) {
        for (auto* sub : app.get_subcommands()) {
            auto* opt = sub->get_option_no_throw(flag);
            if (opt && opt->count() > 0) return false;
        }
        return true;
    };
    if (cf.has("alpha") && unset("--alpha")) c.alpha = cf.get("alpha");
    if (cf.has("variant") && unset("--variant")) c.variant = cf.get("variant");
    if (cf.has("grid.n") && unset("--n")) c.n = cf.get_int("grid.n", c.n);
    if (cf.has("grid.L") && unset("--L")) c.L = cf.get_double("grid.L", c.L);
    if (cf.has("m") && unset("--m")) c.m = cf.get_double("m", c.m);
    if (cf.has("T") && unset("--T")) c.T = cf.get_double("T", c.T);
    if (cf.has("dt") && unset("--dt")) c.dt = cf.get_double("dt", c.dt);
    if (cf.has("seed")) c.seed = (std::uint64_t)cf.get_int("seed", (int)c.seed);
}

int run(std::vector<std::string> args) {
    // replay: adsdyn_cli --replay run.json [outdir]
    if (args.size() >= 2 && args[1] == "--replay") {
        if (args.size() < 3) throw usage_error("--replay needs a run.json path");
        std::ifstream in(args[2]);
        if (!in) throw usage_error("cannot open " + args[2]);
        json j;
        in >> j;
        std::vector<std::string> a = j.at("argv").get<std::vector<std::string>>();
        if (args.size() >= 4)
            for (size_t i = 0; i + 1 < a.size(); ++i)
                if (a[i] == "--out") a[i + 1] = args[3];
        return run(a);
    }
    CLI::App app{"adsdyn: generalized boundary dynamics on AdS5 Poincare patch"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--config", c.config, "key=value configuration file");
    auto* s_check = app.add_subcommand("check-alpha", "classify a boundary triple");
    add_common(s_check, c, true, false);
    auto* s_der = app.add_subcommand("derive-params", "extension parameters for a boundary triple");
    add_common(s_der, c, true, false);
    auto* s_spec = app.add_subcommand("spectrum", "negative eigenvalues");
    add_common(s_spec, c, true, false);
    s_spec->add_option("--variant", c.variant, "printed|shifted|auto");
    auto* s_en = app.add_subcommand("energy", "energy of a state");
    add_common(s_en, c, true, false);
    s_en->add_option("--state", c.init, "csv of psi");
    s_en->add_option("--velocity", c.init_dot, "csv of d/dt psi");
    s_en->add_option("--m", c.m, "mode frequency");
    auto* s_ev = app.add_subcommand("evolve", "evolve one mode");
    add_common(s_ev, c, true, true);
    auto* s_fr = app.add_subcommand("friedrichs", "Friedrichs baseline for one mode");
    add_common(s_fr, c, false, true);
    auto* s_gr = app.add_subcommand("graviton", "graviton amplitude split for one mode");
    add_common(s_gr, c, true, true);
    auto* s_sy = app.add_subcommand("synth", "superpose modes into the 5D field");
    s_sy->add_option("--alpha", c.alpha, "boundary triple");
    s_sy->add_option("--spec", c.spec, "spec.json");
    s_sy->add_option("--T", c.T, "final time");
    s_sy->add_option("--dt", c.dt, "time step");
    s_sy->add_option("--out", c.out, "output directory");
    s_sy->add_option("--sample-every", c.sample_every, "steps between samples");
    s_sy->add_option("--seed", c.seed, "seed for the threshold scan");
    auto* s_sel = app.add_subcommand("sel-test", "quick self test");

    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    apply_config(app, c);
    if (*s_check) return cmd_check_alpha(c);
    if (*s_der) return cmd_derive(c);
    if (*s_spec) return cmd_spectrum(c);
    if (*s_en) return cmd_energy(c);
    if (*s_ev) return cmd_evolve(c, args);
    if (*s_fr) return cmd_friedrichs(c, args);
    if (*s_gr) return cmd_graviton(c, args);
    if (*s_sy) return cmd_synth(c, args);
    if (*s_sel) return cmd_sel_test();
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        return run(args);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
