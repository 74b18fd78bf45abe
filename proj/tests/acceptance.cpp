// acceptance run: one PASS/FAIL line per criterion
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "alpha_gen.hpp"
#include "cases.hpp"

using namespace adsdyn;
using namespace cases;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& detail, double secs) {
    std::printf("criterion %2d: %s  %s  (%.1fs)\n", k, ok ? "PASS" : "FAIL", detail.c_str(), secs);
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

void run(int k, const std::function<bool(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string d;
    bool ok = false;
    try {
        ok = body(d);
    } catch (const std::exception& e) {
        d += std::string(" exception: ") + e.what();
        ok = false;
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(k, ok, d, s);
}

// --- 1 ---
bool c1(std::string& d) {
    double worst = 0;
    for (int k = 1; k <= 5000; ++k) {
        double x = 0.5 * k / 5000;
        double ref = boost::math::cyl_bessel_k(2, x);
        worst = std::max(worst, std::abs(k2_series(x).reassemble() - ref) / ref);
    }
    const double g = 0.57721566490153286061, l2 = 0.69314718055994530942;
    double f0 = std::abs(kF0 - (4 * l2 + 3 - 4 * g) / 32) / kF0;
    double wr = 0;
    for (double x = 0.1; x <= 10 + 1e-12; x += 0.01) {
        double k2 = bessel_k2(x), i2 = bessel_i(2, x);
        double dk = -bessel_k(1, x) - 2 / x * k2, di = bessel_i(1, x) - 2 / x * i2;
        wr = std::max(wr, std::abs((i2 * dk - di * k2) * x + 1));
    }
    d = fmt("series vs direct %.2e, F(0) rel %.1e, wronskian %.2e", worst, f0, wr);
    return worst <= 1e-9 && f0 <= 4e-16 && wr <= 1e-8;
}

// --- 2 ---
bool c2(std::string& d) {
    double res = 0;
    for (double mu : {-0.25, -1.0, -2.0, -4.0, -9.0}) {
        auto f = RadialGridField::sample(10, 10000, [mu](double z) { return phi_j_radial(mu, z); });
        auto p = apply_p2(f);
        double r = 0, s = 0;
        for (int i = 0; i < f.n; ++i) {
            if (f.z(i) < 0.5 || f.z(i) > 5) continue;
            r = std::max(r, std::abs(p[i] - mu * f[i]));
            s = std::max(s, std::abs(mu * f[i]));
        }
        res = std::max(res, r / s);
    }
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(0.05, 10.0);
    boost::math::quadrature::exp_sinh<double> q;
    double worst = 0;
    int count = 0;
    while (count < 100) {
        MuTriple m{-U(rng), -U(rng), -U(rng)};
        if (!m.valid()) continue;
        ++count;
        double ref = q.integrate([&](double r) {
            if (r > 1e20) return 0.0;
            double r2 = r * r;
            return std::pow(r, 5) / ((r2 - m.mu1) * (r2 - m.mu2) * (r2 - m.mu0) * (r2 - m.mu0)) / 8;
        });
        worst = std::max(worst, std::abs(phi0_h2_norm_sq(m) - ref) / std::abs(ref));
    }
    d = fmt("(P2-mu)psi residual %.2e, phi0_h2_norm_sq vs quadrature %.2e over %d triples", res, worst, count);
    return res <= 1e-6 && worst <= 1e-6;
}

// --- 3 ---
bool c3(std::string& d) {
    std::mt19937_64 rng(303);
    std::normal_distribution<double> N(0, 1);
    double rt = 0, inv = 0, ex = 0;
    const double L = 24;
    const int n = 4800;
    for (int k = 0; k < 20; ++k) {
        MuTriple m{-0.5 - std::abs(N(rng)), -2.5 - std::abs(N(rng)), -0.1 - 0.3 * std::abs(N(rng))};
        VCoords v = zero(L, n);
        v.v_m1 = N(rng);
        v.v0 = N(rng);
        v.v1 = N(rng);
        v.v2 = N(rng);
        for (int i = 0; i < n; ++i) v.psi_r.values[i] = std::pow(v.psi_r.z(i), 2.5) * bump(v.psi_r.z(i), 4, 8);
        UCoords u = v_to_u(v, m);
        VCoords b = u_to_v(u, m, &v.chi);
        double sc = std::abs(v.v_m1) + std::abs(v.v0) + std::abs(v.v1) + std::abs(v.v2);
        rt = std::max({rt, std::abs(b.v_m1 - v.v_m1) / sc, std::abs(b.v0 - v.v0) / sc, std::abs(b.v1 - v.v1) / sc,
                       std::abs(b.v2 - v.v2) / sc});
        MuTriple m2 = m;
        m2.mu0 *= 1.9;
        UCoords w = v_to_u(v, m2);
        double us = std::abs(u.u0) + std::abs(u.u1) + std::abs(u.u2);
        inv = std::max({inv, std::abs(u.u0 - w.u0) / us, std::abs(u.u1 - w.u1) / us, std::abs(u.u2 - w.u2) / us});
        VCoords e = extract_vcoords(synthesize(v), v.chi);
        ex = std::max({ex, std::abs(e.v_m1 - v.v_m1), std::abs(e.v0 - v.v0), std::abs(e.v1 - v.v1),
                       std::abs(e.v2 - v.v2)});
    }
    d = fmt("round trip %.2e, mu0 invariance %.2e, extraction %.2e", rt, inv, ex);
    return rt <= 1e-12 && inv <= 1e-10 && ex <= 1e-8;
}

// --- 4 ---
bool c4(std::string& d) {
    std::mt19937_64 rng(404);
    double worst = 0;
    bool gam = true;
    for (int k = 0; k < 100; ++k) {
        BoundaryTriple a = testgen::admissible(rng, k % 3);
        ExtensionParams p = find_extension_params(a);
        gam = gam && p.gamma1 > 0 && p.gamma2 > 0;
        BoundaryTriple b = alpha_from_params(p);
        double sc = std::max({1.0, std::abs(a.a0), std::abs(a.a1), std::abs(a.a2)});
        worst = std::max({worst, std::abs(a.a0 - b.a0) / sc, std::abs(a.a1 - b.a1) / sc, std::abs(a.a2 - b.a2) / sc});
    }
    int found = 0;
    for (int k = 0; k < 100; ++k)
        if (testgen::scan_finds_root(testgen::inadmissible(rng), 100000)) ++found;
    d = fmt("admissible round trip %.2e, gamma>0 %s; inadmissible with a scanned root: %d/100", worst,
            gam ? "yes" : "no", found);
    return worst <= 1e-8 && gam && found == 0;
}

// --- 5 ---
double residual_for(double x) {
    double lam = std::sqrt(x);
    double L = std::max(2.0, std::min(20.0 / lam, 50.0));
    int n = (int)std::ceil(L * std::max(1000.0, 200.0 * lam));
    return eigen_residual(lam, L, n);
}

// root of h bracketed by a dense scan, narrowed by repeated scans of the bracket
double scan_root(const BoundaryTriple& a, Variant v, double lo, double hi) {
    const int S = 10000;
    for (int pass = 0; pass < 3; ++pass) {
        double prev = h_function(a, lo, v), xl = lo;
        for (int k = 1; k <= S; ++k) {
            double x = lo + (hi - lo) * k / S;
            double hv = h_function(a, x, v);
            if ((hv > 0) != (prev > 0)) {
                lo = xl;
                hi = x;
                break;
            }
            prev = hv;
            xl = x;
        }
    }
    return 0.5 * (lo + hi);
}

bool c5(std::string& d) {
    std::mt19937_64 rng(505);
    int mism = 0, roots = 0;
    double res = 0;
    for (int k = 0; k < 200; ++k) {
        BoundaryTriple a = testgen::admissible(rng, k % 3);
        for (Variant v : {Variant::printed, Variant::shifted}) {
            auto r = h_roots(a, v);
            int in = 0;
            for (double x : r)
                if (x > 1e-6 && x < 1e6) {
                    ++in;
                    res = std::max(res, residual_for(x));
                    ++roots;
                }
            if (in != h_sign_changes(a, v)) ++mism;
        }
    }
    BoundaryTriple t{-3, 0, -1};
    auto pr = h_roots(t, Variant::printed);
    double dev = 0;
    std::vector<double> scanned;
    const int S = 10000;
    double prev = 0, xp = 0;
    for (int k = 0; k < S; ++k) {
        double x = 1e-6 * std::pow(1e12, k / double(S - 1));
        double hv = h_function(t, x, Variant::printed);
        if (k > 0 && (hv > 0) != (prev > 0)) scanned.push_back(scan_root(t, Variant::printed, xp, x));
        prev = hv;
        xp = x;
    }
    bool sizes = pr.size() == 2 && scanned.size() == 2;
    if (sizes)
        for (int i = 0; i < 2; ++i) dev = std::max(dev, std::abs(pr[i] - scanned[i]) / pr[i]);
    bool near = sizes && std::abs(pr[0] - 2.51) < 0.01 && std::abs(pr[1] - 403.4) < 0.1;
    d = fmt("count mismatches %d/400, max residual %.2e over %d roots, printed roots of (-3,0,-1) = {%.4f, %.3f}, "
            "scan deviation %.1e",
            mism, res, roots, sizes ? pr[0] : NAN, sizes ? pr[1] : NAN, dev);
    return mism == 0 && res <= 1e-6 && near && dev <= 1e-6;
}

// --- 6 ---
bool c6(std::string& d) {
    VariantVerdict v = resolve_variant(variant_probe_set());
    d = fmt("%d samples, printed matches %s, shifted matches %s, winner %s (worst zero %.1e); default_variant %s",
            v.samples, v.printed_matches ? "yes" : "no", v.shifted_matches ? "yes" : "no", to_string(v.winner),
            v.worst_zero, to_string(default_variant()));
    return v.samples == 20 && v.unique && default_variant() == v.winner;
}

// --- 7 ---
bool c7(std::string& d) {
    const BoundaryTriple as[5] = {{-1, 1, 0}, {-2, 0.5, -0.1}, {-1, 0, -1}, {-1, 1, 0.1}, {-1, 0.5, 0.025}};
    bool ok = true;
    std::string s;
    for (const auto& a : as) {
        double m = safe_m(a);
        double d1 = conservation_drift(a, m, 12, 2000, 10), d2 = conservation_drift(a, m, 12, 4000, 10);
        double order = std::log2(d1 / d2);
        ok = ok && d1 <= 1e-3 && order >= 1.5;
        s += fmt("[%s %.1e p=%.2f] ", to_string(is_admissible(a).branch), d1, order);
    }
    d = "drift/order " + s;
    return ok;
}

// --- 8 ---
bool c8(std::string& d) {
    BoundaryTriple a{sigma_m_alpha0(0.1, 0, 1.0, default_variant()), 0.1, 0};
    EvolveOptions o;
    o.L = 24;
    o.n = 3000;
    double drift = static_drift(a, 1.0, 10, 0.5 * o.L / o.n, o).drift;

    BoundaryTriple b = spevo(0.09);
    ExtensionParams p = find_extension_params(b);
    EvolveOptions q;
    q.L = 24;
    q.n = 8000;
    const double dt = 0.5 * q.L / q.n, m = 1.0;
    q.sample_every = (int)std::llround(0.02 / dt);
    Evolver ev(b, p, m, q);
    auto tr = ev.run(ev.initial(static_profile(0, q.L, q.n), zero(q.L, q.n)), 15, dt);
    double I0 = 1, inv = 0;
    std::vector<double> cross;
    for (size_t k = 0; k < tr.samples.size(); ++k) {
        const auto& s = tr.samples[k];
        double I = s.c.v2 * s.c.v2 + s.v2_dot * s.v2_dot / (m * m);
        if (k == 0) I0 = I;
        inv = std::max(inv, std::abs(I - I0) / I0);
        if (k > 0) {
            const auto& r = tr.samples[k - 1];
            if ((r.c.v2 > 0) != (s.c.v2 > 0)) cross.push_back(r.t + (s.t - r.t) * r.c.v2 / (r.c.v2 - s.c.v2));
        }
    }
    double period = cross.size() >= 3 ? 2 * (cross.back() - cross.front()) / (cross.size() - 1) : NAN;
    double perr = std::abs(period - 2 * kPi / m) / (2 * kPi / m);
    d = fmt("static drift %.2e; periodic invariant %.2e, period %.5f (rel err %.1e)", drift, inv, period, perr);
    return drift <= 1e-3 && inv <= 1e-4 && perr <= 0.01;
}

// --- 9, 10: one bump run shared ---
struct BumpRuns {
    Trajectory gen, gen2;
    FriedrichsTrajectory fr;
    double h = 0, sup0 = 0;
};

BumpRuns& bump_runs() {
    static BumpRuns r;
    static bool done = false;
    if (done) return r;
    const double L = 24, m = 1;
    const int n = 2400;
    EvolveOptions o;
    o.L = L;
    o.n = n;
    o.snapshots = true;
    o.sample_every = 20;
    auto go = [&](const BoundaryTriple& a) {
        Evolver ev(a, find_extension_params(a), m, o);
        const auto& z = ev.disc().grid.z();
        Vec W(n, 0.0), Wd(n, 0.0);
        for (int i = 0; i < n; ++i) W[i] = bump(z[i], 4, 6);
        return ev.run(ev.initial_from_u(W, 0, 0, Wd, 0, 0), 12, 0.5 * ev.h());
    };
    r.gen = go(spevo(0.09));
    r.gen2 = go(spevo(0.05));
    RadialGridField f(L, n), g(L, n);
    for (int i = 0; i < n; ++i) f.values[i] = std::pow(f.z(i), 2.5) * bump(f.z(i), 4, 6);
    r.fr = friedrichs_evolve(f, g, m, 12, 0.5 * L / n, 20, true);
    r.h = L / n;
    for (double x : r.gen.samples[0].psi) r.sup0 = std::max(r.sup0, std::abs(x));
    done = true;
    return r;
}

bool c9(std::string& d) {
    BumpRuns& r = bump_runs();
    const double contact = 4.0;
    auto fp = causality_front(r.gen, 1e-3);
    double speed = front_speed(fp, 0.5, contact - 0.5);
    double agree = 0;
    for (size_t k = 0; k < r.gen.samples.size(); ++k) {
        // strictly before contact; the sample at t = 4 (up to accumulated rounding) is the contact itself
        if (r.gen.samples[k].t >= contact - 1e-6) break;
        const Vec &a = r.gen.samples[k].psi, &b = r.fr.samples[k].psi;
        for (size_t i = 0; i < a.size(); ++i) agree = std::max(agree, std::abs(a[i] - b[i]) / r.sup0);
    }
    d = fmt("front speed %.4f (threshold 1e-3, t in [0.5, 3.5]); pre-contact generalized vs Friedrichs %.2e", speed,
            agree);
    return speed <= 1.02 && agree <= 1e-6;
}

bool c10(std::string& d) {
    BumpRuns& r = bump_runs();
    const double contact = 4.0;
    FitWindow w = trace_window(r.h);
    double floor = 0, gen = 0;
    for (auto& s : r.fr.samples) floor = std::max(floor, std::abs(s.v2));
    for (auto& s : r.gen.samples)
        if (s.t > contact) gen = std::max(gen, std::abs(extracted_v2(s.psi, r.gen.L, w)));
    double diff = 0, sup = 0;
    for (size_t k = 0; k < r.gen.samples.size(); ++k) {
        diff = std::max(diff, std::abs(r.gen.samples[k].c.v2 - r.gen2.samples[k].c.v2));
        sup = std::max(sup, std::abs(r.gen.samples[k].c.v2));
    }
    double floor_rel = floor / r.sup0;
    d = fmt("generalized max|v2| %.3e, Friedrichs floor %.2e (%.1e of sup|psi0|), ratio %.0f; two-alpha difference %.2e",
            gen, floor, floor_rel, gen / floor, diff / sup);
    return gen >= 10 * floor && floor_rel <= 1e-4 && diff / sup >= 1e-3;
}

// --- 11 ---
bool c11(std::string& d) {
    BoundaryTriple wo{0.514, 0.09, 0}, ev{-0.3, 0, -0.2};
    auto k1 = is_admissible(wo), k2 = is_admissible(ev);
    auto p1 = positivity_sample(find_extension_params(wo), 0.0, 1000, 7);
    auto p2 = positivity_sample(find_extension_params(ev), 0.0, 1000, 7);
    BoundaryTriple a{-3, 0, -1};
    ExtensionParams p = find_extension_params(a);
    double lam2 = h_roots(a, default_variant())[0];
    VCoords f = static_profile(std::sqrt(lam2), 24, 2400);
    double nn = inner_h0(f, f, p);
    double ratio = energy_full(f, zero(24, 2400), p, 0.0).total / (-lam2 * nn);
    d = fmt("%s: %d/1000 negative (min %.2e); %s: %d/1000 negative (min %.2e); eigenstate E/((m^2-l^2)|psi|^2) = %.6f",
            to_string(k1.positivity), p1.negative_count, p1.min_value, to_string(k2.positivity), p2.negative_count,
            p2.min_value, ratio);
    return k1.positivity == Positivity::graviton_only && k2.positivity == Positivity::empty_point_spectrum &&
           p1.all_nonnegative && p2.all_nonnegative && std::abs(ratio - 1) <= 0.02;
}

// --- 12 ---
bool c12(std::string& d) {
    BoundaryTriple a = spevo(0.09);
    ExtensionParams p = find_extension_params(a);
    const double L = 24;
    const int n = 2400;
    const double dt = 0.5 * L / n;
    double proj[2];
    int idx = 0;
    for (double m : {0.0, 1.2}) {
        EvolveOptions o;
        o.L = L;
        o.n = n;
        o.graviton_projection = true;
        o.sample_every = 10;
        Evolver ev(a, p, m, o);
        VCoords f = m == 0 ? lin(1, static_profile(0, L, n), 1, bump6(L, n, 2, 3)) : bump6(L, n, 2, 3);
        VCoords g = zero(L, n);
        auto tr = ev.run(ev.initial(f, g), m == 0 ? 4.0 : 10.0, dt);
        auto s = graviton_split(tr, a, p, m, f, g);
        double e = 0, sc = 0;
        for (size_t k = 0; k < s.t.size(); ++k) {
            e = std::max(e, std::abs(s.projected[k] - s.closed_form[k]));
            sc = std::max(sc, std::abs(s.closed_form[k]));
        }
        proj[idx++] = e / sc;
    }
    PlaneWaveSpec spec;
    spec.L = L;
    spec.n = n;
    spec.z_stride = 50;
    spec.z_max = 6;
    spec.x.lo = {-1, 0, 0};
    spec.x.hi = {1, 0, 0};
    spec.x.n = {5, 1, 1};
    const double ms[3] = {1.1, 1.3, 0};
    for (int k = 0; k < 3; ++k) {
        ModeSpec md;
        md.xi = {ms[k], 0, 0};
        md.amplitude = cplx(1.0, 0.3 * k);
        md.f = static_profile(0, L, n);
        md.g = k == 2 ? static_profile(0, L, n) : zero(L, n);
        spec.modes.push_back(md);
    }
    EvolveOptions o;
    o.snapshots = true;
    o.sample_every = 100;
    auto runs = run_modes(spec, a, p, 3.0, dt, o);
    double tq = runs[0].traj.samples.back().t;
    double err = 0, sc = 0;
    for (auto& q : assemble(spec, runs, tq)) {
        // phi(t,x) = (2pi)^-3/2 sum c_k e^{i x xi_k} a_k(t), a free wave in x
        cplx ex = 0;
        for (int k = 0; k < 3; ++k) {
            double amp = k == 2 ? 1 + tq : std::cos(ms[k] * tq);
            ex += std::pow(2 * kPi, -1.5) * spec.modes[k].amplitude * std::exp(cplx(0, q.x1 * ms[k])) * amp *
                  std::pow(q.z, -1.5);
        }
        err = std::max(err, std::abs(q.value - ex));
        sc = std::max(sc, std::abs(ex));
    }
    double e0 = ads_energy(spec, runs, 0), ec = graviton_energy_closed_form(spec, p);
    double erel = std::abs(e0 - ec) / ec;
    d = fmt("projection m=0 %.2e, m=1.2 %.2e; assembled field %.2e; ads_energy vs closed form %.2e", proj[0], proj[1],
            err / sc, erel);
    return proj[0] <= 1e-3 && proj[1] <= 1e-3 && err / sc <= 1e-4 && erel <= 1e-3;
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    run(1, c1);
    run(2, c2);
    run(3, c3);
    run(4, c4);
    run(5, c5);
    run(6, c6);
    run(7, c7);
    run(8, c8);
    run(9, c9);
    run(10, c10);
    run(11, c11);
    run(12, c12);
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("acceptance: %d of 12 criteria failed, %.0fs total\n", failures, s);
    return failures ? 1 : 0;
}
