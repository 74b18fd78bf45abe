#pragma once
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "energy.hpp"
#include "spectrum.hpp"

namespace adsdyn {

// v-coordinates of sqrt(z) K2(m z), m > 0, or of z^-3/2 when m = 0
inline VCoords static_profile(double m, double L, int n) {
    CutoffSpec chi = CutoffSpec::defaults(L);
    VCoords v;
    v.chi = chi;
    if (m == 0) {
        v.v2 = 1;
    } else {
        v.v2 = 2 / (m * m);
        v.v1 = -0.5;
        v.v0 = -m * m / 8;
        v.v_m1 = m * m * (kF0 - std::log(m) / 8);
    }
    v.psi_r = RadialGridField(L, n);
    for (int i = 0; i < n; ++i) {
        double z = v.psi_r.z(i);
        double c = chi.chi(z);
        if (m == 0) {
            v.psi_r.values[i] = (1 - c) * std::pow(z, -1.5);
        } else {
            double x = m * z;
            double rest = std::sqrt(z) * (k2_regular(x) - kF0 * x * x);
            v.psi_r.values[i] = rest + (1 - c) * singular_part(z, v.v_m1, v.v0, v.v1, v.v2);
        }
    }
    return v;
}

// one Fourier mode: H^2 part of the field in 6D variables plus the two singular amplitudes
struct ModeState {
    Vec w2, w2_dot;
    double u1 = 0, u1_dot = 0, u2 = 0, u2_dot = 0;
    double u0 = 0;  // algebraic, from the boundary closure
    double t = 0;
    double m = 0;
};

struct ModeCoords {
    double v_m1, v0, v1, v2;  // phi0 = v0, phi1 = v1, phi2 = v2
    double constraint;        // v_m1 + a.v
    double constraint_scale;
};

struct Sample {
    double t;
    EnergyReport energy;
    ModeCoords c;
    double u0, u1, u2;
    double u1_dot, u2_dot;
    double v2_dot;  // time derivative of v2
    Vec psi;  // optional snapshot of the full field in radial form
    double graviton_proj = NAN;  // <psi, z^-3/2>_0 / ||z^-3/2||_0^2 when requested
};

struct Trajectory {
    std::vector<Sample> samples;
    bool growing = false;
    double h = 0, L = 0;
    int n = 0;
};

struct EvolveOptions {
    double L = 24.0;
    int n = 2000;
    double cfl = 0.5;
    int sample_every = 0;  // steps between samples; 0 -> only ends
    bool snapshots = false;
    bool reject_zero_a0 = true;
    bool graviton_projection = false;
};

class Evolver {
public:
    Evolver(const BoundaryTriple& a, const ExtensionParams& p, double m, const EvolveOptions& o)
        : alpha_(a), d_(p, o.L, o.n), m_(m), opt_(o) {
        if (m < 0) throw usage_error("evolve: m must be >= 0");
        if (o.reject_zero_a0 && a.a0 == 0)
            throw closure_error("evolve: alpha0 = 0 leaves phi0 undetermined by the constraint; rejected");
        src_ = d_.grid.B(p.mus.mu0, d_.prof.Phi);
        if (o.graviton_projection) {
            VCoords g0 = static_profile(0.0, o.L, o.n);
            U3 u;
            g0w_ = d_.h2_part(g0, &u);
            g0u1_ = u.u1;
            g0u2_ = u.u2;
            g0n_ = d_.h0(g0w_, g0u1_, g0u2_, g0w_, g0u1_, g0u2_);
        }
        den_ = p.lambda0 - d_.rho(d_.prof.Phi);
        if (!(std::abs(den_) > 1e-14 * (std::abs(p.lambda0) + std::abs(d_.rho(d_.prof.Phi)))))
            throw closure_error("evolve: degenerate closure (lambda0 equals the discrete Phi value at 0)");
    }

    const Discretization& disc() const { return d_; }
    double h() const { return d_.grid.h(); }
    double m() const { return m_; }
    const BoundaryTriple& alpha() const { return alpha_; }

    double closure_u0(const Vec& w2, double u1, double u2) const {
        const auto& p = d_.par;
        return ((p.gamma1 * u1 - p.gamma2 * u2) / (d_.mu1() - d_.mu2()) - d_.rho(w2)) / den_;
    }

    ModeState initial(const VCoords& f, const VCoords& g) const {
        ModeState s;
        U3 uf, ug;
        s.w2 = d_.h2_part(f, &uf);
        s.w2_dot = d_.h2_part(g, &ug);
        s.u1 = uf.u1;
        s.u2 = uf.u2;
        s.u1_dot = ug.u1;
        s.u2_dot = ug.u2;
        s.m = m_;
        s.u0 = closure_u0(s.w2, s.u1, s.u2);
        return s;
    }

    // compact data given as H^3 part plus singular amplitudes
    ModeState initial_from_u(const Vec& W, double u1, double u2, const Vec& Wdot, double ud1, double ud2) const {
        ModeState s;
        s.w2 = W;
        s.w2_dot = Wdot;
        s.u1 = u1;
        s.u2 = u2;
        s.u1_dot = ud1;
        s.u2_dot = ud2;
        s.m = m_;
        // W is the regular part; its u0 Phi share follows from the closure
        const double u0 = closure_u0(W, u1, u2) / (1.0 + d_.rho(d_.prof.Phi) / den_);
        for (size_t i = 0; i < W.size(); ++i) s.w2[i] += u0 * d_.prof.Phi[i];
        s.u0 = closure_u0(s.w2, u1, u2);
        return s;
    }

    void accel(const ModeState& s, Vec& aw, double& a1, double& a2, double& u0) const {
        u0 = closure_u0(s.w2, s.u1, s.u2);
        d_.grid.S(s.w2.data(), aw.data());
        const double m2 = m_ * m_;
        for (size_t i = 0; i < aw.size(); ++i) aw[i] = -aw[i] - m2 * s.w2[i] + u0 * src_[i];
        const double dm = d_.mu1() - d_.mu2();
        a1 = -(m2 + d_.mu1()) * s.u1 + 2 * u0 / dm;
        a2 = -(m2 + d_.mu2()) * s.u2 - 2 * u0 / dm;
    }

    // kick-drift-kick leapfrog
    void step(ModeState& s, double dt) const {
        if (!(dt > 0) || dt > opt_.cfl * h() * (1 + 1e-12)) throw usage_error("step: dt violates the CFL bound");
        const int n = d_.grid.n();
        Vec aw(n);
        double a1, a2, u0;
        accel(s, aw, a1, a2, u0);
        for (int i = 0; i < n; ++i) {
            s.w2_dot[i] += 0.5 * dt * aw[i];
            s.w2[i] += dt * s.w2_dot[i];
        }
        s.u1_dot += 0.5 * dt * a1;
        s.u2_dot += 0.5 * dt * a2;
        s.u1 += dt * s.u1_dot;
        s.u2 += dt * s.u2_dot;
        accel(s, aw, a1, a2, u0);
        for (int i = 0; i < n; ++i) s.w2_dot[i] += 0.5 * dt * aw[i];
        s.u1_dot += 0.5 * dt * a1;
        s.u2_dot += 0.5 * dt * a2;
        s.u0 = u0;
        s.t += dt;
    }

    EnergyReport energy(const ModeState& s) const {
        return d_.energy(m_, s.w2, s.u0, s.u1, s.u2, s.w2_dot, s.u1_dot, s.u2_dot);
    }

    ModeCoords coords(const ModeState& s) const {
        const auto& mus = d_.par.mus;
        V3 v = u_to_v_scalars(s.u0, s.u1, s.u2, mus);
        Vec W = s.w2;
        for (size_t i = 0; i < W.size(); ++i) W[i] -= s.u0 * d_.prof.Phi[i];
        double U0 = d_.rho(W);
        ModeCoords c;
        c.v0 = v.v0;
        c.v1 = v.v1;
        c.v2 = v.v2;
        c.v_m1 = U0 + s.u0 * g0_at_zero(mus) + s.u1 * f_j_at_zero(mus.mu1) + s.u2 * f_j_at_zero(mus.mu2);
        c.constraint = c.v_m1 + alpha_.a0 * c.v0 + alpha_.a1 * c.v1 + alpha_.a2 * c.v2;
        c.constraint_scale = std::abs(c.v_m1) + std::abs(alpha_.a0 * c.v0) + std::abs(alpha_.a1 * c.v1) +
                             std::abs(alpha_.a2 * c.v2);
        return c;
    }

    Vec psi(const ModeState& s) const {
        Vec f = d_.full6(s.w2, s.u1, s.u2);
        for (size_t i = 0; i < f.size(); ++i) f[i] *= std::pow(d_.grid.z()[i], 2.5);
        return f;
    }

    // H^2 part of the H^3 component only (u0 Phi removed)
    Vec regular(const ModeState& s) const {
        Vec W = s.w2;
        for (size_t i = 0; i < W.size(); ++i) W[i] -= s.u0 * d_.prof.Phi[i];
        return W;
    }

    Sample sample(const ModeState& s) const {
        Sample r;
        r.t = s.t;
        r.energy = energy(s);
        r.c = coords(s);
        r.u0 = s.u0;
        r.u1 = s.u1;
        r.u2 = s.u2;
        r.u1_dot = s.u1_dot;
        r.u2_dot = s.u2_dot;
        r.v2_dot = u_to_v_scalars(closure_u0(s.w2_dot, s.u1_dot, s.u2_dot), s.u1_dot, s.u2_dot, d_.par.mus).v2;
        if (opt_.snapshots) r.psi = psi(s);
        if (opt_.graviton_projection) r.graviton_proj = d_.h0(s.w2, s.u1, s.u2, g0w_, g0u1_, g0u2_) / g0n_;
        return r;
    }

    Trajectory run(ModeState s, double T, double dt) const {
        Trajectory tr;
        tr.h = h();
        tr.L = d_.grid.L();
        tr.n = d_.grid.n();
        const int steps = (int)std::llround(T / dt);
        const int every = opt_.sample_every > 0 ? opt_.sample_every : std::max(steps, 1);
        tr.samples.push_back(sample(s));
        for (int k = 1; k <= steps; ++k) {
            step(s, dt);
            if (k % every == 0 || k == steps) tr.samples.push_back(sample(s));
        }
        for (auto& x : tr.samples)
            if (x.energy.total < 0) tr.growing = true;
        return tr;
    }

private:
    BoundaryTriple alpha_;
    Discretization d_;
    double m_;
    EvolveOptions opt_;
    Vec src_;
    double den_;
    Vec g0w_;
    double g0u1_ = 0, g0u2_ = 0, g0n_ = 1;
};

// convenience: admissible alpha -> trajectory from v-coordinates on the option grid
inline Trajectory evolve(const VCoords& f, const VCoords& g, const BoundaryTriple& a, double m, double T, double dt,
                         const EvolveOptions& o, double spread = 0.1) {
    if (!is_admissible(a).admissible) throw usage_error("evolve: alpha is not admissible");
    ExtensionParams p = find_extension_params(a, spread);
    Evolver ev(a, p, m, o);
    return ev.run(ev.initial(f, g), T, dt);
}

// ---------- Friedrichs baseline ----------

// narrow near-boundary window for v2 traces of evolving data
inline FitWindow trace_window(double h) { return {10 * h, 60 * h}; }

inline double extracted_v2(const Vec& psi, double L, FitWindow w) {
    RadialGridField f(L, (int)psi.size());
    f.values = psi;
    return extract_vcoords(f, CutoffSpec::defaults(L), w).v2;
}

struct FriedrichsSample {
    double t;
    double energy;  // pi^3 (|w_t|^2 + <w, S w> + m^2 |w|^2)
    double norm;    // L^2 norm
    double v2;      // fitted z^-3/2 coefficient
    Vec psi;
};

struct FriedrichsTrajectory {
    std::vector<FriedrichsSample> samples;
    double h = 0, L = 0;
    int n = 0;
};

class FriedrichsEvolver {
public:
    FriedrichsEvolver(double m, double L, int n, double cfl = 0.5) : g_(L, n, OuterBC::Dirichlet), m_(m), cfl_(cfl) {}
    const Radial6& grid() const { return g_; }

    void step(Vec& w, Vec& wd, double dt) const {
        if (!(dt > 0) || dt > cfl_ * g_.h() * (1 + 1e-12)) throw usage_error("friedrichs: dt violates the CFL bound");
        const int n = g_.n();
        Vec a(n);
        auto acc = [&] {
            g_.S(w.data(), a.data());
            for (int i = 0; i < n; ++i) a[i] = -a[i] - m_ * m_ * w[i];
        };
        acc();
        for (int i = 0; i < n; ++i) {
            wd[i] += 0.5 * dt * a[i];
            w[i] += dt * wd[i];
        }
        acc();
        for (int i = 0; i < n; ++i) wd[i] += 0.5 * dt * a[i];
    }

    double energy(const Vec& w, const Vec& wd) const {
        return g_.ip(wd, wd) + g_.ip(w, g_.S(w)) + m_ * m_ * g_.ip(w, w);
    }

    FriedrichsSample sample(double t, const Vec& w, const Vec& wd, bool snap) const {
        FriedrichsSample s;
        s.t = t;
        s.energy = energy(w, wd);
        s.norm = std::sqrt(g_.ip(w, w));
        RadialGridField f(g_.L(), g_.n());
        for (int i = 0; i < g_.n(); ++i) f.values[i] = std::pow(g_.z()[i], 2.5) * w[i];
        try {
            s.v2 = extract_vcoords(f, CutoffSpec::defaults(g_.L()), trace_window(g_.h())).v2;
        } catch (const fit_error&) {
            s.v2 = NAN;
        }
        if (snap) s.psi = f.values;
        return s;
    }

    FriedrichsTrajectory run(Vec w, Vec wd, double T, double dt, int every, bool snap) const {
        FriedrichsTrajectory tr;
        tr.h = g_.h();
        tr.L = g_.L();
        tr.n = g_.n();
        const int steps = (int)std::llround(T / dt);
        if (every <= 0) every = std::max(steps, 1);
        tr.samples.push_back(sample(0.0, w, wd, snap));
        for (int k = 1; k <= steps; ++k) {
            step(w, wd, dt);
            if (k % every == 0 || k == steps) tr.samples.push_back(sample(k * dt, w, wd, snap));
        }
        return tr;
    }

private:
    Radial6 g_;
    double m_;
    double cfl_;
};

inline FriedrichsTrajectory friedrichs_evolve(const RadialGridField& f, const RadialGridField& g, double m, double T,
                                              double dt, int every = 0, bool snapshots = false) {
    FriedrichsEvolver ev(m, f.L, f.n);
    Vec w(f.n), wd(f.n);
    for (int i = 0; i < f.n; ++i) {
        double zm = std::pow(f.z(i), -2.5);
        w[i] = zm * f.values[i];
        wd[i] = zm * g.values[i];
    }
    return ev.run(w, wd, T, dt, every, snapshots);
}

// ---------- diagnostics ----------

struct FrontPoint {
    double t, z;
};

// outermost z with |psi| > threshold * max|psi(0)|
inline std::vector<FrontPoint> causality_front(const std::vector<double>& times, const std::vector<Vec>& snaps,
                                               double h, double threshold) {
    if (snaps.empty()) throw usage_error("causality_front: no snapshots");
    double ref = 0;
    for (double x : snaps.front()) ref = std::max(ref, std::abs(x));
    std::vector<FrontPoint> out;
    if (ref == 0) return out;
    for (size_t k = 0; k < snaps.size(); ++k) {
        const Vec& s = snaps[k];
        int last = -1;
        for (int i = (int)s.size() - 1; i >= 0; --i)
            if (std::abs(s[i]) > threshold * ref) {
                last = i;
                break;
            }
        if (last >= 0) out.push_back({times[k], (last + 1.0) * h});
    }
    return out;
}

inline std::vector<FrontPoint> causality_front(const Trajectory& tr, double threshold) {
    std::vector<double> t;
    std::vector<Vec> s;
    for (auto& x : tr.samples)
        if (!x.psi.empty()) {
            t.push_back(x.t);
            s.push_back(x.psi);
        }
    return causality_front(t, s, tr.h, threshold);
}

// least-squares slope of front position against time
inline double front_speed(const std::vector<FrontPoint>& fp, double t0, double t1) {
    double st = 0, sz = 0, stt = 0, stz = 0;
    int k = 0;
    for (auto& p : fp)
        if (p.t >= t0 && p.t <= t1) {
            st += p.t;
            sz += p.z;
            stt += p.t * p.t;
            stz += p.t * p.z;
            ++k;
        }
    if (k < 2) return NAN;
    return (k * stz - st * sz) / (k * stt - st * st);
}

struct DriftResult {
    double drift = 0;          // max relative L2 change of the H^2 part
    double energy_drift = 0;   // max relative energy change
    Trajectory traj;
};

// evolve a profile as initial data with zero velocity and measure how far it moves
inline DriftResult profile_drift(const BoundaryTriple& a, double m, double T, double dt, const EvolveOptions& o,
                                 double spread = 0.1) {
    ExtensionParams p = find_extension_params(a, spread);
    Evolver ev(a, p, m, o);
    VCoords f = static_profile(m, o.L, o.n);
    VCoords g = f;
    g.v_m1 = g.v0 = g.v1 = g.v2 = 0;
    std::fill(g.psi_r.values.begin(), g.psi_r.values.end(), 0.0);
    ModeState s0 = ev.initial(f, g);
    ModeState s = s0;
    DriftResult r;
    const auto& V = ev.disc().grid.V();
    double n0 = 0;
    for (int i = 0; i < o.n; ++i) n0 += V[i] * s0.w2[i] * s0.w2[i];
    double E0 = ev.energy(s0).total;
    double En = std::abs(E0) > 0 ? std::abs(E0) : 1.0;
    const int steps = (int)std::llround(T / dt);
    const int every = std::max(1, (int)std::llround(0.25 / dt));
    r.traj.samples.push_back(ev.sample(s));
    for (int k = 1; k <= steps; ++k) {
        ev.step(s, dt);
        if (k % every == 0 || k == steps) {
            double d = 0;
            for (int i = 0; i < o.n; ++i) d += V[i] * (s.w2[i] - s0.w2[i]) * (s.w2[i] - s0.w2[i]);
            r.drift = std::max(r.drift, std::sqrt(d / n0));
            auto smp = ev.sample(s);
            r.energy_drift = std::max(r.energy_drift, std::abs(smp.energy.total - E0) / En);
            r.traj.samples.push_back(std::move(smp));
        }
    }
    return r;
}

inline DriftResult static_drift(const BoundaryTriple& a, double m, double T, double dt, const EvolveOptions& o) {
    if (m > 0) {
        if (!sigma_m_contains(a, m, default_variant(), 1e-9))
            throw usage_error("static_drift: alpha is not in Sigma(m) for the selected variant");
    } else if (!sigma0_contains(a)) {
        throw usage_error("static_drift: alpha is not in Sigma(0)");
    }
    return profile_drift(a, m, T, dt, o);
}

}  // namespace adsdyn
