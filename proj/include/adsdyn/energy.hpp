#pragma once
#include <cmath>
#include <random>
#include <vector>

#include "atlas.hpp"
#include "fields.hpp"

namespace adsdyn {

struct EnergyReport {
    double total = 0;
    double singular_part = 0;  // terms in u0,u1,u2 alone (and g1,g2)
    double regular_part = 0;   // third-order form of the H^3 part plus the velocity norm
    double cross_part = 0;     // u0 couplings through the Phi profile
    double mass = 0;           // m^2 terms
};

// Discretization shared by energy, evolution and the h0 product
struct Discretization {
    Radial6 grid;
    ProfileSet prof;
    ExtensionParams par;
    Vec B1Phi;  // (S - mu1) Phi
    double N = 0;  // pi^3 <B1 Phi, B2 Phi>

    double z_loc = 0;  // the discrete (S-mu0)(S-mu1)(S-mu2) Phi vanishes beyond 2 z_loc

    Discretization(const ExtensionParams& p, double L, int n, OuterBC bc = OuterBC::Harmonic, double zc = -1)
        : grid(L, n, bc), par(p) {
        p.check();
        prof = ProfileSet(grid, p.mus);
        z_loc = zc >= 0 ? zc : default_zloc(grid.h());
        if (z_loc > 0) localize();
        B1Phi = grid.B(p.mus.mu1, prof.Phi);
        N = grid.ip(B1Phi, grid.B(p.mus.mu2, prof.Phi));
    }

    static double default_zloc(double h) { return std::max(0.25, 20 * h); }

    // Remove the truncation residual of the triple resolvent product away from the origin,
    // so the boundary functional rho only sees the first cells.
    void localize() {
        const auto& z = grid.z();
        Vec r = grid.B(mu0(), grid.B(mu1(), grid.B(mu2(), prof.Phi)));
        for (int i = 0; i < grid.n(); ++i) r[i] *= smoothstep9(z[i] / z_loc - 1.0);
        Vec e = grid.solve(mu2(), grid.solve(mu1(), grid.solve(mu0(), r)));
        for (int i = 0; i < grid.n(); ++i) {
            prof.Phi[i] -= e[i];
            prof.Phi_reg[i] -= e[i];
        }
    }

    double mu0() const { return par.mus.mu0; }
    double mu1() const { return par.mus.mu1; }
    double mu2() const { return par.mus.mu2; }

    double H(const Vec& a, const Vec& b) const { return grid.hform(a, b, mu1(), mu2()); }
    // pi^3 <B1 a, S B2 b> with tail
    double H3(const Vec& a, const Vec& b) const {
        Vec b2 = grid.B(mu2(), b);
        return grid.ip(grid.B(mu1(), a), grid.S(b2)) + mu1() * mu2() * grid.tail_grad(grid.tail(a), grid.tail(b));
    }
    // discrete value at the origin: -1/2 <B1 Phi, (S-mu0)(S-mu2) w>
    double rho(const Vec& w) const { return -0.5 * grid.ip(B1Phi, grid.B(mu0(), grid.B(mu2(), w))); }

    // H^2 part w2 = z^-5/2 psi - u1 phi1 - u2 phi2 of a field given by v-coordinates
    Vec h2_part(const VCoords& v, U3* uout = nullptr) const {
        if (v.psi_r.n != grid.n() || std::abs(v.psi_r.L - grid.L()) > 1e-12 * grid.L())
            throw usage_error("h2_part: field grid does not match the discretization");
        U3 u = v_to_u_scalars(v.v0, v.v1, v.v2, par.mus);
        Vec w = regular_part6(v, u, prof, grid);
        for (int i = 0; i < grid.n(); ++i) w[i] += u.u0 * prof.Phi[i];
        if (uout) *uout = u;
        return w;
    }

    // full 6D field from (w2, u1, u2)
    Vec full6(const Vec& w2, double u1, double u2) const {
        Vec f = w2;
        for (int i = 0; i < grid.n(); ++i) f[i] += u1 * prof.phi1[i] + u2 * prof.phi2[i];
        return f;
    }

    EnergyReport energy(double m, const Vec& w2, double u0, double u1, double u2, const Vec& wd2, double ud1,
                        double ud2) const {
        const double g1 = par.gamma1, g2 = par.gamma2, l0 = par.lambda0;
        const double m2 = m * m;
        Vec W = w2;
        for (int i = 0; i < grid.n(); ++i) W[i] -= u0 * prof.Phi[i];
        double HW = H(W, W);
        double C = grid.ip(B1Phi, grid.B(mu2(), W));
        double X = g1 * u1 - g2 * u2;
        EnergyReport r;
        r.mass = m2 * (HW + g1 * u1 * u1 + g2 * u2 * u2);
        r.cross_part = (m2 + mu0()) * (2 * u0 * C + u0 * u0 * N);
        r.singular_part = g1 * mu1() * u1 * u1 + g2 * mu2() * u2 * u2 + 2 * l0 * u0 * u0 -
                          4 * u0 * X / (mu1() - mu2()) + g1 * ud1 * ud1 + g2 * ud2 * ud2;
        r.regular_part = H3(W, W) + H(wd2, wd2);
        r.total = r.mass + r.cross_part + r.singular_part + r.regular_part;
        return r;
    }

    // <a, b>_0 on H^2 parts
    double h0(const Vec& wa, double a1, double a2, const Vec& wb, double b1, double b2) const {
        return H(wa, wb) + par.gamma1 * a1 * b1 + par.gamma2 * a2 * b2;
    }
};

inline double inner_h0(const VCoords& f, const VCoords& g, const ExtensionParams& p) {
    p.check();
    if (!f.psi_r.same_grid(g.psi_r)) throw usage_error("inner_h0: grid mismatch");
    Discretization d(p, f.psi_r.L, f.psi_r.n);
    U3 uf, ug;
    Vec wf = d.h2_part(f, &uf), wg = d.h2_part(g, &ug);
    return d.h0(wf, uf.u1, uf.u2, wg, ug.u1, ug.u2);
}

inline EnergyReport energy_full(const VCoords& f, const VCoords& g, const ExtensionParams& p, double m) {
    p.check();
    if (m < 0) throw usage_error("energy_full: m must be >= 0");
    if (!f.psi_r.same_grid(g.psi_r)) throw usage_error("energy_full: grid mismatch");
    Discretization d(p, f.psi_r.L, f.psi_r.n);
    U3 uf, ug;
    Vec wf = d.h2_part(f, &uf), wg = d.h2_part(g, &ug);
    return d.energy(m, wf, uf.u0, uf.u1, uf.u2, wg, ug.u1, ug.u2);
}

// L^2(0,inf) expression on compactly supported data (no pi^3 factor)
inline double energy_compact(const RadialGridField& f, const RadialGridField& g, const ExtensionParams& p, double m) {
    p.check();
    if (!f.same_grid(g)) throw usage_error("energy_compact: grid mismatch");
    const double delta = 10 * f.h();
    double fmax = 0, gmax = 0;
    for (int i = 0; i < f.n; ++i) {
        fmax = std::max(fmax, std::abs(f.values[i]));
        gmax = std::max(gmax, std::abs(g.values[i]));
    }
    for (int i = 0; i < f.n; ++i) {
        double z = f.z(i);
        if (z < delta || z > f.L - delta)
            if (std::abs(f.values[i]) > 1e-14 * fmax || std::abs(g.values[i]) > 1e-14 * gmax)
                throw usage_error("energy_compact: support reaches the boundary");
    }
    const double s = p.mus.mu1 + p.mus.mu2, q = p.mus.mu1 * p.mus.mu2;
    auto nrm = [](const RadialGridField& a) { return l2_dot(a, a); };
    RadialGridField p1f = apply_p1(f), p2f = apply_p2(f), p1p2f = apply_p1(p2f);
    RadialGridField p1g = apply_p1(g), p2g = apply_p2(g);
    double ef = nrm(p1p2f) - s * nrm(p2f) + q * nrm(p1f) + m * m * (nrm(p2f) - s * nrm(p1f) + q * nrm(f));
    double eg = nrm(p2g) - s * nrm(p1g) + q * nrm(g);
    return ef + eg;
}

// smooth compact bump on [a, b], C^4 at the ends
inline double bump(double z, double a, double b) {
    if (z <= a || z >= b) return 0.0;
    double t = (z - a) / (b - a);
    return std::pow(4 * t * (1 - t), 5);
}

struct PositivityResult {
    double min_value = 0;       // min of E / scale
    bool all_nonnegative = true;
    int trials = 0;
    int negative_count = 0;
};

// random decomposed states: compact bumps plus random singular coefficients
inline PositivityResult positivity_sample(const ExtensionParams& p, double m, int trials, std::uint64_t seed = 1,
                                          double L = 24.0, int n = 2400) {
    if (trials < 1) throw usage_error("positivity_sample: trials >= 1");
    Discretization d(p, L, n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    PositivityResult res;
    res.trials = trials;
    res.min_value = INFINITY;
    const auto& z = d.grid.z();
    // reference sizes so random coefficients are comparable
    double sPhi = std::sqrt(std::abs(d.N));
    double sphi = std::sqrt(d.H(d.prof.phi1, d.prof.phi1));
    for (int t = 0; t < trials; ++t) {
        Vec w(n, 0.0), wd(n, 0.0);
        for (int k = 0; k < 2; ++k) {
            double a = 0.5 + U(rng) * (L / 2 - 2), wdt = 0.5 + 1.5 * U(rng);
            double c1 = N01(rng), c2 = N01(rng);
            for (int i = 0; i < n; ++i) {
                double b = bump(z[i], a, a + wdt);
                w[i] += c1 * b;
                wd[i] += c2 * b;
            }
        }
        double sb = std::sqrt(std::max(d.H(w, w), 1e-300));
        double u0 = N01(rng) * sb / sPhi, u1 = N01(rng) * sb / sphi, u2 = N01(rng) * sb / sphi;
        double ud1 = N01(rng) * sb / sphi, ud2 = N01(rng) * sb / sphi;
        Vec w2 = w;
        for (int i = 0; i < n; ++i) w2[i] += u0 * d.prof.Phi[i];
        EnergyReport e = d.energy(m, w2, u0, u1, u2, wd, ud1, ud2);
        double scale = std::abs(e.mass) + std::abs(e.cross_part) + std::abs(e.singular_part) + std::abs(e.regular_part);
        double v = e.total / scale;
        res.min_value = std::min(res.min_value, v);
        if (v < -1e-10) {
            res.all_nonnegative = false;
            ++res.negative_count;
        }
    }
    return res;
}

}  // namespace adsdyn
