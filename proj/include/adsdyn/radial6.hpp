#pragma once
// Finite-volume radial Laplacian in six dimensions, acting on w = z^{-5/2} psi.
// Cells (i*h, (i+1)*h), centres z_i = (i+1/2) h.
#include <cmath>
#include <vector>

#include "profiles.hpp"

namespace adsdyn {

using Vec = std::vector<double>;

enum class OuterBC { Dirichlet, Harmonic };

inline double smoothstep9(double s) {
    if (s <= 0) return 0.0;
    if (s >= 1) return 1.0;
    double s2 = s * s, s5 = s2 * s2 * s;
    return s5 * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + 70.0 * s))));
}

class Radial6 {
public:
    Radial6(double L, int n, OuterBC bc = OuterBC::Harmonic) : L_(L), n_(n), bc_(bc) {
        if (n < 4 || !(L > 0)) throw usage_error("Radial6: need n >= 4 and L > 0");
        h_ = L / n;
        z_.resize(n);
        V_.resize(n);
        k_.assign(n + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            z_[i] = (i + 0.5) * h_;
            double a = i * h_, b = (i + 1) * h_;
            V_[i] = (std::pow(b, 6) - std::pow(a, 6)) / 6.0;
        }
        for (int i = 1; i <= n; ++i) k_[i] = std::pow(i * h_, 5) / h_;
        double zg = (n + 0.5) * h_;
        ratio_ = bc == OuterBC::Harmonic ? std::pow(z_[n - 1] / zg, 4) : 0.0;
    }

    int n() const { return n_; }
    double L() const { return L_; }
    double h() const { return h_; }
    OuterBC bc() const { return bc_; }
    const Vec& z() const { return z_; }
    const Vec& V() const { return V_; }

    // out = S w
    void S(const double* w, double* out) const {
        const int n = n_;
        double fl_left = 0.0;
        for (int i = 0; i < n; ++i) {
            double wr = (i + 1 < n) ? w[i + 1] : ratio_ * w[n - 1];
            double fl_right = k_[i + 1] * (wr - w[i]);
            out[i] = -(fl_right - fl_left) / V_[i];
            fl_left = fl_right;
        }
    }
    Vec S(const Vec& w) const {
        Vec o(n_);
        S(w.data(), o.data());
        return o;
    }
    Vec B(double mu, const Vec& w) const {
        Vec o = S(w);
        for (int i = 0; i < n_; ++i) o[i] -= mu * w[i];
        return o;
    }
    double ip(const Vec& a, const Vec& b) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += V_[i] * a[i] * b[i];
        return kPi3 * s;
    }
    double norm2(const Vec& a) const { return ip(a, a); }

    // (S - mu) x = rhs
    Vec solve(double mu, const Vec& rhs) const {
        const int n = n_;
        Vec d(n), lo(n, 0.0), up(n, 0.0), r(n);
        for (int i = 0; i < n; ++i) {
            d[i] = k_[i] + k_[i + 1] - mu * V_[i];
            if (i == n - 1) d[i] -= k_[n] * ratio_;
            if (i > 0) lo[i] = -k_[i];
            if (i + 1 < n) up[i] = -k_[i + 1];
            r[i] = rhs[i] * V_[i];
        }
        for (int i = 1; i < n; ++i) {
            if (d[i - 1] == 0.0) throw numeric_error("Radial6::solve: singular matrix");
            double m = lo[i] / d[i - 1];
            d[i] -= m * up[i - 1];
            r[i] -= m * r[i - 1];
        }
        if (d[n - 1] == 0.0) throw numeric_error("Radial6::solve: singular matrix");
        Vec x(n);
        x[n - 1] = r[n - 1] / d[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = (r[i] - up[i] * x[i + 1]) / d[i];
        return x;
    }

    // value at the origin, quadratic in z^2
    double at_origin(const Vec& w) const { return (9.0 * w[0] - w[1]) / 8.0; }

    // coefficient c of a harmonic tail c z^-4 beyond L
    double tail(const Vec& w) const { return bc_ == OuterBC::Harmonic ? w[n_ - 1] * std::pow(z_[n_ - 1], 4) : 0.0; }

    // contributions of c z^-4 on (L, inf)
    double tail_l2(double ca, double cb) const { return kPi3 * ca * cb / (2.0 * L_ * L_); }
    double tail_grad(double ca, double cb) const { return 4.0 * kPi3 * ca * cb / std::pow(L_, 4); }

    // pi^3 <(S-mu1)a, (S-mu2)b> including the harmonic tail
    double hform(const Vec& a, const Vec& b, double mu1, double mu2) const {
        return ip(B(mu1, a), B(mu2, b)) + mu1 * mu2 * tail_l2(tail(a), tail(b));
    }

private:
    double L_, h_;
    int n_;
    OuterBC bc_;
    double ratio_;
    Vec z_, V_, k_;
};

// Sampled singular profiles on a Radial6 grid. Analytic, multiplied by an outer taper.
struct ProfileSet {
    MuTriple mus;
    Vec tau;                  // outer taper
    Vec Phi, phi1, phi2;      // tapered 6D profiles
    Vec Phi_reg, r1, r2;      // parts regular at 0 (untapered)
    static constexpr double kSplit = 0.5;  // below: regular-remainder formulas

    ProfileSet() = default;
    ProfileSet(const Radial6& g, const MuTriple& m, double taper_width = -1) : mus(m) {
        m.check();
        const int n = g.n();
        const double L = g.L();
        double D = taper_width > 0 ? taper_width : L / 8.0;
        tau.resize(n);
        Phi.resize(n);
        phi1.resize(n);
        phi2.resize(n);
        Phi_reg.resize(n);
        r1.resize(n);
        r2.resize(n);
        auto c = phi0_weights(m);
        for (int i = 0; i < n; ++i) {
            double z = g.z()[i];
            tau[i] = 1.0 - smoothstep9((z - (L - D)) / D);
            Phi_reg[i] = Phi6_regular(m, z);
            r1[i] = phi6_regular(m.mu1, z);
            r2[i] = phi6_regular(m.mu2, z);
            double P, p1, p2;
            if (z < kSplit) {
                P = std::log(z) / (32.0 * kPi3) + Phi_reg[i];
                p1 = phi6(m.mu1, z);
                p2 = phi6(m.mu2, z);
            } else {
                double q0 = phi_j_radial(m.mu0, z), q1 = phi_j_radial(m.mu1, z), q2 = phi_j_radial(m.mu2, z);
                double s = std::pow(z, -2.5);
                P = s * (c[0] * q0 + c[1] * q1 + c[2] * q2);
                p1 = s * q1;
                p2 = s * q2;
            }
            Phi[i] = tau[i] * P;
            phi1[i] = tau[i] * p1;
            phi2[i] = tau[i] * p2;
        }
    }
};

}  // namespace adsdyn
