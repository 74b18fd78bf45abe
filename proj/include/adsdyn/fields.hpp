#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <string>
#include <algorithm>
#include <functional>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "radial6.hpp"

namespace adsdyn {

struct RadialGridField {
    double L = 1.0;
    int n = 0;
    Vec values;

    RadialGridField() = default;
    RadialGridField(double L_, int n_) : L(L_), n(n_), values(n_, 0.0) {
        if (n_ < 1 || !(L_ > 0)) throw usage_error("RadialGridField: bad shape");
    }
    static RadialGridField sample(double L, int n, const std::function<double(double)>& f) {
        RadialGridField g(L, n);
        for (int i = 0; i < n; ++i) g.values[i] = f(g.z(i));
        return g;
    }
    double h() const { return L / n; }
    double z(int i) const { return (i + 0.5) * (L / n); }
    bool same_grid(const RadialGridField& o) const { return n == o.n && std::abs(L - o.L) <= 1e-12 * L; }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }
};

inline void write_csv(std::ostream& os, const RadialGridField& f) {
    os << "# L=" << f.L << " n=" << f.n << "\n";
    os.precision(17);
    for (int i = 0; i < f.n; ++i) os << f.z(i) << "," << f.values[i] << "\n";
}

// z,value lines; '# L= n=' header optional (otherwise inferred from the first z and the count)
inline RadialGridField read_csv(std::istream& is) {
    std::string line;
    double L = -1;
    int n = -1;
    std::vector<double> zs, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pl = line.find("L="), pn = line.find("n=");
            if (pl != std::string::npos) L = std::stod(line.substr(pl + 2));
            if (pn != std::string::npos) n = std::stoi(line.substr(pn + 2));
            continue;
        }
        auto c = line.find(',');
        if (c == std::string::npos) throw usage_error("read_csv: expected 'z,value' lines");
        try {
            zs.push_back(std::stod(line.substr(0, c)));
            vs.push_back(std::stod(line.substr(c + 1)));
        } catch (const std::exception&) {
            if (zs.empty() && vs.empty()) continue;  // column header
            throw usage_error("read_csv: bad number in '" + line + "'");
        }
    }
    if (vs.empty()) throw usage_error("read_csv: no data");
    if (n < 0) n = (int)vs.size();
    if (L < 0) L = 2.0 * zs[0] * n;
    if ((int)vs.size() != n) throw usage_error("read_csv: row count does not match header");
    RadialGridField f(L, n);
    for (int i = 0; i < n; ++i) {
        if (std::abs(zs[i] - f.z(i)) > 1e-9 * L) throw usage_error("read_csv: z column is not the cell-centred grid");
        f.values[i] = vs[i];
    }
    return f;
}

// chi = 1 on [0, rho], 0 beyond outer, C^4 in between
struct CutoffSpec {
    double rho = 1.0;
    double outer = 2.0;

    void check(double L) const {
        if (!(0 < rho && rho < outer && outer <= L * (1 + 1e-12)))
            throw usage_error("CutoffSpec: need 0 < rho < outer <= L");
    }
    static CutoffSpec defaults(double L) { return {L / 4.0, L / 2.0}; }
    double s(double z) const { return (z - rho) / (outer - rho); }
    double chi(double z) const { return 1.0 - smoothstep9(s(z)); }
    double dchi(double z) const {
        double t = s(z);
        if (t <= 0 || t >= 1) return 0.0;
        return -630.0 * std::pow(t * (1 - t), 4) / (outer - rho);
    }
    double d2chi(double z) const {
        double t = s(z);
        if (t <= 0 || t >= 1) return 0.0;
        double w = outer - rho;
        return -2520.0 * std::pow(t * (1 - t), 3) * (1 - 2 * t) / (w * w);
    }
};

// ---------- 1D operators, fourth order ----------

namespace detail {
inline double d2_at(const Vec& f, int i, double h) {
    const int n = (int)f.size();
    const double c = 1.0 / (12.0 * h * h);
    if (i >= 2 && i <= n - 3)
        return c * (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]);
    static const double e0[6] = {45, -154, 214, -156, 61, -10};
    static const double e1[6] = {10, -15, -4, 14, -6, 1};
    if (i == 0) { double s = 0; for (int k = 0; k < 6; ++k) s += e0[k] * f[k]; return c * s; }
    if (i == 1) { double s = 0; for (int k = 0; k < 6; ++k) s += e1[k] * f[k]; return c * s; }
    if (i == n - 1) { double s = 0; for (int k = 0; k < 6; ++k) s += e0[k] * f[n - 1 - k]; return c * s; }
    double s = 0;
    for (int k = 0; k < 6; ++k) s += e1[k] * f[n - 1 - k];
    return c * s;
}
inline double d1_at(const Vec& f, int i, double h) {
    const int n = (int)f.size();
    const double c = 1.0 / (12.0 * h);
    if (i >= 2 && i <= n - 3) return c * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
    static const double e0[5] = {-25, 48, -36, 16, -3};
    static const double e1[5] = {-3, -10, 18, -6, 1};
    if (i == 0) { double s = 0; for (int k = 0; k < 5; ++k) s += e0[k] * f[k]; return c * s; }
    if (i == 1) { double s = 0; for (int k = 0; k < 5; ++k) s += e1[k] * f[k]; return c * s; }
    if (i == n - 1) { double s = 0; for (int k = 0; k < 5; ++k) s += e0[k] * f[n - 1 - k]; return -c * s; }
    double s = 0;
    for (int k = 0; k < 5; ++k) s += e1[k] * f[n - 1 - k];
    return -c * s;
}
}  // namespace detail

// P1 = d/dz - 5/(2z)
inline RadialGridField apply_p1(const RadialGridField& f) {
    if (f.n < 6) throw usage_error("apply_p1: need n >= 6");
    RadialGridField o(f.L, f.n);
    for (int i = 0; i < f.n; ++i) o.values[i] = detail::d1_at(f.values, i, f.h()) - 2.5 / f.z(i) * f.values[i];
    return o;
}

// adjoint: -d/dz - 5/(2z)
inline RadialGridField apply_p1_adjoint(const RadialGridField& f) {
    if (f.n < 6) throw usage_error("apply_p1_adjoint: need n >= 6");
    RadialGridField o(f.L, f.n);
    for (int i = 0; i < f.n; ++i) o.values[i] = -detail::d1_at(f.values, i, f.h()) - 2.5 / f.z(i) * f.values[i];
    return o;
}

// P2 = -d^2/dz^2 + 15/(4 z^2)
inline RadialGridField apply_p2(const RadialGridField& f) {
    if (f.n < 6) throw usage_error("apply_p2: need n >= 6");
    RadialGridField o(f.L, f.n);
    for (int i = 0; i < f.n; ++i) {
        double z = f.z(i);
        o.values[i] = -detail::d2_at(f.values, i, f.h()) + 3.75 / (z * z) * f.values[i];
    }
    return o;
}

// trapezoid on the cell-centred samples (ends treated as interior points)
inline double l2_dot(const RadialGridField& a, const RadialGridField& b) {
    if (!a.same_grid(b)) throw usage_error("l2_dot: grid mismatch");
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a.values[i] * b.values[i];
    return s * a.h();
}

// ---------- singular coordinates ----------

struct VCoords {
    double v_m1 = 0, v0 = 0, v1 = 0, v2 = 0;
    RadialGridField psi_r;
    CutoffSpec chi;
    double singular_charge() const { return -4.0 * kPi3 * v2; }
};

inline double singular_part(double z, double vm1, double v0, double v1, double v2) {
    double s = std::sqrt(z);
    return v2 / (z * s) + v1 * s + v0 * z * z * s * std::log(z) + vm1 * z * z * s;
}

// psi = chi * singular + psi_r
inline RadialGridField synthesize(const VCoords& v) {
    RadialGridField f = v.psi_r;
    for (int i = 0; i < f.n; ++i) {
        double z = f.z(i);
        f.values[i] += v.chi.chi(z) * singular_part(z, v.v_m1, v.v0, v.v1, v.v2);
    }
    return f;
}

struct FitWindow {
    double lo = 0, hi = 0;
};

inline FitWindow default_window(const RadialGridField& f, const CutoffSpec& chi) {
    double lo = 40.0 * f.h();
    return {lo, std::min(chi.rho / 2.0, 15.0 * lo)};
}

// weighted least squares on {z^-3/2, z^1/2, z^5/2 log z, z^5/2} plus z^9/2, z^13/2 (with logs) nuisance terms
inline VCoords extract_vcoords(const RadialGridField& f, const CutoffSpec& chi, FitWindow win) {
    chi.check(f.L);
    if (!(win.lo > 0 && win.lo < win.hi)) throw usage_error("extract_vcoords: bad window");
    if (win.hi > chi.rho * (1 + 1e-12)) throw usage_error("extract_vcoords: window outside the cutoff plateau");
    std::vector<int> idx;
    for (int i = 0; i < f.n; ++i)
        if (f.z(i) >= win.lo && f.z(i) <= win.hi) idx.push_back(i);
    if (idx.size() < 20) throw usage_error("extract_vcoords: window holds fewer than 20 points");
    const int m = (int)idx.size(), k = 8;
    Eigen::MatrixXd A(m, k);
    Eigen::VectorXd b(m);
    // logs taken relative to the window centre, undone below
    const double lref = 0.5 * (std::log(f.z(idx.front())) + std::log(f.z(idx.back())));
    for (int r = 0; r < m; ++r) {
        double z = f.z(idx[r]);
        double w = z * std::sqrt(z);  // weight z^3 on squared residuals
        double s = std::sqrt(z), lz = std::log(z) - lref;
        A(r, 0) = w / (z * s);
        A(r, 1) = w * s;
        A(r, 2) = w * z * z * s * lz;
        A(r, 3) = w * z * z * s;
        A(r, 4) = w * std::pow(z, 4.5) * lz;
        A(r, 5) = w * std::pow(z, 4.5);
        A(r, 6) = w * std::pow(z, 6.5) * lz;
        A(r, 7) = w * std::pow(z, 6.5);
        b(r) = w * f.values[idx[r]];
    }
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (int c = 0; c < k; ++c) A.col(c) /= scale(c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto sv = svd.singularValues();
    double cond = sv(0) / sv(k - 1);
    if (!(cond * cond <= 1e12)) throw fit_error("extract_vcoords: ill-conditioned fit");
    Eigen::VectorXd x = svd.solve(b);
    for (int c = 0; c < k; ++c) x(c) /= scale(c);
    x(3) -= x(2) * lref;
    VCoords v;
    v.v2 = x(0);
    v.v1 = x(1);
    v.v0 = x(2);
    v.v_m1 = x(3);
    v.chi = chi;
    v.psi_r = f;
    for (int i = 0; i < f.n; ++i) {
        double z = f.z(i);
        v.psi_r.values[i] -= chi.chi(z) * singular_part(z, v.v_m1, v.v0, v.v1, v.v2);
    }
    return v;
}

inline VCoords extract_vcoords(const RadialGridField& f, const CutoffSpec& chi) {
    return extract_vcoords(f, chi, default_window(f, chi));
}

// ---------- u coordinates ----------

struct UCoords {
    double u0 = 0, u1 = 0, u2 = 0;
    RadialGridField u_r;  // psi minus u0 Phi0 + u1 phi1 + u2 phi2 (the H^3 part), radial form
    double ur_at0 = std::numeric_limits<double>::quiet_NaN();  // limit z^-5/2 u_r at 0
};

struct U3 {
    double u0, u1, u2;
};

inline U3 v_to_u_scalars(double v0, double v1, double v2, const MuTriple& m) {
    const double m1 = m.mu1, m2 = m.mu2;
    U3 u;
    u.u0 = 32 * kPi3 * v0 + 8 * kPi3 * (m1 + m2) * v1 - 2 * kPi3 * m1 * m2 * v2;
    u.u1 = (16 * kPi3 * v1 - 4 * kPi3 * m2 * v2) / (m1 - m2);
    u.u2 = (16 * kPi3 * v1 - 4 * kPi3 * m1 * v2) / (m2 - m1);
    return u;
}

struct V3 {
    double v0, v1, v2;
};

inline V3 u_to_v_scalars(double u0, double u1, double u2, const MuTriple& m) {
    const double m1 = m.mu1, m2 = m.mu2;
    V3 v;
    v.v2 = (u1 + u2) / (4 * kPi3);
    v.v1 = (m1 * u1 + m2 * u2) / (16 * kPi3);
    v.v0 = (2 * u0 - m1 * m1 * u1 - m2 * m2 * u2) / (64 * kPi3);
    return v;
}

// 6D H^3 part of the field described by v on grid g
inline Vec regular_part6(const VCoords& v, const U3& u, const ProfileSet& P, const Radial6& g) {
    Vec w(g.n());
    for (int i = 0; i < g.n(); ++i) {
        double z = g.z()[i];
        double zm = std::pow(z, -2.5);
        if (z < ProfileSet::kSplit) {
            double c = v.chi.chi(z);
            double z2 = z * z;
            double sing = v.v2 / (z2 * z2) + v.v1 / z2 + v.v0 * std::log(z);
            w[i] = (c - 1.0) * sing + c * v.v_m1 + zm * v.psi_r.values[i] - u.u0 * P.Phi_reg[i] - u.u1 * P.r1[i] -
                   u.u2 * P.r2[i];
        } else {
            double full = zm * (v.psi_r.values[i] + v.chi.chi(z) * singular_part(z, v.v_m1, v.v0, v.v1, v.v2));
            w[i] = full - u.u0 * P.Phi[i] - u.u1 * P.phi1[i] - u.u2 * P.phi2[i];
        }
    }
    return w;
}

inline UCoords v_to_u(const VCoords& v, const MuTriple& m) {
    m.check();
    U3 u = v_to_u_scalars(v.v0, v.v1, v.v2, m);
    UCoords out;
    out.u0 = u.u0;
    out.u1 = u.u1;
    out.u2 = u.u2;
    out.ur_at0 = v.v_m1 - u.u0 * g0_at_zero(m) - u.u1 * f_j_at_zero(m.mu1) - u.u2 * f_j_at_zero(m.mu2);
    if (v.psi_r.n > 0) {
        Radial6 g(v.psi_r.L, v.psi_r.n);
        ProfileSet P(g, m);
        Vec w = regular_part6(v, u, P, g);
        out.u_r = RadialGridField(g.L(), g.n());
        for (int i = 0; i < g.n(); ++i) out.u_r.values[i] = std::pow(g.z()[i], 2.5) * w[i];
    }
    return out;
}

inline VCoords u_to_v(const UCoords& u, const MuTriple& m, const CutoffSpec* chi_in = nullptr) {
    m.check();
    V3 s = u_to_v_scalars(u.u0, u.u1, u.u2, m);
    VCoords v;
    v.v0 = s.v0;
    v.v1 = s.v1;
    v.v2 = s.v2;
    double U0 = u.ur_at0;
    Radial6* gp = nullptr;
    if (u.u_r.n > 0) {
        v.chi = chi_in ? *chi_in : CutoffSpec::defaults(u.u_r.L);
        Radial6 g(u.u_r.L, u.u_r.n);
        if (std::isnan(U0)) {
            Vec w(g.n());
            for (int i = 0; i < g.n(); ++i) w[i] = std::pow(g.z()[i], -2.5) * u.u_r.values[i];
            U0 = g.at_origin(w);
        }
        v.v_m1 = U0 + u.u0 * g0_at_zero(m) + u.u1 * f_j_at_zero(m.mu1) + u.u2 * f_j_at_zero(m.mu2);
        ProfileSet P(g, m);
        v.psi_r = RadialGridField(g.L(), g.n());
        for (int i = 0; i < g.n(); ++i) {
            double z = g.z()[i];
            double wr = std::pow(z, -2.5) * u.u_r.values[i];
            double c = v.chi.chi(z);
            double pr;
            if (z < ProfileSet::kSplit) {
                double z2 = z * z;
                double sing = v.v2 / (z2 * z2) + v.v1 / z2 + v.v0 * std::log(z);
                pr = wr - (c - 1.0) * sing - c * v.v_m1 + u.u0 * P.Phi_reg[i] + u.u1 * P.r1[i] + u.u2 * P.r2[i];
                pr *= std::pow(z, 2.5);
            } else {
                double full = wr + u.u0 * P.Phi[i] + u.u1 * P.phi1[i] + u.u2 * P.phi2[i];
                pr = std::pow(z, 2.5) * full - c * singular_part(z, v.v_m1, v.v0, v.v1, v.v2);
            }
            v.psi_r.values[i] = pr;
        }
    } else {
        if (std::isnan(U0)) U0 = 0.0;
        v.v_m1 = U0 + u.u0 * g0_at_zero(m) + u.u1 * f_j_at_zero(m.mu1) + u.u2 * f_j_at_zero(m.mu2);
        if (chi_in) v.chi = *chi_in;
    }
    (void)gp;
    return v;
}

// pi^3 * trapezoid of ((P2-mu1)a)((P2-mu2)b)
inline double h2_weighted_ip(const RadialGridField& a, const RadialGridField& b, double mu1, double mu2) {
    if (!a.same_grid(b)) throw usage_error("h2_weighted_ip: grid mismatch");
    RadialGridField pa = apply_p2(a), pb = apply_p2(b);
    for (int i = 0; i < a.n; ++i) {
        pa.values[i] -= mu1 * a.values[i];
        pb.values[i] -= mu2 * b.values[i];
    }
    return kPi3 * l2_dot(pa, pb);
}

// ((-Delta - mu0)^{-1} f)(0) for a radial field given in psi form
inline double resolvent_at_origin(const RadialGridField& f, double mu0) {
    check_mu(mu0);
    Radial6 g(f.L, f.n, OuterBC::Dirichlet);
    Vec rhs(f.n);
    for (int i = 0; i < f.n; ++i) rhs[i] = std::pow(g.z()[i], -2.5) * f.values[i];
    Vec w = g.solve(mu0, rhs);
    return g.at_origin(w);
}

}  // namespace adsdyn
