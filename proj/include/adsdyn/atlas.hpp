#pragma once
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "profiles.hpp"

namespace adsdyn {

struct BoundaryTriple {
    double a0 = 0, a1 = 0, a2 = 0;
};

struct ExtensionParams {
    MuTriple mus;
    double gamma1 = 0, gamma2 = 0, lambda0 = 0;

    void check() const {
        mus.check();
        if (!(gamma1 > 0 && gamma2 > 0) || !std::isfinite(lambda0))
            throw domain_error("ExtensionParams: need gamma1, gamma2 > 0 and finite lambda0");
    }
};

enum class Branch { neg_a2, zero_a2, pos_a2_window, inadmissible };
enum class Positivity { empty_point_spectrum, graviton_only, indefinite };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::neg_a2: return "neg_a2";
        case Branch::zero_a2: return "zero_a2";
        case Branch::pos_a2_window: return "pos_a2_window";
        default: return "inadmissible";
    }
}
inline const char* to_string(Positivity p) {
    switch (p) {
        case Positivity::empty_point_spectrum: return "empty_point_spectrum";
        case Positivity::graviton_only: return "graviton_only";
        default: return "indefinite";
    }
}

struct AlphaClass {
    bool admissible = false;
    Branch branch = Branch::inadmissible;
    Positivity positivity = Positivity::indefinite;
};

inline constexpr double kTieTol = 1e-12;

// a0 + a1/s - a2/s^2 + log|s|/2 with s = a1 +/- sqrt(a1^2 - 4 a2)
inline double zin_value(const BoundaryTriple& a, double sgn = +1.0) {
    double disc = a.a1 * a.a1 - 4 * a.a2;
    if (disc < 0) return std::numeric_limits<double>::quiet_NaN();
    double s = a.a1 + sgn * std::sqrt(disc);
    return a.a0 + a.a1 / s - a.a2 / (s * s) + 0.5 * std::log(std::abs(s));
}

inline constexpr double kZinBound = 0.75 - kEulerGamma;
inline const double kSpevoLow = -0.5 - 1.5 * std::log(2.0);
inline const double kSpevoHigh = 0.25 - 0.5 * std::log(2.0) - kEulerGamma;

inline AlphaClass is_admissible(const BoundaryTriple& a) {
    AlphaClass c;
    double disc = a.a1 * a.a1 - 4 * a.a2;
    if (disc < 0) return c;
    double z = zin_value(a, +1);
    if (!(std::isfinite(z) && z < kZinBound - kTieTol)) return c;
    if (a.a2 < 0) {
        c.branch = Branch::neg_a2;
    } else if (a.a2 == 0 && a.a1 > 0) {
        c.branch = Branch::zero_a2;
    } else if (a.a1 > 0 && a.a2 > 0 && 4 * a.a2 < a.a1 * a.a1) {
        double zb = zin_value(a, -1);
        if (std::isfinite(zb) && zb > kZinBound + kTieTol) c.branch = Branch::pos_a2_window;
    }
    if (c.branch == Branch::inadmissible) return c;
    c.admissible = true;
    if (a.a2 < 0 && z > -std::log(2.0) && z < kZinBound)
        c.positivity = Positivity::empty_point_spectrum;
    else if (a.a2 == 0 && a.a1 > 0) {
        double s = a.a0 + 0.5 * std::log(a.a1);
        if (s > kSpevoLow && s < kSpevoHigh) c.positivity = Positivity::graviton_only;
    }
    return c;
}

inline double g_alpha(const BoundaryTriple& a, double mu) {
    check_mu(mu);
    return a.a0 / 4 - a.a1 / mu - 4 * a.a2 / (mu * mu) + std::log(-mu) / 8 - std::log(2.0) / 4 - 3.0 / 16 +
           kEulerGamma / 4;
}

inline double g_alpha_prime(const BoundaryTriple& a, double mu) {
    return (mu * mu / 8 + a.a1 * mu + 8 * a.a2) / (mu * mu * mu);
}

// root mu* < 0 of G_alpha with G' > 0, if any
inline std::optional<double> qualifying_root(const BoundaryTriple& a) {
    double disc = a.a1 * a.a1 - 4 * a.a2;
    if (disc < 0) return std::nullopt;
    double lo = 4 * (-a.a1 - std::sqrt(disc));  // G increasing on (lo, hi)
    double hi = 4 * (-a.a1 + std::sqrt(disc));
    if (!(lo < 0)) return std::nullopt;
    if (hi > 0) hi = 0;
    if (!(lo < hi)) return std::nullopt;
    // move slightly inside; expand toward 0 when hi == 0
    double ga = g_alpha(a, lo);
    if (!(ga < 0)) return std::nullopt;
    double b;
    if (hi == 0) {
        b = lo / 2;
        int it = 0;
        while (g_alpha(a, b) <= 0 && it++ < 2000) b /= 2;
        if (g_alpha(a, b) <= 0) return std::nullopt;
    } else {
        b = hi;
        if (!(g_alpha(a, b) > 0)) return std::nullopt;
    }
    double x0 = lo, x1 = b;  // G(x0) < 0 < G(x1)
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (x0 + x1);
        if (mid == x0 || mid == x1) break;
        if (g_alpha(a, mid) < 0) x0 = mid; else x1 = mid;
    }
    return 0.5 * (x0 + x1);
}

inline ExtensionParams find_extension_params(const BoundaryTriple& a, double spread = 0.1) {
    if (!(spread > 0 && spread < 1)) throw usage_error("find_extension_params: spread must lie in (0,1)");
    auto r = qualifying_root(a);
    if (!r) throw domain_error("find_extension_params: alpha is not admissible (no root with G' > 0)");
    double mu = *r;
    ExtensionParams p;
    double s = spread;
    for (int k = 0; k <= 40; ++k) {
        double m1 = mu * (1 + s), m2 = mu * (1 - s);
        double g1 = (m1 - m2) * m1 * m1 * g_alpha(a, m1) / (16 * kPi3);
        double g2 = (m2 - m1) * m2 * m2 * g_alpha(a, m2) / (16 * kPi3);
        if (g1 > 0 && g2 > 0) {
            p.mus = {0.5 * (m1 + m2), m1, m2};
            p.gamma1 = g1;
            p.gamma2 = g2;
            p.lambda0 = g0_at_zero(p.mus) + a.a0 / (32 * kPi3);
            return p;
        }
        s *= 0.5;
    }
    throw domain_error("find_extension_params: could not make gamma1, gamma2 positive");
}

inline BoundaryTriple alpha_from_params(const ExtensionParams& p) {
    p.check();
    const double m1 = p.mus.mu1, m2 = p.mus.mu2, g1 = p.gamma1, g2 = p.gamma2;
    const double d = p.lambda0 - g0_at_zero(p.mus);
    const double L1 = std::log(-m1), L2 = std::log(-m2);
    const double c = std::log(2.0) / 4 + 3.0 / 16 - kEulerGamma / 4;  // = 2 F(0)
    BoundaryTriple a;
    a.a0 = 32 * kPi3 * d;
    a.a1 = (m1 + m2) * (8 * kPi3 * d - c) + (m1 * m1 * L1 - m2 * m2 * L2) / (8 * (m1 - m2)) -
           16 * kPi3 * (g1 + g2) / ((m1 - m2) * (m1 - m2));
    // gamma term with the indices crossed; the other ordering does not invert the map
    a.a2 = -2 * kPi3 * m1 * m2 * d + m1 * m2 * (kF0 / 2 - (m1 * L1 - m2 * L2) / (32 * (m1 - m2))) +
           4 * kPi3 * (m2 * g1 + m1 * g2) / ((m1 - m2) * (m1 - m2));
    return a;
}

// the alpha2 formula with the gamma term exactly as printed
inline double alpha2_as_printed(const ExtensionParams& p) {
    const double m1 = p.mus.mu1, m2 = p.mus.mu2;
    BoundaryTriple a = alpha_from_params(p);
    return a.a2 - 4 * kPi3 * (m2 * p.gamma1 + m1 * p.gamma2) / ((m1 - m2) * (m1 - m2)) +
           4 * kPi3 * (m1 * p.gamma1 + m2 * p.gamma2) / ((m1 - m2) * (m1 - m2));
}

// lambda0 compensation when mu0 changes
inline ExtensionParams change_mu0(const ExtensionParams& p, double mu0_new) {
    ExtensionParams q = p;
    q.mus.mu0 = mu0_new;
    q.mus.check();
    q.lambda0 = p.lambda0 + g0_at_zero(q.mus) - g0_at_zero(p.mus);
    return q;
}

enum class Variant { printed, shifted };
inline const char* to_string(Variant v) { return v == Variant::printed ? "printed" : "shifted"; }

inline bool sigma0_contains(const BoundaryTriple& a, bool positivity_window = false) {
    if (!(a.a2 == 0 && a.a1 > 0)) return false;
    double s = a.a0 + 0.5 * std::log(a.a1);
    if (!(s < kSpevoHigh)) return false;
    if (positivity_window && !(s > kSpevoLow)) return false;
    return true;
}

// residual of the Sigma(m) identity; zero on the set
inline double sigma_m_residual(const BoundaryTriple& a, double m, Variant v) {
    if (!(m > 0)) throw usage_error("sigma_m: m must be positive");
    double m2 = m * m;
    if (v == Variant::printed) return m2 * a.a0 + a.a1 / 2 - 2 * a.a2 / m2 - m2 * (kF0 - std::log(m));
    return m2 * a.a0 / 8 + a.a1 / 2 - 2 * a.a2 / m2 - m2 * (kF0 - std::log(m) / 8);
}

inline bool sigma_m_contains(const BoundaryTriple& a, double m, Variant v, double tol = 1e-10) {
    return is_admissible(a).admissible && std::abs(sigma_m_residual(a, m, v)) <= tol * (1 + std::abs(a.a0) * m * m);
}

// alpha0 that puts (., a1, a2) on Sigma(m)
inline double sigma_m_alpha0(double a1, double a2, double m, Variant v) {
    double m2 = m * m;
    if (v == Variant::printed) return (m2 * (kF0 - std::log(m)) - a1 / 2 + 2 * a2 / m2) / m2;
    return 8 * (m2 * (kF0 - std::log(m) / 8) - a1 / 2 + 2 * a2 / m2) / m2;
}

inline bool theta_zero_case(const BoundaryTriple& a) {
    return a.a0 == 1 && a.a1 < 0 && -a.a1 * a.a1 < 4 * a.a2 && 4 * a.a2 < 0;
}

}  // namespace adsdyn
