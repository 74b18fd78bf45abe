#pragma once
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace adsdyn {

inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPi3 = kPi * kPi * kPi;
// F(0) of the K2 decomposition
inline constexpr double kF0 = (4.0 * std::numbers::ln2 + 3.0 - 4.0 * kEulerGamma) / 32.0;

struct Constants {
    double euler_gamma;
    double pi_cubed;
    double funclam_shift;  // 16 F(0)
};

inline Constants constants() { return {kEulerGamma, kPi3, 16.0 * kF0}; }

namespace detail {

// psi(k+1) for integer k >= 0
inline double digamma_int(int k) {
    double s = -kEulerGamma;
    for (int j = 1; j <= k; ++j) s += 1.0 / j;
    return s;
}

inline double factorial(int k) {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

// ascending series of I_n, n = 0,1,2; optionally drop the first `skip` terms
inline double bessel_i_series(int n, double x, int skip = 0) {
    const double q = 0.25 * x * x;
    double t = std::pow(0.5 * x, n) / factorial(n);
    double s = 0.0;
    for (int k = 0; k < 2000; ++k) {
        if (k >= skip) s += t;
        t *= q / ((k + 1.0) * (k + 1.0 + n));
        if (k >= skip && t < 1e-17 * std::abs(s)) break;
    }
    return s;
}

// sum_k [psi(k+1)+psi(n+k+1)] q^k / (k!(n+k)!)
inline double k_series_tail(int n, double x) {
    const double q = 0.25 * x * x;
    double t = 1.0 / factorial(n);
    double p1 = digamma_int(0), p2 = digamma_int(n);
    double s = 0.0;
    for (int k = 0; k < 200; ++k) {
        double term = (p1 + p2) * t;
        s += term;
        if (k > 2 && std::abs(term) < 1e-18 * std::abs(s)) break;
        t *= q / ((k + 1.0) * (k + 1.0 + n));
        p1 += 1.0 / (k + 1);
        p2 += 1.0 / (k + 1 + n);
    }
    return s;
}

// K_n by the ascending series, n = 0,1,2
inline double bessel_k_series(int n, double x) {
    const double hx = 0.5 * x;
    double s = 0.0;
    for (int k = 0; k < n; ++k)
        s += 0.5 * ((k % 2) ? -1.0 : 1.0) * factorial(n - k - 1) / factorial(k) * std::pow(hx, 2 * k - n);
    double sgn = (n % 2) ? 1.0 : -1.0;  // (-1)^(n+1)
    s += sgn * std::log(hx) * bessel_i_series(n, x);
    s += ((n % 2) ? -0.5 : 0.5) * std::pow(hx, n) * k_series_tail(n, x);
    return s;
}

// Steed's continued fraction for K0, K1 (x >= 2)
inline void bessel_k01_cf(double x, double& k0, double& k1) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    h = a1 * h;
    k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

}  // namespace detail

inline constexpr double kK2Crossover = 2.0;

inline double bessel_k(int n, double x) {
    if (!(x > 0)) throw domain_error("bessel_k: x must be positive");
    if (n < 0 || n > 2) throw domain_error("bessel_k: order must be 0,1,2");
    if (x <= kK2Crossover) return detail::bessel_k_series(n, x);
    double k0, k1;
    detail::bessel_k01_cf(x, k0, k1);
    if (n == 0) return k0;
    if (n == 1) return k1;
    return k0 + 2.0 * k1 / x;
}

inline double bessel_k2(double x) { return bessel_k(2, x); }

inline double bessel_i(int n, double x) {
    if (!(x > 0)) throw domain_error("bessel_i: x must be positive");
    if (n < 0 || n > 2) throw domain_error("bessel_i: order must be 0,1,2");
    if (x < 600.0) return detail::bessel_i_series(n, x);
    // Hankel asymptotic; series would overflow
    double mu = 4.0 * n * n, t = 1.0, s = 1.0;
    for (int k = 1; k < 30; ++k) {
        t *= -(mu - (2 * k - 1) * (2 * k - 1)) / (k * 8.0 * x);
        s += t;
        if (std::abs(t) < 1e-17) break;
    }
    return std::exp(x) / std::sqrt(2 * kPi * x) * s;
}

enum class BesselKind { J2, Y2, I2 };

inline double bessel_family(BesselKind kind, double x) {
    if (!(x > 0)) throw domain_error("bessel_family: x must be positive");
    switch (kind) {
        case BesselKind::J2: return std::cyl_bessel_j(2.0, x);
        case BesselKind::Y2: return std::cyl_neumann(2.0, x);
        case BesselKind::I2: return bessel_i(2, x);
    }
    return 0.0;
}

// K2(z) = 2/z^2 - 1/2 - (z^2/8) log z + z^2 F(z^2) + z^4 G(z^2) log z
struct K2Decomposition {
    double z = 0;
    double leading = 1.0;  // coefficient of 2/z^2
    double half = 1.0;     // coefficient of -1/2
    double logcoef = 1.0;  // coefficient of -(z^2/8) log z
    double f_entire_at = 0;
    double g_entire_at = 0;

    double reassemble() const {
        double z2 = z * z;
        return leading * 2.0 / z2 - half * 0.5 - logcoef * z2 / 8.0 * std::log(z) + z2 * f_entire_at +
               z2 * z2 * g_entire_at * std::log(z);
    }
};

inline K2Decomposition k2_series(double x) {
    if (!(x > 0) || x > 1.0) throw range_error("k2_series: x outside (0,1]");
    K2Decomposition d;
    d.z = x;
    const double x2 = x * x;
    const double q = 0.25 * x2;
    // I2 - x^2/8 without cancellation
    double i2rest = detail::bessel_i_series(2, x, 1);
    double i2 = x2 / 8.0 + i2rest;
    d.g_entire_at = -i2rest / (x2 * x2);
    // F(x^2) = [log2 I2 + q/2 * tail]/x^2; divide the q factor out analytically
    d.f_entire_at = std::numbers::ln2 * i2 / x2 + 0.125 * detail::k_series_tail(2, x);
    (void)q;
    return d;
}

// E(x) = K2(x) - 2/x^2 + 1/2 + (x^2/8) log x, smooth at 0
inline double k2_regular(double x) {
    if (!(x > 0)) throw domain_error("k2_regular: x must be positive");
    if (x < 2.0) {
        const double x2 = x * x;
        double i2rest = detail::bessel_i_series(2, x, 1);
        return -std::log(0.5 * x) * i2rest + x2 / 8.0 * std::numbers::ln2 +
               0.125 * x2 * detail::k_series_tail(2, x);
    }
    return bessel_k2(x) - 2.0 / (x * x) + 0.5 + x * x / 8.0 * std::log(x);
}

}  // namespace adsdyn
