#pragma once
#include <array>
#include <cmath>

#include "specfun.hpp"

namespace adsdyn {

struct MuTriple {
    double mu0 = 0, mu1 = 0, mu2 = 0;

    bool valid() const {
        return mu0 < 0 && mu1 < 0 && mu2 < 0 && mu0 != mu1 && mu0 != mu2 && mu1 != mu2;
    }
    void check() const {
        if (!valid()) throw domain_error("MuTriple: need distinct strictly negative values");
    }
    std::array<double, 3> arr() const { return {mu0, mu1, mu2}; }
};

inline void check_mu(double mu) {
    if (!(mu < 0)) throw domain_error("mu must be strictly negative");
}

// psi(z) = -mu sqrt(z) K2(sqrt(-mu) z) / (8 pi^3)
inline double phi_j_radial(double mu, double z) {
    check_mu(mu);
    if (!(z > 0)) throw domain_error("z must be positive");
    return -mu * std::sqrt(z) * bessel_k2(std::sqrt(-mu) * z) / (8.0 * kPi3);
}

// weights c_j so that Phi = sum_j c_j * phi_j  (c_j = -2/prod_{k!=j}(mu_j - mu_k))
inline std::array<double, 3> phi0_weights(const MuTriple& m) {
    auto a = m.arr();
    std::array<double, 3> c{};
    for (int j = 0; j < 3; ++j) {
        double d = 1.0;
        for (int k = 0; k < 3; ++k)
            if (k != j) d *= a[j] - a[k];
        c[j] = -2.0 / d;
    }
    return c;
}

inline double phi0_radial(const MuTriple& m, double z) {
    m.check();
    const double m0 = m.mu0, m1 = m.mu1, m2 = m.mu2;
    auto K = [z](double mu) { return bessel_k2(std::sqrt(-mu) * z); };
    double s = m1 * K(m1) / ((m0 - m1) * (m1 - m2)) + m2 * K(m2) / ((m1 - m2) * (m2 - m0)) +
               m0 * K(m0) / ((m2 - m0) * (m0 - m1));
    return -std::sqrt(z) / (4.0 * kPi3) * s;
}

inline double f_j_at_zero(double mu) {
    check_mu(mu);
    return mu * mu / (256.0 * kPi3) * (32.0 * kF0 - 2.0 * std::log(-mu));
}

inline double g0_at_zero(const MuTriple& m) {
    m.check();
    const double m0 = m.mu0, m1 = m.mu1, m2 = m.mu2;
    double num = m1 * m1 * (m2 - m0) * std::log(-m1) + m2 * m2 * (m0 - m1) * std::log(-m2) +
                 m0 * m0 * (m1 - m2) * std::log(-m0);
    return -32.0 * kF0 / (128.0 * kPi3) - num / (64.0 * kPi3 * (m0 - m1) * (m1 - m2) * (m2 - m0));
}

// the printed closed form; equals (1/8) int rho^5/((rho^2-mu1)(rho^2-mu2)(rho^2-mu0)^2)
inline double phi0_h2_norm_sq(const MuTriple& m) {
    m.check();
    const double m0 = m.mu0, m1 = m.mu1, m2 = m.mu2;
    double t1 = m1 * m1 * std::log(-m1) / ((m2 - m1) * (m1 - m0) * (m1 - m0));
    double t2 = m2 * m2 * std::log(-m2) / ((m1 - m2) * (m2 - m0) * (m2 - m0));
    double t3 = (m1 * m0 * m0 + m2 * m0 * m0 - 2 * m0 * m1 * m2) * std::log(-m0) /
                ((m1 - m0) * (m1 - m0) * (m2 - m0) * (m2 - m0));
    double t4 = -m0 / ((m1 - m0) * (m2 - m0));
    return (t1 + t2 + t3 + t4) / 16.0;
}

// actual pi^3 <(P2-mu1)psi_Phi, (P2-mu2)psi_Phi> of the profile above
inline double phi0_true_h2_norm_sq(const MuTriple& m) { return phi0_h2_norm_sq(m) / (2.0 * kPi3); }

// ---- 6D forms (w = z^{-5/2} psi) with the singular parts split off ----

// phi6 - [z^-4/(4pi^3) + mu z^-2/(16pi^3) - mu^2 log z/(64pi^3)], regular at 0
inline double phi6_regular(double mu, double z) {
    double lam = std::sqrt(-mu);
    return -mu * mu * std::log(lam) / (64.0 * kPi3) - mu * k2_regular(lam * z) / (z * z * 8.0 * kPi3);
}

inline double phi6(double mu, double z) {
    double z2 = z * z;
    return phi6_regular(mu, z) + 1.0 / (z2 * z2 * 4.0 * kPi3) + mu / (z2 * 16.0 * kPi3) -
           mu * mu * std::log(z) / (64.0 * kPi3);
}

// Phi6 - log z/(32 pi^3)
inline double Phi6_regular(const MuTriple& m, double z) {
    auto c = phi0_weights(m);
    return c[0] * phi6_regular(m.mu0, z) + c[1] * phi6_regular(m.mu1, z) + c[2] * phi6_regular(m.mu2, z);
}

inline double Phi6(const MuTriple& m, double z) { return std::log(z) / (32.0 * kPi3) + Phi6_regular(m, z); }

}  // namespace adsdyn
