#include "doctest.h"

#include "adsdyn/spectrum.hpp"
#include "alpha_gen.hpp"

using namespace adsdyn;

namespace {
// grid fine enough that h * lambda stays small
double residual_for(double x) {
    double lam = std::sqrt(x);
    double L = std::max(2.0, 20.0 / lam);
    int n = (int)std::ceil(L * std::max(1000.0, 200.0 * lam));
    return eigen_residual(lam, L, n);
}
}  // namespace

TEST_CASE("h function value") {
    CHECK(h_function({-3, 0, -1}, 8, Variant::printed) == doctest::Approx(-3.4206).epsilon(1e-4));
    CHECK(h_function({-3, 0, -1}, 8, Variant::printed) - h_function({-3, 0, -1}, 8, Variant::shifted) ==
          doctest::Approx(16 * kF0).epsilon(1e-14));
    CHECK_THROWS_AS(h_function({0, 0, 0}, 0, Variant::printed), domain_error);
}

TEST_CASE("roots of (-3,0,-1)") {
    auto p = h_roots({-3, 0, -1}, Variant::printed);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == doctest::Approx(2.5099).epsilon(1e-4));
    CHECK(p[1] == doctest::Approx(403.349).epsilon(1e-5));
    auto s = h_roots({-3, 0, -1}, Variant::shifted);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(2.142719).epsilon(1e-6));
    CHECK(s[1] == doctest::Approx(2279.83).epsilon(1e-5));
    auto r = negative_eigenvalues({-3, 0, -1}, Variant::printed);
    CHECK(r.count == 2);
    CHECK(r.eigenvalues[0] == doctest::Approx(-2.5099).epsilon(1e-4));
    CHECK_FALSE(r.zero_mode);
}

TEST_CASE("root counts match a sign scan") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 60; ++k) {
        BoundaryTriple a = testgen::admissible(rng);
        for (Variant v : {Variant::printed, Variant::shifted}) {
            auto r = h_roots(a, v);
            int in = 0;
            for (double x : r)
                if (x > 1e-6 && x < 1e6) ++in;
            CHECK(in == h_sign_changes(a, v));
            for (double x : r) CHECK(std::abs(h_function(a, x, v)) <= 1e-9 * (1 + std::abs(std::log(x))));
        }
    }
}

TEST_CASE("eigenfunctions solve the radial equation") {
    for (double x : h_roots({-3, 0, -1}, Variant::shifted)) CHECK(residual_for(x) <= 1e-6);
    for (double x : h_roots({-1, 1, 0}, Variant::shifted)) CHECK(residual_for(x) <= 1e-6);
}

TEST_CASE("boundary functional vanishes on shifted roots only") {
    BoundaryTriple a{-3, 0, -1};
    double xs = h_roots(a, Variant::shifted)[0], xp = h_roots(a, Variant::printed)[0];
    CHECK(std::abs(eigenvalue_condition_oracle(a, std::sqrt(xs)).relative) <= 1e-4);
    CHECK(std::abs(eigenvalue_condition_oracle(a, std::sqrt(xp)).relative) > 1e-3);
    CHECK_THROWS_AS(eigenvalue_condition_oracle(a, 0.0), domain_error);
}

TEST_CASE("variant verdict") {
    auto probes = variant_probe_set();
    CHECK(probes.size() == 20);
    CHECK(default_variant() == Variant::shifted);
}

TEST_CASE("zero mode flag and errors") {
    CHECK(negative_eigenvalues({-1, 1, 0}, Variant::shifted).zero_mode);
    CHECK_THROWS_AS(negative_eigenvalues({5, 1, 0}, Variant::shifted), usage_error);
    auto e = eigenfunction(0.0, 4, 40);
    CHECK(e[0] == doctest::Approx(std::pow(0.05, -1.5)));
}
