#include <cmath>
#include <random>

#include "doctest.h"
#include "reslab/error.hpp"
#include "reslab/extrapolation.hpp"
#include "reslab/quadrature.hpp"
#include "reslab/special.hpp"

using namespace reslab;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    for (int m : {1, 2, 5, 16, 40}) {
        const auto& g = gauss_legendre(m);
        for (int d = 0; d <= 2 * m - 1; ++d) {
            double s = 0;
            for (int i = 0; i < m; ++i) s += g.w[i] * std::pow(g.x[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-14).scale(1));
        }
    }
}

TEST_CASE("sphere rules integrate polynomial moments") {
    // int_{S^{n-1}} xi_0^2 = area/n ; int xi_0^2 xi_1^2 = area/(n(n+2))
    for (int n : {2, 3, 4}) {
        const auto r = sphere_rule_uniform(n, 24);
        double a = 0, m2 = 0, m22 = 0, m4 = 0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            const auto& p = r.nodes[i];
            a += r.weights[i];
            m2 += r.weights[i] * p[0] * p[0];
            m22 += r.weights[i] * p[0] * p[0] * p[n - 1] * p[n - 1];
            m4 += r.weights[i] * std::pow(p[n - 1], 4);
        }
        const double A = sphere_area(n);
        CHECK(a == doctest::Approx(A).epsilon(1e-13));
        CHECK(m2 == doctest::Approx(A / n).epsilon(1e-13));
        CHECK(m22 == doctest::Approx(A / (n * (n + 2))).epsilon(1e-13));
        CHECK(m4 == doctest::Approx(3 * A / (n * (n + 2))).epsilon(1e-13));
    }
}

TEST_CASE("Neville extrapolation recovers polynomial limits") {
    std::vector<double> h;
    std::vector<std::complex<double>> f;
    for (int j = 0; j < 5; ++j) {
        const double e = 0.5 * std::pow(0.5, j);
        h.push_back(e);
        f.push_back(std::complex<double>(2, 1) + 3.0 * e - 7.0 * e * e * e);
    }
    const auto r = extrapolate_to_zero(h, f);
    CHECK(std::abs(r.value - std::complex<double>(2, 1)) < 1e-13);
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
    std::vector<std::complex<double>> s;
    double sum = 0;
    for (int k = 0; k < 15; ++k) {
        sum += (k % 2 ? -1.0 : 1.0) / (k + 1);
        s.push_back(sum);
    }
    CHECK(std::abs(wynn_epsilon(s).value - std::log(2.0)) < 1e-10);
}

TEST_CASE("complex gamma agrees with the real gamma function") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-6.5, 8.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        if (std::abs(x - std::round(x)) < 1e-3 && x < 0.5) continue;
        CHECK(complex_gamma(x).real() == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
        CHECK(rgamma(x).real() * std::tgamma(x) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(rgamma(-3.0) == cplx(0));
    CHECK(rgamma(0.0) == cplx(0));
    CHECK_THROWS_AS(complex_gamma(-2.0), PoleError);
    // Gamma(1/2 + i) |.|^2 = pi / cosh(pi)
    CHECK(std::norm(complex_gamma(cplx(0.5, 1.0))) == doctest::Approx(M_PI / std::cosh(M_PI)).epsilon(1e-13));
    // recurrence off the real axis
    const cplx z(-2.3, 0.7);
    CHECK(std::abs(complex_gamma(z + 1.0) - z * complex_gamma(z)) < 1e-13 * std::abs(complex_gamma(z + 1.0)));
}

TEST_CASE("Bessel K series matches the standard library and an integral oracle") {
    for (int n : {0, 1, 2, 3})
        for (double x : {0.05, 0.4, 1.0, 3.0, 6.0})
            CHECK(bessel_k(n, x).real() == doctest::Approx(std::cyl_bessel_k(n, x)).epsilon(1e-11));
    // K_n(w) = int_0^inf exp(-w cosh t) cosh(n t) dt, Re w > 0
    for (int n : {0, 1, 2})
        for (cplx w : {cplx(0.3, 0.2), cplx(0.7, -0.6), cplx(1.5, 1.4)}) {
            const auto rule = composite({0, 1, 2, 3, 4, 5, 6, 8}, 30);
            cplx s = 0;
            for (std::size_t i = 0; i < rule.x.size(); ++i)
                s += rule.w[i] * std::exp(-w * std::cosh(rule.x[i])) * std::cosh(n * rule.x[i]);
            CHECK(std::abs(bessel_k(n, w) - s) < 1e-11 * std::abs(s));
        }
}
