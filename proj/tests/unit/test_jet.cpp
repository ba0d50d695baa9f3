#include <cmath>
#include <complex>

#include "doctest.h"
#include "reslab/expr.hpp"
#include "reslab/jet.hpp"

using namespace reslab;

namespace {

Jet<double> eval_jet(const char* src, std::vector<double> x, int order) {
    const int n = static_cast<int>(x.size());
    const JetLayout& L = JetLayout::get(n, order);
    std::vector<Jet<double>> v;
    for (int i = 0; i < n; ++i) v.push_back(Jet<double>::variable(L, i, x[i]));
    return evaluate<Jet<double>>(*parse_expression(src, n), v);
}

}  // namespace

TEST_CASE("layout sizes match binomial counts") {
    CHECK(JetLayout::get(4, 4).size == 70);
    CHECK(JetLayout::get(2, 3).size == 10);
    CHECK(JetLayout::get(1, 4).size == 5);
    CHECK(JetLayout::get(3, 0).size == 1);
}

TEST_CASE("jet partials of exp(x0*x1) match closed forms") {
    const double a = 0.3, b = -0.7;
    const auto j = eval_jet("exp(x0*x1)", {a, b}, 4);
    const double e = std::exp(a * b);
    CHECK(j.value() == doctest::Approx(e).epsilon(1e-15));
    CHECK(j.partial({1, 0}) == doctest::Approx(b * e).epsilon(1e-14));
    CHECK(j.partial({0, 2}) == doctest::Approx(a * a * e).epsilon(1e-14));
    CHECK(j.partial({1, 1}) == doctest::Approx((1 + a * b) * e).epsilon(1e-14));
    // d^2/dx0^2 d/dx1 : (2b + a b^2) e
    CHECK(j.partial({2, 1}) == doctest::Approx((2 * b + a * b * b) * e).epsilon(1e-13));
}

TEST_CASE("elementary functions agree with their Taylor series") {
    const double x = 0.4;
    struct Case {
        const char* src;
        double d[5];
    } cases[] = {
        {"sin(x0)", {std::sin(x), std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)}},
        {"cosh(x0)", {std::cosh(x), std::sinh(x), std::cosh(x), std::sinh(x), std::cosh(x)}},
        {"log(x0)", {std::log(x), 1 / x, -1 / (x * x), 2 / (x * x * x), -6 / (x * x * x * x)}},
        {"x0^2.5", {std::pow(x, 2.5), 2.5 * std::pow(x, 1.5), 3.75 * std::pow(x, 0.5),
                    1.875 * std::pow(x, -0.5), -0.9375 * std::pow(x, -1.5)}},
        {"1/(1 + x0)", {1 / 1.4, -1 / (1.4 * 1.4), 2 / std::pow(1.4, 3), -6 / std::pow(1.4, 4),
                        24 / std::pow(1.4, 5)}},
    };
    for (const auto& c : cases) {
        const auto j = eval_jet(c.src, {x}, 4);
        for (int k = 0; k <= 4; ++k) {
            INFO(c.src << " derivative " << k);
            CHECK(j.partial({k}) == doctest::Approx(c.d[k]).epsilon(1e-13));
        }
    }
}

TEST_CASE("bump is smooth and vanishes outside the unit interval") {
    const auto inside = eval_jet("bump(x0)", {0.5}, 2);
    CHECK(inside.value() == doctest::Approx(std::exp(1 - 1 / 0.5)));
    // d/ds exp(1 - 1/(1-s)) = -exp(...) / (1-s)^2
    CHECK(inside.partial({1}) == doctest::Approx(-std::exp(-1.0) / 0.25));
    const auto outside = eval_jet("bump(x0)", {1.2}, 2);
    CHECK(outside.value() == 0.0);
    CHECK(outside.partial({1}) == 0.0);
}

TEST_CASE("composition substitutes a nilpotent displacement") {
    // p(y) = exp(y) as a jet in y, compose with y = x0 + x1^2 near 0
    const JetLayout& P = JetLayout::get(1, 3);
    const auto p = jetfn::exp(Jet<double>::variable(P, 0, 0.0));
    const JetLayout& Q = JetLayout::get(2, 3);
    auto x0 = Jet<double>::variable(Q, 0, 0.0), x1 = Jet<double>::variable(Q, 1, 0.0);
    std::vector<Jet<double>> dx{x0 + x1 * x1};
    const auto r = compose<double>(p, dx);
    const auto direct = eval_jet("exp(x0 + x1^2)", {0.0, 0.0}, 3);
    for (int s = 0; s < Q.size; ++s) CHECK(r[s] == doctest::Approx(direct[s]).epsilon(1e-15));
}

TEST_CASE("complex jets follow the principal branch") {
    using C = std::complex<double>;
    const JetLayout& L = JetLayout::get(1, 2);
    const C a(-1.0, -0.1);
    const auto j = jetfn::pow(Jet<C>::variable(L, 0, a), C(-0.5));
    CHECK(std::abs(j.value() - std::pow(a, -0.5)) < 1e-15);
    CHECK(std::abs(j[1] - C(-0.5) * std::pow(a, -1.5)) < 1e-14);
    CHECK(std::abs(j[2] - C(0.375) * std::pow(a, -2.5)) < 1e-14);
}
