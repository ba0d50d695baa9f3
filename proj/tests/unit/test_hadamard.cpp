#include <cmath>
#include <random>

#include "doctest.h"
#include "reslab/error.hpp"
#include "reslab/hadamard.hpp"

using namespace reslab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd r(v.size());
    int i = 0;
    for (double x : v) r[i++] = x;
    return r;
}

double minus_r_over_6(const Metric& g, const Eigen::VectorXd& x) {
    return -curvature_at(g, std::span<const double>(x.data(), g.dim())).scalar / 6;
}

}  // namespace

TEST_CASE("flat space: u0 = 1 and higher coefficients vanish") {
    HadamardOptions o;
    o.order = 3;
    const auto t = solve_transport(zoo_metric("minkowski2"), vec({0.2, -0.1}), o);
    for (double v : t.values[0]) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    for (int k = 1; k <= 3; ++k) {
        double worst = 0;
        for (double v : t.values[k]) worst = std::max(worst, std::abs(v));
        CHECK(worst < 1e-6);
    }
    const auto d = diagonal_coefficients(t);
    CHECK(d[0].value == 1.0);
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(d[k].value) < 1e-6);
}

TEST_CASE("flat space in four dimensions") {
    HadamardOptions o;
    o.order = 1;
    const auto t = solve_transport(zoo_metric("minkowski4"), vec({0.1, 0.2, 0.3, 0.4}), o);
    CHECK(t.diagonal[0].value == 1.0);
    CHECK(std::abs(t.diagonal[1].value) < 1e-9);
}

TEST_CASE("round sphere: diagonal coefficients match the heat-kernel expansion") {
    // On S^2 the heat trace density is (4 pi t)^{-1} (1 + t/3 + t^2/15 + 4 t^3/315 + ...);
    // the transport normalisation used here gives u_k = (-1)^k a_k.
    HadamardOptions o;
    o.order = 3;
    const auto t = solve_transport(zoo_metric("sphere2"), vec({1.0, 0.3}), o);
    const auto d = diagonal_coefficients(t);
    CHECK(d[0].value == 1.0);
    CHECK(d[1].value == doctest::Approx(-1.0 / 3).epsilon(1e-3));
    CHECK(d[1].value == doctest::Approx(minus_r_over_6(zoo_metric("sphere2"), vec({1.0, 0.3}))).epsilon(1e-3));
    CHECK(d[2].value == doctest::Approx(1.0 / 15).epsilon(1e-3));
    CHECK(d[3].value == doctest::Approx(-4.0 / 315).epsilon(1e-2));
    CHECK(std::abs(d[1].value + 1.0 / 3) <= d[1].error + 1e-9);
    CHECK(t.u0_defect < 1e-6);
}

TEST_CASE("Lorentzian bump metric: u1 = -R/6") {
    const auto g = zoo_metric("bump2");
    const auto x = vec({0.1, 0.1});
    HadamardOptions o;
    o.order = 2;
    const auto t = solve_transport(g, x, o);
    const double expect = minus_r_over_6(g, x);
    REQUIRE(std::abs(expect) > 1e-3);
    CHECK(t.diagonal[1].value == doctest::Approx(expect).epsilon(1e-3));
    CHECK(t.u0_defect < 1e-6);
}

TEST_CASE("halving the radial step moves u1 by at most four error estimates") {
    const auto g = zoo_metric("sphere2");
    HadamardOptions o;
    o.order = 1;
    const auto coarse = solve_transport(g, vec({1.0, 0.3}), o);
    o.panel_nodes *= 2;
    const auto fine = solve_transport(g, vec({1.0, 0.3}), o);
    CHECK(std::abs(fine.diagonal[1].value - coarse.diagonal[1].value) <= 4 * coarse.diagonal[1].error);
}

TEST_CASE("diagonal values do not depend on the frame") {
    for (const char* name : {"sphere2", "bump2"}) {
        const auto g = zoo_metric(name);
        const auto x = std::string(name) == "sphere2" ? vec({1.0, 0.3}) : vec({0.1, 0.1});
        HadamardOptions o;
        o.order = 1;
        const auto a = solve_transport(g, x, o);
        Eigen::MatrixXd seed(2, 2);
        seed << 1.0, 0.3, 0.3, 1.0;  // a boost (or rotation) away from the coordinate frame
        o.frame_seed = &seed;
        const auto b = solve_transport(g, x, o);
        CHECK((a.ncs.frame().E - b.ncs.frame().E).norm() > 0.1);
        CHECK(b.diagonal[1].value == doctest::Approx(a.diagonal[1].value).epsilon(1e-8));
    }
}

TEST_CASE("off-grid evaluation reproduces |g~|^{-1/4}") {
    HadamardOptions o;
    o.order = 1;
    const auto t = solve_transport(zoo_metric("sphere2"), vec({1.0, 0.3}), o);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 20; ++i) {
        const auto h = vec({u(rng), u(rng)});
        const double closed = std::exp(-0.5 * t.ncs.at(h).log_sqrt_det);
        CHECK(t.value_at(0, h) == doctest::Approx(closed).epsilon(1e-9));
    }
    const int J = static_cast<int>(t.radii.size());
    CHECK(t.value_at(1, t.radii[5] * t.directions[3]) == doctest::Approx(t.values[1][3 * J + 5]).epsilon(1e-12));
    CHECK(t.value_at(1, vec({0.0, 0.0})) == t.diagonal[1].value);
}

TEST_CASE("configuration limits") {
    HadamardOptions o;
    o.order = 5;
    CHECK_THROWS_AS(solve_transport(zoo_metric("minkowski2"), vec({0, 0}), o), ConfigError);
    o.order = 1;
    CHECK_THROWS_AS(solve_transport(parse_metric("diag(1,-1,-1)"), vec({0, 0, 0}), o), ConfigError);
    o.radius = 50;
    CHECK_THROWS_AS(solve_transport(zoo_metric("sphere2"), vec({1.0, 0.3}), o), DomainError);
}
