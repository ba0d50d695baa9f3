#include <cmath>
#include <random>

#include "doctest.h"
#include "reslab/geodesic.hpp"

using namespace reslab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd r(v.size());
    int i = 0;
    for (double x : v) r[i++] = x;
    return r;
}

// great-circle distance on the unit sphere, chart (theta, phi)
double sphere_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    auto cart = [](const Eigen::VectorXd& p) {
        return Eigen::Vector3d(std::sin(p[0]) * std::cos(p[1]), std::sin(p[0]) * std::sin(p[1]), std::cos(p[0]));
    };
    return std::acos(std::clamp(cart(a).dot(cart(b)), -1.0, 1.0));
}

}  // namespace

TEST_CASE("exponential map: flat space is affine") {
    const auto g = zoo_metric("minkowski4");
    const auto x = vec({0.1, 0.2, 0.3, 0.4});
    const auto v = vec({0.5, -0.2, 0.1, 0.05});
    CHECK((exp_map(g, x, v) - (x + v)).norm() < 1e-14);
    CHECK((log_map(g, x, x + v) - v).norm() < 1e-14);
}

TEST_CASE("exponential map on the sphere follows great circles") {
    const auto g = zoo_metric("sphere2");
    const auto x = vec({M_PI / 2, 0.0});
    // along the meridian towards the north pole (theta decreasing)
    const auto y = exp_map(g, x, vec({-M_PI / 2 + 1e-3, 0.0}));
    CHECK(y[0] == doctest::Approx(1e-3).epsilon(1e-8).scale(1));
    // along the equator
    const auto z = exp_map(g, x, vec({0.0, 0.7}));
    CHECK(z[0] == doctest::Approx(M_PI / 2).scale(1).epsilon(1e-10));
    CHECK(z[1] == doctest::Approx(0.7).epsilon(1e-10));
    // oblique direction: distance equals |v|_g
    const auto w = exp_map(g, vec({1.0, 0.2}), vec({0.3, 0.4}));
    const double len = std::sqrt(0.09 + std::pow(std::sin(1.0), 2) * 0.16);
    CHECK(sphere_distance(vec({1.0, 0.2}), w) == doctest::Approx(len).epsilon(1e-9));
    const auto v = log_map(g, vec({1.0, 0.2}), w);
    CHECK(std::sqrt(v[0] * v[0] + std::pow(std::sin(1.0), 2) * v[1] * v[1]) == doctest::Approx(len).epsilon(1e-9));
}

TEST_CASE("geodesic reversal on the de Sitter slab") {
    const auto g = zoo_metric("desitter4");
    const auto x = vec({0.2, 0.1, -0.1, 0.3});
    const auto v = vec({0.3, 0.1, 0.05, -0.2});
    const auto a = exp_map(g, x, v), b = exp_map(g, x, -v);
    // the geodesic through b with initial velocity -(log_b x)*... reaches a
    const auto w = log_map(g, b, x);
    CHECK((exp_map(g, b, 2 * w) - a).norm() < 1e-9);
}

TEST_CASE("exp/log round trip over random vectors") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    double worst = 0;
    for (const char* name : {"desitter4", "sphere2", "bump2", "bump4"}) {
        const auto g = zoo_metric(name);
        const int n = g.dim();
        for (int trial = 0; trial < 25; ++trial) {
            Eigen::VectorXd x(n), v(n);
            for (int i = 0; i < n; ++i) x[i] = u(rng), v[i] = u(rng);
            if (std::string(name) == "sphere2") x[0] += 1.3;
            const auto y = exp_map(g, x, v);
            worst = std::max(worst, (log_map(g, x, y) - v).norm());
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("frames are orthonormal and time oriented") {
    const auto mk = zoo_metric("minkowski4");
    const auto f = build_frame(mk, vec({0, 0, 0, 0}));
    CHECK((f.E - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    const auto g4 = parse_metric("diag(4,-1,-1,-1)");
    CHECK(build_frame(g4, vec({0.3, 0, 0, 0})).E(0, 0) == doctest::Approx(0.5));
    const auto ds = zoo_metric("desitter4");
    const auto fd = build_frame(ds, vec({1.0, 0, 0, 0}));
    for (int i = 1; i < 4; ++i) CHECK(fd.E(i, i) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    for (const char* name : {"bump4", "desitter4", "sphere2"}) {
        const auto g = zoo_metric(name);
        Eigen::VectorXd x = Eigen::VectorXd::Constant(g.dim(), 0.3);
        if (std::string(name) == "sphere2") x[0] = 1.1;
        Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(g.dim(), g.dim());
        seed(0, 1) = 0.4;
        seed(1, 0) = 0.2;
        const auto fr = build_frame(g, x, &seed);
        const Eigen::MatrixXd G = fr.E.transpose() * g.at(std::span<const double>(x.data(), g.dim())) * fr.E;
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b) CHECK(G(a, b) == doctest::Approx(a == b ? fr.eta[a] : 0.0).scale(1).epsilon(1e-12));
        if (g.lorentzian()) CHECK(fr.E(0, 0) > 0);
    }
}

TEST_CASE("normal coordinates: origin values and the Gauss lemma") {
    std::mt19937 rng(9);
    std::normal_distribution<double> gauss;
    for (const char* name : {"desitter4", "sphere2", "bump2", "bump4"}) {
        const auto g = zoo_metric(name);
        const int n = g.dim();
        Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 0.2);
        if (std::string(name) == "sphere2") x0 = vec({M_PI / 2, 0.0});
        NormalCoordinates ncs(g, x0);
        const auto o = ncs.at(Eigen::VectorXd::Zero(n));
        CHECK((o.gt - ncs.eta()).norm() == 0.0);
        // tiny radius: derivatives ~ r
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w[i] = gauss(rng);
        w.normalize();
        const auto near = ncs.ray(w, {1e-6})[0];
        for (int c = 0; c < n; ++c) CHECK(near.dgt[c].norm() < 1e-5);
        for (int trial = 0; trial < 6; ++trial) {
            for (int i = 0; i < n; ++i) w[i] = gauss(rng);
            w.normalize();
            const double r = 0.05 + 0.3 * trial / 6.0;
            const auto s = ncs.ray(w, {r})[0];
            const Eigen::VectorXd lhs = s.gt * s.h, rhs = ncs.eta() * s.h;
            INFO(name);
            CHECK((lhs - rhs).norm() < 1e-8);
            // the point really is exp of the frame vector
            CHECK((s.y - ncs.to_point(s.h)).norm() < 1e-10);
        }
    }
}

TEST_CASE("pulled-back metric derivatives agree with finite differences") {
    const auto g = zoo_metric("bump4");
    NormalCoordinates ncs(g, Eigen::VectorXd::Constant(4, 0.2));
    const auto h = vec({0.05, -0.1, 0.07, 0.02});
    const auto s = ncs.at(h);
    const double d = 1e-4;
    for (int c = 0; c < 4; ++c) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
        e[c] = d;
        const Eigen::MatrixXd fd = (ncs.at(h + e).gt - ncs.at(h - e).gt) / (2 * d);
        CHECK((fd - s.dgt[c]).norm() < 1e-7);
    }
}

TEST_CASE("normal coordinates on the sphere: det g~ = (sin r / r)^2") {
    NormalCoordinates ncs(zoo_metric("sphere2"), vec({M_PI / 2, 0.0}));
    for (double r : {0.1, 0.3, 0.6}) {
        const auto s = ncs.ray(vec({std::cos(0.4), std::sin(0.4)}), {r})[0];
        CHECK(s.gt.determinant() == doctest::Approx(std::pow(std::sin(r) / r, 2)).epsilon(1e-11));
    }
}

TEST_CASE("Kuranishi matrix") {
    const auto mk = zoo_metric("minkowski2");
    NormalCoordinates flat(mk, vec({0.1, 0.2}));
    CHECK((kuranishi_matrix(flat, vec({0.1, 0.2}), vec({0.3, -0.2})) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-13);
    const auto sph = zoo_metric("sphere2");
    const auto x = vec({1.2, 0.3});
    NormalCoordinates ncs(sph, x);
    CHECK(kuranishi_matrix(ncs, x, vec({0.0, 0.0})) == Eigen::MatrixXd::Identity(2, 2));
    const auto h = vec({0.3 * std::cos(0.7), 0.3 * std::sin(0.7)});
    const Eigen::MatrixXd M = kuranishi_matrix(ncs, x, h);
    const Eigen::VectorXd y = x + ncs.frame().E * h;
    const Eigen::VectorXd frame_log = ncs.frame().E.inverse() * log_map(sph, x, y);
    CHECK((M * h - frame_log).norm() < 1e-8);
    const auto ds = zoo_metric("desitter4");
    const auto x4 = vec({0.3, 0.0, 0.1, 0.0});
    NormalCoordinates n4(ds, x4);
    const auto h4 = vec({0.1, -0.05, 0.08, 0.02});
    const Eigen::VectorXd y4 = x4 + n4.frame().E * h4;
    CHECK((kuranishi_matrix(n4, x4, h4) * h4 - n4.frame().E.inverse() * log_map(ds, x4, y4)).norm() < 1e-8);
}
