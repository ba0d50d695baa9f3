#include <cmath>

#include "doctest.h"
#include "reslab/metric.hpp"

using namespace reslab;

namespace {

// Independent Christoffel/curvature oracle from nested central differences
// of the metric values only.
std::vector<double> fd_gamma(const Metric& g, std::vector<double> x, double h) {
    const int n = g.dim();
    const Eigen::MatrixXd gi = g.at(x).inverse();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int k = 0; k < n; ++k) {
        auto shifted = [&](double s) {
            auto y = x;
            y[k] += s;
            return Eigen::MatrixXd(g.at(y));
        };
        dg[k] = (8 * (shifted(h) - shifted(-h)) - (shifted(2 * h) - shifted(-2 * h))) / (12 * h);
    }
    std::vector<double> gam(n * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int l = 0; l < n; ++l) s += 0.5 * gi(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                gam[(i * n + j) * n + k] = s;
            }
    return gam;
}

double fd_scalar(const Metric& g, std::vector<double> x) {
    const int n = g.dim();
    const double h = 1e-3, H = 1e-2;
    const auto G = fd_gamma(g, x, h);
    std::vector<std::vector<double>> dG(n);
    for (int k = 0; k < n; ++k) {
        auto at = [&](double s) {
            auto y = x;
            y[k] += s;
            return fd_gamma(g, y, h);
        };
        const auto p1 = at(H), m1 = at(-H), p2 = at(2 * H), m2 = at(-2 * H);
        dG[k].resize(n * n * n);
        for (int i = 0; i < n * n * n; ++i) dG[k][i] = (8 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12 * H);
    }
    auto gam = [&](int i, int j, int k) { return G[(i * n + j) * n + k]; };
    const Eigen::MatrixXd gi = g.at(x).inverse();
    double R = 0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double ric = 0;
            for (int i = 0; i < n; ++i) {
                ric += dG[i][(i * n + l) * n + j] - dG[l][(i * n + i) * n + j];
                for (int m = 0; m < n; ++m) ric += gam(i, i, m) * gam(m, l, j) - gam(i, l, m) * gam(m, i, j);
            }
            R += gi(j, l) * ric;
        }
    return R;
}

}  // namespace

TEST_CASE("parser reports positions and unknown variables") {
    CHECK_THROWS_AS(parse_expression("1 + x2", 2), ParseError);
    try {
        parse_expression("1 + x2", 2);
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
    CHECK_THROWS_AS(parse_expression("1 + ", 2), ParseError);
    CHECK_THROWS_AS(parse_expression("foo(x0)", 2), ParseError);
    CHECK_THROWS_AS(parse_expression("(x0", 2), ParseError);
    const auto e = parse_expression("-2^2 + 3*x1/2 - exp(0)", 2);
    const std::vector<double> x{0.0, 4.0};
    CHECK(evaluate<double>(*e, x) == doctest::Approx(-4 + 6 - 1));
}

TEST_CASE("metric parsing and validation") {
    const auto mk = parse_metric("diag(1,-1,-1,-1)");
    CHECK(mk.dim() == 4);
    CHECK(mk.lorentzian());
    CHECK(mk.signature() == std::vector<int>{1, -1, -1, -1});
    CHECK_THROWS_AS(parse_metric("dim = 2\nsignature = [1, -1]\ng00 = \"1\"\ng11 = \"-1\"\n"
                                 "g01 = \"x0\"\ng10 = \"x1\"\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_metric("dim = 2\nsignature = [1, -1]\ng00 = \"1\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_metric("dim = 2\nsignature = [1, -1]\ng00 = \"1\"\ng11 = \"-1\"\ng22 = \"1\"\n"),
                    ConfigError);
    const auto deg = parse_metric("dim = 2\nsignature = [1, -1]\ng00 = \"x0\"\ng11 = \"-1\"\n");
    const std::vector<double> origin{0.0, 0.0};
    CHECK_THROWS_AS(deg.check_point(origin), SingularMetricError);
    const auto flipped = parse_metric("dim = 2\nsignature = [1, -1]\ng00 = \"1\"\ng11 = \"1\"\n");
    CHECK_THROWS_AS(flipped.check_point(origin), SignatureError);
    for (const auto& z : zoo_names()) CHECK_NOTHROW(zoo_metric(z));
}

TEST_CASE("flat metrics have vanishing curvature") {
    for (const char* name : {"minkowski2", "minkowski4", "euclidean4"}) {
        const auto g = zoo_metric(name);
        const std::vector<double> x(g.dim(), 0.3);
        const auto c = curvature_at(g, x);
        CHECK(c.scalar == 0.0);
        for (double r : c.riemann) CHECK(r == 0.0);
    }
}

TEST_CASE("round sphere has scalar curvature +2") {
    const auto g = zoo_metric("sphere2");
    for (double th : {0.4, M_PI / 2, 2.0}) {
        const std::vector<double> x{th, 0.3};
        CHECK(curvature_at(g, x).scalar == doctest::Approx(2.0).epsilon(1e-13));
    }
}

TEST_CASE("de Sitter slab: |R| = 12 with sign fixed by the sphere convention") {
    const auto g = zoo_metric("desitter4");
    const std::vector<double> x{0.2, 0.0, 0.0, 0.0};
    const auto c = curvature_at(g, x);
    CHECK(c.scalar == doctest::Approx(-12.0).epsilon(1e-13));
    CHECK(std::abs(c.scalar) == doctest::Approx(12.0).epsilon(1e-13));
}

TEST_CASE("jet curvature agrees with a finite-difference oracle") {
    for (const char* name : {"sphere2", "desitter4", "bump2", "bump4"}) {
        const auto g = zoo_metric(name);
        std::vector<double> x(g.dim(), 0.21);
        if (std::string(name) == "sphere2") x = {1.1, 0.2};
        const auto c = curvature_at(g, x);
        const auto G = fd_gamma(g, x, 1e-3);
        for (std::size_t i = 0; i < G.size(); ++i) CHECK(c.christoffel[i] == doctest::Approx(G[i]).epsilon(1e-8));
        INFO(name);
        CHECK(c.scalar == doctest::Approx(fd_scalar(g, x)).epsilon(1e-6));
    }
}

TEST_CASE("Riemann tensor symmetries (property)") {
    for (const char* name : {"bump4", "desitter4", "bump2"}) {
        const auto g = zoo_metric(name);
        const int n = g.dim();
        const std::vector<double> x(n, -0.17);
        const auto c = curvature_at(g, x);
        const Eigen::MatrixXd gm = g.at(x);
        auto low = [&](int i, int j, int k, int l) {
            double s = 0;
            for (int m = 0; m < n; ++m) s += gm(i, m) * c.riemann[((m * n + j) * n + k) * n + l];
            return s;
        };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        CHECK(low(i, j, k, l) == doctest::Approx(-low(i, j, l, k)).epsilon(1e-10).scale(1));
                        CHECK(low(i, j, k, l) == doctest::Approx(-low(j, i, k, l)).epsilon(1e-10).scale(1));
                        CHECK(low(i, j, k, l) == doctest::Approx(low(k, l, i, j)).epsilon(1e-10).scale(1));
                    }
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) CHECK(c.ricci[j * n + l] == doctest::Approx(c.ricci[l * n + j]).scale(1));
    }
}

TEST_CASE("wave operator matches a finite-difference oracle") {
    for (const char* name : {"sphere2", "desitter4", "bump2"}) {
        const auto g = zoo_metric(name);
        const int n = g.dim();
        std::vector<double> x(n, 0.31);
        if (std::string(name) == "sphere2") x = {1.2, 0.4};
        const auto f = parse_expression(n == 2 ? "sin(x0)*x1^2 + x0" : "x0*x1 + x2^2*exp(x3) - x0^3", n);
        const double P = wave_apply(g, *f, x);
        // oracle: |g|^{-1/2} d_j (|g|^{1/2} g^{jk} d_k f) by nested differences
        const double h = 1e-3;
        auto flux = [&](std::vector<double> y, int j) {
            const Eigen::MatrixXd gm = g.at(y);
            const double vol = std::sqrt(std::abs(gm.determinant()));
            const Eigen::MatrixXd gi = gm.inverse();
            double s = 0;
            for (int k = 0; k < n; ++k) {
                auto yp = y, ym = y, yp2 = y, ym2 = y;
                yp[k] += h, ym[k] -= h, yp2[k] += 2 * h, ym2[k] -= 2 * h;
                const double df = (8 * (evaluate<double>(*f, yp) - evaluate<double>(*f, ym)) -
                                   (evaluate<double>(*f, yp2) - evaluate<double>(*f, ym2))) / (12 * h);
                s += gi(j, k) * df;
            }
            return vol * s;
        };
        double div = 0;
        const double H = 1e-2;
        for (int j = 0; j < n; ++j) {
            auto sh = [&](double s) {
                auto y = x;
                y[j] += s;
                return flux(y, j);
            };
            div += (8 * (sh(H) - sh(-H)) - (sh(2 * H) - sh(-2 * H))) / (12 * H);
        }
        const double vol = std::sqrt(std::abs(g.at(x).determinant()));
        INFO(name);
        CHECK(P == doctest::Approx(div / vol).epsilon(1e-6));
    }
}
