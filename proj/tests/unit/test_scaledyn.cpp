#include <cmath>
#include <random>

#include "doctest.h"
#include "reslab/error.hpp"
#include "reslab/metric.hpp"
#include "reslab/scaledyn.hpp"

using namespace reslab;

namespace {

const cplx I(0, 1);

SampledKernel radial_kernel(std::function<double(double)> f, int degree, bool log) {
    SampledKernel u;
    u.n = 2;
    u.radius = 1;
    u.leading_degree = degree;
    u.logarithmic = log;
    u.x_independent = true;
    u.eval = [f](std::span<const double>, std::span<const double> h) { return cplx(f(std::hypot(h[0], h[1]))); };
    return u;
}

const double x0[2] = {0, 0};
constexpr double kSigma = 0.15;

CorrelatorSamples synthetic(const std::vector<ResonanceTerm>& terms, double t_max, double dt, double noise,
                            unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0, noise);
    CorrelatorSamples s;
    s.t = time_grid(t_max, dt);
    for (double t : s.t) {
        cplx v = 0;
        for (const auto& term : terms) v += std::exp(-term.k * t) * (term.a + t * term.b);
        s.value.push_back(v + cplx(g(rng), g(rng)));
    }
    return s;
}

}  // namespace

TEST_CASE("scale_kernel examples") {
    const auto one = radial_kernel([](double r) { return r; }, 1, false);
    const double h[2] = {0.3, -0.4};
    CHECK(scale_kernel(one, 0).eval(x0, h) == one.eval(x0, h));
    CHECK(std::abs(scale_kernel(one, std::log(2.0)).eval(x0, h) - 0.25) < 1e-15);
    const auto lg = radial_kernel([](double r) { return std::log(r); }, 0, true);
    CHECK(std::abs(scale_kernel(lg, 1).eval(x0, h) - (std::log(0.5) - 1)) < 1e-14);
    CHECK_THROWS_AS(scale_kernel(one, -1), DomainError);
}

TEST_CASE("correlator examples") {
    const auto phi = concentrating_test_function(x0, 0, kSigma);
    const auto t = time_grid(4, 0.5);
    const auto c1 = correlator(radial_kernel([](double) { return 1.0; }, 0, false), phi, t);
    for (const cplx& v : c1.value) CHECK(std::abs(v - 1.0) < 1e-12);

    // <|h|, phi> = sqrt(pi) sigma / 2 for the normalized Gaussian
    const auto cr = correlator(radial_kernel([](double r) { return r; }, 1, false), phi, t);
    for (std::size_t j = 0; j < t.size(); ++j)
        CHECK(std::abs(cr.value[j] - std::exp(-t[j]) * std::sqrt(M_PI) * kSigma / 2) < 1e-12);

    // <log|h|, phi> = log sigma - gamma / 2, slope -1 in t
    const auto cl = correlator(radial_kernel([](double r) { return std::log(r); }, 0, true), phi, t);
    for (std::size_t j = 0; j < t.size(); ++j)
        CHECK(std::abs(cl.value[j] - (std::log(kSigma) - kEulerGamma / 2 - t[j])) < 1e-11);

    CHECK_THROWS_AS(correlator(radial_kernel([](double r) { return 1 / (r * r); }, -2, false), phi, t),
                    DomainError);
    CHECK_THROWS_AS(correlator(radial_kernel([](double) { return 1.0; }, 0, false), phi, {0.123}), ConfigError);
}

TEST_CASE("fit_resonances on exact model members") {
    auto s = synthetic({{0, 3.0, 5.0}}, 6, 0.1, 0, 1);
    auto f = fit_resonances(s, -1, 2);
    CHECK(std::abs(f.find(0)->a - 3.0) < 1e-8);
    CHECK(std::abs(f.find(0)->b - 5.0) < 1e-8);

    s = synthetic({{-1, 2.0, 0.0}, {0, 1.0, 0.0}}, 6, 0.1, 0, 1);
    f = fit_resonances(s, -1, 2);
    CHECK(std::abs(f.find(-1)->a - 2.0) < 1e-8);
    CHECK(std::abs(f.find(-1)->b) < 1e-8);
    CHECK(std::abs(f.find(0)->a - 1.0) < 1e-8);
    CHECK(f.tameness_defect() < 1e-6);
}

TEST_CASE("fit_resonances recovers noisy tame expansions") {
    const std::vector<ResonanceTerm> truth{
        {-1, 0.7, 0.0}, {0, 1.5, -0.4}, {1, -2.0, 0.0}, {2, 0.9, 1.1}, {3, 0.3, 0.0}, {4, -0.6, 0.2}};
    // logarithms at even k, as for kernels with |h|^{2m} log|h| terms; the
    // insignificant Jordan columns are pruned before the final fit
    const auto s = synthetic(truth, 12, 1e-4, 1e-8, 42);
    const auto f = fit_resonances(s, -1, 4);
    CHECK(f.find(1)->pruned_b);
    CHECK(f.find(3)->pruned_b);
    CHECK(f.find(-1)->pruned_b);
    for (const auto& t : truth) {
        CAPTURE(t.k);
        CHECK(std::abs(f.find(t.k)->a - t.a) < 1e-6);
        CHECK(std::abs(f.find(t.k)->b - t.b) < 1e-6);
    }
    CHECK(f.tameness_defect() < 1e-6);
    CHECK(f.residual < 2e-8);
}

TEST_CASE("fit_resonances failure modes") {
    const auto s = synthetic({{0, 1.0, 1.0}}, 6, 0.1, 0, 1);
    FitOptions shortw;
    shortw.t_max = 2;
    CHECK_THROWS_AS(fit_resonances(s, 0, 2, shortw), ConfigError);
    FitOptions strict;
    strict.max_condition = 10;
    CHECK_THROWS_AS(fit_resonances(s, -1, 4, strict), ConditioningError);
    CorrelatorSamples odd;
    odd.t = time_grid(8, 0.1);
    for (double t : odd.t) odd.value.push_back(std::exp(-0.5 * t) + std::exp(-2.5 * t));
    CHECK_THROWS_AS(fit_resonances(odd, 0, 1), ConvergenceError);
}

TEST_CASE("kernel fits: homogeneous and logarithmic") {
    const auto phi = concentrating_test_function(x0, 0, kSigma);
    const auto t = time_grid(8, 0.1);
    // |h|^{-1} + 7 log|h|: a_{-1} = <|h|^{-1}, phi> = sqrt(pi) / sigma, b_0 = -7
    const auto u = radial_kernel([](double r) { return 1 / r + 7 * std::log(r); }, -1, true);
    const auto f = fit_resonances(correlator(u, phi, t), -1, 2);
    CHECK(std::abs(f.find(-1)->a - std::sqrt(M_PI) / kSigma) < 1e-8);
    CHECK(std::abs(f.find(0)->b - (-7.0)) < 1e-8);
    CHECK(f.tameness_defect() < 1e-6);

    // homogeneous of degree 1: a single resonance at k = 1 without a Jordan block
    const auto g = fit_resonances(correlator(radial_kernel([](double r) { return r; }, 1, false), phi, t), -2, 2);
    CHECK(std::abs(g.find(1)->a - std::sqrt(M_PI) * kSigma / 2) < 1e-10);
    for (const auto& term : g.terms) {
        CHECK(std::abs(term.b) < 1e-10);
        if (term.k != 1) CHECK(std::abs(term.a) < 1e-10);
    }
}

TEST_CASE("dynamical residue of model kernels") {
    const ConcentratingFamily fam{{0, 0}};
    // X Pi_0 (3 + 5 log|h|) = 5
    auto r = project_pi0_residue(radial_kernel([](double r) { return 3 + 5 * std::log(r); }, 0, true), fam);
    CHECK(std::abs(r.value - 5.0) < 1e-8);
    r = project_pi0_residue(radial_kernel([](double r) { return 1 / r; }, -1, false), {{0, 0}}, {-1, 4});
    CHECK(std::abs(r.value) < 1e-8);
    // -(2 pi)^{-1}(log(|h|/2) + gamma): X applied to the log term gives -1/(2 pi)
    const auto lead = radial_kernel(
        [](double r) { return -(std::log(r / 2) + kEulerGamma) / (2 * M_PI); }, 0, true);
    r = project_pi0_residue(lead, fam);
    CHECK(std::abs(r.value - (-1 / (2 * M_PI))) < 1e-9);
    const auto full = project_pi0_residue(bessel_model_kernel(), fam);
    CHECK(std::abs(full.value - r.value) < 1e-9);
}

TEST_CASE("Laplace-domain fit agrees with the time-domain fit") {
    const std::vector<ResonanceTerm> truth{{0, 1.5, -0.4}, {1, -2.0, 0.8}, {2, 0.9, 0.0}};
    const auto s = synthetic(truth, 12, 0.05, 0, 3);
    const auto f = fit_resonances(s, 0, 3);
    std::vector<cplx> grid;
    for (int i = 0; i < 24; ++i) grid.push_back(cplx(0.3 + 0.2 * (i % 6), 0.5 * (i / 6)));
    const auto chk = laplace_validation(s, 0, 3, grid, f);
    CHECK(chk.max_deviation < 1e-6);
    CHECK(std::abs(chk.fit.find(0)->b - (-0.4)) < 1e-6);
}

TEST_CASE("flat parametrix kernels carry the Lorentzian residue") {
    const auto F = flat_power_kernel(2, 1, I, false);
    const auto r = project_pi0_residue(F, {{0, 0}});
    CHECK(std::abs(r.value - (-I / (2 * M_PI))) < 1e-8);
    const auto H = hadamard_parametrix_kernel(zoo_metric("minkowski2"), 1, I);
    const auto h = project_pi0_residue(H, {{0.1, 0.2}, {}});
    CHECK(std::abs(h.value - (-I / (2 * M_PI))) < 1e-8);
    CHECK_THROWS_AS(flat_power_kernel(4, 1, I, false), DomainError);
}
