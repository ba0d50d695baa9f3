#pragma once

// Scaling dynamics: kernels u(x, h) in Euler normal coordinates, correlators
// <u(x, e^{-t} h), phi(x, h)>, time-domain resonance fits
// sum_k e^{-tk} (a_k + t b_k), and the dynamical residue -b_0.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "reslab/hadamard.hpp"
#include "reslab/metric.hpp"
#include "reslab/special.hpp"

namespace reslab {

using KernelFn = std::function<cplx(std::span<const double> x, std::span<const double> h)>;

struct SampledKernel {
    int n = 2;
    KernelFn eval;
    double radius = 1;         // eval is valid for 0 < |h| <= radius
    int leading_degree = 0;    // u = O(|h|^leading_degree) up to logarithms
    bool logarithmic = false;
    bool x_independent = false;
    bool cone_singular = false;  // singular on the light cone; grades the angular rule
};

// (x, h) -> u(x, e^{-t} h)
SampledKernel scale_kernel(const SampledKernel& u, double t);

// phi(x, h) = sum over x nodes of x_weights[i] delta(x - x_nodes[i]) times h_profile(x, h).
struct TestFunction {
    std::vector<std::vector<double>> x_nodes;
    std::vector<double> x_weights;
    std::function<double(std::span<const double> x, std::span<const double> h)> h_profile;
    double support = 1;  // h_profile is negligible (below 1e-16 relative) beyond this radius
};

// Normalized Gaussian profile exp(-|h|^2 / sigma^2) / (pi sigma^2)^{n/2}
// with integral 1 in h, times a symmetric bump of half width `width` around
// x0 integrated by an `x_order`-point Gauss rule per axis.  width = 0 gives
// the single node x0.
TestFunction concentrating_test_function(std::span<const double> x0, double width, double sigma,
                                         int x_order = 3);

struct CorrelatorOptions {
    double dlog = 0.05;       // spacing of the radial lattice in log r; t values must be multiples
    int angular_order = 8;    // Gauss-Legendre nodes per polar panel
    int angular_levels = 12;  // geometric refinement towards the light cone
    double angular_ratio = 0.25;
    int inner_order = 6;      // S^{n-2} rule (n = 4)
    int uniform_order = 32;   // angular rule for kernels without cone singularities
};

struct CorrelatorSamples {
    std::vector<double> t;
    std::vector<cplx> value;
};

// Trapezoid rule in log r on the lattice r_m = rho e^{-m dlog}, so that
// e^{-t} maps lattice points to lattice points and each kernel value is
// computed once.  Throws ConfigError for t off the lattice and DomainError
// when the leading degree is <= -n.
CorrelatorSamples correlator(const SampledKernel& u, const TestFunction& phi, const std::vector<double>& t,
                             const CorrelatorOptions& opt = {});

std::vector<double> time_grid(double t_max, double dt);

struct ResonanceTerm {
    int k = 0;
    cplx a, b;
    double sigma_a = 0, sigma_b = 0;  // least-squares standard errors
    bool pruned_a = false, pruned_b = false;
};

struct ResonanceExpansion {
    std::vector<ResonanceTerm> terms;
    double t_min = 0, t_max = 0;
    double residual = 0;   // rms misfit on the window
    double condition = 0;  // column-scaled design condition number

    const ResonanceTerm* find(int k) const;
    cplx evaluate(double t) const;
    // largest |b_k| over k < 0 relative to max |a_k|
    double tameness_defect() const;
};

struct FitOptions {
    int jordan_max = 2;       // 1: a_k only, 2: a_k + t b_k
    double t_min = 0;         // fit window
    double t_max = 1e300;
    double max_condition = 1e12;
    double residual_tol = 1e-6;  // relative to the largest sample
    double prune_sigma = 3;      // drop coefficients below this many standard errors
};

// Linear least squares on the design sum_{k = p}^{N} e^{-tk}(a_k + t b_k).
// Throws ConfigError for too few samples or too short a window,
// ConditioningError for an ill-conditioned design and ConvergenceError when
// the residual exceeds the tolerance.
ResonanceExpansion fit_resonances(const CorrelatorSamples& s, int p, int N, const FitOptions& opt = {});

struct ConcentratingFamily {
    std::vector<double> x0;
    std::vector<double> widths{0.2, 0.1, 0.05};
    double sigma = 0;  // 0 picks radius / 6.5
    int x_order = 3;
};

struct ResidueSample {
    cplx value;        // extrapolated to zero width
    double error = 0;  // Richardson difference plus fit standard error of b_0
    std::vector<cplx> per_width;
    std::vector<ResonanceExpansion> fits;
};

struct Pi0Options {
    int p = 0, N = 6;
    double t_max = 12;
    double dt = 0.1;
    FitOptions fit{2, 2.0};
    CorrelatorOptions corr;
};

// Dynamical residue -b_0 at x0: correlators for each width of the family,
// a resonance fit each, and Richardson extrapolation in width^2.
ResidueSample project_pi0_residue(const SampledKernel& u, const ConcentratingFamily& family,
                                  const Pi0Options& opt = {});

struct LaplaceCheck {
    ResonanceExpansion fit;      // coefficients recovered from the Laplace data
    double max_deviation = 0;    // against the time-domain fit, over k in [p, N]
};

// Laplace transform of the sampled correlator on [0, T] at complex s with
// Re s > 0 (trapezoid rule on the sample times), fitted by the transforms of
// e^{-tk} and t e^{-tk} under the same rule.
LaplaceCheck laplace_validation(const CorrelatorSamples& samples, int p, int N, const std::vector<cplx>& s_grid,
                                const ResonanceExpansion& reference);

// Model kernels.
// (2 pi)^{-1} K_0(|h|), the kernel of (1 - Delta)^{-1} on R^2.
SampledKernel bessel_model_kernel(double radius = 1);
// Kernel of (Q - i0 - z)^{-alpha} on flat space: F_{alpha-1} / Gamma(alpha).
SampledKernel flat_power_kernel(int n, int alpha, cplx z, bool euclidean, double radius = 0.5);
// Truncated Hadamard parametrix sum_{k <= N} u_k F_k(z) for an n = 2 metric.
// Transport tables are solved on demand per base point and cached.
SampledKernel hadamard_parametrix_kernel(const Metric& g, int N, cplx z, const HadamardOptions& opt = {});

}  // namespace reslab
