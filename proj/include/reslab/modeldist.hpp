#pragma once

// Constant-coefficient model: Q(xi) = -xi0^2 + xi1^2 + ... (or |xi|^2),
// regularized complex powers (Q - z)^{-alpha}, regulated sphere integrals,
// Laurent coefficients of pairings, and the kernels F_alpha.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reslab/expr.hpp"
#include "reslab/jet.hpp"
#include "reslab/quadrature.hpp"
#include "reslab/special.hpp"

namespace reslab {

struct ModelQuadratic {
    int n = 2;
    bool euclidean = false;

    template <class S>
    S operator()(std::span<const S> xi) const {
        S q = xi[0] * xi[0];
        if (!euclidean) q = -q;
        for (int i = 1; i < n; ++i) q = q + xi[i] * xi[i];
        return q;
    }
    double operator()(const Point& xi) const {
        return (*this)(std::span<const double>(xi.data(), static_cast<std::size_t>(n)));
    }
};

// (Q(xi) - z)^{-alpha} on the principal branch.  For real z the value is the
// limit from Im z > 0; a zero base throws DomainError.
cplx power_value(const ModelQuadratic& q, cplx alpha, cplx z, std::span<const double> xi);

struct RegulatorOptions {
    double eps0 = 0.5;      // eps_j = eps0 * 2^-j
    int levels = 8;
    int psi_order = 16;     // Gauss-Legendre nodes per polar-angle panel
    int inner_order = 8;    // S^{n-2} rule order (n = 4)
    bool order_check = true;  // repeat with psi_order / 2 for the error estimate
};

struct RegulatedIntegral {
    cplx value;
    double error = 0;               // extrapolation_error + order_change
    double extrapolation_error = 0;
    double order_change = 0;
    std::vector<double> eps;
    std::vector<cplx> samples;
};

using SphereIntegrand = std::function<cplx(const Point& xi, double eps)>;

// Integral over S^{n-1} of f(., eps) for each eps of the schedule, with the
// polar panels refined to the width eps around the light cone, then
// extrapolated to eps = 0.
RegulatedIntegral regulated_sphere_integral(int n, const SphereIntegrand& f,
                                            const RegulatorOptions& opt = {});

// Integral of (Q - i eps)^{-n/2} over the unit sphere, eps -> 0.
RegulatedIntegral stokes_residue_integral(int n, bool euclidean = false,
                                          const RegulatorOptions& opt = {});

// u = xi^p (Q - i eps)^{-s}; the check integrates d^beta u over the sphere.
// The scale uses the even weight xi^{2p}, since odd p makes the integral of u
// vanish by parity.
struct VanishingCase {
    std::string label;
    int n = 2;
    bool euclidean = false;
    double s = 1;
    MultiIndex p{};
    MultiIndex beta{};
};

struct VanishingResult {
    RegulatedIntegral derivative;  // integral of d^beta u
    RegulatedIntegral base;        // integral of xi^{2p} (Q - i eps)^{-s}, sets the scale
    double ratio = 0;              // |derivative| / |base|
};

// Throws DomainError unless |beta| > 0 and d^beta u has degree -n.
VanishingResult vanishing_check(const VanishingCase& c, const RegulatorOptions& opt = {});
std::vector<VanishingCase> standard_vanishing_cases();

struct LaurentOptions {
    double radius = 0.25;   // contour radius around the centre
    int points = 32;        // contour nodes
    double r_max = 8;       // radial cutoff for the test function
    int radial_panels = 8;  // geometric panels on [0, 1]
    int radial_order = 16;
    RegulatorOptions reg;
};

struct LaurentResult {
    cplx residue;
    cplx finite_part;
    double error = 0;  // largest eps-extrapolation error over the contour
    std::vector<cplx> alphas, values;
};

// <(Q - i0)^{-alpha}, phi> on R^2 for alpha off the poles, by polar
// coordinates with the Taylor terms of phi through degree `subtract`
// integrated analytically in r.
// subtract < 0 picks the smallest valid order.
cplx regulated_pairing(cplx alpha, const Expr& phi, bool euclidean, int subtract,
                       const LaurentOptions& opt = {});

// Laurent coefficients of alpha -> <(Q - i0)^{-alpha}, phi> at `center`
// (n = 2), from a discrete contour integral.  Throws DomainError when the
// contour reaches another pole.
LaurentResult laurent_pairing(int n, double center, const Expr& phi, bool euclidean,
                              const LaurentOptions& opt = {});

// F_k(z, h): normalized Fourier transform of (Q - i0 - z)^{-k-1}, as the
// closed form in modified Bessel functions; integer k >= 0, n even.
cplx feynman_kernel(int n, int k, cplx z, std::span<const double> h, bool euclidean);

struct HankelValue {
    cplx value;
    double error = 0;
};

// Euclidean n = 2 F_alpha(z, x) at |x| = r by Hankel quadrature between the
// zeros of J_0 with Wynn acceleration.
HankelValue f_alpha_hankel(cplx alpha, cplx z, double r);

struct HomogeneityDefect {
    double defect = 0;
    double error = 0;  // quadrature error bound on the defect
    cplx base, scaled;
};

// |F(lambda^2 z, x / lambda) - lambda^{n - 2 alpha - 2} F(z, x)| / |F(z, x)|,
// Euclidean n = 2.
HomogeneityDefect f_alpha_homogeneity_check(int n, cplx alpha, cplx z, double r, double lambda);

}  // namespace reslab
