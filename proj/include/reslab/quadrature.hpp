#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace reslab {

struct Rule1D {
    std::vector<double> x, w;
    void append(const Rule1D& o) {
        x.insert(x.end(), o.x.begin(), o.x.end());
        w.insert(w.end(), o.w.begin(), o.w.end());
    }
};

// Gauss-Legendre nodes on [-1, 1], computed by Newton iteration on P_m.
const Rule1D& gauss_legendre(int m);
Rule1D gauss_legendre(int m, double a, double b);
// Composite rule with m-point Gauss-Legendre on each [breaks[i], breaks[i+1]].
Rule1D composite(const std::vector<double>& breaks, int m);

// Breakpoints on [a, b] refined geometrically towards the interior or end
// points in `singular`: panels adjacent to a singular point shrink by
// `ratio` for `levels` levels, down to about `finest`.
std::vector<double> graded_breaks(double a, double b, const std::vector<double>& singular,
                                  double ratio, int levels, int coarse_panels = 4);
// Panels sized to a regularization width eps around the singular points:
// a central panel of half width eps/4 and widths doubling outward.
std::vector<double> eps_breaks(double a, double b, const std::vector<double>& singular, double eps,
                               int coarse_panels = 4);

using Point = std::array<double, 4>;

// Quadrature on S^{n-1} in the coordinates xi = (cos psi, sin psi * omega),
// omega in S^{n-2}, with measure sin^{n-2}(psi) d psi d omega.  The polar
// angle psi is measured from the xi_0 axis, so the light cone of the
// mostly-plus quadratic form -xi0^2 + |xi'|^2 sits at psi = pi/4, 3pi/4.
struct SphereRule {
    int dim = 0;
    std::vector<Point> nodes;
    std::vector<double> weights;
    std::vector<double> psi;  // polar angle of each node
    double total_weight() const;
};

// Rule on S^{n-2} with `order` Gauss-Legendre nodes in cos(theta) and
// 2*order trapezoid nodes in phi (n = 4), 2*order trapezoid nodes (n = 3),
// or the two points {+1, -1} (n = 2).
std::vector<std::pair<std::vector<double>, double>> subsphere_rule(int n, int order);
SphereRule sphere_rule(int n, const Rule1D& psi_rule, int inner_order);
SphereRule sphere_rule(int n, const Rule1D& psi_rule,
                       const std::vector<std::pair<std::vector<double>, double>>& inner);
// Plain rule without cone refinement, exact for polynomials of degree
// below about `order`.
SphereRule sphere_rule_uniform(int n, int order);

double sphere_area(int n);  // area of S^{n-1}

}  // namespace reslab
