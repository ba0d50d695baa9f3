#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "reslab/jet.hpp"
#include "reslab/metric.hpp"

namespace reslab {

struct GeodesicOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    double max_radius = 1.0;  // cap on the trust radius of a chart
    int max_newton = 40;
};

// Geodesic x(s) with x(0) = x0, x'(0) = E * omega, together with its Taylor
// jets in omega up to `order` (variational equations of that order).
struct VariedGeodesic {
    std::vector<Jet<double>> x, v;  // per coordinate
};

std::vector<VariedGeodesic> integrate_geodesic(const Metric& g, std::span<const double> x0,
                                               const Eigen::MatrixXd& E, const Eigen::VectorXd& omega,
                                               const std::vector<double>& times, int order,
                                               const GeodesicOptions& opt = {});

Eigen::VectorXd exp_map(const Metric& g, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                        const GeodesicOptions& opt = {});
// Derivative of v -> exp_x(v).
Eigen::MatrixXd d_exp(const Metric& g, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                      const GeodesicOptions& opt = {});
// Newton shooting; coordinate components of the initial velocity.
Eigen::VectorXd log_map(const Metric& g, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                        double tol = 1e-11, const GeodesicOptions& opt = {});

struct Frame {
    Eigen::MatrixXd E;     // columns are e_a in coordinate components
    std::vector<int> eta;  // g(e_a, e_b) = eta_a delta_ab
};

// Signature-respecting Gram-Schmidt starting from the columns of `seed`
// (the coordinate basis by default); e_0 is future pointing (positive x0
// component) for Lorentzian metrics.
Frame build_frame(const Metric& g, const Eigen::VectorXd& x, const Eigen::MatrixXd* seed = nullptr);

// Pulled-back metric and its first derivatives at one point of a chart.
struct NormalSample {
    Eigen::VectorXd h, y;
    Eigen::MatrixXd gt;                // g~_ab(h)
    std::vector<Eigen::MatrixXd> dgt;  // dgt[c](a, b) = d_c g~_ab(h)
    double log_sqrt_det = 0;           // log |det g~|^{1/2}
    Eigen::VectorXd dlog_sqrt_det;     // d_c log |det g~|^{1/2}
};

class NormalCoordinates {
public:
    NormalCoordinates(const Metric& g, const Eigen::VectorXd& base, const GeodesicOptions& opt = {},
                      const Eigen::MatrixXd* seed = nullptr);

    const Metric& metric() const { return g_; }
    const Eigen::VectorXd& base() const { return x0_; }
    const Frame& frame() const { return frame_; }
    int dim() const { return g_.dim(); }
    double trust_radius() const { return radius_; }
    const GeodesicOptions& options() const { return opt_; }
    Eigen::MatrixXd eta() const;

    // Samples along h = r*omega (omega a unit vector in frame components) at
    // the given increasing radii; r = 0 is allowed.
    std::vector<NormalSample> ray(const Eigen::VectorXd& omega, const std::vector<double>& radii) const;
    NormalSample at(const Eigen::VectorXd& h) const;

    Eigen::VectorXd to_point(const Eigen::VectorXd& h) const;
    Eigen::VectorXd to_normal(const Eigen::VectorXd& y) const;

private:
    NormalSample origin_sample() const;

    Metric g_;
    Eigen::VectorXd x0_;
    Frame frame_;
    GeodesicOptions opt_;
    double radius_;
};

// M(x, h) with M(x, h) h = frame components of log_x(x + E h) and M(x, 0) = Id.
Eigen::MatrixXd kuranishi_matrix(const NormalCoordinates& ncs, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& h, int quad_order = 12);

}  // namespace reslab
