#pragma once

#include <vector>

#include <Eigen/Dense>

#include "reslab/geodesic.hpp"

namespace reslab {

struct HadamardOptions {
    int order = 1;              // N, at most 3
    double radius = 0;          // outer grid radius; 0 picks min(0.5, 0.8 * trust radius)
    int panels = 5;             // geometric radial panels
    double ratio = 0.5;         // ratio of consecutive panel ends
    int panel_nodes = 8;        // Gauss-Legendre nodes per panel
    int directions = 0;         // even; defaults n = 2: 32, n = 4: 200
    unsigned seed = 1;          // direction sampling for n = 4
    int stencil_directions = 0; // nearest directions per fit (n = 2: 5, n = 4: 18)
    int stencil_layers = 2;     // radial layers on each side of the fit centre
    double core_fraction = 0.25;  // nodes inside this fraction of the radius share one polynomial fit
    int core_degree = 0;        // 0 picks 8 for n = 2 and 6 for n = 4
    bool error_estimate = true; // second pass with a wider stencil
    const Eigen::MatrixXd* frame_seed = nullptr;
    GeodesicOptions geodesic;
};

struct DiagonalValue {
    double value = 0;
    double error = 0;
};

struct HadamardTable {
    NormalCoordinates ncs;
    int order = 0;
    std::vector<Eigen::VectorXd> directions;  // unit vectors, frame components
    std::vector<double> radii;                // increasing, all > 0
    std::vector<double> breaks;               // radial panel ends, breaks[0] = 0
    int panel_nodes = 0;
    // values[k][d * radii.size() + j] = u_k(radii[j] * directions[d])
    std::vector<std::vector<double>> values;
    std::vector<DiagonalValue> diagonal;
    double u0_defect = 0;         // max |u_0 |g~|^{1/4} - 1| over the grid
    double max_condition = 0;     // worst stencil condition number
    std::vector<double> wide_diagonal;  // diagonal values from the wider stencil

    // u_k at an arbitrary point of the grid ball; n = 2 only (trigonometric
    // interpolation in angle, Lagrange in radius within a panel).
    double value_at(int k, const Eigen::VectorXd& h) const;
    int dim() const { return ncs.dim(); }
};

HadamardTable solve_transport(const Metric& g, const Eigen::VectorXd& x0, const HadamardOptions& opt = {});
std::vector<DiagonalValue> diagonal_coefficients(const HadamardTable& table);

// Direction sets closed under omega -> -omega: equally spaced angles for
// n = 2, seeded Gaussian samples otherwise.
std::vector<Eigen::VectorXd> symmetric_directions(int n, int count, unsigned seed);

}  // namespace reslab
