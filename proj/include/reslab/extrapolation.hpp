#pragma once

#include <complex>
#include <vector>

namespace reslab {

struct Extrapolated {
    std::complex<double> value;
    double error = 0;  // |last two diagonal entries| of the tableau
    std::vector<std::complex<double>> diagonal;
};

// Polynomial extrapolation to h = 0 of samples f(h_j) (Neville tableau).
Extrapolated extrapolate_to_zero(const std::vector<double>& h, const std::vector<std::complex<double>>& f);

// Wynn epsilon acceleration of a sequence of partial sums.
Extrapolated wynn_epsilon(const std::vector<std::complex<double>>& partial_sums);

}  // namespace reslab
