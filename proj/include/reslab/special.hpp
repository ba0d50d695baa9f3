#pragma once

#include <complex>

namespace reslab {

using cplx = std::complex<double>;

// Lanczos approximation with reflection; accurate to ~1e-15 relative.
cplx complex_gamma(cplx z);
cplx complex_lgamma(cplx z);
// 1/Gamma, entire; exact zeros at the non-positive integers.
cplx rgamma(cplx z);
// sin(pi z) with argument reduction, exact zeros at the integers.
cplx sinpi(cplx z);

// Modified Bessel functions of integer order for complex argument by their
// ascending series.  Intended for |w| up to about 10.
cplx bessel_i(int n, cplx w);
cplx bessel_k(int n, cplx w);

inline constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace reslab
