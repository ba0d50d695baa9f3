#include "reslab/special.hpp"

#include <cmath>

#include "reslab/error.hpp"

namespace reslab {

namespace {

constexpr double kLanczosG = 7;
constexpr double kLanczos[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_lgamma(cplx z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0 && z.real() <= 0 && z.real() == std::round(z.real());
}

}  // namespace

cplx sinpi(cplx z) {
    const double n = std::round(z.real());
    const cplx r(z.real() - n, z.imag());
    const cplx s = std::sin(M_PI * r);
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

cplx complex_lgamma(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("Gamma has a pole at a non-positive integer");
    if (z.real() < 0.5) return std::log(M_PI) - std::log(sinpi(z)) - lanczos_lgamma(1.0 - z);
    return lanczos_lgamma(z);
}

cplx complex_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("Gamma has a pole at a non-positive integer");
    if (z.real() < 0.5) return M_PI / (sinpi(z) * std::exp(lanczos_lgamma(1.0 - z)));
    return std::exp(lanczos_lgamma(z));
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() < 0.5) return sinpi(z) * std::exp(lanczos_lgamma(1.0 - z)) / M_PI;
    return std::exp(-lanczos_lgamma(z));
}

cplx bessel_i(int n, cplx w) {
    n = std::abs(n);
    const cplx q = 0.25 * w * w;
    cplx term = std::pow(0.5 * w, n);
    for (int j = 1; j <= n; ++j) term /= double(j);
    cplx sum = term;
    for (int k = 1; k < 300; ++k) {
        term *= q / (double(k) * double(n + k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

cplx bessel_k(int n, cplx w) {
    n = std::abs(n);
    if (w == cplx(0)) throw PoleError("K_n is singular at zero");
    const cplx half = 0.5 * w, q = 0.25 * w * w;
    cplx finite = 0;
    if (n > 0) {
        // 1/2 (w/2)^{-n} sum_{k<n} (n-k-1)!/k! (-q)^k
        double fact = 1;
        for (int j = 2; j <= n - 1; ++j) fact *= j;  // (n-1)!
        cplx qp = 1;
        for (int k = 0; k < n; ++k) {
            finite += fact * qp;
            if (k + 1 < n) {
                fact /= double(n - k - 1);
                fact /= double(k + 1);
                qp *= -q;
            }
        }
        finite *= 0.5 * std::pow(half, -n);
    }
    const cplx logpart = (n % 2 ? 1.0 : -1.0) * std::log(half) * bessel_i(n, w);
    // (-1)^n 1/2 (w/2)^n sum_k [psi(k+1) + psi(n+k+1)] q^k / (k!(n+k)!)
    double hk = 0, hnk = 0;
    for (int j = 1; j <= n; ++j) hnk += 1.0 / j;
    double denom = 1;
    for (int j = 2; j <= n; ++j) denom *= j;
    cplx qk = 1, series = 0;
    for (int k = 0; k < 300; ++k) {
        if (k > 0) {
            hk += 1.0 / k;
            hnk += 1.0 / (n + k);
            denom *= double(k) * double(n + k);
            qk *= q;
        }
        const cplx t = (hk + hnk - 2 * kEulerGamma) * qk / denom;
        series += t;
        if (k > 2 && std::abs(t) < 1e-17 * std::abs(series)) break;
    }
    const cplx tail = (n % 2 ? -0.5 : 0.5) * std::pow(half, n) * series;
    return finite + logpart + tail;
}

}  // namespace reslab
