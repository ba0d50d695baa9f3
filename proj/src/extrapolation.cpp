#include "reslab/extrapolation.hpp"

#include <cmath>

#include "reslab/error.hpp"

namespace reslab {

Extrapolated extrapolate_to_zero(const std::vector<double>& h, const std::vector<std::complex<double>>& f) {
    const std::size_t m = h.size();
    if (m == 0 || f.size() != m) throw DomainError("extrapolation needs matching non-empty samples");
    std::vector<std::complex<double>> p(f);
    Extrapolated out;
    out.diagonal.push_back(p[m - 1]);
    // p[i] holds the interpolant through samples i..i+k evaluated at 0
    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t i = 0; i + k < m; ++i)
            p[i] = (-h[i + k] * p[i] + h[i] * p[i + 1]) / (h[i] - h[i + k]);
        out.diagonal.push_back(p[0]);
    }
    out.value = p[0];
    out.error = m > 1 ? std::abs(out.diagonal[m - 1] - out.diagonal[m - 2]) : 0.0;
    return out;
}

Extrapolated wynn_epsilon(const std::vector<std::complex<double>>& s) {
    const std::size_t m = s.size();
    if (m == 0) throw DomainError("empty sequence");
    std::vector<std::complex<double>> prev(m, 0.0), cur(s);
    Extrapolated out;
    out.value = s.back();
    std::complex<double> last_even = s.back();
    double err = m > 1 ? std::abs(s[m - 1] - s[m - 2]) : 0.0;
    for (std::size_t k = 1; k < m; ++k) {
        std::vector<std::complex<double>> next(m - k);
        bool ok = true;
        for (std::size_t i = 0; i + k < m; ++i) {
            const std::complex<double> d = cur[i + 1] - cur[i];
            if (std::abs(d) < 1e-300) {
                ok = false;
                break;
            }
            next[i] = (k == 1 ? 0.0 : prev[i + 1]) + 1.0 / d;
        }
        if (!ok) break;
        prev = cur;
        cur = next;
        if (k % 2 == 0) {
            const std::complex<double> v = cur.back();
            err = std::abs(v - last_even);
            last_even = v;
            out.diagonal.push_back(v);
        }
    }
    out.value = last_even;
    out.error = err;
    return out;
}

}  // namespace reslab
