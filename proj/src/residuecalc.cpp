#include "reslab/residuecalc.hpp"

#include <cmath>
#include <random>

#include "reslab/error.hpp"
#include "reslab/quadrature.hpp"

namespace reslab {

namespace {

constexpr cplx kI(0, 1);

void check_even(int n) {
    if (n < 2 || n % 2) throw DomainError("residue formulas need even n >= 2");
}

double prefactor(int n) { return std::ldexp(1.0, n - 1) * std::pow(M_PI, 0.5 * n); }

}  // namespace

void validate_symbol(const SymbolExpansion& s, std::span<const double> x, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> lam(0.5, 2), u(-1, 1);
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        const cplx step = s.order - s.terms[i].degree;
        if (std::abs(step.imag()) > 1e-12 || std::abs(step.real() - std::round(step.real())) > 1e-12 ||
            step.real() < -1e-12)
            throw DomainError("symbol degrees must step down from the order by integers");
        if (i > 0 && std::real(s.terms[i - 1].degree - s.terms[i].degree) < 0.5)
            throw DomainError("symbol degrees must strictly decrease");
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<double> xi(s.n), xl(s.n);
            const double l = lam(rng);
            for (int j = 0; j < s.n; ++j) {
                xi[j] = u(rng);
                xl[j] = l * xi[j];
            }
            const cplx a = s.terms[i].eval(x, xi);
            const cplx b = s.terms[i].eval(x, xl);
            const cplx want = std::exp(s.terms[i].degree * std::log(l)) * a;
            if (std::abs(b - want) > 1e-10 * std::max(1.0, std::abs(want)))
                throw DomainError("symbol term is not homogeneous of its declared degree");
        }
    }
}

cplx wodzicki_density(const SymbolExpansion& s, std::span<const double> x, int order) {
    const SymbolTerm* t = nullptr;
    for (const auto& term : s.terms)
        if (std::abs(term.degree - cplx(-s.n)) < 1e-12) t = &term;
    if (!t) return 0;
    const SphereRule S = sphere_rule_uniform(s.n, order);
    cplx sum = 0;
    for (std::size_t i = 0; i < S.nodes.size(); ++i)
        sum += S.weights[i] * t->eval(x, std::span<const double>(S.nodes[i].data(), s.n));
    return sum * std::pow(2 * M_PI, -s.n);
}

SymbolExpansion resolvent_model_symbol(int n, int terms) {
    SymbolExpansion s;
    s.n = n;
    s.order = -2;
    s.chart = "R^" + std::to_string(n);
    for (int j = 0; j < terms; ++j) {
        const double sign = j % 2 ? -1 : 1;
        const int deg = -2 - 2 * j;
        s.terms.push_back({cplx(deg), [n, sign, deg](std::span<const double>, std::span<const double> xi) {
                               double r2 = 0;
                               for (int i = 0; i < n; ++i) r2 += xi[i] * xi[i];
                               return cplx(sign * std::pow(r2, 0.5 * deg));
                           }});
    }
    return s;
}

cplx hadamard_dynres(int n, cplx z, std::span<const double> u) {
    check_even(n);
    if (static_cast<int>(u.size()) < n / 2) throw DomainError("insufficient Hadamard coefficients");
    cplx sum = 0, zp = 1;
    double fact = 1;
    for (int p = 0; p <= n / 2 - 1; ++p) {
        if (p > 0) {
            zp *= z;
            fact *= p;
        }
        sum += zp * u[n / 2 - p - 1] / fact;
    }
    return kI * sum / prefactor(n);
}

bool in_residue_range(int n, int alpha) { return alpha >= 1 && alpha <= n / 2; }

cplx complex_power_dynres(int n, int alpha, cplx z, std::span<const double> u) {
    check_even(n);
    if (!in_residue_range(n, alpha)) return 0;
    const int top = n / 2 - alpha;
    if (static_cast<int>(u.size()) < top + 1) throw DomainError("insufficient Hadamard coefficients");
    cplx sum = 0, zp = 1;
    double fact = 1;
    for (int p = 0; p <= top; ++p) {
        if (p > 0) {
            zp *= z;
            fact *= p;
        }
        sum += zp * u[top - p] / fact;
    }
    double fact_alpha = 1;
    for (int j = 2; j < alpha; ++j) fact_alpha *= j;
    return kI * sum / (fact_alpha * prefactor(n));
}

cplx zeta_residue(int n, int k, double eps, std::span<const double> u) {
    return complex_power_dynres(n, k, cplx(0, eps), u) / 2.0;
}

cplx gamma_coefficient(cplx alpha, int m) {
    if (m < 0) throw DomainError("gamma_coefficient needs m >= 0");
    return rgamma(alpha);
}

TraceFactor canonical_trace_factor(int n, int deltamod, cplx s) {
    if (deltamod < 0) throw DomainError("deltamod must be non-negative");
    TraceFactor f;
    f.exponent = double(n + deltamod) - 2.0 * s;
    const double period = 2 * M_PI / std::log(2.0);
    const double k = std::round(f.exponent.imag() / period);
    f.pole_distance = std::abs(f.exponent - cplx(0, k * period));
    if (f.pole_distance < 1e-12) {
        throw PoleError("continuation factor pole at e = " + std::to_string(f.exponent.real()) + " + " +
                        std::to_string(f.exponent.imag()) + "i");
    }
    f.value = 2.0 / (1.0 - std::exp(f.exponent * std::log(2.0)));
    return f;
}

}  // namespace reslab
