#pragma once

// Closed-form residues: Wodzicki density of classical symbols, dynamical
// residues of H_N(z) and of complex powers, zeta residues, the complex-power
// parametrix coefficient and the Littlewood-Paley continuation factor.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reslab/special.hpp"

namespace reslab {

struct SymbolTerm {
    cplx degree;
    std::function<cplx(std::span<const double> x, std::span<const double> xi)> eval;
};

struct SymbolExpansion {
    int n = 2;
    cplx order;
    std::vector<SymbolTerm> terms;
    std::string chart;
};

// Degrees must step down by positive integers from the order, and each term
// must satisfy a(x, lambda xi) = lambda^degree a(x, xi) to 1e-10 at random
// lambda in [0.5, 2]; throws DomainError otherwise.
void validate_symbol(const SymbolExpansion& s, std::span<const double> x, unsigned seed = 1);

// (2 pi)^{-n} times the integral of the degree -n term over S^{n-1};
// 0 without such a term.
cplx wodzicki_density(const SymbolExpansion& s, std::span<const double> x, int order = 32);

// Symbol of (1 - Delta)^{-1} on R^n: sum_j (-1)^j |xi|^{-2-2j}, j < terms.
SymbolExpansion resolvent_model_symbol(int n, int terms);

// i sum_{p < n/2} z^p u_{n/2-p-1} / (p! 2^{n-1} pi^{n/2})
cplx hadamard_dynres(int n, cplx z, std::span<const double> u_diag);

// i sum_{p <= n/2-alpha} z^p u_{n/2-p-alpha} / (p! (alpha-1)! 2^{n-1} pi^{n/2})
// for alpha in 1..n/2, zero for every other integer alpha.
cplx complex_power_dynres(int n, int alpha, cplx z, std::span<const double> u_diag);
bool in_residue_range(int n, int alpha);

// Half the dynamical residue of (P - i eps)^{-k}.
cplx zeta_residue(int n, int k, double eps, std::span<const double> u_diag);

// (-1)^m Gamma(1 - alpha) / (Gamma(1 - alpha - m) Gamma(alpha + m)), which
// equals 1/Gamma(alpha) for every m >= 0; evaluated in that entire form.
cplx gamma_coefficient(cplx alpha, int m);

struct TraceFactor {
    cplx value;
    cplx exponent;             // e = n + deltamod - 2 s
    double pole_distance = 0;  // distance of e to the lattice 2 pi i Z / log 2
};

// 2 / (1 - 2^e); throws PoleError when e lies on the pole lattice.
TraceFactor canonical_trace_factor(int n, int deltamod, cplx s);

struct ResidueReport {
    std::vector<double> point;
    int alpha = 1;
    cplx z;
    cplx analytic;
    std::optional<cplx> numeric;
    double numeric_error = 0;
    cplx zeta;
    double delta = 0;          // |numeric - analytic|
    double delta_negated = 0;  // |numeric + analytic|
    double tolerance = 0;
    std::vector<double> u_diag;
    std::vector<double> u_error;
    std::string u_provenance;
    std::string note;
};

}  // namespace reslab
