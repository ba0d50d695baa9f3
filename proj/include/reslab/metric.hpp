#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "reslab/expr.hpp"
#include "reslab/jet.hpp"

namespace reslab {

// A pseudo-Riemannian metric given by symbolic components in a single chart.
// Lorentzian metrics use the mostly-minus convention with x0 timelike.
class Metric {
public:
    Metric(std::string name, int dim, std::vector<int> signature, std::vector<ExprPtr> components);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const std::vector<int>& signature() const { return signature_; }
    bool lorentzian() const;
    const Expr& component(int i, int j) const { return *comp_[i * dim_ + j]; }

    template <class S>
    void evaluate(std::span<const S> x, std::span<S> out) const {
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                const S v = reslab::evaluate(*comp_[i * dim_ + j], x);
                out[i * dim_ + j] = v;
                if (j != i) out[j * dim_ + i] = v;
            }
    }

    // Components at x; throws SingularMetricError / SignatureError.
    Eigen::MatrixXd at(std::span<const double> x) const;
    void check_point(std::span<const double> x) const;

    // Taylor jets of g_ij around x (row-major, dim*dim entries).
    std::vector<Jet<double>> jets(std::span<const double> x, int order) const;

private:
    std::string name_;
    int dim_;
    std::vector<int> signature_;
    std::vector<ExprPtr> comp_;
};

// Accepts either a config text (keys dim, signature, name, gij = "...",
// optionally g = "diag(...)") or the shorthand "diag(e0, e1, ...)".
Metric parse_metric(std::string_view source);
Metric zoo_metric(std::string_view name);
std::vector<std::string> zoo_names();
// Resolve a --metric argument: a zoo name, a shorthand, or a file path.
Metric load_metric(const std::string& spec);

// Inverse of a symmetric matrix of jets (Gauss-Jordan with pivoting on the
// values).
std::vector<Jet<double>> inverse(std::span<const Jet<double>> m, int n);

// Christoffel symbols Gamma^i_{jk} as jets of the given order, stored at
// [(i*n + j)*n + k].  Needs metric jets of order+1.
std::vector<Jet<double>> christoffel_jets(const Metric& g, std::span<const double> x, int order);

struct Curvature {
    int dim = 0;
    std::vector<double> christoffel;  // Gamma^i_{jk} at (i*n + j)*n + k
    std::vector<double> riemann;      // R^i_{jkl} at ((i*n + j)*n + k)*n + l
    std::vector<double> ricci;        // R_{jl} at j*n + l
    double scalar = 0;
};

// R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj},
// R_{jl} = R^i_{jil}, R = g^{jl} R_{jl}.  The unit round sphere has R = +2.
Curvature curvature_at(const Metric& g, std::span<const double> x);

// (P f)(x) for the wave operator P = |g|^{-1/2} d_j |g|^{1/2} g^{jk} d_k.
double wave_apply(const Metric& g, const Expr& f, std::span<const double> x);

}  // namespace reslab
