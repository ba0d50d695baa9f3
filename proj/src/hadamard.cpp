#include "reslab/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "reslab/error.hpp"
#include "reslab/extrapolation.hpp"
#include "reslab/quadrature.hpp"

namespace reslab {

namespace {

double legendre(int k, double x) {
    double p0 = 1, p1 = x;
    if (k == 0) return p0;
    for (int j = 1; j < k; ++j) {
        const double p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// S(i, j): integral from -1 to x_i of the j-th Lagrange basis polynomial on
// the m-point Gauss-Legendre nodes.
Eigen::MatrixXd cumulative_matrix(int m) {
    const auto& gl = gauss_legendre(m);
    Eigen::MatrixXd V(m, m), W(m, m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            const double x = gl.x[i];
            V(i, k) = legendre(k, x);
            W(i, k) = k == 0 ? x + 1 : (legendre(k + 1, x) - legendre(k - 1, x)) / (2 * k + 1);
        }
    return W * V.inverse();
}

struct Fit {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    double cond = 0;
};

Fit quadratic_fit(const Eigen::VectorXd& centre, const std::vector<Eigen::VectorXd>& pts,
                  const std::vector<double>& f) {
    const int n = static_cast<int>(centre.size());
    const int nb = 1 + n + n * (n + 1) / 2;
    const int m = static_cast<int>(pts.size());
    double s = 0;
    for (const auto& p : pts) s = std::max(s, (p - centre).norm());
    Eigen::MatrixXd A(m, nb);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd u = (pts[i] - centre) / s;
        int c = 0;
        A(i, c++) = 1;
        for (int a = 0; a < n; ++a) A(i, c++) = u[a];
        for (int a = 0; a < n; ++a)
            for (int e = a; e < n; ++e) A(i, c++) = a == e ? 0.5 * u[a] * u[a] : u[a] * u[e];
        b[i] = f[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Fit out;
    out.cond = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
    const Eigen::VectorXd coef = svd.solve(b);
    out.grad.resize(n);
    out.hess.resize(n, n);
    int c = 1;
    for (int a = 0; a < n; ++a) out.grad[a] = coef[c++] / s;
    for (int a = 0; a < n; ++a)
        for (int e = a; e < n; ++e) out.hess(a, e) = out.hess(e, a) = coef[c++] / (s * s);
    return out;
}

struct NodeGeometry {
    Eigen::MatrixXd ginv;  // inverse pulled-back metric
    Eigen::VectorXd B;     // first-order coefficient of P in normal coordinates
    double radial_dlog = 0;  // omega . grad log sqrt|g~|
    double u0_closed = 0;    // |g~|^{-1/4}
};

struct Stencil {
    int dirs;
    int layers;
    int core_degree;
    double core_radius;
};

std::vector<std::vector<int>> exponents(int n, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(n, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == n) {
            out.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(rec, 0, degree);
    return out;
}

double ipow(double x, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Polynomial fit of degree q in u = h / scale over the given nodes.
struct CoreFit {
    std::vector<std::vector<int>> exps;
    Eigen::VectorXd coef;
    double scale = 1;
    double cond = 0;

    void derivatives(const Eigen::VectorXd& h, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        const int n = static_cast<int>(h.size());
        const Eigen::VectorXd u = h / scale;
        grad.setZero(n);
        hess.setZero(n, n);
        for (std::size_t t = 0; t < exps.size(); ++t) {
            const auto& e = exps[t];
            auto term = [&](int a, int b) {
                double v = coef[t];
                for (int i = 0; i < n; ++i) {
                    int k = e[i];
                    if (i == a) v *= k--;
                    if (i == b) v *= k--;
                    if (k < 0) return 0.0;
                    v *= ipow(u[i], k);
                }
                return v;
            };
            for (int a = 0; a < n; ++a) {
                grad[a] += term(a, -1);
                for (int b = a; b < n; ++b) hess(a, b) += term(a, b);
            }
        }
        grad /= scale;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) hess(b, a) = hess(a, b) /= scale * scale;
    }
};

CoreFit core_fit(const std::vector<Eigen::VectorXd>& pts, const std::vector<double>& f, int degree, double scale) {
    CoreFit out;
    out.exps = exponents(static_cast<int>(pts.front().size()), degree);
    out.scale = scale;
    const int m = static_cast<int>(pts.size()), nb = static_cast<int>(out.exps.size());
    Eigen::MatrixXd A(m, nb);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd u = pts[i] / scale;
        for (int t = 0; t < nb; ++t) {
            double v = 1;
            for (int a = 0; a < u.size(); ++a) v *= ipow(u[a], out.exps[t][a]);
            A(i, t) = v;
        }
        b[i] = f[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    const auto& R = qr.matrixR();
    const double rmin = std::abs(R(nb - 1, nb - 1));
    out.cond = rmin > 0 ? std::abs(R(0, 0)) / rmin : INFINITY;
    out.coef = qr.solve(b);
    return out;
}

class Solver {
public:
    Solver(const HadamardTable& t, std::vector<NodeGeometry> geo)
        : t_(t), geo_(std::move(geo)), J_(static_cast<int>(t.radii.size())),
          D_(static_cast<int>(t.directions.size())), S_(cumulative_matrix(t.panel_nodes)) {
        // directions sorted by angular proximity
        nbr_.resize(D_);
        for (int d = 0; d < D_; ++d) {
            std::vector<int> idx(D_);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
                return t.directions[d].dot(t.directions[a]) > t.directions[d].dot(t.directions[b]);
            });
            nbr_[d] = std::move(idx);
        }
    }

    // Ray integral: cum[j] = int_0^{r_j} f(s) ds from node values f on one ray.
    std::vector<double> cumulative(const std::vector<double>& f) const {
        const int m = t_.panel_nodes;
        std::vector<double> out(J_);
        double base = 0;
        const auto& gl = gauss_legendre(m);
        for (std::size_t p = 0; p + 1 < t_.breaks.size(); ++p) {
            const double half = 0.5 * (t_.breaks[p + 1] - t_.breaks[p]);
            for (int i = 0; i < m; ++i) {
                double acc = 0;
                for (int j = 0; j < m; ++j) acc += S_(i, j) * f[p * m + j];
                out[p * m + i] = base + half * acc;
            }
            double full = 0;
            for (int j = 0; j < m; ++j) full += gl.w[j] * f[p * m + j];
            base += half * full;
        }
        return out;
    }

    std::vector<double> level0() const {
        std::vector<double> u0(static_cast<std::size_t>(D_) * J_);
        for (int d = 0; d < D_; ++d) {
            std::vector<double> f(J_);
            for (int j = 0; j < J_; ++j) f[j] = geo_[d * J_ + j].radial_dlog;
            const auto I = cumulative(f);
            for (int j = 0; j < J_; ++j) u0[d * J_ + j] = std::exp(-0.5 * I[j]);
        }
        return u0;
    }

    // u_k from u_{k-1}; returns the worst stencil condition number through `cond`.
    std::vector<double> next_level(int k, const std::vector<double>& prev, const std::vector<double>& u0,
                                   const Stencil& st, double& cond) const {
        const int n = t_.dim();
        std::vector<double> Pu(prev.size());
        const int A = std::min(st.dirs, D_);
        const int nl = std::min(2 * st.layers + 1, J_);
        std::vector<Eigen::VectorXd> pts;
        std::vector<double> f;
        for (int d = 0; d < D_; ++d)
            for (int j = 0; j < J_; ++j)
                if (t_.radii[j] <= st.core_radius) {
                    pts.push_back(t_.radii[j] * t_.directions[d]);
                    f.push_back(prev[d * J_ + j]);
                }
        const CoreFit core = core_fit(pts, f, st.core_degree, st.core_radius);
        cond = std::max(cond, core.cond);
        Eigen::VectorXd grad;
        Eigen::MatrixXd hess;
        for (int d = 0; d < D_; ++d)
            for (int j = 0; j < J_; ++j) {
                const Eigen::VectorXd c = t_.radii[j] * t_.directions[d];
                const auto& geo = geo_[d * J_ + j];
                if (t_.radii[j] <= st.core_radius) {
                    core.derivatives(c, grad, hess);
                    double val = geo.B.dot(grad);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) val += geo.ginv(a, b) * hess(a, b);
                    Pu[d * J_ + j] = val;
                    continue;
                }
                const int lo = std::clamp(j - st.layers, 0, J_ - nl);
                pts.clear();
                f.clear();
                for (int a = 0; a < A; ++a) {
                    const int dd = nbr_[d][a];
                    for (int l = lo; l < lo + nl; ++l) {
                        pts.push_back(t_.radii[l] * t_.directions[dd]);
                        f.push_back(prev[dd * J_ + l]);
                    }
                }
                const Fit fit = quadratic_fit(c, pts, f);
                cond = std::max(cond, fit.cond);
                double val = geo.B.dot(fit.grad);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) val += geo.ginv(a, b) * fit.hess(a, b);
                Pu[d * J_ + j] = val;
            }
        std::vector<double> uk(prev.size());
        for (int d = 0; d < D_; ++d) {
            std::vector<double> f(J_);
            for (int j = 0; j < J_; ++j)
                f[j] = std::pow(t_.radii[j], k - 1) * Pu[d * J_ + j] / u0[d * J_ + j];
            const auto I = cumulative(f);
            for (int j = 0; j < J_; ++j)
                uk[d * J_ + j] = -std::pow(t_.radii[j], -k) * u0[d * J_ + j] * I[j];
        }
        return uk;
    }

    std::vector<std::vector<double>> solve(int N, const Stencil& st, double& cond) const {
        std::vector<std::vector<double>> v{level0()};
        for (int k = 1; k <= N; ++k) v.push_back(next_level(k, v.back(), v.front(), st, cond));
        return v;
    }

    // Direction average at the three smallest radii, extrapolated in r^2.
    DiagonalValue diagonal(const std::vector<double>& uk) const {
        std::vector<double> h;
        std::vector<std::complex<double>> f;
        for (int j = 0; j < std::min(3, J_); ++j) {
            double avg = 0;
            for (int d = 0; d < D_; ++d) avg += uk[d * J_ + j];
            h.push_back(t_.radii[j] * t_.radii[j]);
            f.push_back(avg / D_);
        }
        const auto ex = extrapolate_to_zero(h, f);
        return {ex.value.real(), ex.error};
    }

private:
    const HadamardTable& t_;
    std::vector<NodeGeometry> geo_;
    int J_, D_;
    Eigen::MatrixXd S_;
    std::vector<std::vector<int>> nbr_;
};

}  // namespace

std::vector<Eigen::VectorXd> symmetric_directions(int n, int count, unsigned seed) {
    if (count < 2 || count % 2) throw ConfigError("direction count must be even and positive");
    std::vector<Eigen::VectorXd> out;
    if (n == 2) {
        for (int d = 0; d < count; ++d) {
            Eigen::VectorXd w(2);
            w << std::cos(2 * M_PI * d / count), std::sin(2 * M_PI * d / count);
            out.push_back(w);
        }
        return out;
    }
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    for (int d = 0; d < count / 2; ++d) {
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w[i] = gauss(rng);
        out.push_back(w.normalized());
    }
    for (int d = 0; d < count / 2; ++d) out.push_back(-out[d]);
    return out;
}

HadamardTable solve_transport(const Metric& g, const Eigen::VectorXd& x0, const HadamardOptions& opt) {
    const int n = g.dim();
    if (n != 2 && n != 4) throw ConfigError("Hadamard tables support n = 2 and n = 4 only");
    if (opt.order < 0 || opt.order > 3) throw ConfigError("Hadamard order N must lie in 0..3");
    if (opt.panels < 2 || opt.panel_nodes < 3) throw ConfigError("radial grid too small");

    HadamardTable t{NormalCoordinates(g, x0, opt.geodesic, opt.frame_seed)};
    t.order = opt.order;
    t.panel_nodes = opt.panel_nodes;
    const double R = opt.radius > 0 ? opt.radius : std::min(0.5, 0.8 * t.ncs.trust_radius());
    if (R > t.ncs.trust_radius()) throw DomainError("grid radius exceeds the trust radius of the chart");

    t.breaks.push_back(0);
    for (int p = opt.panels - 1; p >= 0; --p) t.breaks.push_back(R * std::pow(opt.ratio, p));
    const auto rule = composite(t.breaks, opt.panel_nodes);
    t.radii = rule.x;

    t.directions = symmetric_directions(n, opt.directions > 0 ? opt.directions : (n == 2 ? 32 : 200), opt.seed);
    const int J = static_cast<int>(t.radii.size());
    const int D = static_cast<int>(t.directions.size());

    std::vector<NodeGeometry> geo(static_cast<std::size_t>(D) * J);
    for (int d = 0; d < D; ++d) {
        const auto samples = t.ncs.ray(t.directions[d], t.radii);
        for (int j = 0; j < J; ++j) {
            const auto& s = samples[j];
            NodeGeometry& ng = geo[d * J + j];
            ng.ginv = s.gt.inverse();
            ng.B = ng.ginv * s.dlog_sqrt_det;
            // d_b g~^{ba} = -(g~^{-1} d_b g~ g~^{-1})(b, a)
            for (int b = 0; b < n; ++b) ng.B -= (ng.ginv * s.dgt[b] * ng.ginv).row(b).transpose();
            ng.radial_dlog = t.directions[d].dot(s.dlog_sqrt_det);
            ng.u0_closed = std::exp(-0.5 * s.log_sqrt_det);
        }
    }

    Solver solver(t, geo);
    const int A = opt.stencil_directions > 0 ? opt.stencil_directions : (n == 2 ? 5 : 18);
    const double core = opt.core_fraction * R;
    const int q = opt.core_degree > 0 ? opt.core_degree : (n == 2 ? 8 : 6);
    const Stencil primary{A, opt.stencil_layers, q, core};
    double cond = 0;
    t.values = solver.solve(opt.order, primary, cond);
    t.max_condition = cond;
    if (cond > 1e12) throw ConditioningError("Hadamard stencil fits are ill conditioned; refine the grid", cond);

    for (std::size_t i = 0; i < geo.size(); ++i)
        t.u0_defect = std::max(t.u0_defect, std::abs(t.values[0][i] / geo[i].u0_closed - 1));

    t.diagonal.push_back({1.0, 0.0});
    for (int k = 1; k <= opt.order; ++k) t.diagonal.push_back(solver.diagonal(t.values[k]));
    t.wide_diagonal.push_back(1.0);
    if (opt.error_estimate && opt.order > 0) {
        const Stencil wide{A + A / 2, opt.stencil_layers + 1, q - 1, 1.5 * core};
        double cw = 0;
        const auto wv = solver.solve(opt.order, wide, cw);
        for (int k = 1; k <= opt.order; ++k) {
            const double w = solver.diagonal(wv[k]).value;
            t.wide_diagonal.push_back(w);
            t.diagonal[k].error += std::abs(w - t.diagonal[k].value);
        }
    }
    return t;
}

std::vector<DiagonalValue> diagonal_coefficients(const HadamardTable& table) {
    if (table.diagonal.size() != static_cast<std::size_t>(table.order + 1))
        throw ConvergenceError("Hadamard table has not been solved");
    for (const auto& v : table.diagonal)
        if (!std::isfinite(v.value) || !std::isfinite(v.error))
            throw ConvergenceError("diagonal extrapolation diverged; the grid is too coarse");
    return table.diagonal;
}

double HadamardTable::value_at(int k, const Eigen::VectorXd& h) const {
    if (dim() != 2) throw DomainError("off-grid Hadamard evaluation is implemented for n = 2 only");
    if (k < 0 || k > order) throw DomainError("Hadamard coefficient index out of range");
    const double r = h.norm();
    if (r == 0) return diagonal[k].value;
    if (r > breaks.back() * (1 + 1e-12)) throw DomainError("point outside the Hadamard grid");
    const int M = static_cast<int>(directions.size());
    const int J = static_cast<int>(radii.size());
    const double theta = std::atan2(h[1], h[0]);
    std::vector<double> wt(M);
    for (int d = 0; d < M; ++d) {
        const double x = theta - 2 * M_PI * d / M;
        const double tn = std::tan(0.5 * x);
        wt[d] = std::abs(tn) < 1e-14 ? 1.0 : std::sin(0.5 * M * x) / (M * tn);
    }
    std::size_t p = std::upper_bound(breaks.begin(), breaks.end(), r) - breaks.begin();
    p = std::clamp<std::size_t>(p, 1, breaks.size() - 1) - 1;
    const int m = panel_nodes;
    double num = 0, den = 0;
    for (int i = 0; i < m; ++i) {
        const int j = static_cast<int>(p) * m + i;
        double fj = 0;
        for (int d = 0; d < M; ++d) fj += wt[d] * values[k][d * J + j];
        // barycentric weights for Gauss-Legendre nodes: (-1)^i sqrt((1 - x_i^2) w_i)
        const auto& gl = gauss_legendre(m);
        const double bw = (i % 2 ? -1.0 : 1.0) * std::sqrt((1 - gl.x[i] * gl.x[i]) * gl.w[i]);
        const double diff = r - radii[j];
        if (diff == 0) return fj;
        num += bw / diff * fj;
        den += bw / diff;
    }
    return num / den;
}

}  // namespace reslab
