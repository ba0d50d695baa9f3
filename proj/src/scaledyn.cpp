#include "reslab/scaledyn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <type_traits>

#include <Eigen/Dense>

#include "reslab/error.hpp"
#include "reslab/extrapolation.hpp"
#include "reslab/modeldist.hpp"
#include "reslab/quadrature.hpp"

namespace reslab {

SampledKernel scale_kernel(const SampledKernel& u, double t) {
    if (t < 0) throw DomainError("scaling time must be non-negative");
    SampledKernel s = u;
    const double f = std::exp(-t);
    const KernelFn inner = u.eval;
    const int n = u.n;
    s.eval = [inner, f, n](std::span<const double> x, std::span<const double> h) {
        std::array<double, 4> hs{};
        for (int i = 0; i < n; ++i) hs[i] = f * h[i];
        return inner(x, std::span<const double>(hs.data(), n));
    };
    // the scaled evaluator reaches radius / f in h
    s.radius = u.radius / f;
    return s;
}

TestFunction concentrating_test_function(std::span<const double> x0, double width, double sigma, int x_order) {
    if (!(sigma > 0)) throw DomainError("test function width sigma must be positive");
    const int n = static_cast<int>(x0.size());
    TestFunction phi;
    if (width <= 0) {
        phi.x_nodes.push_back(std::vector<double>(x0.begin(), x0.end()));
        phi.x_weights.push_back(1);
    } else {
        const Rule1D& gl = gauss_legendre(x_order);
        std::vector<double> w1;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double s = gl.x[i];
            w1.push_back(gl.w[i] * (1 - s * s) * (1 - s * s));
        }
        const int m = static_cast<int>(gl.x.size());
        int count = 1;
        for (int d = 0; d < n; ++d) count *= m;
        double total = 0;
        for (int c = 0; c < count; ++c) {
            std::vector<double> x(x0.begin(), x0.end());
            double w = 1;
            for (int d = 0, r = c; d < n; ++d, r /= m) {
                x[d] += width * gl.x[r % m];
                w *= w1[r % m];
            }
            phi.x_nodes.push_back(x);
            phi.x_weights.push_back(w);
            total += w;
        }
        for (double& w : phi.x_weights) w /= total;
    }
    const double norm = std::pow(M_PI * sigma * sigma, -0.5 * n);
    phi.h_profile = [sigma, norm, n](std::span<const double>, std::span<const double> h) {
        double r2 = 0;
        for (int i = 0; i < n; ++i) r2 += h[i] * h[i];
        return norm * std::exp(-r2 / (sigma * sigma));
    };
    phi.support = 6.5 * sigma;
    return phi;
}

std::vector<double> time_grid(double t_max, double dt) {
    if (!(dt > 0) || !(t_max > 0)) throw ConfigError("time grid needs positive t_max and dt");
    std::vector<double> t;
    const int m = static_cast<int>(std::llround(t_max / dt));
    for (int j = 0; j <= m; ++j) t.push_back(j * dt);
    return t;
}

CorrelatorSamples correlator(const SampledKernel& u, const TestFunction& phi, const std::vector<double>& t,
                             const CorrelatorOptions& opt) {
    const int n = u.n;
    if (n != 2 && n != 4) throw ConfigError("kernels must have n = 2 or 4");
    if (u.leading_degree + n <= 0)
        throw DomainError("kernel too singular at h = 0 for the correlator quadrature");
    const double rho = phi.support;
    if (rho > u.radius * (1 + 1e-12)) throw DomainError("test function reaches beyond the kernel radius");
    const double dl = opt.dlog;
    if (!(dl > 0)) throw ConfigError("dlog must be positive");

    std::vector<int> shift;
    for (double tj : t) {
        if (tj < 0) throw DomainError("scaling time must be non-negative");
        const long j = std::lround(tj / dl);
        if (std::abs(tj - j * dl) > 1e-9) throw ConfigError("scaling times must be multiples of dlog");
        shift.push_back(static_cast<int>(j));
    }
    const int jmax = shift.empty() ? 0 : *std::max_element(shift.begin(), shift.end());

    // depth: (r / rho)^{n + degree} below 1e-17, with room for logarithms
    const int M = static_cast<int>(std::ceil((39.0 + (u.logarithmic ? 4.0 : 0.0)) / ((n + u.leading_degree) * dl)));

    SphereRule S;
    if (u.cone_singular) {
        const auto br = graded_breaks(0, M_PI, {M_PI / 4, 3 * M_PI / 4}, opt.angular_ratio, opt.angular_levels);
        S = sphere_rule(n, composite(br, opt.angular_order), opt.inner_order);
    } else {
        S = sphere_rule_uniform(n, opt.uniform_order);
    }
    const int K = static_cast<int>(S.nodes.size());
    const int X = u.x_independent ? 1 : static_cast<int>(phi.x_nodes.size());
    const int L = M + jmax;

    std::vector<cplx> U(static_cast<std::size_t>(X) * L * K);
    std::vector<double> W(static_cast<std::size_t>(X) * M * K);
    for (int xi = 0; xi < X; ++xi) {
        const auto& x = phi.x_nodes[xi];
        for (int m = 0; m < L; ++m) {
            const double r = rho * std::exp(-m * dl);
            for (int k = 0; k < K; ++k) {
                double h[4];
                for (int i = 0; i < n; ++i) h[i] = r * S.nodes[k][i];
                U[(static_cast<std::size_t>(xi) * L + m) * K + k] = u.eval(x, std::span<const double>(h, n));
            }
        }
    }
    for (int xi = 0; xi < static_cast<int>(phi.x_nodes.size()); ++xi) {
        const auto& x = phi.x_nodes[xi];
        const int slot = u.x_independent ? 0 : xi;
        for (int m = 0; m < M; ++m) {
            const double r = rho * std::exp(-m * dl);
            const double wr = dl * std::pow(r, n);
            for (int k = 0; k < K; ++k) {
                double h[4];
                for (int i = 0; i < n; ++i) h[i] = r * S.nodes[k][i];
                W[(static_cast<std::size_t>(slot) * M + m) * K + k] +=
                    phi.x_weights[xi] * wr * S.weights[k] * phi.h_profile(x, std::span<const double>(h, n));
            }
        }
    }

    CorrelatorSamples out;
    out.t = t;
    for (int j : shift) {
        cplx sum = 0;
        for (int xi = 0; xi < X; ++xi)
            for (int m = 0; m < M; ++m) {
                const double* w = &W[(static_cast<std::size_t>(xi) * M + m) * K];
                const cplx* v = &U[(static_cast<std::size_t>(xi) * L + m + j) * K];
                for (int k = 0; k < K; ++k) sum += w[k] * v[k];
            }
        out.value.push_back(sum);
    }
    return out;
}

const ResonanceTerm* ResonanceExpansion::find(int k) const {
    for (const auto& term : terms)
        if (term.k == k) return &term;
    return nullptr;
}

cplx ResonanceExpansion::evaluate(double t) const {
    cplx s = 0;
    for (const auto& term : terms) s += std::exp(-term.k * t) * (term.a + t * term.b);
    return s;
}

double ResonanceExpansion::tameness_defect() const {
    double amax = 0, bneg = 0;
    for (const auto& term : terms) {
        amax = std::max(amax, std::abs(term.a));
        if (term.k < 0) bneg = std::max(bneg, std::abs(term.b));
    }
    return amax > 0 ? bneg / amax : bneg;
}

namespace {

struct Column {
    int k;
    bool jordan;
};

struct LinearFit {
    Eigen::VectorXcd coef;
    Eigen::VectorXd sigma;
    double rms = 0;
    double condition = 0;
};

// Least squares with unit-norm columns by column-pivoted QR (Jacobi SVD of the
// tall design loses accuracy at ~1e6 rows); condition number and standard
// errors from the triangular factor.
template <class Matrix, class Vector>
LinearFit solve_scaled(Matrix A, const Vector& y) {
    using Scalar = typename Matrix::Scalar;
    const int m = static_cast<int>(A.rows()), p = static_cast<int>(A.cols());
    Eigen::VectorXd scale(p);
    for (int c = 0; c < p; ++c) {
        scale[c] = A.col(c).norm();
        if (scale[c] == 0) scale[c] = 1;
        A.col(c) /= scale[c];
    }
    const Eigen::ColPivHouseholderQR<Matrix> qr(A);
    const Eigen::VectorXcd yc = y.template cast<cplx>();
    Eigen::VectorXcd c(p);
    if constexpr (std::is_same_v<Scalar, double>) {
        const Eigen::VectorXd re = qr.solve(Eigen::VectorXd(yc.real()));
        const Eigen::VectorXd im = qr.solve(Eigen::VectorXd(yc.imag()));
        c = re.template cast<cplx>() + cplx(0, 1) * im.template cast<cplx>();
    } else {
        c = qr.solve(yc);
    }
    const Matrix R = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    const auto sv = Eigen::JacobiSVD<Matrix>(R).singularValues();
    LinearFit f;
    f.condition = sv[p - 1] > 0 ? sv[0] / sv[p - 1] : INFINITY;
    const Eigen::VectorXcd res = A.template cast<cplx>() * c - yc;
    f.rms = m > p ? res.norm() / std::sqrt(double(m - p)) : 0;
    const Matrix Rinv = R.template triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
    const Matrix PR = qr.colsPermutation() * Rinv;
    f.sigma.resize(p);
    for (int i = 0; i < p; ++i) {
        f.sigma[i] = f.rms * PR.row(i).norm() / scale[i];
        c[i] /= scale[i];
    }
    f.coef = c;
    return f;
}

}  // namespace

ResonanceExpansion fit_resonances(const CorrelatorSamples& s, int p, int N, const FitOptions& opt) {
    if (N < p) throw ConfigError("empty resonance range");
    if (opt.jordan_max < 1 || opt.jordan_max > 2) throw ConfigError("jordan_max must be 1 or 2");
    std::vector<double> t;
    std::vector<cplx> y;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.t[i] >= opt.t_min && s.t[i] <= opt.t_max) {
            t.push_back(s.t[i]);
            y.push_back(s.value[i]);
        }
    const int need = 2 * (N - p + 1) + 4;
    if (static_cast<int>(t.size()) < need) throw ConfigError("too few samples for the resonance fit");
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    if (*hi - *lo < 3) throw ConfigError("fit window spans fewer than 3 e-folds");

    std::vector<Column> cols;
    for (int k = p; k <= N; ++k) {
        cols.push_back({k, false});
        if (opt.jordan_max == 2) cols.push_back({k, true});
    }
    const int m = static_cast<int>(t.size());
    Eigen::VectorXcd Y(m);
    double ymax = 0;
    for (int i = 0; i < m; ++i) {
        Y[i] = y[i];
        ymax = std::max(ymax, std::abs(y[i]));
    }
    auto design = [&](const std::vector<Column>& cs) {
        Eigen::MatrixXd A(m, cs.size());
        for (int i = 0; i < m; ++i)
            for (std::size_t c = 0; c < cs.size(); ++c)
                A(i, c) = std::exp(-cs[c].k * t[i]) * (cs[c].jordan ? t[i] : 1.0);
        return A;
    };

    LinearFit f = solve_scaled(design(cols), Y);
    if (f.condition > opt.max_condition)
        throw ConditioningError("resonance design is ill-conditioned; lengthen the window", f.condition);

    std::vector<Column> kept;
    std::vector<bool> pruned(cols.size(), false);
    if (f.rms > 0 && opt.prune_sigma > 0) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            pruned[c] = std::abs(f.coef[c]) < opt.prune_sigma * f.sigma[c];
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (!pruned[c]) kept.push_back(cols[c]);
        if (kept.size() < cols.size() && !kept.empty()) {
            f = solve_scaled(design(kept), Y);
        } else {
            kept = cols;
            std::fill(pruned.begin(), pruned.end(), false);
        }
    } else {
        kept = cols;
    }

    ResonanceExpansion e;
    e.t_min = *lo;
    e.t_max = *hi;
    e.residual = f.rms;
    e.condition = f.condition;
    for (int k = p; k <= N; ++k) {
        ResonanceTerm term;
        term.k = k;
        term.pruned_a = true;
        term.pruned_b = true;
        for (std::size_t c = 0; c < kept.size(); ++c) {
            if (kept[c].k != k) continue;
            if (kept[c].jordan) {
                term.b = f.coef[c];
                term.sigma_b = f.sigma[c];
                term.pruned_b = false;
            } else {
                term.a = f.coef[c];
                term.sigma_a = f.sigma[c];
                term.pruned_a = false;
            }
        }
        if (opt.jordan_max == 1) term.pruned_b = false;
        e.terms.push_back(term);
    }
    if (f.rms > opt.residual_tol * std::max(ymax, 1e-300))
        throw ConvergenceError("resonance fit residual above tolerance; the model does not describe the samples");
    return e;
}

ResidueSample project_pi0_residue(const SampledKernel& u, const ConcentratingFamily& family, const Pi0Options& opt) {
    if (static_cast<int>(family.x0.size()) != u.n) throw ConfigError("base point dimension differs from the kernel");
    if (opt.p > 0 || opt.N < 0) throw ConfigError("the resonance range must contain k = 0");
    const double sigma = family.sigma > 0 ? family.sigma : u.radius / 6.5;
    std::vector<double> widths = family.widths;
    if (u.x_independent || widths.empty()) widths = {0.0};
    const auto t = time_grid(opt.t_max, opt.dt);

    ResidueSample out;
    std::vector<double> h2;
    double fit_error = 0;
    for (double w : widths) {
        const TestFunction phi = concentrating_test_function(family.x0, w, sigma, family.x_order);
        const CorrelatorSamples c = correlator(u, phi, t, opt.corr);
        ResonanceExpansion fit = fit_resonances(c, opt.p, opt.N, opt.fit);
        const ResonanceTerm* t0 = fit.find(0);
        out.per_width.push_back(-t0->b);
        fit_error = std::max(fit_error, t0->sigma_b);
        out.fits.push_back(std::move(fit));
        h2.push_back(w * w);
    }
    if (widths.size() == 1) {
        out.value = out.per_width[0];
        out.error = fit_error;
    } else {
        const Extrapolated e = extrapolate_to_zero(h2, out.per_width);
        out.value = e.value;
        out.error = e.error + fit_error;
    }
    return out;
}

LaplaceCheck laplace_validation(const CorrelatorSamples& samples, int p, int N, const std::vector<cplx>& s_grid,
                                const ResonanceExpansion& reference) {
    const int m = static_cast<int>(samples.t.size());
    if (m < 2) throw ConfigError("Laplace validation needs samples");
    for (const cplx& s : s_grid)
        if (s.real() <= 0) throw DomainError("Laplace grid needs Re s > 0");
    std::vector<double> w(m, 0.0);
    for (int i = 0; i + 1 < m; ++i) {
        const double h = samples.t[i + 1] - samples.t[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    std::vector<Column> cols;
    for (int k = p; k <= N; ++k) {
        cols.push_back({k, false});
        cols.push_back({k, true});
    }
    const int rows = static_cast<int>(s_grid.size());
    if (rows < static_cast<int>(cols.size()) + 2) throw ConfigError("Laplace grid too small for the fit");
    Eigen::MatrixXcd A(rows, cols.size());
    Eigen::VectorXcd Y(rows);
    for (int r = 0; r < rows; ++r) {
        cplx y = 0;
        std::vector<cplx> a(cols.size(), 0.0);
        for (int i = 0; i < m; ++i) {
            const double ti = samples.t[i];
            const cplx e = w[i] * std::exp(-s_grid[r] * ti);
            y += e * samples.value[i];
            for (std::size_t c = 0; c < cols.size(); ++c)
                a[c] += e * std::exp(-cols[c].k * ti) * (cols[c].jordan ? ti : 1.0);
        }
        Y[r] = y;
        for (std::size_t c = 0; c < cols.size(); ++c) A(r, c) = a[c];
    }
    const LinearFit f = solve_scaled(A, Y);
    LaplaceCheck out;
    out.fit.t_min = samples.t.front();
    out.fit.t_max = samples.t.back();
    out.fit.condition = f.condition;
    out.fit.residual = f.rms;
    for (int k = p; k <= N; ++k) {
        ResonanceTerm term;
        term.k = k;
        term.a = f.coef[2 * (k - p)];
        term.b = f.coef[2 * (k - p) + 1];
        term.sigma_a = f.sigma[2 * (k - p)];
        term.sigma_b = f.sigma[2 * (k - p) + 1];
        out.fit.terms.push_back(term);
        if (const ResonanceTerm* r = reference.find(k))
            out.max_deviation =
                std::max({out.max_deviation, std::abs(term.a - r->a), std::abs(term.b - r->b)});
    }
    return out;
}

SampledKernel bessel_model_kernel(double radius) {
    if (!(radius > 0) || radius > 5) throw DomainError("Bessel model radius must lie in (0, 5]");
    SampledKernel k;
    k.n = 2;
    k.radius = radius;
    k.leading_degree = 0;
    k.logarithmic = true;
    k.x_independent = true;
    k.eval = [](std::span<const double>, std::span<const double> h) {
        return bessel_k(0, cplx(std::hypot(h[0], h[1]))) / (2 * M_PI);
    };
    return k;
}

SampledKernel flat_power_kernel(int n, int alpha, cplx z, bool euclidean, double radius) {
    if (n != 2 && n != 4) throw ConfigError("flat kernels need n = 2 or 4");
    if (alpha < 1) throw DomainError("flat power kernel needs alpha >= 1");
    const int k = alpha - 1;
    const int degree = std::min(0, 2 * (k + 1) - n);
    if (!euclidean && degree < 0)
        throw DomainError("kernel is not locally integrable across the light cone");
    SampledKernel u;
    u.n = n;
    u.radius = radius;
    u.leading_degree = degree;
    u.logarithmic = true;
    u.x_independent = true;
    u.cone_singular = !euclidean;
    const cplx c = rgamma(double(alpha));
    u.eval = [n, k, z, euclidean, c](std::span<const double>, std::span<const double> h) {
        return c * feynman_kernel(n, k, z, h, euclidean);
    };
    return u;
}

SampledKernel hadamard_parametrix_kernel(const Metric& g, int N, cplx z, const HadamardOptions& opt) {
    if (g.dim() != 2) throw ConfigError("the Hadamard parametrix kernel is implemented for n = 2");
    HadamardOptions o = opt;
    o.order = N;
    if (o.radius <= 0) o.radius = 0.4;
    o.error_estimate = false;
    const bool euclidean = !g.lorentzian();
    auto cache = std::make_shared<std::map<std::vector<double>, std::shared_ptr<HadamardTable>>>();
    auto metric = std::make_shared<Metric>(g);
    SampledKernel u;
    u.n = 2;
    u.radius = o.radius;
    u.leading_degree = 0;
    u.logarithmic = true;
    u.cone_singular = !euclidean;
    u.eval = [cache, metric, o, N, z, euclidean](std::span<const double> x, std::span<const double> h) {
        std::vector<double> key(x.begin(), x.end());
        auto it = cache->find(key);
        if (it == cache->end()) {
            Eigen::VectorXd x0(2);
            x0 << x[0], x[1];
            it = cache->emplace(key, std::make_shared<HadamardTable>(solve_transport(*metric, x0, o))).first;
        }
        const HadamardTable& T = *it->second;
        Eigen::VectorXd hv(2);
        hv << h[0], h[1];
        cplx sum = 0;
        for (int k = 0; k <= N; ++k) sum += T.value_at(k, hv) * feynman_kernel(2, k, z, h, euclidean);
        return sum;
    };
    return u;
}

}  // namespace reslab
