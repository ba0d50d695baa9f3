#include "reslab/modeldist.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "reslab/error.hpp"
#include "reslab/extrapolation.hpp"

namespace reslab {

namespace {

constexpr cplx kI(0, 1);

int total(const MultiIndex& m) {
    int s = 0;
    for (int e : m) s += e;
    return s;
}

void check_dim(int n) {
    if (n != 2 && n != 4) throw ConfigError("model dimension must be 2 or 4");
}

std::vector<double> schedule(const RegulatorOptions& opt) {
    if (opt.levels < 2 || !(opt.eps0 > 0)) throw ConfigError("regulator needs eps0 > 0 and two levels");
    std::vector<double> eps(opt.levels);
    for (int j = 0; j < opt.levels; ++j) eps[j] = opt.eps0 * std::ldexp(1.0, -j);
    return eps;
}

SphereRule cone_rule(int n, double eps, int psi_order, int inner_order) {
    const auto breaks = eps_breaks(0, M_PI, {M_PI / 4, 3 * M_PI / 4}, eps);
    return sphere_rule(n, composite(breaks, psi_order), inner_order);
}

Extrapolated integrate_levels(int n, const SphereIntegrand& f, const std::vector<double>& eps,
                              int psi_order, int inner_order, std::vector<cplx>* samples) {
    std::vector<cplx> vals;
    for (double e : eps) {
        const SphereRule S = cone_rule(n, e, psi_order, inner_order);
        cplx sum = 0;
        for (std::size_t i = 0; i < S.nodes.size(); ++i) sum += S.weights[i] * f(S.nodes[i], e);
        vals.push_back(sum);
    }
    if (samples) *samples = vals;
    return extrapolate_to_zero(eps, vals);
}

}  // namespace

cplx power_value(const ModelQuadratic& q, cplx alpha, cplx z, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) < q.n) throw DomainError("point has too few components");
    if (z.imag() < 0) throw DomainError("power_value needs Im z >= 0");
    const double Q = q(xi);
    if (z.imag() == 0) {
        const double w = Q - z.real();
        if (w == 0) throw DomainError("on-cone singularity of (Q - z)^{-alpha} with real z");
        // boundary value from Im z > 0: arg w = -pi on the negative axis
        const cplx logw = w > 0 ? cplx(std::log(w), 0) : cplx(std::log(-w), -M_PI);
        return std::exp(-alpha * logw);
    }
    return std::exp(-alpha * std::log(cplx(Q) - z));
}

RegulatedIntegral regulated_sphere_integral(int n, const SphereIntegrand& f, const RegulatorOptions& opt) {
    check_dim(n);
    RegulatedIntegral r;
    r.eps = schedule(opt);
    const Extrapolated full = integrate_levels(n, f, r.eps, opt.psi_order, opt.inner_order, &r.samples);
    r.value = full.value;
    r.extrapolation_error = full.error;
    if (opt.order_check) {
        const Extrapolated half =
            integrate_levels(n, f, r.eps, std::max(2, opt.psi_order / 2), opt.inner_order, nullptr);
        r.order_change = std::abs(half.value - full.value);
    }
    r.error = r.extrapolation_error + r.order_change;
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw ConvergenceError("regulated sphere integral is not finite");
    return r;
}

RegulatedIntegral stokes_residue_integral(int n, bool euclidean, const RegulatorOptions& opt) {
    const ModelQuadratic q{n, euclidean};
    const double s = 0.5 * n;
    return regulated_sphere_integral(
        n, [&](const Point& xi, double eps) { return std::pow(cplx(q(xi), -eps), -s); }, opt);
}

VanishingResult vanishing_check(const VanishingCase& c, const RegulatorOptions& opt) {
    check_dim(c.n);
    const int k = total(c.beta);
    if (k <= 0) throw DomainError("vanishing check needs |beta| > 0");
    if (k > kMaxJetOrder) throw DomainError("|beta| exceeds the jet order");
    for (int v = c.n; v < kMaxJetVars; ++v)
        if (c.p[v] || c.beta[v]) throw DomainError("multi-index uses a variable beyond the dimension");
    const double degree = total(c.p) - 2 * c.s - k;
    if (std::abs(degree + c.n) > 1e-12) throw DomainError("d^beta u must have degree -n");

    const ModelQuadratic q{c.n, c.euclidean};
    const JetLayout& L = JetLayout::get(c.n, k);
    auto u_jet = [&](const Point& xi, double eps) {
        std::array<Jet<cplx>, kMaxJetVars> x;
        for (int i = 0; i < c.n; ++i) x[i] = Jet<cplx>::variable(L, i, cplx(xi[i]));
        const Jet<cplx> Q = q(std::span<const Jet<cplx>>(x.data(), c.n));
        Jet<cplx> u = jetfn::pow(Q + cplx(0, -eps), cplx(-c.s));
        for (int i = 0; i < c.n; ++i)
            for (int e = 0; e < c.p[i]; ++e) u = u * x[i];
        return u;
    };
    VanishingResult r;
    r.derivative = regulated_sphere_integral(
        c.n, [&](const Point& xi, double eps) { return u_jet(xi, eps).partial(c.beta); }, opt);
    r.base = regulated_sphere_integral(
        c.n,
        [&](const Point& xi, double eps) {
            cplx u = std::pow(cplx(q(xi), -eps), -c.s);
            for (int i = 0; i < c.n; ++i)
                for (int e = 0; e < 2 * c.p[i]; ++e) u *= xi[i];
            return u;
        },
        opt);
    const double scale = std::abs(r.base.value);
    if (scale == 0) throw ConvergenceError("undifferentiated integral vanishes; no scale");
    r.ratio = std::abs(r.derivative.value) / scale;
    return r;
}

std::vector<VanishingCase> standard_vanishing_cases() {
    auto mi = [](int a, int b, int c = 0, int d = 0) { return MultiIndex{a, b, c, d}; };
    return {
        {"n2 s=1/2 d1", 2, false, 0.5, mi(0, 0), mi(0, 1)},
        {"n2 s=1/2 d0", 2, false, 0.5, mi(0, 0), mi(1, 0)},
        {"n2 s=1 xi0 d0", 2, false, 1.0, mi(1, 0), mi(1, 0)},
        {"n2 s=1 xi0xi1 d0d1", 2, false, 1.0, mi(1, 1), mi(1, 1)},
        {"n4 s=1 d0d0", 4, false, 1.0, mi(0, 0), mi(2, 0)},
        {"n4 s=1 d1d2", 4, false, 1.0, mi(0, 0), mi(0, 1, 1)},
        {"n4 s=3/2 d0", 4, false, 1.5, mi(0, 0), mi(1, 0)},
        {"n4 s=3/2 xi1 d1d1", 4, false, 1.5, mi(0, 1), mi(0, 2)},
        {"euclidean n2 s=1/2 d1", 2, true, 0.5, mi(0, 0), mi(0, 1)},
    };
}

namespace {

// Angular and radial grids shared by all contour points.  The homogeneous
// regulator (Q(omega) - i eps)^{-alpha} r^{-2 alpha} = (Q - i eps |xi|^2)^{-alpha}
// tends to the same boundary value as eps -> 0.
struct PolarGrid {
    std::vector<double> theta_w, q;       // angular weights, Q(omega)
    std::vector<double> r, r_w;
    std::vector<double> D;                // [i * K + k]: phi minus Taylor part for r <= 1
    std::vector<std::vector<double>> P;   // P[j][k]: degree-j Taylor term on the circle
    int subtract = 0;

    PolarGrid(const Expr& phi, bool euclidean, int subtract_, const LaurentOptions& opt, double eps_min)
        : subtract(subtract_) {
        const SphereRule S = cone_rule(2, eps_min, opt.reg.psi_order, 1);
        const ModelQuadratic Qm{2, euclidean};
        const int K = static_cast<int>(S.nodes.size());
        for (int k = 0; k < K; ++k) {
            theta_w.push_back(S.weights[k]);
            q.push_back(Qm(S.nodes[k]));
        }
        const JetLayout& L = JetLayout::get(2, subtract);
        std::array<Jet<double>, 2> x0{Jet<double>::variable(L, 0, 0.0), Jet<double>::variable(L, 1, 0.0)};
        const Jet<double> taylor = evaluate<Jet<double>>(phi, std::span<const Jet<double>>(x0));
        P.assign(subtract + 1, std::vector<double>(K, 0.0));
        for (int s = 0; s < L.size; ++s) {
            const auto& m = L.index[s];
            for (int k = 0; k < K; ++k)
                P[L.degree[s]][k] +=
                    taylor[s] * std::pow(S.nodes[k][0], m[0]) * std::pow(S.nodes[k][1], m[1]);
        }
        std::vector<double> br{0};
        for (int p = opt.radial_panels - 1; p >= 0; --p) br.push_back(std::ldexp(1.0, -p));
        for (double b = 2; b <= opt.r_max + 1e-12; b += 1) br.push_back(b);
        const Rule1D rr = composite(br, opt.radial_order);
        r = rr.x;
        r_w = rr.w;
        D.resize(r.size() * K);
        for (std::size_t i = 0; i < r.size(); ++i)
            for (int k = 0; k < K; ++k) {
                const double xi[2] = {r[i] * S.nodes[k][0], r[i] * S.nodes[k][1]};
                double v = evaluate<double>(phi, std::span<const double>(xi, 2));
                if (r[i] <= 1)
                    for (int j = 0; j <= subtract; ++j) v -= std::pow(r[i], j) * P[j][k];
                D[i * K + k] = v;
            }
    }

    cplx pairing(cplx alpha, double eps) const {
        const int K = static_cast<int>(q.size());
        std::vector<cplx> g(K);
        for (int k = 0; k < K; ++k) g[k] = theta_w[k] * std::exp(-alpha * std::log(cplx(q[k], -eps)));
        cplx total = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            cplx v = 0;
            const double* row = &D[i * K];
            for (int k = 0; k < K; ++k) v += row[k] * g[k];
            total += r_w[i] * std::exp((1.0 - 2.0 * alpha) * std::log(r[i])) * v;
        }
        for (int j = 0; j <= subtract; ++j) {
            cplx G = 0;
            for (int k = 0; k < K; ++k) G += g[k] * P[j][k];
            total += G / (double(j) + 2.0 - 2.0 * alpha);
        }
        return total;
    }
};

int subtraction_order(double re_alpha_max) {
    // the remainder is integrable at r = 0 for Re alpha < (J + 3) / 2
    // two extra terms keep the remainder smooth enough for Gauss-Legendre near r = 0
    const int J = std::max(0, static_cast<int>(std::floor(2 * re_alpha_max - 3)) + 1);
    if (J > kMaxJetOrder) throw DomainError("pairing beyond the supported pole range");
    return std::min(kMaxJetOrder, J + 2);
}

Extrapolated pairing_at(const PolarGrid& G, cplx alpha, const std::vector<double>& eps) {
    std::vector<cplx> v;
    for (double e : eps) v.push_back(G.pairing(alpha, e));
    return extrapolate_to_zero(eps, v);
}

}  // namespace

cplx regulated_pairing(cplx alpha, const Expr& phi, bool euclidean, int subtract, const LaurentOptions& opt) {
    if (subtract < 0) subtract = subtraction_order(alpha.real());
    if (alpha.real() >= 0.5 * (subtract + 3)) throw DomainError("too few Taylor terms subtracted for this alpha");
    const auto eps = schedule(opt.reg);
    const PolarGrid G(phi, euclidean, subtract, opt, eps.back());
    return pairing_at(G, alpha, eps).value;
}

LaurentResult laurent_pairing(int n, double center, const Expr& phi, bool euclidean, const LaurentOptions& opt) {
    if (n != 2) throw ConfigError("laurent_pairing is implemented for n = 2");
    if (!(opt.radius > 0) || opt.radius >= 0.5) throw DomainError("contour radius must lie in (0, 0.5)");
    if (opt.points < 4) throw ConfigError("contour needs at least 4 points");
    const int J = subtraction_order(center + opt.radius);
    // candidate poles 1 + j/2 of the subtracted representation
    for (int j = 0; j <= J; ++j) {
        const double p = 1 + 0.5 * j;
        const double d = std::abs(p - center);
        if (d > 1e-12 && d <= opt.radius * 1.2) throw DomainError("contour encloses or touches a neighbouring pole");
    }
    const auto eps = schedule(opt.reg);
    const PolarGrid G(phi, euclidean, J, opt, eps.back());
    LaurentResult res;
    for (int m = 0; m < opt.points; ++m) {
        const cplx a = center + opt.radius * std::exp(kI * (2 * M_PI * (m + 0.5) / opt.points));
        const Extrapolated e = pairing_at(G, a, eps);
        res.alphas.push_back(a);
        res.values.push_back(e.value);
        res.error = std::max(res.error, e.error);
        res.residue += e.value * (a - center);
        res.finite_part += e.value;
    }
    res.residue /= double(opt.points);
    res.finite_part /= double(opt.points);
    return res;
}

cplx feynman_kernel(int n, int k, cplx z, std::span<const double> h, bool euclidean) {
    check_dim(n);
    if (k < 0) throw DomainError("F_k needs k >= 0");
    const int p = k + 1 - n / 2;
    const int nu = std::abs(p);
    const double pref = std::pow(2 * M_PI, -0.5 * n) * std::ldexp(1.0, -k);
    if (euclidean) {
        double rho2 = 0;
        for (int i = 0; i < n; ++i) rho2 += h[i] * h[i];
        if (rho2 == 0) throw DomainError("F_k is singular at h = 0");
        if (z.imag() == 0 && z.real() >= 0) throw DomainError("Euclidean F_k needs z off [0, inf)");
        const cplx m = std::sqrt(-z);
        const double rho = std::sqrt(rho2);
        if (std::abs(m * rho) > 10) throw DomainError("Bessel argument outside the series range");
        return pref * std::pow(rho / m, p) * bessel_k(nu, m * rho);
    }
    double eta = h[0] * h[0];
    for (int i = 1; i < n; ++i) eta -= h[i] * h[i];
    if (eta == 0) throw DomainError("F_k is singular on the light cone");
    const cplx w = std::sqrt(z * eta);
    if (w == cplx(0)) throw DomainError("F_k needs z != 0");
    if (std::abs(w) > 10) throw DomainError("Bessel argument outside the series range");
    return kI * pref * std::pow(-eta / w, p) * bessel_k(nu, w);
}

HankelValue f_alpha_hankel(cplx alpha, cplx z, double r) {
    if (!(r > 0)) throw DomainError("Hankel quadrature needs |x| > 0");
    if (z.imag() <= 0) throw DomainError("Hankel quadrature needs Im z > 0");
    if (alpha.real() <= -0.75) throw DomainError("Hankel integral diverges for Re alpha <= -3/4");
    constexpr int kPanels = 60;
    const Rule1D& gl = gauss_legendre(24);
    auto integrand = [&](double rho) {
        return boost::math::cyl_bessel_j(0, rho * r) * rho * std::exp(-(alpha + 1.0) * std::log(cplx(rho * rho) - z));
    };
    std::vector<cplx> partial;
    cplx sum = 0;
    double a = 0;
    for (int i = 1; i <= kPanels; ++i) {
        const double b = boost::math::cyl_bessel_j_zero(0.0, i) / r;
        cplx s = 0;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
            s += 0.5 * (b - a) * gl.w[q] * integrand(x);
        }
        sum += s;
        partial.push_back(sum);
        a = b;
    }
    const Extrapolated acc = wynn_epsilon(partial);
    const cplx scale = complex_gamma(alpha + 1.0) / (2 * M_PI);
    return {scale * acc.value, std::abs(scale) * acc.error};
}

HomogeneityDefect f_alpha_homogeneity_check(int n, cplx alpha, cplx z, double r, double lambda) {
    if (n != 2) throw ConfigError("F_alpha homogeneity check is implemented for Euclidean n = 2");
    if (!(lambda > 0)) throw DomainError("lambda must be positive");
    HomogeneityDefect d;
    const HankelValue base = f_alpha_hankel(alpha, z, r);
    const HankelValue scaled = lambda == 1 ? base : f_alpha_hankel(alpha, lambda * lambda * z, r / lambda);
    const cplx factor = std::exp((double(n) - 2.0 * alpha - 2.0) * std::log(lambda));
    d.base = base.value;
    d.scaled = scaled.value;
    const double mag = std::abs(base.value);
    if (mag == 0) throw ConvergenceError("F_alpha vanishes at the base point");
    d.defect = std::abs(scaled.value - factor * base.value) / mag;
    d.error = (scaled.error + std::abs(factor) * base.error) / mag;
    return d;
}

}  // namespace reslab
