#include "reslab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "reslab/quadrature.hpp"

namespace reslab {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

struct GeodesicSystem {
    const Metric& g;
    int n;
    const JetLayout& L;

    void operator()(const State& s, State& ds, double) const {
        const int S = L.size;
        std::vector<double> xv(n);
        for (int i = 0; i < n; ++i) xv[i] = s[i * S];
        std::vector<Jet<double>> gam;
        try {
            gam = christoffel_jets(g, xv, L.order);
        } catch (const Error& e) {
            throw GeodesicError(std::string("geodesic left the chart: ") + e.what());
        }
        std::vector<Jet<double>> dx(n, Jet<double>(L)), v(n, Jet<double>(L));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < S; ++k) {
                dx[i][k] = k == 0 ? 0.0 : s[i * S + k];
                v[i][k] = s[(n + i) * S + k];
            }
        std::vector<Jet<double>> basis;
        if (L.order > 0) basis = monomial_basis<double>(gam[0].layout(), dx);
        std::vector<Jet<double>> vv(n * n);
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) vv[j * n + k] = v[j] * v[k];
        for (int i = 0; i < n; ++i) {
            Jet<double> acc(L);
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    const Jet<double>& G = gam[(i * n + j) * n + k];
                    Jet<double> Gc = L.order == 0 ? Jet<double>(L, G.value()) : compose_basis(G, basis);
                    acc.add_product(Gc, vv[j * n + k], j == k ? 1.0 : 2.0);
                }
            for (int k = 0; k < S; ++k) {
                ds[i * S + k] = s[(n + i) * S + k];
                ds[(n + i) * S + k] = -acc[k];
            }
        }
    }
};

}  // namespace

std::vector<VariedGeodesic> integrate_geodesic(const Metric& g, std::span<const double> x0,
                                               const Eigen::MatrixXd& E, const Eigen::VectorXd& omega,
                                               const std::vector<double>& times, int order,
                                               const GeodesicOptions& opt) {
    const int n = g.dim();
    const JetLayout& L = JetLayout::get(n, order);
    const int S = L.size;
    State s(2 * n * S, 0.0);
    const Eigen::VectorXd v0 = E * omega;
    for (int i = 0; i < n; ++i) {
        s[i * S] = x0[i];
        s[(n + i) * S] = v0[i];
        if (order > 0)
            for (int a = 0; a < n; ++a) s[(n + i) * S + L.unit(a)] = E(i, a);
    }
    std::vector<VariedGeodesic> out;
    auto record = [&](const State& st, double) {
        VariedGeodesic r;
        r.x.assign(n, Jet<double>(L));
        r.v.assign(n, Jet<double>(L));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < S; ++k) {
                r.x[i][k] = st[i * S + k];
                r.v[i][k] = st[(n + i) * S + k];
            }
        out.push_back(std::move(r));
    };
    std::vector<double> ts = times;
    const bool prepend = ts.empty() || ts.front() != 0.0;
    if (prepend) ts.insert(ts.begin(), 0.0);
    if (!std::is_sorted(ts.begin(), ts.end())) throw DomainError("integration times must increase");
    if (ts.size() == 1) {
        record(s, 0.0);
    } else {
        GeodesicSystem sys{g, n, L};
        auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_fehlberg78<State>());
        const double dt0 = std::max(1e-3, 0.05 * (ts.back() - ts.front()));
        try {
            odeint::integrate_times(stepper, sys, s, ts.begin(), ts.end(), dt0, record,
                                    odeint::max_step_checker(20000));
        } catch (const GeodesicError&) {
            throw;
        } catch (const std::exception& e) {
            throw GeodesicError(std::string("geodesic integration failed: ") + e.what());
        }
    }
    if (prepend) out.erase(out.begin());
    return out;
}

Eigen::VectorXd exp_map(const Metric& g, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                        const GeodesicOptions& opt) {
    const int n = g.dim();
    const auto r = integrate_geodesic(g, std::span<const double>(x.data(), n), Eigen::MatrixXd::Identity(n, n), v,
                                      {1.0}, 0, opt);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = r[0].x[i].value();
    return y;
}

Eigen::MatrixXd d_exp(const Metric& g, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                      const GeodesicOptions& opt) {
    const int n = g.dim();
    const auto r = integrate_geodesic(g, std::span<const double>(x.data(), n), Eigen::MatrixXd::Identity(n, n), v,
                                      {1.0}, 1, opt);
    const JetLayout& L = JetLayout::get(n, 1);
    Eigen::MatrixXd D(n, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) D(i, a) = r[0].x[i][L.unit(a)];
    return D;
}

Eigen::VectorXd log_map(const Metric& g, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double tol,
                        const GeodesicOptions& opt) {
    const int n = g.dim();
    const JetLayout& L = JetLayout::get(n, 1);
    Eigen::VectorXd v = y - x;
    auto shoot = [&](const Eigen::VectorXd& w, Eigen::MatrixXd* D) {
        const auto r = integrate_geodesic(g, std::span<const double>(x.data(), n), Eigen::MatrixXd::Identity(n, n),
                                          w, {1.0}, D ? 1 : 0, opt);
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i) {
            f[i] = r[0].x[i].value() - y[i];
            if (D)
                for (int a = 0; a < n; ++a) (*D)(i, a) = r[0].x[i][L.unit(a)];
        }
        return f;
    };
    Eigen::MatrixXd D(n, n);
    Eigen::VectorXd f = shoot(v, &D);
    double res = f.norm();
    for (int it = 0; it < opt.max_newton; ++it) {
        if (res <= tol) return v;
        const Eigen::VectorXd step = D.fullPivLu().solve(f);
        double lambda = 1;
        for (;;) {
            const Eigen::VectorXd trial = v - lambda * step;
            Eigen::VectorXd ft;
            bool ok = true;
            try {
                ft = shoot(trial, nullptr);
            } catch (const GeodesicError&) {
                ok = false;
            }
            if (ok && ft.norm() < res) {
                v = trial;
                break;
            }
            lambda *= 0.5;
            if (lambda < 1e-6)
                throw ConvergenceError("log map: Newton line search failed, residual " + std::to_string(res));
        }
        f = shoot(v, &D);
        res = f.norm();
    }
    if (res <= tol) return v;
    throw ConvergenceError("log map: Newton did not converge, residual " + std::to_string(res));
}

Frame build_frame(const Metric& g, const Eigen::VectorXd& x, const Eigen::MatrixXd* seed) {
    const int n = g.dim();
    const Eigen::MatrixXd G = g.at(std::span<const double>(x.data(), n));
    const Eigen::MatrixXd B = seed ? *seed : Eigen::MatrixXd::Identity(n, n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const std::vector<int>& sig = g.signature();
    double scale = G.cwiseAbs().maxCoeff();
    do {
        Frame f;
        f.E = Eigen::MatrixXd(n, n);
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) {
            Eigen::VectorXd v = B.col(order[a]);
            for (int b = 0; b < a; ++b) v -= f.eta[b] * (f.E.col(b).dot(G * v)) * f.E.col(b);
            const double q = v.dot(G * v);
            if (std::abs(q) < 1e-8 * scale * v.squaredNorm() || (q > 0 ? 1 : -1) != sig[a]) {
                ok = false;
                break;
            }
            f.E.col(a) = v / std::sqrt(std::abs(q));
            f.eta.push_back(sig[a]);
        }
        if (!ok) continue;
        if (g.lorentzian() && f.E(0, 0) < 0) f.E.col(0) *= -1;
        return f;
    } while (std::next_permutation(order.begin(), order.end()));
    throw SingularMetricError("cannot build an orthonormal frame with the declared signature");
}

NormalCoordinates::NormalCoordinates(const Metric& g, const Eigen::VectorXd& base, const GeodesicOptions& opt,
                                     const Eigen::MatrixXd* seed)
    : g_(g), x0_(base), frame_(build_frame(g, base, seed)), opt_(opt), radius_(opt.max_radius) {
    // half of a conjugate-point scale from the largest frame curvature component
    const int n = g.dim();
    const auto c = curvature_at(g_, std::span<const double>(x0_.data(), n));
    const Eigen::MatrixXd G = g_.at(std::span<const double>(x0_.data(), n));
    double kappa = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc)
                for (int d = 0; d < n; ++d) {
                    double s = 0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (int k = 0; k < n; ++k)
                                for (int l = 0; l < n; ++l) {
                                    double low = 0;
                                    for (int m = 0; m < n; ++m) low += G(i, m) * c.riemann[((m * n + j) * n + k) * n + l];
                                    s += low * frame_.E(i, a) * frame_.E(j, b) * frame_.E(k, cc) * frame_.E(l, d);
                                }
                    kappa = std::max(kappa, std::abs(s));
                }
    if (kappa > 0) radius_ = std::min(radius_, 0.5 * M_PI / std::sqrt(kappa));
}

Eigen::MatrixXd NormalCoordinates::eta() const {
    const int n = dim();
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) e(a, a) = frame_.eta[a];
    return e;
}

NormalSample NormalCoordinates::origin_sample() const {
    const int n = dim();
    NormalSample s;
    s.h = Eigen::VectorXd::Zero(n);
    s.y = x0_;
    s.gt = eta();
    s.dgt.assign(n, Eigen::MatrixXd::Zero(n, n));
    s.log_sqrt_det = 0;
    s.dlog_sqrt_det = Eigen::VectorXd::Zero(n);
    return s;
}

std::vector<NormalSample> NormalCoordinates::ray(const Eigen::VectorXd& omega,
                                                 const std::vector<double>& radii) const {
    const int n = dim();
    if (!radii.empty() && radii.back() > radius_ * (1 + 1e-12))
        throw DomainError("requested radius " + std::to_string(radii.back()) + " exceeds trust radius " +
                          std::to_string(radius_));
    std::vector<double> pos;
    for (double r : radii)
        if (r > 0) pos.push_back(r);
    const auto states = integrate_geodesic(g_, std::span<const double>(x0_.data(), n), frame_.E, omega, pos, 2, opt_);
    const JetLayout& L = JetLayout::get(n, 2);
    std::vector<NormalSample> out;
    std::size_t next = 0;
    for (double r : radii) {
        if (r <= 0) {
            out.push_back(origin_sample());
            continue;
        }
        const auto& st = states[next++];
        NormalSample s;
        s.h = r * omega;
        s.y.resize(n);
        Eigen::MatrixXd J(n, n);
        std::vector<Eigen::MatrixXd> H(n, Eigen::MatrixXd(n, n));  // H[i](a, b)
        for (int i = 0; i < n; ++i) {
            s.y[i] = st.x[i].value();
            for (int a = 0; a < n; ++a) {
                J(i, a) = st.x[i][L.unit(a)] / r;
                for (int b = 0; b < n; ++b) {
                    MultiIndex m{};
                    m[a] += 1;
                    m[b] += 1;
                    H[i](a, b) = st.x[i].partial(m) / (r * r);
                }
            }
        }
        const auto gj = g_.jets(std::span<const double>(s.y.data(), n), 1);
        const JetLayout& L1 = gj[0].layout();
        Eigen::MatrixXd G(n, n);
        std::vector<Eigen::MatrixXd> dG(n, Eigen::MatrixXd(n, n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                G(i, j) = gj[i * n + j].value();
                for (int k = 0; k < n; ++k) dG[k](i, j) = gj[i * n + j][L1.unit(k)];
            }
        s.gt = J.transpose() * G * J;
        s.dgt.assign(n, Eigen::MatrixXd::Zero(n, n));
        for (int c = 0; c < n; ++c) {
            Eigen::MatrixXd dGc = Eigen::MatrixXd::Zero(n, n);
            for (int k = 0; k < n; ++k) dGc += J(k, c) * dG[k];
            Eigen::MatrixXd Hc(n, n);  // Hc(i, a) = d^2 y^i / dh_a dh_c
            for (int i = 0; i < n; ++i)
                for (int a = 0; a < n; ++a) Hc(i, a) = H[i](a, c);
            const Eigen::MatrixXd t = Hc.transpose() * G * J;
            s.dgt[c] = J.transpose() * dGc * J + t + t.transpose();
        }
        const Eigen::MatrixXd gi = s.gt.inverse();
        s.log_sqrt_det = 0.5 * std::log(std::abs(s.gt.determinant()));
        s.dlog_sqrt_det.resize(n);
        for (int c = 0; c < n; ++c) s.dlog_sqrt_det[c] = 0.5 * (gi * s.dgt[c]).trace();
        out.push_back(std::move(s));
    }
    return out;
}

NormalSample NormalCoordinates::at(const Eigen::VectorXd& h) const {
    const double r = h.norm();
    if (r == 0) return origin_sample();
    return ray(h / r, {r})[0];
}

Eigen::VectorXd NormalCoordinates::to_point(const Eigen::VectorXd& h) const {
    if (h.norm() > radius_) throw DomainError("point outside trust radius");
    return exp_map(g_, x0_, frame_.E * h, opt_);
}

Eigen::VectorXd NormalCoordinates::to_normal(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd v = log_map(g_, x0_, y, 1e-11, opt_);
    const Eigen::VectorXd h = frame_.E.fullPivLu().solve(v);
    if (h.norm() > radius_) throw DomainError("point outside trust radius");
    return h;
}

Eigen::MatrixXd kuranishi_matrix(const NormalCoordinates& ncs, const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                                 int quad_order) {
    const Metric& g = ncs.metric();
    const int n = g.dim();
    if (h.norm() > ncs.trust_radius()) throw DomainError("Kuranishi matrix: h outside trust radius");
    if (h.norm() == 0) return Eigen::MatrixXd::Identity(n, n);
    const Frame f = (x - ncs.base()).norm() == 0 ? ncs.frame() : build_frame(g, x);
    const Eigen::MatrixXd Einv = f.E.inverse();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    const Rule1D rule = gauss_legendre(quad_order, 0.0, 1.0);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const Eigen::VectorXd y = x + rule.x[q] * (f.E * h);
        const Eigen::VectorXd v = log_map(g, x, y, 1e-12, ncs.options());
        const Eigen::MatrixXd Dlog = d_exp(g, x, v, ncs.options()).inverse();
        acc += rule.w[q] * Dlog;
    }
    return Einv * acc * f.E;
}

}  // namespace reslab
