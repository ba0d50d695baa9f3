#include "reslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "reslab/error.hpp"

namespace reslab {

namespace {

Rule1D compute_gl(int m) {
    Rule1D r;
    r.x.resize(m);
    r.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1, p1 = x;
        for (int k = 2; k <= m; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1);
        const double w = 2 / ((1 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[m - 1 - i] = x;
        r.w[i] = r.w[m - 1 - i] = w;
    }
    if (m % 2) r.x[m / 2] = 0;
    return r;
}

}  // namespace

const Rule1D& gauss_legendre(int m) {
    if (m < 1 || m > 200) throw DomainError("Gauss-Legendre order out of range");
    static std::mutex mu;
    static std::map<int, Rule1D> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, compute_gl(m)).first;
    return it->second;
}

Rule1D gauss_legendre(int m, double a, double b) {
    const Rule1D& g = gauss_legendre(m);
    Rule1D r;
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int i = 0; i < m; ++i) {
        r.x.push_back(c + h * g.x[i]);
        r.w.push_back(h * g.w[i]);
    }
    return r;
}

Rule1D composite(const std::vector<double>& breaks, int m) {
    Rule1D r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) r.append(gauss_legendre(m, breaks[i], breaks[i + 1]));
    return r;
}

namespace {

std::vector<double> finish_breaks(std::vector<double> b, double lo, double hi, int coarse) {
    for (int i = 0; i <= coarse; ++i) b.push_back(lo + (hi - lo) * i / coarse);
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double v : b) {
        if (v < lo || v > hi) continue;
        if (out.empty() || v - out.back() > 1e-15 * (1 + std::abs(v))) out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<double> graded_breaks(double a, double b, const std::vector<double>& singular, double ratio,
                                  int levels, int coarse_panels) {
    std::vector<double> br;
    const double span = (b - a) / coarse_panels;
    for (double s : singular) {
        br.push_back(s);
        double d = span;
        for (int l = 0; l < levels; ++l) {
            d *= ratio;
            br.push_back(s - d);
            br.push_back(s + d);
        }
    }
    return finish_breaks(br, a, b, coarse_panels);
}

std::vector<double> eps_breaks(double a, double b, const std::vector<double>& singular, double eps,
                               int coarse_panels) {
    std::vector<double> br;
    const double span = (b - a) / coarse_panels;
    for (double s : singular) {
        for (double d = eps / 4; d < span; d *= 2) {
            br.push_back(s - d);
            br.push_back(s + d);
        }
    }
    return finish_breaks(br, a, b, coarse_panels);
}

double SphereRule::total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

std::vector<std::pair<std::vector<double>, double>> subsphere_rule(int n, int order) {
    std::vector<std::pair<std::vector<double>, double>> out;
    if (n == 2) {
        out.push_back({{1.0}, 1.0});
        out.push_back({{-1.0}, 1.0});
    } else if (n == 3) {
        const int m = 2 * order;
        for (int k = 0; k < m; ++k) {
            const double p = 2 * M_PI * (k + 0.5) / m;
            out.push_back({{std::cos(p), std::sin(p)}, 2 * M_PI / m});
        }
    } else if (n == 4) {
        const Rule1D& g = gauss_legendre(order);
        const int m = 2 * order;
        for (int i = 0; i < order; ++i) {
            const double c = g.x[i], s = std::sqrt(1 - c * c);
            for (int k = 0; k < m; ++k) {
                const double p = 2 * M_PI * (k + 0.5) / m;
                out.push_back({{c, s * std::cos(p), s * std::sin(p)}, g.w[i] * 2 * M_PI / m});
            }
        }
    } else {
        throw DomainError("sphere rules support n = 2, 3, 4");
    }
    return out;
}

SphereRule sphere_rule(int n, const Rule1D& psi_rule,
                       const std::vector<std::pair<std::vector<double>, double>>& inner) {
    SphereRule r;
    r.dim = n;
    for (std::size_t i = 0; i < psi_rule.x.size(); ++i) {
        const double psi = psi_rule.x[i];
        const double c = std::cos(psi), s = std::sin(psi);
        const double jac = std::pow(s, n - 2);
        for (const auto& [om, w] : inner) {
            Point p{};
            p[0] = c;
            for (int k = 1; k < n; ++k) p[k] = s * om[k - 1];
            r.nodes.push_back(p);
            r.weights.push_back(psi_rule.w[i] * jac * w);
            r.psi.push_back(psi);
        }
    }
    return r;
}

SphereRule sphere_rule(int n, const Rule1D& psi_rule, int inner_order) {
    return sphere_rule(n, psi_rule, subsphere_rule(n, inner_order));
}

SphereRule sphere_rule_uniform(int n, int order) {
    std::vector<double> br;
    const int panels = std::max(2, order / 8);
    for (int i = 0; i <= panels; ++i) br.push_back(M_PI * i / panels);
    return sphere_rule(n, composite(br, order / panels + 8), std::max(order / 2 + 1, 2));
}

double sphere_area(int n) { return 2 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace reslab
