#include "reslab/normal_form.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "reslab/error.hpp"

namespace reslab {

Poly Poly::h_var(int hdim, int xdim, int i) {
    Poly p(hdim, xdim);
    Exponents e(hdim + xdim, 0);
    e[i] = 1;
    p.add(e, 1);
    return p;
}

void Poly::add(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int Poly::h_degree(const Exponents& e) const {
    int d = 0;
    for (int i = 0; i < hdim_; ++i) d += e[i];
    return d;
}

int Poly::min_h_degree() const {
    int m = -1;
    for (const auto& [e, c] : terms_) {
        const int d = h_degree(e);
        if (m < 0 || d < m) m = d;
    }
    return m;
}

Poly Poly::h_homogeneous_part(int degree) const {
    Poly p(hdim_, xdim_);
    for (const auto& [e, c] : terms_)
        if (h_degree(e) == degree) p.terms_.emplace(e, c);
    return p;
}

Poly Poly::truncated(int max_h_degree) const {
    Poly p(hdim_, xdim_);
    for (const auto& [e, c] : terms_)
        if (h_degree(e) <= max_h_degree) p.terms_.emplace(e, c);
    return p;
}

Poly Poly::derivative_h(int i) const {
    Poly p(hdim_, xdim_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents f = e;
        f[i] -= 1;
        p.add(f, c * e[i]);
    }
    return p;
}

double Poly::evaluate(const Eigen::VectorXd& h, const Eigen::VectorXd& x) const {
    double s = 0;
    for (const auto& [e, c] : terms_) {
        double t = static_cast<double>(c);
        for (int i = 0; i < hdim_; ++i) t *= std::pow(h[i], e[i]);
        for (int i = 0; i < xdim_; ++i) t *= std::pow(x[i], e[hdim_ + i]);
        s += t;
    }
    return s;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c << ')';
        for (int i = 0; i < hdim_ + xdim_; ++i) {
            if (e[i] == 0) continue;
            os << '*' << (i < hdim_ ? "h" : "x") << (i < hdim_ ? i : i - hdim_);
            if (e[i] > 1) os << '^' << e[i];
        }
    }
    return os.str();
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly p(a.hdim_, a.xdim_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Poly::Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            p.add(e, ca * cb);
        }
    return p;
}

void PolyEulerField::validate() const {
    if (static_cast<int>(A.size()) != hdim) throw DomainError("Euler field needs one component per h variable");
    for (const auto& a : A) {
        if (a.hdim() != hdim || a.xdim() != xdim) throw DomainError("Euler field component has wrong variables");
        const int m = a.min_h_degree();
        if (m >= 0 && m < 2) throw DomainError("not an Euler field: linear part differs from the identity");
    }
}

Poly PolyEulerField::apply(const Poly& f) const {
    Poly r(hdim, xdim);
    for (int i = 0; i < hdim; ++i) {
        const Poly d = f.derivative_h(i);
        if (d.is_zero()) continue;
        r += (Poly::h_var(hdim, xdim, i) + A[i]) * d;
    }
    return r;
}

Eigen::VectorXd PolyEulerField::value(const Eigen::VectorXd& h, const Eigen::VectorXd& x) const {
    Eigen::VectorXd v(hdim);
    for (int i = 0; i < hdim; ++i) v[i] = h[i] + A[i].evaluate(h, x);
    return v;
}

std::vector<Poly> euler_normal_form(const PolyEulerField& X, int N) {
    X.validate();
    if (N < 0) throw DomainError("normal form order must be non-negative");
    std::vector<Poly> ht;
    for (int i = 0; i < X.hdim; ++i) {
        Poly h = Poly::h_var(X.hdim, X.xdim, i);
        for (;;) {
            const Poly defect = (X.apply(h) - h).truncated(N + 1);
            const int m = defect.min_h_degree();
            if (m < 0) break;
            // for f of h-order m, X f - f = (m - 1) f + higher order
            Poly eps = defect.h_homogeneous_part(m);
            eps *= Rational(-1, m - 1);
            h = (h + eps).truncated(N + 1);
        }
        ht.push_back(std::move(h));
    }
    return ht;
}

std::vector<Poly> normal_form_defect(const PolyEulerField& X, const std::vector<Poly>& ht, int max_degree) {
    std::vector<Poly> out;
    for (const auto& h : ht) out.push_back((X.apply(h) - h).truncated(max_degree));
    return out;
}

Eigen::VectorXd backward_flow(const PolyEulerField& X, const Eigen::VectorXd& x, Eigen::VectorXd h, double t,
                              int steps) {
    const double dt = t / steps;
    auto f = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return -X.value(y, x); };
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXd k1 = f(h), k2 = f(h + 0.5 * dt * k1), k3 = f(h + 0.5 * dt * k2), k4 = f(h + dt * k3);
        h += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return h;
}

double stable_ball_radius(const PolyEulerField& X, const Eigen::VectorXd& x, double r_max) {
    std::mt19937 rng(11);
    std::normal_distribution<double> gauss;
    double r = r_max;
    while (r > 1e-6) {
        bool ok = true;
        for (int s = 0; s < 400 && ok; ++s) {
            Eigen::VectorXd h(X.hdim);
            for (int i = 0; i < X.hdim; ++i) h[i] = gauss(rng);
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            h *= r * u / h.norm();
            const Eigen::VectorXd a = X.value(h, x) - h;
            if (a.norm() > 0.5 * h.norm()) ok = false;
        }
        if (ok) return r;
        r *= 0.8;
    }
    return 0;
}

}  // namespace reslab
