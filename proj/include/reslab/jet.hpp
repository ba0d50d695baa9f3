#pragma once

// Truncated multivariate Taylor polynomials.  A Jet stores the Taylor
// coefficients c_beta of a function around a point for all multi-indices
// |beta| <= order, so that partial derivatives are beta! * c_beta.  Because
// the coefficient of a mixed monomial is stored once, mixed partials are
// symmetric by construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "reslab/error.hpp"

namespace reslab {

inline constexpr int kMaxJetVars = 4;
inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetSize = 70;  // C(4 + 4, 4)

using MultiIndex = std::array<int, kMaxJetVars>;

struct JetLayout {
    struct Product {
        std::uint8_t a, b, out;
    };

    int nvars = 0;
    int order = 0;
    int size = 1;
    std::vector<MultiIndex> index;
    std::vector<int> degree;
    std::vector<Product> products;
    std::vector<int> degree_begin;  // first slot of each total degree, plus end
    // raise[var][s]: slot of index[s] + e_var, or -1 beyond the order
    std::array<std::vector<int>, kMaxJetVars> raise;
    std::array<int, 625> lookup;  // base-5 code of a multi-index -> slot, -1 if absent

    int slot(const MultiIndex& m) const;
    int unit(int var) const { return slot(unit_index(var)); }
    static MultiIndex unit_index(int var) {
        MultiIndex m{};
        m[var] = 1;
        return m;
    }
    static const JetLayout& get(int nvars, int order);
};

double factorial(int k);
double multi_factorial(const MultiIndex& m);

template <class T>
class Jet {
public:
    // Only the first layout().size coefficients are ever touched.
    Jet() : layout_(&JetLayout::get(0, 0)) { c_[0] = T(0); }
    explicit Jet(const JetLayout& L, T value = T(0)) : layout_(&L) {
        std::fill_n(c_.begin(), L.size, T(0));
        c_[0] = value;
    }
    Jet(const Jet& o) : layout_(o.layout_) { std::copy_n(o.c_.begin(), o.size(), c_.begin()); }
    Jet& operator=(const Jet& o) {
        layout_ = o.layout_;
        std::copy_n(o.c_.begin(), o.size(), c_.begin());
        return *this;
    }

    static Jet variable(const JetLayout& L, int var, T value) {
        Jet j(L, value);
        if (L.order > 0) j.c_[L.unit(var)] = T(1);
        return j;
    }

    const JetLayout& layout() const { return *layout_; }
    int size() const { return layout_->size; }
    T value() const { return c_[0]; }
    T& operator[](int i) { return c_[i]; }
    const T& operator[](int i) const { return c_[i]; }
    T coeff(const MultiIndex& m) const { return c_[layout_->slot(m)]; }
    T partial(const MultiIndex& m) const { return coeff(m) * T(multi_factorial(m)); }

    Jet& operator+=(const Jet& o) {
        check(o);
        for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check(o);
        for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(T s) {
        for (int i = 0; i < size(); ++i) c_[i] *= s;
        return *this;
    }
    Jet& operator+=(T s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }

    // this += s * a * b without temporaries
    Jet& add_product(const Jet& a, const Jet& b, T s = T(1)) {
        check(a);
        check(b);
        for (const auto& p : layout_->products) c_[p.out] += s * a.c_[p.a] * b.c_[p.b];
        return *this;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check(b);
        Jet r(*a.layout_);
        for (const auto& p : a.layout_->products) r.c_[p.out] += a.c_[p.a] * b.c_[p.b];
        return r;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) { return a *= T(-1); }
    friend Jet operator*(Jet a, T s) { return a *= s; }
    friend Jet operator*(T s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, T s) { return a += s; }
    friend Jet operator+(T s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, T s) { return a += -s; }
    friend Jet operator-(T s, Jet a) { return (-a) += s; }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(Jet a, T s) { return a *= T(1) / s; }
    friend Jet operator/(T s, const Jet& b) { return reciprocal(b) * s; }

    // f(value + delta) given the scaled derivatives f_k = f^(k)(value) / k!.
    Jet compose_scalar(std::span<const T> fk) const {
        Jet delta = *this;
        delta.c_[0] = T(0);
        const int ord = layout_->order;
        Jet r(*layout_, fk[ord]);
        for (int k = ord - 1; k >= 0; --k) {
            r = r * delta;
            r.c_[0] += fk[k];
        }
        return r;
    }

    friend Jet reciprocal(const Jet& x) {
        const T a = x.value();
        if (a == T(0)) throw DomainError("jet reciprocal of zero");
        std::array<T, kMaxJetOrder + 1> f{};
        T p = T(1) / a;
        for (int k = 0; k <= x.layout_->order; ++k) {
            f[k] = (k % 2 ? -p : p);
            p /= a;
        }
        return x.compose_scalar(f);
    }

    // Partial derivative with respect to one variable; the result has one
    // order less.
    Jet derivative(int var) const {
        const JetLayout& L = *layout_;
        if (L.order == 0) throw DomainError("derivative of an order-0 jet");
        const JetLayout& D = JetLayout::get(L.nvars, L.order - 1);
        Jet r(D);
        for (int s = 0; s < D.size; ++s) r.c_[s] = c_[L.raise[var][s]] * T(D.index[s][var] + 1);
        return r;
    }

    Jet truncated(int order) const {
        const JetLayout& D = JetLayout::get(layout_->nvars, order);
        Jet r(D);
        if (order > layout_->order) throw DomainError("truncation above the jet order");
        // layouts list multi-indices by degree in a fixed order, so truncation keeps a prefix
        for (int s = 0; s < D.size; ++s) r.c_[s] = c_[s];
        return r;
    }

    // Evaluate the Taylor polynomial at value point + dx.
    T taylor(std::span<const T> dx) const {
        T sum(0);
        for (int s = 0; s < size(); ++s) {
            T term = c_[s];
            for (int v = 0; v < layout_->nvars; ++v)
                for (int e = 0; e < layout_->index[s][v]; ++e) term *= dx[v];
            sum += term;
        }
        return sum;
    }

private:
    void check(const Jet& o) const {
        if (o.layout_ != layout_) throw DomainError("jet layout mismatch");
    }

    const JetLayout* layout_;
    std::array<T, kMaxJetSize> c_;
};

// Substitute jets dx (in some other layout, zero constant part) for the
// displacement variables of p:  p(value + dx).
template <class T>
Jet<T> compose(const Jet<T>& p, std::span<const Jet<T>> dx) {
    const JetLayout& P = p.layout();
    const JetLayout& Q = dx[0].layout();
    const int maxdeg = std::min(P.order, Q.order);
    std::array<std::array<Jet<T>, kMaxJetOrder + 1>, kMaxJetVars> pw;
    for (int v = 0; v < P.nvars; ++v) {
        pw[v][0] = Jet<T>(Q, T(1));
        for (int e = 1; e <= maxdeg; ++e) pw[v][e] = pw[v][e - 1] * dx[v];
    }
    Jet<T> r(Q);
    for (int s = 0; s < P.degree_begin[maxdeg + 1]; ++s) {
        const T c = p[s];
        if (c == T(0)) continue;
        Jet<T> term(Q, c);
        bool first = true;
        for (int v = 0; v < P.nvars; ++v) {
            const int e = P.index[s][v];
            if (e == 0) continue;
            if (first) {
                term = pw[v][e] * c;
                first = false;
            } else {
                term = term * pw[v][e];
            }
        }
        r += term;
    }
    return r;
}

// Monomials dx^m for every slot m of P up to the order of dx; compose()
// against a fixed dx reduces to a linear combination of these.
template <class T>
std::vector<Jet<T>> monomial_basis(const JetLayout& P, std::span<const Jet<T>> dx) {
    const JetLayout& Q = dx[0].layout();
    const int maxdeg = std::min(P.order, Q.order);
    std::vector<Jet<T>> basis(P.degree_begin[maxdeg + 1], Jet<T>(Q));
    basis[0] = Jet<T>(Q, T(1));
    for (int s = 1; s < static_cast<int>(basis.size()); ++s) {
        // lower one exponent to reach an earlier slot
        int v = 0;
        while (P.index[s][v] == 0) ++v;
        MultiIndex m = P.index[s];
        m[v] -= 1;
        basis[s] = basis[P.slot(m)] * dx[v];
    }
    return basis;
}

template <class T>
Jet<T> compose_basis(const Jet<T>& p, const std::vector<Jet<T>>& basis) {
    Jet<T> r(basis[0].layout());
    for (std::size_t s = 0; s < basis.size(); ++s)
        if (p[s] != T(0)) r += basis[s] * p[s];
    return r;
}

namespace jetfn {

template <class T>
Jet<T> exp(const Jet<T>& x) {
    using std::exp;
    std::array<T, kMaxJetOrder + 1> f{};
    const T e = exp(x.value());
    for (int k = 0; k <= x.layout().order; ++k) f[k] = e / T(factorial(k));
    return x.compose_scalar(f);
}

template <class T>
Jet<T> log(const Jet<T>& x) {
    using std::log;
    const T a = x.value();
    if constexpr (std::is_same_v<T, double>) {
        if (!(a > 0)) throw DomainError("log of a non-positive value");
    }
    std::array<T, kMaxJetOrder + 1> f{};
    f[0] = log(a);
    T p = T(1) / a;
    for (int k = 1; k <= x.layout().order; ++k) {
        f[k] = (k % 2 ? p : -p) / T(k);
        p /= a;
    }
    return x.compose_scalar(f);
}

// Generic power x^c with a constant exponent, principal branch.
template <class T>
Jet<T> pow(const Jet<T>& x, T c) {
    using std::pow;
    const T a = x.value();
    std::array<T, kMaxJetOrder + 1> f{};
    T coef(1);
    for (int k = 0; k <= x.layout().order; ++k) {
        f[k] = coef * pow(a, c - T(k)) / T(factorial(k));
        coef *= (c - T(k));
    }
    return x.compose_scalar(f);
}

template <class T>
Jet<T> ipow(Jet<T> x, int n) {
    if (n < 0) return reciprocal(ipow(x, -n));
    Jet<T> r(x.layout(), T(1));
    while (n) {
        if (n & 1) r = r * x;
        x = x * x;
        n >>= 1;
    }
    return r;
}

template <class T>
Jet<T> sin_cos(const Jet<T>& x, bool cosine) {
    using std::cos;
    using std::sin;
    const T s = sin(x.value()), c = cos(x.value());
    // derivatives of sin cycle through sin, cos, -sin, -cos
    const std::array<T, 4> cyc = cosine ? std::array<T, 4>{c, -s, -c, s}
                                        : std::array<T, 4>{s, c, -s, -c};
    std::array<T, kMaxJetOrder + 1> f{};
    for (int k = 0; k <= x.layout().order; ++k) f[k] = cyc[k % 4] / T(factorial(k));
    return x.compose_scalar(f);
}

template <class T>
Jet<T> sinh_cosh(const Jet<T>& x, bool hyper_cos) {
    using std::cosh;
    using std::sinh;
    const T s = sinh(x.value()), c = cosh(x.value());
    std::array<T, kMaxJetOrder + 1> f{};
    for (int k = 0; k <= x.layout().order; ++k)
        f[k] = (((k % 2) == 0) == hyper_cos ? c : s) / T(factorial(k));
    return x.compose_scalar(f);
}

}  // namespace jetfn

}  // namespace reslab
