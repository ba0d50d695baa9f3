#pragma once

// Arithmetic expressions in the coordinates x0..x{n-1}.  Grammar:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := ('+'|'-') unary | power
//   power := atom ('^' unary)?
//   atom  := number | 'pi' | var | func '(' expr ')' | '(' expr ')'
// with func one of exp log sin cos sinh cosh sqrt bump.  bump(s) is the
// smooth cutoff exp(1 - 1/(1 - s)) for s < 1 and 0 otherwise.

#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "reslab/jet.hpp"

namespace reslab {

struct Expr {
    enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Fn { Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt, Bump };

    Kind kind = Kind::Const;
    double value = 0;
    int var = 0;
    Fn fn = Fn::Exp;
    std::shared_ptr<const Expr> a, b;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Throws ParseError; variables must satisfy index < nvars.
ExprPtr parse_expression(std::string_view text, int nvars);
std::string to_string(const Expr& e);

namespace detail {

inline double lift(const double&, double v) { return v; }
inline std::complex<double> lift(const std::complex<double>&, double v) { return v; }
template <class T>
Jet<T> lift(const Jet<T>& proto, double v) {
    return Jet<T>(proto.layout(), T(v));
}

inline double real_value(double v) { return v; }
inline double real_value(const std::complex<double>& v) { return v.real(); }
template <class T>
double real_value(const Jet<T>& j) {
    return real_value(j.value());
}

template <class S>
S apply_fn(Expr::Fn fn, const S& x) {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    switch (fn) {
        case Expr::Fn::Exp: return exp(x);
        case Expr::Fn::Log:
            if constexpr (std::is_same_v<S, double>)
                if (!(x > 0)) throw DomainError("log of a non-positive value");
            return log(x);
        case Expr::Fn::Sin: return sin(x);
        case Expr::Fn::Cos: return cos(x);
        case Expr::Fn::Sinh: return sinh(x);
        case Expr::Fn::Cosh: return cosh(x);
        case Expr::Fn::Sqrt: return sqrt(x);
        case Expr::Fn::Bump:
            if (real_value(x) >= 1) return S(0);
            return exp(S(1) - S(1) / (S(1) - x));
    }
    return x;
}

template <class T>
Jet<T> apply_fn(Expr::Fn fn, const Jet<T>& x) {
    switch (fn) {
        case Expr::Fn::Exp: return jetfn::exp(x);
        case Expr::Fn::Log: return jetfn::log(x);
        case Expr::Fn::Sin: return jetfn::sin_cos(x, false);
        case Expr::Fn::Cos: return jetfn::sin_cos(x, true);
        case Expr::Fn::Sinh: return jetfn::sinh_cosh(x, false);
        case Expr::Fn::Cosh: return jetfn::sinh_cosh(x, true);
        case Expr::Fn::Sqrt: return jetfn::pow(x, T(0.5));
        case Expr::Fn::Bump:
            if (real_value(x) >= 1) return Jet<T>(x.layout());
            return jetfn::exp(T(1) - reciprocal(T(1) - x));
    }
    return x;
}

template <class S>
S apply_pow(const S& base, const Expr& exponent, const S& evaluated_exponent) {
    using std::exp;
    using std::log;
    using std::pow;
    if (exponent.kind == Expr::Kind::Const) {
        const double c = exponent.value;
        if (c == std::round(c) && std::abs(c) <= 64) {
            int n = static_cast<int>(c);
            S r = lift(base, 1.0), x = base;
            bool inv = n < 0;
            n = std::abs(n);
            while (n) {
                if (n & 1) r = r * x;
                x = x * x;
                n >>= 1;
            }
            return inv ? lift(base, 1.0) / r : r;
        }
        return pow(base, c);
    }
    return exp(evaluated_exponent * log(base));
}

template <class T>
Jet<T> apply_pow(const Jet<T>& base, const Expr& exponent, const Jet<T>& evaluated_exponent) {
    if (exponent.kind == Expr::Kind::Const) {
        const double c = exponent.value;
        if (c == std::round(c) && std::abs(c) <= 64) return jetfn::ipow(base, static_cast<int>(c));
        return jetfn::pow(base, T(c));
    }
    return jetfn::exp(evaluated_exponent * jetfn::log(base));
}

}  // namespace detail

// Evaluate with variables of scalar type S (double, complex, or Jet).
template <class S>
S evaluate(const Expr& e, std::span<const S> vars) {
    using namespace detail;
    switch (e.kind) {
        case Expr::Kind::Const: return lift(vars[0], e.value);
        case Expr::Kind::Var: return vars[e.var];
        case Expr::Kind::Neg: return lift(vars[0], 0.0) - evaluate(*e.a, vars);
        case Expr::Kind::Add: return evaluate(*e.a, vars) + evaluate(*e.b, vars);
        case Expr::Kind::Sub: return evaluate(*e.a, vars) - evaluate(*e.b, vars);
        case Expr::Kind::Mul: return evaluate(*e.a, vars) * evaluate(*e.b, vars);
        case Expr::Kind::Div: {
            S den = evaluate(*e.b, vars);
            if constexpr (std::is_same_v<S, double>)
                if (den == 0) throw DomainError("division by zero");
            return evaluate(*e.a, vars) / den;
        }
        case Expr::Kind::Pow: {
            S base = evaluate(*e.a, vars);
            S ex = e.b->kind == Expr::Kind::Const ? base : evaluate(*e.b, vars);
            return apply_pow(base, *e.b, ex);
        }
        case Expr::Kind::Call: return apply_fn(e.fn, evaluate(*e.a, vars));
    }
    return vars[0];
}

}  // namespace reslab
