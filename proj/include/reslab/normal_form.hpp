#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

namespace reslab {

using Rational = boost::multiprecision::cpp_rational;

// Polynomial in the variables (h^1..h^d, x^1..x^p) with exact rational
// coefficients.  Exponent vectors list the h exponents first.
class Poly {
public:
    using Exponents = std::vector<int>;

    Poly() = default;
    Poly(int hdim, int xdim) : hdim_(hdim), xdim_(xdim) {}
    static Poly h_var(int hdim, int xdim, int i);

    int hdim() const { return hdim_; }
    int xdim() const { return xdim_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    void add(const Exponents& e, const Rational& c);
    int h_degree(const Exponents& e) const;
    // lowest h-degree among non-zero terms; -1 for the zero polynomial
    int min_h_degree() const;
    Poly h_homogeneous_part(int degree) const;
    Poly truncated(int max_h_degree) const;
    Poly derivative_h(int i) const;
    bool is_zero() const { return terms_.empty(); }
    double evaluate(const Eigen::VectorXd& h, const Eigen::VectorXd& x) const;
    std::string to_string() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

private:
    int hdim_ = 0, xdim_ = 0;
    std::map<Exponents, Rational> terms_;
};

// X = (h^i + A_i(x, h)) d/dh^i with every A_i of h-order >= 2.
struct PolyEulerField {
    int hdim = 1, xdim = 0;
    std::vector<Poly> A;

    void validate() const;  // throws DomainError if the linear part is not the identity
    Poly apply(const Poly& f) const;
    Eigen::VectorXd value(const Eigen::VectorXd& h, const Eigen::VectorXd& x) const;
};

// Polynomial coordinates h~ = h + O(h^2) with X h~ - h~ = O(|h|^{N+2}).
std::vector<Poly> euler_normal_form(const PolyEulerField& X, int N);
// Terms of X h~^i - h~^i of h-degree <= max_degree (empty when normal).
std::vector<Poly> normal_form_defect(const PolyEulerField& X, const std::vector<Poly>& ht, int max_degree);

// Backward flow h(t) = e^{-tX} h0, i.e. dh/dt = -X(h), by classical RK4.
Eigen::VectorXd backward_flow(const PolyEulerField& X, const Eigen::VectorXd& x, Eigen::VectorXd h0, double t,
                              int steps = 2000);
// Largest radius (from a coarse scan) on which |A(x, h)| <= |h| / 2 at
// sampled points; on such a ball the backward flow contracts like e^{-t/2}.
double stable_ball_radius(const PolyEulerField& X, const Eigen::VectorXd& x, double r_max = 1.0);

}  // namespace reslab
