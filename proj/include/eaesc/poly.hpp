#pragma once

#include "eaesc/exact_linalg.hpp"

namespace eaesc {

// Dense polynomial over Q, ascending coefficients, trailing zeros trimmed.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(Vec c) : c_(std::move(c)) { trim(); }
    static QPoly monomial(const Scalar& a, int deg);

    int degree() const { return int(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const Vec& coeffs() const { return c_; }
    Scalar coeff(int i) const { return i >= 0 && i < int(c_.size()) ? c_[i] : Scalar(0); }
    const Scalar& lead() const { return c_.back(); }

    Scalar eval(const Scalar& x) const;
    QPoly derivative() const;
    QPoly reversed() const;  // z^deg p(1/z)
    QPoly monic() const;

    friend QPoly operator+(const QPoly& a, const QPoly& b);
    friend QPoly operator-(const QPoly& a, const QPoly& b);
    friend QPoly operator*(const QPoly& a, const QPoly& b);
    friend QPoly operator*(const Scalar& s, const QPoly& a);
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

private:
    void trim();
    Vec c_;
};

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly poly_gcd(const QPoly& a, const QPoly& b);  // monic, or zero

// Sturm chain f0, f1, -rem(f0,f1), ...
std::vector<QPoly> sturm_chain(const QPoly& f0, const QPoly& f1);
int sign_variations_at(const std::vector<QPoly>& chain, const Scalar& x);
int sign_variations_at_inf(const std::vector<QPoly>& chain, bool plus);

// Number of distinct real roots of p in the open interval (a, b); p(a), p(b) != 0.
int count_real_roots(const QPoly& p, const Scalar& a, const Scalar& b);

// Cauchy index of num/den over the whole real line.
int cauchy_index(const QPoly& num, const QPoly& den);

// Exact: does p (p(0) may be anything) vanish somewhere on |z| = 1?
// Evaluates at z = +-1, then looks for reciprocal root pairs through
// gcd(p, reversed p) and a Sturm count on the real trace polynomial.
bool has_root_on_unit_circle(const QPoly& p);

// Exact count of zeros of p strictly inside the unit disk, with
// multiplicity. Requires that p has no zero on the circle.
int count_roots_inside_unit_disk(const QPoly& p);

}  // namespace eaesc
