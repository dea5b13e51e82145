#include "eaesc/poly.hpp"

#include <stdexcept>

namespace eaesc {

QPoly QPoly::monomial(const Scalar& a, int deg) {
    Vec c(deg + 1);
    c[deg] = a;
    return QPoly(std::move(c));
}

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Scalar QPoly::eval(const Scalar& x) const {
    Scalar acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

QPoly QPoly::derivative() const {
    if (c_.size() <= 1) return {};
    Vec d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * int(i);
    return QPoly(std::move(d));
}

QPoly QPoly::reversed() const { return QPoly(Vec(c_.rbegin(), c_.rend())); }

QPoly QPoly::monic() const {
    if (c_.empty()) return {};
    Scalar inv = 1 / lead();
    Vec d = c_;
    for (auto& x : d) x *= inv;
    return QPoly(std::move(d));
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    Vec c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) + b.coeff(int(i));
    return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
    Vec c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) - b.coeff(int(i));
    return QPoly(std::move(c));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Vec c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return QPoly(std::move(c));
}

QPoly operator*(const Scalar& s, const QPoly& a) {
    Vec c = a.c_;
    for (auto& x : c) x *= s;
    return QPoly(std::move(c));
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Vec rem = a.coeffs();
    int db = b.degree();
    Vec quo(std::max(0, a.degree() - db + 1));
    for (int d = a.degree(); d >= db; --d) {
        Scalar f = rem[d] / b.lead();
        if (f == 0) continue;
        quo[d - db] = f;
        for (int i = 0; i <= db; ++i) rem[d - db + i] -= f * b.coeff(i);
    }
    q = QPoly(std::move(quo));
    r = QPoly(std::move(rem));
}

QPoly poly_gcd(const QPoly& a, const QPoly& b) {
    QPoly x = a, y = b;
    while (!y.is_zero()) {
        QPoly q, r;
        divmod(x, y, q, r);
        x = y;
        y = r;
    }
    return x.monic();
}

std::vector<QPoly> sturm_chain(const QPoly& f0, const QPoly& f1) {
    std::vector<QPoly> chain{f0, f1};
    while (!chain.back().is_zero()) {
        QPoly q, r;
        divmod(chain[chain.size() - 2], chain.back(), q, r);
        chain.push_back(Scalar(-1) * r);
    }
    chain.pop_back();
    return chain;
}

static int count_variations(const std::vector<int>& signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

int sign_variations_at(const std::vector<QPoly>& chain, const Scalar& x) {
    std::vector<int> s;
    for (const auto& p : chain) s.push_back(sgn(p.eval(x)));
    return count_variations(s);
}

int sign_variations_at_inf(const std::vector<QPoly>& chain, bool plus) {
    std::vector<int> s;
    for (const auto& p : chain) {
        if (p.is_zero()) {
            s.push_back(0);
            continue;
        }
        int sg = sgn(p.lead());
        if (!plus && p.degree() % 2 == 1) sg = -sg;
        s.push_back(sg);
    }
    return count_variations(s);
}

int count_real_roots(const QPoly& p, const Scalar& a, const Scalar& b) {
    if (p.degree() <= 0) return 0;
    auto chain = sturm_chain(p, p.derivative());
    return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

int cauchy_index(const QPoly& num, const QPoly& den) {
    auto chain = sturm_chain(den, num);
    return sign_variations_at_inf(chain, false) - sign_variations_at_inf(chain, true);
}

bool has_root_on_unit_circle(const QPoly& p) {
    if (p.is_zero()) return true;
    if (p.eval(1) == 0 || p.eval(-1) == 0) return true;
    // strip z^k factors: zero is not on the circle
    Vec c = p.coeffs();
    std::size_t k = 0;
    while (k < c.size() && c[k] == 0) ++k;
    QPoly q(Vec(c.begin() + long(k), c.end()));
    QPoly g = poly_gcd(q, q.reversed());
    if (g.degree() <= 0) return false;
    // g is monic with root set closed under inversion and without +-1,
    // hence palindromic of even degree 2m: z^-m g(z) = h(z + 1/z).
    int m = g.degree() / 2;
    if (g.degree() % 2 != 0 || !(g == g.reversed()))
        throw InternalCheckFailed("reciprocal gcd is not palindromic");
    // Dickson polynomials D_j(s) = z^j + z^-j with D_0 = 2, D_1 = s.
    QPoly s = QPoly::monomial(1, 1);
    QPoly d_prev(Vec{2}), d_cur = s;
    QPoly h(Vec{g.coeff(m)});
    for (int j = 1; j <= m; ++j) {
        h = h + g.coeff(m + j) * d_cur;
        QPoly next = s * d_cur - d_prev;
        d_prev = d_cur;
        d_cur = next;
    }
    // s in (-2, 2) <=> z on the circle (z = +-1 excluded above, so
    // h(+-2) != 0).
    return count_real_roots(h, -2, 2) > 0;
}

int count_roots_inside_unit_disk(const QPoly& p) {
    if (p.is_zero()) throw std::domain_error("zero polynomial");
    int n = p.degree();
    if (n == 0) return 0;
    if (p.eval(-1) == 0) throw NotFredholm("polynomial vanishes at z = -1");
    // z = (1 + i t) / (1 - i t) maps the upper half-plane onto the disk.
    // F(t) = sum a_k (1 + i t)^k (1 - i t)^(n - k) = A(t) + i B(t).
    using CP = std::pair<QPoly, QPoly>;  // re, im
    auto cmul = [](const CP& x, const CP& y) {
        return CP{x.first * y.first - x.second * y.second, x.first * y.second + x.second * y.first};
    };
    CP plus{QPoly(Vec{1}), QPoly(Vec{0, 1})};
    CP minus{QPoly(Vec{1}), QPoly(Vec{0, -1})};
    std::vector<CP> pw_plus{CP{QPoly(Vec{1}), QPoly()}}, pw_minus{CP{QPoly(Vec{1}), QPoly()}};
    for (int k = 1; k <= n; ++k) {
        pw_plus.push_back(cmul(pw_plus.back(), plus));
        pw_minus.push_back(cmul(pw_minus.back(), minus));
    }
    QPoly A, B;
    for (int k = 0; k <= n; ++k) {
        if (p.coeff(k) == 0) continue;
        CP term = cmul(pw_plus[k], pw_minus[n - k]);
        A = A + p.coeff(k) * term.first;
        B = B + p.coeff(k) * term.second;
    }
    // The argument of F increases by pi each time A/B jumps from -inf to
    // +inf; when the leading coefficient of F is real rotate by i first so
    // that the endpoints do not sit on multiples of pi.
    if (B.degree() < A.degree()) {
        QPoly na = Scalar(-1) * B;
        B = A;
        A = na;
    }
    int ind = cauchy_index(A, B);
    int deg = std::max(A.degree(), B.degree());
    if ((deg + ind) % 2 != 0) throw InternalCheckFailed("odd half-plane root count");
    return (deg + ind) / 2;
}

}  // namespace eaesc
