#include "eaesc/seq_operator.hpp"

#include <sstream>

namespace eaesc {

LaurentSymbol LaurentSymbol::monomial(const Scalar& c, int d) {
    LaurentSymbol s;
    s.set(d, c);
    return s;
}

Scalar LaurentSymbol::coeff(int j) const {
    auto it = c_.find(j);
    return it == c_.end() ? Scalar(0) : it->second;
}

void LaurentSymbol::set(int j, const Scalar& v) {
    if (v == 0)
        c_.erase(j);
    else
        c_[j] = v;
}

void LaurentSymbol::add(int j, const Scalar& v) {
    if (v == 0) return;
    auto [it, fresh] = c_.emplace(j, v);
    if (!fresh) {
        it->second += v;
        if (it->second == 0) c_.erase(it);
    }
}

QPoly LaurentSymbol::numerator() const {
    if (is_zero()) return {};
    Vec c(std::size_t(hi() - lo() + 1));
    for (const auto& [j, v] : c_) c[std::size_t(j - lo())] = v;
    return QPoly(std::move(c));
}

LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b) {
    LaurentSymbol s = a;
    for (const auto& [j, v] : b.c_) s.add(j, v);
    return s;
}

LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b) {
    LaurentSymbol s = a;
    for (const auto& [j, v] : b.c_) s.add(j, -v);
    return s;
}

LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b) {
    LaurentSymbol s;
    for (const auto& [i, x] : a.c_)
        for (const auto& [j, y] : b.c_) s.add(i + j, x * y);
    return s;
}

LaurentSymbol operator*(const Scalar& k, const LaurentSymbol& a) {
    LaurentSymbol s;
    if (k == 0) return s;
    for (const auto& [j, v] : a.c_) s.set(j, k * v);
    return s;
}

bool symbol_is_fredholm(const LaurentSymbol& a) {
    if (a.is_zero()) return false;
    if (a.is_monomial()) return true;
    return !has_root_on_unit_circle(a.numerator());
}

int symbol_winding(const LaurentSymbol& a) {
    if (!symbol_is_fredholm(a)) throw NotFredholm("symbol " + to_string(a) + " vanishes on the unit circle");
    if (a.is_monomial()) return a.lo();
    return a.lo() + count_roots_inside_unit_disk(a.numerator());
}

std::string to_string(const LaurentSymbol& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [j, v] : a.coeffs()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.get_str() << ")";
        if (j != 0) os << "z^" << j;
    }
    return os.str();
}

Scalar Correction::get(int i, int j) const {
    auto it = e_.find({i, j});
    return it == e_.end() ? Scalar(0) : it->second;
}

void Correction::set(int i, int j, const Scalar& v) {
    if (i < 1 || j < 1) throw ShapeMismatch("correction indices are 1-based");
    if (v == 0)
        e_.erase({i, j});
    else
        e_[{i, j}] = v;
}

void Correction::add(int i, int j, const Scalar& v) {
    if (v == 0) return;
    if (i < 1 || j < 1) throw ShapeMismatch("correction indices are 1-based");
    auto [it, fresh] = e_.emplace(Key{i, j}, v);
    if (!fresh) {
        it->second += v;
        if (it->second == 0) e_.erase(it);
    }
}

int Correction::row_bound() const {
    int r = 0;
    for (const auto& kv : e_) r = std::max(r, kv.first.first);
    return r;
}

int Correction::col_bound() const {
    int c = 0;
    for (const auto& kv : e_) c = std::max(c, kv.first.second);
    return c;
}

Correction Correction::transposed() const {
    Correction t;
    for (const auto& [k, v] : e_) t.e_[{k.second, k.first}] = v;
    return t;
}

SeqOp shift(int d) { return SeqOp{LaurentSymbol::monomial(1, d), {}}; }

SeqOp op_identity() { return shift(0); }

SeqOp op_compose(const SeqOp& a, const SeqOp& b) {
    SeqOp out;
    out.symbol = a.symbol * b.symbol;
    Correction& c = out.correction;
    const auto& sa = a.symbol.coeffs();
    const auto& sb = b.symbol.coeffs();
    // Toeplitz product boundary term: -sum_{k<=0} a_{i-k} b_{k-j}
    if (!a.symbol.is_zero() && !b.symbol.is_zero()) {
        int ha = a.symbol.hi(), la = a.symbol.lo(), hb = b.symbol.hi(), lb = b.symbol.lo();
        for (int i = 1; i <= ha; ++i)
            for (int j = 1; j <= -lb; ++j) {
                int k0 = std::max(i - ha, j + lb), k1 = std::min({0, i - la, j + hb});
                Scalar s = 0;
                for (int k = k0; k <= k1; ++k) s += a.symbol.coeff(i - k) * b.symbol.coeff(k - j);
                c.add(i, j, -s);
            }
    }
    // Toep(a) G
    for (const auto& [kj, g] : b.correction.entries())
        for (const auto& [t, av] : sa) {
            int i = kj.first + t;
            if (i >= 1) c.add(i, kj.second, av * g);
        }
    // F Toep(b): B_kj = b_{k-j}
    for (const auto& [ik, f] : a.correction.entries())
        for (const auto& [t, bv] : sb) {
            int j = ik.second - t;
            if (j >= 1) c.add(ik.first, j, f * bv);
        }
    // F G
    if (!a.correction.empty() && !b.correction.empty()) {
        std::map<int, std::vector<std::pair<int, Scalar>>> g_rows;
        for (const auto& [kj, g] : b.correction.entries()) g_rows[kj.first].emplace_back(kj.second, g);
        for (const auto& [ik, f] : a.correction.entries()) {
            auto it = g_rows.find(ik.second);
            if (it == g_rows.end()) continue;
            for (const auto& [j, g] : it->second) c.add(ik.first, j, f * g);
        }
    }
    return out;
}

SeqOp op_add(const SeqOp& a, const SeqOp& b) {
    SeqOp s = a;
    s.symbol = a.symbol + b.symbol;
    for (const auto& [k, v] : b.correction.entries()) s.correction.add(k.first, k.second, v);
    return s;
}

SeqOp op_sub(const SeqOp& a, const SeqOp& b) { return op_add(a, op_scale(-1, b)); }

SeqOp op_scale(const Scalar& c, const SeqOp& a) {
    SeqOp s;
    s.symbol = c * a.symbol;
    if (c != 0)
        for (const auto& [k, v] : a.correction.entries()) s.correction.set(k.first, k.second, c * v);
    return s;
}

SeqOp op_transpose(const SeqOp& a) {
    SeqOp t;
    for (const auto& [j, v] : a.symbol.coeffs()) t.symbol.set(-j, v);
    t.correction = a.correction.transposed();
    return t;
}

bool is_fredholm(const SeqOp& t) { return symbol_is_fredholm(t.symbol); }

int index(const SeqOp& t) { return -symbol_winding(t.symbol); }

Vec apply_seq(const SeqOp& t, const Vec& x) {
    int len = int(x.size());
    int out_len = t.correction.row_bound();
    if (!t.symbol.is_zero()) out_len = std::max(out_len, len + t.symbol.hi());
    Vec y(std::max(out_len, 0));
    for (int j = 1; j <= len; ++j) {
        const Scalar& xj = x[j - 1];
        if (xj == 0) continue;
        for (const auto& [d, a] : t.symbol.coeffs()) {
            int i = j + d;
            if (i >= 1) y[i - 1] += a * xj;
        }
    }
    for (const auto& [k, f] : t.correction.entries())
        if (k.second <= len && x[k.second - 1] != 0) y[k.first - 1] += f * x[k.second - 1];
    while (!y.empty() && y.back() == 0) y.pop_back();
    return y;
}

}  // namespace eaesc
