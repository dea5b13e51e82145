#include "eaesc/exact_linalg.hpp"

#include <algorithm>
#include <cctype>

namespace eaesc {

Scalar parse_scalar(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    auto digits_ok = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    if (!digits_ok(num) || !digits_ok(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Scalar q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Scalar& s) { return s.get_str(); }

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x == 0; });
}

Vec unit_vec(int n, int i) {
    Vec v(n);
    v[i] = 1;
    return v;
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) return {};
    Mat m(int(rows.size()), int(rows[0].size()));
    for (int i = 0; i < m.rows_; ++i) {
        if (int(rows[i].size()) != m.cols_) throw ShapeMismatch("ragged rows");
        for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols, int rows) {
    Mat m(rows, int(cols.size()));
    for (int j = 0; j < m.cols_; ++j) {
        if (int(cols[j].size()) != rows) throw ShapeMismatch("column length mismatch");
        for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vec Mat::row(int i) const { return Vec(a_.begin() + std::size_t(i) * cols_, a_.begin() + std::size_t(i + 1) * cols_); }

Vec Mat::col(int j) const {
    Vec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::select_rows(const std::vector<int>& idx) const {
    Mat m(int(idx.size()), cols_);
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
}

Mat Mat::select_cols(const std::vector<int>& idx) const {
    Mat m(rows_, int(idx.size()));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < m.cols_; ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
}

bool Mat::is_zero() const { return eaesc::is_zero(a_); }

bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw ShapeMismatch("matrix product dimensions");
    Mat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            const Scalar& x = a(i, k);
            if (x == 0) continue;
            for (int j = 0; j < b.cols_; ++j)
                if (b(k, j) != 0) c(i, j) += x * b(k, j);
        }
    return c;
}

Vec operator*(const Mat& a, const Vec& x) {
    if (a.cols_ != int(x.size())) throw ShapeMismatch("matrix-vector dimensions");
    Vec y(a.rows_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < a.cols_; ++j)
            if (x[j] != 0 && a(i, j) != 0) y[i] += a(i, j) * x[j];
    return y;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeMismatch("matrix sum dimensions");
    Mat c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeMismatch("matrix difference dimensions");
    Mat c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
}

Rref rref(const Mat& m) {
    Rref out{m, {}};
    Mat& r = out.r;
    int row = 0;
    for (int c = 0; c < r.cols() && row < r.rows(); ++c) {
        int p = -1;
        for (int i = row; i < r.rows(); ++i)
            if (r(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < r.cols(); ++j) std::swap(r(p, j), r(row, j));
        Scalar inv = 1 / r(row, c);
        for (int j = c; j < r.cols(); ++j)
            if (r(row, j) != 0) r(row, j) *= inv;
        for (int i = 0; i < r.rows(); ++i) {
            if (i == row || r(i, c) == 0) continue;
            Scalar f = r(i, c);
            for (int j = c; j < r.cols(); ++j)
                if (r(row, j) != 0) r(i, j) -= f * r(row, j);
        }
        out.pivots.push_back(c);
        ++row;
    }
    return out;
}

int rank(const Mat& m) { return int(rref(m).pivots.size()); }

std::vector<Vec> null_space(const Mat& m) {
    Rref e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : e.pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.r(int(i), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve(const Mat& m, const Vec& b) {
    if (int(b.size()) != m.rows()) throw ShapeMismatch("solve: right-hand side length");
    Mat aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    Rref e = rref(aug);
    Vec x(m.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == m.cols()) return std::nullopt;
        x[e.pivots[i]] = e.r(int(i), m.cols());
    }
    return x;
}

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw NotInvertible("inverse of a non-square matrix");
    int n = m.rows();
    Mat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    Rref e = rref(aug);
    if (int(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] >= n))
        throw NotInvertible("singular matrix");
    Mat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = e.r(i, n + j);
    return inv;
}

std::vector<int> complement_coords(const std::vector<Vec>& subspace, int ambient_dim) {
    if (subspace.empty()) {
        std::vector<int> all(ambient_dim);
        for (int i = 0; i < ambient_dim; ++i) all[i] = i;
        return all;
    }
    // e_i is picked iff it is independent of the span of the input and of
    // e_1..e_{i-1}; equivalently i is not a pivot when eliminating from the
    // last coordinate backwards.
    Mat rev(int(subspace.size()), ambient_dim);
    for (int r = 0; r < rev.rows(); ++r) {
        if (int(subspace[r].size()) != ambient_dim) throw ShapeMismatch("complement_basis: vector length");
        for (int c = 0; c < ambient_dim; ++c) rev(r, c) = subspace[r][ambient_dim - 1 - c];
    }
    Rref e = rref(rev);
    if (int(e.pivots.size()) != rev.rows()) throw DependentInput("complement_basis: input vectors are dependent");
    std::vector<bool> hit(ambient_dim, false);
    for (int c : e.pivots) hit[ambient_dim - 1 - c] = true;
    std::vector<int> out;
    for (int i = 0; i < ambient_dim; ++i)
        if (!hit[i]) out.push_back(i);
    return out;
}

std::vector<Vec> complement_basis(const std::vector<Vec>& subspace, int ambient_dim) {
    std::vector<Vec> out;
    for (int i : complement_coords(subspace, ambient_dim)) out.push_back(unit_vec(ambient_dim, i));
    return out;
}

std::vector<int> column_basis(const Mat& m) { return rref(m).pivots; }

std::vector<int> pivot_rows(const Mat& basis) {
    auto p = rref(basis.transpose()).pivots;
    if (int(p.size()) != basis.cols()) throw DependentInput("pivot_rows: basis is not of full column rank");
    return p;
}

Mat projection_onto(const Mat& basis) {
    int n = basis.rows();
    Mat P(n, n);
    if (basis.cols() == 0) return P;
    auto p = pivot_rows(basis);
    Mat coeff = basis * inverse(basis.select_rows(p));
    for (int i = 0; i < n; ++i)
        for (std::size_t k = 0; k < p.size(); ++k) P(i, p[k]) = coeff(i, int(k));
    return P;
}

}  // namespace eaesc
