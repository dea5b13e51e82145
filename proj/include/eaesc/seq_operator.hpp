#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eaesc/exact_linalg.hpp"
#include "eaesc/poly.hpp"

namespace eaesc {

// Laurent polynomial sum_j a_j z^j; the operator it induces has matrix
// entries T_ij = a_{i-j} on the one-sided sequence space.
class LaurentSymbol {
public:
    LaurentSymbol() = default;
    static LaurentSymbol monomial(const Scalar& c, int d);

    const std::map<int, Scalar>& coeffs() const { return c_; }
    Scalar coeff(int j) const;
    void set(int j, const Scalar& v);
    void add(int j, const Scalar& v);

    bool is_zero() const { return c_.empty(); }
    bool is_monomial() const { return c_.size() == 1; }
    int lo() const { return c_.begin()->first; }
    int hi() const { return c_.rbegin()->first; }

    // z^-lo a(z): ordinary polynomial with nonzero constant term.
    QPoly numerator() const;

    friend LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b);
    friend LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b);
    friend LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b);
    friend LaurentSymbol operator*(const Scalar& s, const LaurentSymbol& a);
    friend bool operator==(const LaurentSymbol& a, const LaurentSymbol& b) { return a.c_ == b.c_; }

private:
    std::map<int, Scalar> c_;
};

bool symbol_is_fredholm(const LaurentSymbol& a);
int symbol_winding(const LaurentSymbol& a);  // requires symbol_is_fredholm
std::string to_string(const LaurentSymbol& a);

// Finitely supported matrix, 1-based indices.
class Correction {
public:
    using Key = std::pair<int, int>;
    const std::map<Key, Scalar>& entries() const { return e_; }
    Scalar get(int i, int j) const;
    void set(int i, int j, const Scalar& v);
    void add(int i, int j, const Scalar& v);
    bool empty() const { return e_.empty(); }
    int row_bound() const;
    int col_bound() const;
    int support_bound() const { return std::max(row_bound(), col_bound()); }
    Correction transposed() const;

    friend bool operator==(const Correction& a, const Correction& b) { return a.e_ == b.e_; }

private:
    std::map<Key, Scalar> e_;
};

struct SeqOp {
    LaurentSymbol symbol;
    Correction correction;

    Scalar entry(int i, int j) const { return symbol.coeff(i - j) + correction.get(i, j); }
    bool is_zero() const { return symbol.is_zero() && correction.empty(); }
    friend bool operator==(const SeqOp& a, const SeqOp& b) {
        return a.symbol == b.symbol && a.correction == b.correction;
    }
};

SeqOp shift(int d);
SeqOp op_identity();
SeqOp op_compose(const SeqOp& a, const SeqOp& b);  // a after b
SeqOp op_add(const SeqOp& a, const SeqOp& b);
SeqOp op_sub(const SeqOp& a, const SeqOp& b);
SeqOp op_scale(const Scalar& c, const SeqOp& a);
SeqOp op_transpose(const SeqOp& a);
bool is_fredholm(const SeqOp& t);
int index(const SeqOp& t);  // throws NotFredholm
Vec apply_seq(const SeqOp& t, const Vec& x);  // full image of a finitely supported vector

// ---- shapes and block operators ----

struct Factor {
    bool seq = true;
    int dim = 0;
    static Factor Seq() { return {true, 0}; }
    static Factor Fin(int n) { return {false, n}; }
    friend bool operator==(const Factor& a, const Factor& b) { return a.seq == b.seq && (a.seq || a.dim == b.dim); }
};
using SpaceShape = std::vector<Factor>;
std::string to_string(const SpaceShape& s);
SpaceShape concat(const SpaceShape& a, const SpaceShape& b);
int seq_count(const SpaceShape& s);
int fin_total(const SpaceShape& s);

// One vector per factor: a finite prefix for Seq factors, exactly dim
// entries for Fin factors.
using BlockVec = std::vector<Vec>;
BlockVec block_zero_vec(const SpaceShape& s);
BlockVec block_unit_vec(const SpaceShape& s, int factor, int idx1);
bool block_vec_equal(const BlockVec& a, const BlockVec& b);  // ignores trailing zeros

class BlockOp {
public:
    BlockOp() = default;
    BlockOp(SpaceShape dom, SpaceShape cod);

    const SpaceShape& dom() const { return dom_; }
    const SpaceShape& cod() const { return cod_; }
    int rows() const { return int(cod_.size()); }
    int cols() const { return int(dom_.size()); }

    // entry mapping domain factor j into codomain factor i
    SeqOp& at(int i, int j) { return e_[std::size_t(i) * dom_.size() + j]; }
    const SeqOp& at(int i, int j) const { return e_[std::size_t(i) * dom_.size() + j]; }

    // Entries touching a Fin factor must have zero symbol and stay within
    // the factor dimension; throws ShapeMismatch otherwise.
    void validate() const;

    friend bool operator==(const BlockOp& a, const BlockOp& b);

private:
    SpaceShape dom_, cod_;
    std::vector<SeqOp> e_;
};

BlockOp seq_block(const SeqOp& t);                 // [Seq] -> [Seq]
BlockOp mat_block(const Mat& m);                   // [Fin(c)] -> [Fin(r)]
BlockOp block_zero(const SpaceShape& dom, const SpaceShape& cod);
BlockOp block_identity(const SpaceShape& s);
BlockOp block_compose(const BlockOp& a, const BlockOp& b);  // a after b
BlockOp block_add(const BlockOp& a, const BlockOp& b);
BlockOp block_sub(const BlockOp& a, const BlockOp& b);
BlockOp block_scale(const Scalar& c, const BlockOp& a);
BlockOp block_diag(const BlockOp& a, const BlockOp& b);
// Grid of operators; grid[r][c] maps the c-th domain piece into the r-th
// codomain piece. Shapes are concatenated.
BlockOp block_grid(const std::vector<std::vector<BlockOp>>& grid);
// Operator from `s` to the reordered shape whose factor i is s[perm[i]].
BlockOp block_permute(const SpaceShape& s, const std::vector<int>& perm);
BlockOp block_transpose(const BlockOp& a);

BlockVec apply_full(const BlockOp& t, const BlockVec& x);
BlockVec apply(const BlockOp& t, const BlockVec& x, int n);  // first n coords of every Seq factor

// Composition helpers for long products, evaluated right to left.
BlockOp compose_all(const std::vector<BlockOp>& ops);

// ---- window layouts ----

// Coordinates 1..size of every factor flattened in factor order.
struct Layout {
    SpaceShape shape;
    std::vector<int> sizes;
    std::vector<int> offsets;
    int total = 0;

    static Layout make(const SpaceShape& s, const std::vector<int>& seq_sizes);
    static Layout uniform(const SpaceShape& s, int seq_size);
    int flat(int factor, int idx1) const { return offsets[factor] + idx1 - 1; }
    std::pair<int, int> unflat(int k) const;  // factor, 1-based idx
    Vec flatten(const BlockVec& v) const;
    BlockVec unflatten(const Vec& v) const;
};

// Dense matrix of t restricted to the given coordinate windows.
Mat window_matrix(const BlockOp& t, const Layout& dom, const Layout& cod);
// Correction-only operator whose matrix on the windows is m.
BlockOp from_window(const Layout& dom, const Layout& cod, const Mat& m);

std::string describe(const BlockOp& t);

}  // namespace eaesc
