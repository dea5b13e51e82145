#include <sstream>

#include "eaesc/seq_operator.hpp"

namespace eaesc {

std::string to_string(const SpaceShape& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += s[i].seq ? "Seq" : "Fin(" + std::to_string(s[i].dim) + ")";
    }
    return out + "]";
}

SpaceShape concat(const SpaceShape& a, const SpaceShape& b) {
    SpaceShape s = a;
    s.insert(s.end(), b.begin(), b.end());
    return s;
}

int seq_count(const SpaceShape& s) {
    int n = 0;
    for (const auto& f : s) n += f.seq;
    return n;
}

int fin_total(const SpaceShape& s) {
    int n = 0;
    for (const auto& f : s)
        if (!f.seq) n += f.dim;
    return n;
}

BlockVec block_zero_vec(const SpaceShape& s) {
    BlockVec v;
    for (const auto& f : s) v.emplace_back(f.seq ? 0 : f.dim);
    return v;
}

BlockVec block_unit_vec(const SpaceShape& s, int factor, int idx1) {
    BlockVec v = block_zero_vec(s);
    if (s[factor].seq) v[factor].resize(idx1);
    v[factor][idx1 - 1] = 1;
    return v;
}

static bool vec_eq_trailing(const Vec& a, const Vec& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        Scalar x = i < a.size() ? a[i] : Scalar(0);
        Scalar y = i < b.size() ? b[i] : Scalar(0);
        if (x != y) return false;
    }
    return true;
}

bool block_vec_equal(const BlockVec& a, const BlockVec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t f = 0; f < a.size(); ++f)
        if (!vec_eq_trailing(a[f], b[f])) return false;
    return true;
}

BlockOp::BlockOp(SpaceShape dom, SpaceShape cod)
    : dom_(std::move(dom)), cod_(std::move(cod)), e_(dom_.size() * cod_.size()) {}

void BlockOp::validate() const {
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j) {
            const SeqOp& t = at(i, j);
            bool fin = !cod_[i].seq || !dom_[j].seq;
            if (fin && !t.symbol.is_zero())
                throw ShapeMismatch("entry touching a Fin factor carries a Toeplitz symbol");
            if (!cod_[i].seq && t.correction.row_bound() > cod_[i].dim)
                throw ShapeMismatch("entry exceeds Fin codomain dimension");
            if (!dom_[j].seq && t.correction.col_bound() > dom_[j].dim)
                throw ShapeMismatch("entry exceeds Fin domain dimension");
        }
}

bool operator==(const BlockOp& a, const BlockOp& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.e_ == b.e_;
}

static SeqOp factor_identity(const Factor& f) {
    if (f.seq) return op_identity();
    SeqOp t;
    for (int i = 1; i <= f.dim; ++i) t.correction.set(i, i, 1);
    return t;
}

BlockOp seq_block(const SeqOp& t) {
    BlockOp b({Factor::Seq()}, {Factor::Seq()});
    b.at(0, 0) = t;
    return b;
}

BlockOp mat_block(const Mat& m) {
    BlockOp b({Factor::Fin(m.cols())}, {Factor::Fin(m.rows())});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) b.at(0, 0).correction.set(i + 1, j + 1, m(i, j));
    return b;
}

BlockOp block_zero(const SpaceShape& dom, const SpaceShape& cod) { return BlockOp(dom, cod); }

BlockOp block_identity(const SpaceShape& s) {
    BlockOp b(s, s);
    for (std::size_t i = 0; i < s.size(); ++i) b.at(int(i), int(i)) = factor_identity(s[i]);
    return b;
}

BlockOp block_compose(const BlockOp& a, const BlockOp& b) {
    if (!(a.dom() == b.cod()))
        throw ShapeMismatch("compose: " + to_string(a.dom()) + " vs " + to_string(b.cod()));
    BlockOp c(b.dom(), a.cod());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            SeqOp acc;
            for (int k = 0; k < a.cols(); ++k) {
                if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
                acc = op_add(acc, op_compose(a.at(i, k), b.at(k, j)));
            }
            c.at(i, j) = std::move(acc);
        }
    return c;
}

BlockOp block_add(const BlockOp& a, const BlockOp& b) {
    if (!(a.dom() == b.dom()) || !(a.cod() == b.cod())) throw ShapeMismatch("add: shapes differ");
    BlockOp c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = op_add(a.at(i, j), b.at(i, j));
    return c;
}

BlockOp block_sub(const BlockOp& a, const BlockOp& b) { return block_add(a, block_scale(-1, b)); }

BlockOp block_scale(const Scalar& s, const BlockOp& a) {
    BlockOp c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = op_scale(s, a.at(i, j));
    return c;
}

BlockOp block_grid(const std::vector<std::vector<BlockOp>>& grid) {
    if (grid.empty() || grid[0].empty()) throw ShapeMismatch("empty block grid");
    std::size_t R = grid.size(), C = grid[0].size();
    std::vector<SpaceShape> row_shape(R), col_shape(C);
    for (std::size_t r = 0; r < R; ++r) row_shape[r] = grid[r][0].cod();
    for (std::size_t c = 0; c < C; ++c) col_shape[c] = grid[0][c].dom();
    SpaceShape dom, cod;
    std::vector<int> row_off, col_off;
    for (const auto& s : row_shape) {
        row_off.push_back(int(cod.size()));
        cod = concat(cod, s);
    }
    for (const auto& s : col_shape) {
        col_off.push_back(int(dom.size()));
        dom = concat(dom, s);
    }
    BlockOp out(dom, cod);
    for (std::size_t r = 0; r < R; ++r) {
        if (grid[r].size() != C) throw ShapeMismatch("ragged block grid");
        for (std::size_t c = 0; c < C; ++c) {
            const BlockOp& g = grid[r][c];
            if (!(g.cod() == row_shape[r]) || !(g.dom() == col_shape[c]))
                throw ShapeMismatch("block grid piece has inconsistent shape");
            for (int i = 0; i < g.rows(); ++i)
                for (int j = 0; j < g.cols(); ++j) out.at(row_off[r] + i, col_off[c] + j) = g.at(i, j);
        }
    }
    return out;
}

BlockOp block_diag(const BlockOp& a, const BlockOp& b) {
    return block_grid({{a, block_zero(b.dom(), a.cod())}, {block_zero(a.dom(), b.cod()), b}});
}

BlockOp block_permute(const SpaceShape& s, const std::vector<int>& perm) {
    if (perm.size() != s.size()) throw ShapeMismatch("permutation length");
    std::vector<bool> seen(s.size(), false);
    SpaceShape cod;
    for (int p : perm) {
        if (p < 0 || p >= int(s.size()) || seen[p]) throw ShapeMismatch("not a permutation");
        seen[p] = true;
        cod.push_back(s[p]);
    }
    BlockOp out(s, cod);
    for (std::size_t i = 0; i < perm.size(); ++i) out.at(int(i), perm[i]) = factor_identity(s[perm[i]]);
    return out;
}

BlockOp block_transpose(const BlockOp& a) {
    BlockOp t(a.cod(), a.dom());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t.at(j, i) = op_transpose(a.at(i, j));
    return t;
}

static void add_into(Vec& acc, const Vec& v) {
    if (acc.size() < v.size()) acc.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) acc[i] += v[i];
}

BlockVec apply_full(const BlockOp& t, const BlockVec& x) {
    if (x.size() != t.dom().size()) throw ShapeMismatch("apply: vector has wrong number of factors");
    BlockVec y(t.cod().size());
    for (int i = 0; i < t.rows(); ++i) {
        for (int j = 0; j < t.cols(); ++j) {
            if (t.at(i, j).is_zero() || is_zero(x[j])) continue;
            add_into(y[i], apply_seq(t.at(i, j), x[j]));
        }
        const Factor& f = t.cod()[i];
        if (f.seq) {
            while (!y[i].empty() && y[i].back() == 0) y[i].pop_back();
        } else {
            for (std::size_t k = std::size_t(f.dim); k < y[i].size(); ++k)
                if (y[i][k] != 0) throw ShapeMismatch("image leaves a Fin factor");
            y[i].resize(f.dim);
        }
    }
    return y;
}

BlockVec apply(const BlockOp& t, const BlockVec& x, int n) {
    BlockVec y = apply_full(t, x);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (t.cod()[i].seq) y[i].resize(n);
    return y;
}

BlockOp compose_all(const std::vector<BlockOp>& ops) {
    if (ops.empty()) throw ShapeMismatch("compose_all of nothing");
    BlockOp acc = ops.back();
    for (std::size_t k = ops.size() - 1; k-- > 0;) acc = block_compose(ops[k], acc);
    return acc;
}

Layout Layout::make(const SpaceShape& s, const std::vector<int>& seq_sizes) {
    Layout l;
    l.shape = s;
    for (std::size_t f = 0; f < s.size(); ++f) {
        int n = s[f].seq ? seq_sizes.at(f) : s[f].dim;
        l.sizes.push_back(n);
        l.offsets.push_back(l.total);
        l.total += n;
    }
    return l;
}

Layout Layout::uniform(const SpaceShape& s, int seq_size) {
    return make(s, std::vector<int>(s.size(), seq_size));
}

std::pair<int, int> Layout::unflat(int k) const {
    for (std::size_t f = 0; f < sizes.size(); ++f)
        if (k < offsets[f] + sizes[f]) return {int(f), k - offsets[f] + 1};
    throw ShapeMismatch("flat index outside layout");
}

Vec Layout::flatten(const BlockVec& v) const {
    Vec out(total);
    for (std::size_t f = 0; f < sizes.size(); ++f)
        for (std::size_t i = 0; i < v[f].size(); ++i) {
            if (int(i) >= sizes[f]) {
                if (v[f][i] != 0) throw ShapeMismatch("vector support exceeds window");
                continue;
            }
            out[offsets[f] + i] = v[f][i];
        }
    return out;
}

BlockVec Layout::unflatten(const Vec& v) const {
    BlockVec out(sizes.size());
    for (std::size_t f = 0; f < sizes.size(); ++f) {
        out[f].assign(v.begin() + offsets[f], v.begin() + offsets[f] + sizes[f]);
        if (shape[f].seq)
            while (!out[f].empty() && out[f].back() == 0) out[f].pop_back();
    }
    return out;
}

Mat window_matrix(const BlockOp& t, const Layout& dom, const Layout& cod) {
    Mat m(cod.total, dom.total);
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j) {
            const SeqOp& e = t.at(i, j);
            for (int c = 1; c <= dom.sizes[j]; ++c)
                for (const auto& [d, a] : e.symbol.coeffs()) {
                    int r = c + d;
                    if (r >= 1 && r <= cod.sizes[i]) m(cod.flat(i, r), dom.flat(j, c)) += a;
                }
            for (const auto& [k, v] : e.correction.entries())
                if (k.first <= cod.sizes[i] && k.second <= dom.sizes[j])
                    m(cod.flat(i, k.first), dom.flat(j, k.second)) += v;
        }
    return m;
}

BlockOp from_window(const Layout& dom, const Layout& cod, const Mat& m) {
    BlockOp out(dom.shape, cod.shape);
    for (int p = 0; p < m.rows(); ++p)
        for (int q = 0; q < m.cols(); ++q) {
            if (m(p, q) == 0) continue;
            auto [fi, r] = cod.unflat(p);
            auto [fj, c] = dom.unflat(q);
            out.at(fi, fj).correction.set(r, c, m(p, q));
        }
    return out;
}

std::string describe(const BlockOp& t) {
    std::ostringstream os;
    os << to_string(t.dom()) << " -> " << to_string(t.cod()) << "\n";
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j) {
            const SeqOp& e = t.at(i, j);
            if (e.is_zero()) continue;
            os << "  (" << i << "," << j << "): symbol " << to_string(e.symbol) << ", correction "
               << e.correction.entries().size() << " entries, bound " << e.correction.support_bound() << "\n";
        }
    return os.str();
}

}  // namespace eaesc
