#include "eaesc/fredholm.hpp"

#include <cstdlib>

namespace eaesc {

FredholmData numeric_fredholm_data(const SeqOp& t, double tolerance);  // numeric_backend.cpp

std::optional<MonomialPerm> monomial_structure(const BlockOp& t) {
    t.validate();
    if (seq_count(t.dom()) != seq_count(t.cod())) return std::nullopt;
    MonomialPerm p;
    p.target.assign(t.cols(), -1);
    p.coef.assign(t.cols(), 0);
    p.deg.assign(t.cols(), 0);
    std::vector<bool> hit(t.rows(), false);
    for (int j = 0; j < t.cols(); ++j) {
        if (!t.dom()[j].seq) continue;
        int found = -1;
        for (int i = 0; i < t.rows(); ++i) {
            const auto& s = t.at(i, j).symbol;
            if (s.is_zero()) continue;
            if (found >= 0 || !s.is_monomial() || hit[i]) return std::nullopt;
            found = i;
        }
        if (found < 0) return std::nullopt;
        hit[found] = true;
        p.target[j] = found;
        p.coef[j] = t.at(found, j).symbol.coeffs().begin()->second;
        p.deg[j] = t.at(found, j).symbol.lo();
    }
    return p;
}

LaurentSymbol symbol_determinant(const BlockOp& t) {
    std::vector<int> rs, cs;
    for (int i = 0; i < t.rows(); ++i)
        if (t.cod()[i].seq) rs.push_back(i);
    for (int j = 0; j < t.cols(); ++j)
        if (t.dom()[j].seq) cs.push_back(j);
    if (rs.size() != cs.size()) throw NotFredholm("Seq factor counts differ");
    std::size_t s = rs.size();
    if (s > 16) throw NotRepresentable("too many Seq factors for the symbol determinant");
    // det = sum over permutations, accumulated over column subsets
    std::vector<LaurentSymbol> f(std::size_t(1) << s);
    f[0] = LaurentSymbol::monomial(1, 0);
    for (std::size_t mask = 0; mask < f.size(); ++mask) {
        if (f[mask].is_zero()) continue;
        int r = __builtin_popcountll(mask);
        if (r == int(s)) continue;
        for (std::size_t c = 0; c < s; ++c) {
            if (mask & (std::size_t(1) << c)) continue;
            const auto& e = t.at(rs[r], cs[c]).symbol;
            if (e.is_zero()) continue;
            int above = __builtin_popcountll(mask >> (c + 1));
            LaurentSymbol term = f[mask] * e;
            if (above % 2) term = Scalar(-1) * term;
            f[mask | (std::size_t(1) << c)] = f[mask | (std::size_t(1) << c)] + term;
        }
    }
    return f.back();
}

bool is_fredholm(const BlockOp& t) {
    t.validate();
    if (seq_count(t.dom()) != seq_count(t.cod())) return false;
    if (seq_count(t.dom()) == 0) return true;
    return symbol_is_fredholm(symbol_determinant(t));
}

int index(const BlockOp& t) {
    if (!is_fredholm(t)) throw NotFredholm("operator " + to_string(t.dom()) + " -> " + to_string(t.cod()));
    int w = seq_count(t.dom()) ? symbol_winding(symbol_determinant(t)) : 0;
    return -w + fin_total(t.dom()) - fin_total(t.cod());
}

static int correction_bound(const BlockOp& t) {
    int n = 0;
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j) n = std::max(n, t.at(i, j).correction.support_bound());
    return n;
}

WindowAnalysis analyze_window(const BlockOp& t, int extra) {
    auto perm = monomial_structure(t);
    if (!perm) throw NotRepresentable("symbol matrix is not a monomial permutation");
    WindowAnalysis wa;
    wa.perm = *perm;
    int D = 0;
    for (int j = 0; j < t.cols(); ++j)
        if (t.dom()[j].seq) D = std::max(D, std::abs(perm->deg[j]));
    wa.W = correction_bound(t) + D + 1 + extra;
    std::vector<int> dom_sizes(t.cols(), wa.W), cod_sizes(t.rows(), 0);
    for (int j = 0; j < t.cols(); ++j)
        if (t.dom()[j].seq) cod_sizes[perm->target[j]] = wa.W + perm->deg[j];
    wa.dom = Layout::make(t.dom(), dom_sizes);
    wa.cod = Layout::make(t.cod(), cod_sizes);
    wa.m = window_matrix(t, wa.dom, wa.cod);
    auto ker = null_space(wa.m);
    wa.kernel = Mat::from_cols(ker, wa.dom.total);
    wa.range_cols = column_basis(wa.m);
    std::vector<Vec> colbasis;
    for (int c : wa.range_cols) colbasis.push_back(wa.m.col(c));
    wa.complement = complement_coords(colbasis, wa.cod.total);
    return wa;
}

FredholmData fredholm_data(const BlockOp& t, const FredholmOptions& opt) {
    if (!is_fredholm(t)) throw NotFredholm("fredholm_data: symbol not invertible on the unit circle");
    bool monomial = monomial_structure(t).has_value();
    bool numeric = opt.backend == FredholmOptions::Backend::Numeric ||
                   (opt.backend == FredholmOptions::Backend::Auto && !monomial);
    if (numeric) {
        if (t.dom().size() != 1 || t.cod().size() != 1 || !t.dom()[0].seq || !t.cod()[0].seq)
            throw NotRepresentable("numeric backend handles single [Seq] -> [Seq] operators only");
        return numeric_fredholm_data(t.at(0, 0), opt.tolerance);
    }
    if (!monomial) throw NotRepresentable("exact backend requires a monomial symbol matrix");
    WindowAnalysis wa = analyze_window(t);
    WindowAnalysis wb = analyze_window(t, 5);
    if (wa.alpha() != wb.alpha() || wa.beta() != wb.beta())
        throw BackendDisagreement("window W and W+5 disagree on (alpha, beta)");
    FredholmData d;
    d.alpha = wa.alpha();
    d.beta = wa.beta();
    d.index = d.alpha - d.beta;
    if (d.index != index(t)) throw InternalCheckFailed("window index differs from symbol index");
    for (int k = 0; k < wa.kernel.cols(); ++k) d.kernel_basis.push_back(wa.dom.unflatten(wa.kernel.col(k)));
    for (int c : wa.complement) d.range_complement.push_back(wa.cod.unflatten(unit_vec(wa.cod.total, c)));
    d.window = wa.W;
    return d;
}

FredholmData fredholm_data(const SeqOp& t, const FredholmOptions& opt) { return fredholm_data(seq_block(t), opt); }

BlockOp kernel_projection(const WindowAnalysis& wa) {
    return from_window(wa.dom, wa.dom, projection_onto(wa.kernel));
}

BlockOp range_complement_projection(const WindowAnalysis& wa) {
    int b = wa.beta();
    Mat Q(wa.cod.total, wa.cod.total);
    if (b > 0) {
        // rows of L annihilate the column space
        auto left = null_space(wa.m.transpose());
        Mat L = Mat::from_rows(left);
        Mat LC = L.select_cols(wa.complement);
        Mat psi = inverse(LC) * L;
        for (int k = 0; k < b; ++k)
            for (int c = 0; c < wa.cod.total; ++c) Q(wa.complement[k], c) = psi(k, c);
    }
    return from_window(wa.cod, wa.cod, Q);
}

BlockOp generalized_inverse(const BlockOp& t, const WindowAnalysis& wa) {
    BlockOp tail(t.cod(), t.dom());
    for (int j = 0; j < t.cols(); ++j)
        if (t.dom()[j].seq)
            tail.at(j, wa.perm.target[j]).symbol = LaurentSymbol::monomial(1 / wa.perm.coef[j], -wa.perm.deg[j]);
    int n = wa.cod.total, r = int(wa.range_cols.size());
    Mat basis(n, n);
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < n; ++i) basis(i, k) = wa.m(i, wa.range_cols[k]);
    for (std::size_t k = 0; k < wa.complement.size(); ++k) basis(wa.complement[k], r + int(k)) = 1;
    // preimage of the k-th range basis column is e_{range_cols[k]}, moved
    // into ker P
    Mat P = projection_onto(wa.kernel);
    Mat pre(wa.dom.total, n);
    for (int k = 0; k < r; ++k) {
        int q = wa.range_cols[k];
        for (int i = 0; i < wa.dom.total; ++i) pre(i, k) = (i == q ? Scalar(1) : Scalar(0)) - P(i, q);
    }
    Mat h_box = pre * inverse(basis);
    Mat tail_box = window_matrix(tail, wa.cod, wa.dom);
    return block_add(tail, from_window(wa.cod, wa.dom, h_box - tail_box));
}

Iso range_alignment_iso(const BlockOp& t1, const BlockOp& t2) {
    if (!(t1.cod() == t2.cod())) throw ShapeMismatch("range_alignment_iso: codomains differ");
    WindowAnalysis a1 = analyze_window(t1), a2 = analyze_window(t2);
    if (a1.beta() != a2.beta())
        throw BetaMismatch("range_alignment_iso: beta " + std::to_string(a1.beta()) + " vs " +
                           std::to_string(a2.beta()));
    const SpaceShape& cod = t1.cod();
    std::vector<int> box_sizes(cod.size());
    for (std::size_t i = 0; i < cod.size(); ++i) box_sizes[i] = std::max(a1.cod.sizes[i], a2.cod.sizes[i]);
    Layout box = Layout::make(cod, box_sizes);
    // ran t ∩ box = window column space + box rows beyond the window of t
    auto box_range = [&](const BlockOp& t, const WindowAnalysis& wa) {
        Mat m = window_matrix(t, wa.dom, box);
        std::vector<Vec> cols;
        for (int c = 0; c < m.cols(); ++c) cols.push_back(m.col(c));
        for (std::size_t f = 0; f < cod.size(); ++f)
            for (int r = wa.cod.sizes[f] + 1; r <= box.sizes[f]; ++r)
                cols.push_back(unit_vec(box.total, box.flat(int(f), r)));
        Mat all = Mat::from_cols(cols, box.total);
        Mat basis = all.select_cols(column_basis(all));
        return basis;
    };
    Mat b1 = box_range(t1, a1), b2 = box_range(t2, a2);
    if (b1.cols() != b2.cols()) throw InternalCheckFailed("range_alignment_iso: box ranges differ in dimension");
    Mat both(box.total, b1.cols() + b2.cols());
    for (int i = 0; i < box.total; ++i) {
        for (int k = 0; k < b1.cols(); ++k) both(i, k) = b1(i, k);
        for (int k = 0; k < b2.cols(); ++k) both(i, b1.cols() + k) = b2(i, k);
    }
    if (rank(both) == b1.cols()) return {block_identity(cod), block_identity(cod)};
    auto full = [&](const Mat& b) {
        std::vector<Vec> cols;
        for (int k = 0; k < b.cols(); ++k) cols.push_back(b.col(k));
        for (int c : complement_coords(cols, box.total)) cols.push_back(unit_vec(box.total, c));
        return Mat::from_cols(cols, box.total);
    };
    Mat f1 = full(b1), f2 = full(b2);
    Mat M = f2 * inverse(f1);
    Mat Minv = f1 * inverse(f2);
    Mat I = Mat::identity(box.total);
    BlockOp id = block_identity(cod);
    return {block_add(id, from_window(box, box, M - I)), block_add(id, from_window(box, box, Minv - I))};
}

Iso head_tail_iso(const SpaceShape& shape, int j, int pos) {
    if (j < 0) throw ShapeMismatch("head_tail_iso: negative head size");
    if (pos < 0)
        for (std::size_t f = 0; f < shape.size() && pos < 0; ++f)
            if (shape[f].seq) pos = int(f);
    if (pos < 0 || pos >= int(shape.size()) || !shape[pos].seq)
        throw ShapeMismatch("head_tail_iso: no Seq factor at the requested position");
    SpaceShape out;
    for (int f = 0; f < int(shape.size()); ++f) {
        if (f == pos) out.push_back(Factor::Fin(j));
        out.push_back(shape[f]);
    }
    BlockOp L(shape, out), Linv(out, shape);
    auto shifted = [&](int f) { return f < pos ? f : f + 1; };
    for (int f = 0; f < int(shape.size()); ++f) {
        if (f == pos) continue;
        L.at(shifted(f), f) = block_identity({shape[f]}).at(0, 0);
        Linv.at(f, shifted(f)) = block_identity({shape[f]}).at(0, 0);
    }
    for (int i = 1; i <= j; ++i) {
        L.at(pos, pos).correction.set(i, i, 1);
        Linv.at(pos, pos).correction.set(i, i, 1);
    }
    L.at(pos + 1, pos) = shift(-j);
    Linv.at(pos, pos + 1) = shift(j);
    return {L, Linv};
}

bool is_identity(const BlockOp& t) { return t.dom() == t.cod() && t == block_identity(t.dom()); }

}  // namespace eaesc
