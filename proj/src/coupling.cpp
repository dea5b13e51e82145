#include "eaesc/coupling.hpp"

#include <algorithm>

namespace eaesc {

namespace {

void require_fredholm(const BlockOp& t, const char* what) {
    if (!is_fredholm(t)) throw NotFredholm(std::string(what) + " is not Fredholm");
}

// Kernel of t as maps Fin(alpha) -> dom (basis) and dom -> Fin(alpha)
// (coordinates along the window projection).
struct KernelMaps {
    BlockOp incl;
    BlockOp coords;
};

KernelMaps kernel_maps(const WindowAnalysis& wa) {
    int a = wa.alpha();
    Layout fin = Layout::make({Factor::Fin(a)}, {0});
    KernelMaps k;
    k.incl = from_window(fin, wa.dom, wa.kernel);
    Mat coords(a, wa.dom.total);
    if (a > 0) {
        auto rows = pivot_rows(wa.kernel);
        Mat inv = inverse(wa.kernel.select_rows(rows));
        for (int i = 0; i < a; ++i)
            for (int r = 0; r < a; ++r) coords(i, rows[r]) = inv(i, r);
    }
    k.coords = from_window(wa.dom, fin, coords);
    return k;
}

int row_extent(const SeqOp& e) {
    if (!e.symbol.is_zero()) throw InternalCheckFailed("row_extent of an operator with a symbol");
    return e.correction.row_bound();
}

void certify(const BlockOp& x, const BlockOp& x_inv, const char* what) {
    if (!is_identity(block_compose(x, x_inv)) || !is_identity(block_compose(x_inv, x)))
        throw NotInvertible(std::string(what) + ": inverse certificate failed");
}

// factor-order permutation moving factor `from` to the end
std::vector<int> move_to_end(int n, int from) {
    std::vector<int> p;
    for (int i = 0; i < n; ++i)
        if (i != from) p.push_back(i);
    p.push_back(from);
    return p;
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = int(i);
    return q;
}

int first_seq(const SpaceShape& s) {
    for (std::size_t f = 0; f < s.size(); ++f)
        if (s[f].seq) return int(f);
    return -1;
}

}  // namespace

bool eae_check(const FredholmData& u, const FredholmData& v) { return u.alpha == v.alpha && u.beta == v.beta; }

bool eae_check(const BlockOp& u, const BlockOp& v) {
    require_fredholm(u, "U");
    require_fredholm(v, "V");
    return eae_check(fredholm_data(u), fredholm_data(v));
}

BlockOp perturb_kernel(const BlockOp& t, int m) {
    require_fredholm(t, "perturb_kernel input");
    int i = index(t);
    if (m < i || m < 0)
        throw IndexObstruction("alpha " + std::to_string(m) + " is unreachable for index " + std::to_string(i));
    WindowAnalysis wa = analyze_window(t, std::max(m, 0));
    int a = wa.alpha();
    Mat r(wa.cod.total, wa.dom.total);
    if (m < a) {
        // Case 2: send the first alpha - m kernel directions onto complement vectors
        int n = a - m;
        auto rows = pivot_rows(wa.kernel);
        Mat inv = inverse(wa.kernel.select_rows(rows));
        for (int k = 0; k < n; ++k)
            for (int q = 0; q < a; ++q) r(wa.complement[k], rows[q]) += inv(k, q);
    } else if (m > a) {
        // Case 3: enlarge the kernel to W = ker t + greedy unit vectors, R = -t P_W
        std::vector<Vec> cols;
        for (int k = 0; k < a; ++k) cols.push_back(wa.kernel.col(k));
        auto extra = complement_coords(cols, wa.dom.total);
        if (int(extra.size()) < m - a) throw InternalCheckFailed("perturb_kernel: window too small");
        for (int k = 0; k < m - a; ++k) cols.push_back(unit_vec(wa.dom.total, extra[k]));
        Mat pw = projection_onto(Mat::from_cols(cols, wa.dom.total));
        Mat tp = wa.m * pw;
        for (int p = 0; p < r.rows(); ++p)
            for (int q = 0; q < r.cols(); ++q) r(p, q) = -tp(p, q);
    }
    BlockOp R = from_window(wa.dom, wa.cod, r);
    if (fredholm_data(block_add(t, R)).alpha != m) throw InternalCheckFailed("perturb_kernel: alpha check failed");
    return R;
}

BlockOp witness_defect(const Witness& w) {
    return block_sub(block_identity(w.s.cod()), block_compose(w.s, w.t));
}

int witness_index(const Witness& w) { return index(witness_defect(w)); }

Witness perturb_witness(const Witness& w, int m) {
    BlockOp g = witness_defect(w);
    require_fredholm(g, "I - ST");
    int k = index(g);
    if (k == 0) throw ZeroIndexInput("perturb_witness needs a witness of nonzero index");
    if (m < std::max(k, 0))
        throw IndexObstruction("alpha " + std::to_string(m) + " is unreachable for index " + std::to_string(k));
    // S2 T2 = S1 T1 + R with R = -perturb_kernel(I - S1 T1, m)
    BlockOp R = block_scale(-1, perturb_kernel(g, m));
    const SpaceShape& X = g.dom();
    const SpaceShape& Y = w.t.cod();
    if (first_seq(Y) < 0) throw NotRepresentable("perturb_witness: Y has no Seq factor to absorb the head");
    std::vector<int> ext(X.size(), 0), off(X.size(), 0);
    int wdim = 0;
    for (std::size_t f = 0; f < X.size(); ++f) {
        for (std::size_t c = 0; c < X.size(); ++c) ext[f] = std::max(ext[f], row_extent(R.at(int(f), int(c))));
        off[f] = wdim;
        wdim += ext[f];
    }
    if (wdim == 0) return w;
    SpaceShape W{Factor::Fin(wdim)};
    BlockOp J(W, X), R0(X, W);
    for (std::size_t f = 0; f < X.size(); ++f) {
        for (int r = 1; r <= ext[f]; ++r) J.at(int(f), 0).correction.set(r, off[f] + r, 1);
        for (std::size_t c = 0; c < X.size(); ++c)
            for (const auto& [key, v] : R.at(int(f), int(c)).correction.entries())
                R0.at(0, int(c)).correction.set(off[f] + key.first, key.second, v);
    }
    // L : Y -> Y + W, a head of Y peeled off into W
    int pos = first_seq(Y);
    Iso h = head_tail_iso(Y, wdim, pos);
    auto perm = move_to_end(int(h.fwd.cod().size()), pos);
    BlockOp P = block_permute(h.fwd.cod(), perm);
    BlockOp Pinv = block_permute(P.cod(), inverse_perm(perm));
    BlockOp L = block_compose(P, h.fwd);
    BlockOp Linv = block_compose(h.inv, Pinv);
    if (!(L.cod() == concat(Y, W))) throw InternalCheckFailed("perturb_witness: head layout");
    Witness out;
    out.s = block_compose(block_grid({{w.s, J}}), L);
    out.t = block_compose(Linv, block_grid({{w.t}, {R0}}));
    if (fredholm_data(witness_defect(out)).alpha != m) throw InternalCheckFailed("perturb_witness: alpha check failed");
    return out;
}

SchurCouple couple_from_MN(const Iso& m, const Iso& n, const Witness& w) {
    certify(m.fwd, m.inv, "M");
    certify(n.fwd, n.inv, "N");
    SchurCouple sc;
    sc.a = m.inv;
    sc.a_inv = m.fwd;
    sc.b = block_compose(w.s, n.inv);
    sc.c = block_compose(w.t, m.inv);
    sc.d = n.inv;
    sc.d_inv = n.fwd;
    return sc;
}

MNData couple_to_MN(const SchurCouple& sc) {
    MNData out{{sc.a_inv, sc.a}, {sc.d_inv, sc.d}, {block_compose(sc.b, sc.d_inv), block_compose(sc.c, sc.a_inv)}};
    return out;
}

namespace {

// Invertible M with U M = G, when ker and range data match:
// M = K_U Phi_G + H_U G, M^-1 = K_G Phi_U + H_G U.
Iso kernel_range_match(const BlockOp& u, const BlockOp& g) {
    WindowAnalysis wu = analyze_window(u), wg = analyze_window(g);
    if (wu.alpha() != wg.alpha()) throw InternalCheckFailed("kernel_range_match: alpha differs");
    KernelMaps ku = kernel_maps(wu), kg = kernel_maps(wg);
    BlockOp hu = generalized_inverse(u, wu), hg = generalized_inverse(g, wg);
    BlockOp m = block_add(block_compose(ku.incl, kg.coords), block_compose(hu, g));
    BlockOp mi = block_add(block_compose(kg.incl, ku.coords), block_compose(hg, u));
    return {m, mi};
}

}  // namespace

SchurCouple sc_construct(const Witness& w, const BlockOp& u, const BlockOp& v) {
    require_fredholm(u, "U");
    require_fredholm(v, "V");
    if (!(u.dom() == u.cod()) || !(v.dom() == v.cod())) throw ShapeMismatch("U and V must be square");
    auto du = fredholm_data(u), dv = fredholm_data(v);
    if (!eae_check(du, dv)) throw NotEAE("(alpha, beta) of U and V differ");
    int k = du.index;
    const SpaceShape& X = u.dom();
    const SpaceShape& Y = v.dom();
    int m = du.alpha;
    Witness w2;
    if (k == 0) {
        // direct matching: S T = P_U, T S = P_V
        KernelMaps ku = kernel_maps(analyze_window(u)), kv = kernel_maps(analyze_window(v));
        w2.s = block_compose(ku.incl, kv.coords);
        w2.t = block_compose(kv.incl, ku.coords);
    } else {
        if (!(w.s.cod() == X) || !(w.s.dom() == Y) || !(w.t.dom() == X) || !(w.t.cod() == Y))
            throw ShapeMismatch("witness shapes do not match U and V");
        int wk = witness_index(w);
        if (wk != k)
            throw IndexMismatch("witness index " + std::to_string(wk) + " vs operator index " + std::to_string(k));
        w2 = perturb_witness(w, m);
    }
    BlockOp g2 = witness_defect(w2);
    BlockOp g2y = block_sub(block_identity(Y), block_compose(w2.t, w2.s));
    Iso A = range_alignment_iso(g2, u);
    Iso B = range_alignment_iso(g2y, v);
    Witness w3{compose_all({A.fwd, w2.s, B.inv}), compose_all({B.fwd, w2.t, A.inv})};
    BlockOp g = witness_defect(w3);
    BlockOp gy = block_sub(block_identity(Y), block_compose(w3.t, w3.s));
    Iso M = kernel_range_match(u, g);
    Iso N = kernel_range_match(v, gy);
    if (!(block_compose(u, M.fwd) == g) || !(block_compose(v, N.fwd) == gy))
        throw InternalCheckFailed("sc_construct: U M = I - S T failed");
    return couple_from_MN(M, N, w3);
}

namespace {

std::vector<BlockVec> probes(const SpaceShape& s, int n) {
    std::vector<BlockVec> out;
    for (std::size_t f = 0; f < s.size(); ++f) {
        int top = s[f].seq ? n : s[f].dim;
        for (int i = 1; i <= top; ++i) out.push_back(block_unit_vec(s, int(f), i));
    }
    return out;
}

BlockVec chain(const std::vector<const BlockOp*>& ops, BlockVec x) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) x = apply_full(**it, x);
    return x;
}

BlockVec vec_sub(const BlockOp& shape_of, BlockVec a, const BlockVec& b) {
    (void)shape_of;
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (a[f].size() < b[f].size()) a[f].resize(b[f].size());
        for (std::size_t i = 0; i < b[f].size(); ++i) a[f][i] -= b[f][i];
    }
    return a;
}

bool probes_identity(const BlockOp& x, const BlockOp& y, int n) {
    for (const auto& e : probes(y.dom(), n))
        if (!block_vec_equal(chain({&x, &y}, e), e)) return false;
    return true;
}

}  // namespace

bool sc_verify(const BlockOp& u, const BlockOp& v, const SchurCouple& sc, int n) {
    const SpaceShape& X = u.dom();
    const SpaceShape& Y = v.dom();
    if (!(sc.a.dom() == X) || !(sc.a.cod() == X) || !(sc.d.dom() == Y) || !(sc.d.cod() == Y) ||
        !(sc.b.dom() == Y) || !(sc.b.cod() == X) || !(sc.c.dom() == X) || !(sc.c.cod() == Y) ||
        !(sc.a_inv.dom() == X) || !(sc.d_inv.dom() == Y))
        throw ShapeMismatch("sc_verify: couple shapes do not match U and V");
    if (!probes_identity(sc.a, sc.a_inv, n) || !probes_identity(sc.a_inv, sc.a, n)) return false;
    if (!probes_identity(sc.d, sc.d_inv, n) || !probes_identity(sc.d_inv, sc.d, n)) return false;
    for (const auto& e : probes(X, n)) {
        BlockVec lhs = vec_sub(u, apply_full(sc.a, e), chain({&sc.b, &sc.d_inv, &sc.c}, e));
        if (!block_vec_equal(lhs, apply_full(u, e))) return false;
    }
    for (const auto& e : probes(Y, n)) {
        BlockVec lhs = vec_sub(v, apply_full(sc.d, e), chain({&sc.c, &sc.a_inv, &sc.b}, e));
        if (!block_vec_equal(lhs, apply_full(v, e))) return false;
    }
    return true;
}

Witness zero_witness(const SpaceShape& x, const SpaceShape& y) { return {block_zero(y, x), block_zero(x, y)}; }

Witness witness_power(const Witness& w, int m) {
    BlockOp g = witness_defect(w);
    require_fredholm(g, "I - ST");
    int k = index(g);
    const SpaceShape& X = w.s.cod();
    const SpaceShape& Y = w.s.dom();
    if (m == 1) return w;
    if (m == 0 || k == 0) return m > 0 ? Witness{w.s, w.t} : zero_witness(X, Y);
    if (m >= 2) {
        // I - (I - S T)^m = S T_m, T_m = sum_j binom(m,j) (-1)^(j+1) (T S)^(j-1) T
        BlockOp ts = block_compose(w.t, w.s);
        BlockOp power = block_identity(Y);
        BlockOp tm = block_zero(X, Y);
        mpz_class binom = 1;
        for (int j = 1; j <= m; ++j) {
            binom = binom * (m - j + 1) / j;
            Scalar c = (j % 2 ? Scalar(binom) : Scalar(-binom));
            tm = block_add(tm, block_scale(c, block_compose(power, w.t)));
            if (j < m) power = block_compose(power, ts);
        }
        return {w.s, tm};
    }
    if (m == -1) {
        if (k > 0) {
            // surjective I - S2 T2, right inverse R = I + S2 (T2 R)
            Witness p = perturb_witness(w, k);
            BlockOp g2 = witness_defect(p);
            BlockOp R = generalized_inverse(g2, analyze_window(g2));
            if (!is_identity(block_compose(g2, R))) throw InternalCheckFailed("witness_power: right inverse");
            return {block_scale(-1, p.s), block_compose(p.t, R)};
        }
        Witness p = perturb_witness(w, 0);
        BlockOp g2 = witness_defect(p);
        BlockOp Lf = generalized_inverse(g2, analyze_window(g2));
        if (!is_identity(block_compose(Lf, g2))) throw InternalCheckFailed("witness_power: left inverse");
        return {block_scale(-1, block_compose(Lf, p.s)), p.t};
    }
    return witness_power(witness_power(w, -1), -m);
}

Witness witness_from_complemented(const BlockOp& r, const SpaceShape& z_shape) {
    require_fredholm(r, "R");
    const SpaceShape& Y = r.dom();
    if (!(r.cod() == Y)) throw ShapeMismatch("R must act on a single space");
    SpaceShape Z;
    for (const auto& f : z_shape)
        if (f.seq || f.dim > 0) Z.push_back(f);
    if (Z.empty()) return {block_sub(block_identity(Y), r), block_identity(Y)};
    BlockOp s = block_grid({{block_sub(block_identity(Y), r)}, {block_zero(Y, Z)}});
    BlockOp t = block_grid({{block_identity(Y), block_zero(Z, Y)}});
    return {s, t};
}

Witness witness_shared_seq(const SpaceShape& x, const SpaceShape& y, int k) {
    Witness w = zero_witness(x, y);
    if (k == 0) return w;
    int fx = first_seq(x), fy = first_seq(y);
    if (fx < 0 || fy < 0) throw NotRepresentable("witness_shared_seq: both shapes need a Seq factor");
    w.t.at(fy, fx) = op_identity();
    w.s.at(fx, fy) = op_sub(op_identity(), shift(-k));
    return w;
}

Compression witness_compress(const Witness& w, const BlockOp& u, const BlockOp& v) {
    require_fredholm(u, "U");
    require_fredholm(v, "V");
    BlockOp gy = block_sub(block_identity(v.dom()), block_compose(w.t, w.s));
    require_fredholm(gy, "I - TS");
    BlockOp pu = block_sub(block_identity(u.cod()), range_complement_projection(analyze_window(u)));
    BlockOp pv = block_sub(block_identity(v.cod()), range_complement_projection(analyze_window(v)));
    Compression c;
    c.b1 = compose_all({pv, w.t, pu});
    c.b2 = compose_all({pu, w.s, pv});
    BlockOp b1b2 = block_compose(c.b1, c.b2);
    c.discrepancy = block_sub(block_compose(w.t, w.s), b1b2);
    for (int i = 0; i < c.discrepancy.rows(); ++i)
        for (int j = 0; j < c.discrepancy.cols(); ++j)
            if (!c.discrepancy.at(i, j).symbol.is_zero())
                throw InternalCheckFailed("witness_compress: discrepancy is not finite rank");
    c.index = index(block_sub(block_identity(v.dom()), b1b2));
    return c;
}

SchurCouple sc_extend_blockdiag(const SchurCouple& sc, const SpaceShape& x1, const SpaceShape& y1) {
    SchurCouple out;
    out.a = block_diag(block_identity(x1), sc.a);
    out.a_inv = block_diag(block_identity(x1), sc.a_inv);
    out.b = block_diag(block_zero(y1, x1), sc.b);
    out.c = block_diag(block_zero(x1, y1), sc.c);
    out.d = block_diag(block_identity(y1), sc.d);
    out.d_inv = block_diag(block_identity(y1), sc.d_inv);
    return out;
}

Extension eae_construct(const BlockOp& u, const BlockOp& v) {
    require_fredholm(u, "U");
    require_fredholm(v, "V");
    if (!eae_check(u, v)) throw NotEAE("(alpha, beta) of U and V differ");
    const SpaceShape& X = u.dom();
    const SpaceShape& Y = v.dom();
    int k = index(u);
    SchurCouple sc = sc_construct(witness_shared_seq(X, Y, k), u, v);
    BlockOp IX = block_identity(X), IY = block_identity(Y);
    BlockOp ZXY = block_zero(X, Y), ZYX = block_zero(Y, X);
    BlockOp bdi = block_compose(sc.b, sc.d_inv);   // Y -> X
    BlockOp cai = block_compose(sc.c, sc.a_inv);   // X -> Y
    BlockOp aib = block_compose(sc.a_inv, sc.b);   // Y -> X
    BlockOp dic = block_compose(sc.d_inv, sc.c);   // X -> Y
    auto upper = [&](const BlockOp& x) { return block_grid({{IX, x}, {ZXY, IY}}); };
    auto lower = [&](const BlockOp& x) { return block_grid({{IX, ZYX}, {x, IY}}); };
    int nx = int(X.size()), ny = int(Y.size());
    std::vector<int> swap_yx, swap_xy;  // Y+X -> X+Y and X+Y -> Y+X
    for (int i = 0; i < nx; ++i) swap_yx.push_back(ny + i);
    for (int i = 0; i < ny; ++i) swap_yx.push_back(i);
    for (int i = 0; i < ny; ++i) swap_xy.push_back(nx + i);
    for (int i = 0; i < nx; ++i) swap_xy.push_back(i);
    BlockOp p1 = block_permute(concat(Y, X), swap_yx);
    BlockOp p1i = block_permute(concat(X, Y), swap_xy);
    BlockOp p2 = p1i, p2i = p1;
    Extension ext;
    ext.x0 = Y;
    ext.y0 = X;
    ext.e = compose_all({upper(block_scale(-1, bdi)), lower(cai), p1});
    ext.e_inv = compose_all({p1i, lower(block_scale(-1, cai)), upper(bdi)});
    ext.f = compose_all({block_diag(IY, sc.a), p2, upper(aib), lower(block_scale(-1, dic)), block_diag(IX, sc.d_inv)});
    ext.f_inv = compose_all({block_diag(IX, sc.d), lower(dic), upper(block_scale(-1, aib)), p2i, block_diag(IY, sc.a_inv)});
    certify(ext.e, ext.e_inv, "E");
    certify(ext.f, ext.f_inv, "F");
    return ext;
}

bool eae_verify(const BlockOp& u, const BlockOp& v, const Extension& ext, int n) {
    const SpaceShape& X = u.dom();
    const SpaceShape& Y = v.dom();
    if (!(ext.e.dom() == concat(Y, ext.y0)) || !(ext.e.cod() == concat(X, ext.x0)) ||
        !(ext.f.dom() == concat(X, ext.x0)) || !(ext.f.cod() == concat(Y, ext.y0)))
        throw ShapeMismatch("eae_verify: extension shapes do not match U and V");
    if (!probes_identity(ext.e, ext.e_inv, n) || !probes_identity(ext.e_inv, ext.e, n)) return false;
    if (!probes_identity(ext.f, ext.f_inv, n) || !probes_identity(ext.f_inv, ext.f, n)) return false;
    BlockOp lhs = block_diag(u, block_identity(ext.x0));
    BlockOp mid = block_diag(v, block_identity(ext.y0));
    for (const auto& e : probes(lhs.dom(), n))
        if (!block_vec_equal(apply_full(lhs, e), chain({&ext.e, &mid, &ext.f}, e))) return false;
    return true;
}

}  // namespace eaesc
