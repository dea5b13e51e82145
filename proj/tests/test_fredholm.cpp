#include "doctest.h"

#include "eaesc/fredholm.hpp"
#include "gen.hpp"

using namespace eaesc;

namespace {
const SpaceShape S1{Factor::Seq()};

bool kills(const BlockOp& t, const BlockVec& v, int n) {
    auto r = apply_full(t, v);
    (void)n;
    for (auto& f : r)
        if (!is_zero(f)) return false;
    return true;
}

// Range complement vectors stay independent of ran t on a large window.
bool complements_range(const BlockOp& t, const FredholmData& d) {
    std::vector<int> big_dom(t.cols(), d.window + 12), big_cod(t.rows(), d.window + 16);
    Layout ld = Layout::make(t.dom(), big_dom), lc = Layout::make(t.cod(), big_cod);
    Mat m = window_matrix(t, ld, lc);
    int r = rank(m);
    Mat aug(lc.total, m.cols() + int(d.range_complement.size()));
    for (int i = 0; i < lc.total; ++i) {
        for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        for (std::size_t k = 0; k < d.range_complement.size(); ++k)
            aug(i, m.cols() + int(k)) = lc.flatten(d.range_complement[k])[i];
    }
    return rank(aug) == r + int(d.range_complement.size());
}
}  // namespace

TEST_CASE("fredholm_data examples") {
    auto d = fredholm_data(shift(-2));
    CHECK(d.alpha == 2);
    CHECK(d.beta == 0);
    CHECK(d.index == 2);
    REQUIRE(d.kernel_basis.size() == 2);
    CHECK(block_vec_equal(d.kernel_basis[0], block_unit_vec(S1, 0, 1)));
    CHECK(block_vec_equal(d.kernel_basis[1], block_unit_vec(S1, 0, 2)));

    SeqOp t = shift(1);
    t.correction.set(1, 1, 1);
    auto e = fredholm_data(t);
    CHECK(e.alpha == 0);
    CHECK(e.beta == 1);
    CHECK(e.index == -1);

    SeqOp p = op_identity();
    p.correction.set(1, 1, -1);
    auto f = fredholm_data(p);
    CHECK(f.alpha == 1);
    CHECK(f.beta == 1);
    CHECK(f.index == 0);
    CHECK(f.certified);
}

TEST_CASE("block index additivity") {
    BlockOp dg = block_diag(seq_block(shift(-1)), block_identity({Factor::Fin(3)}));
    CHECK(index(dg) == 1);
    CHECK(fredholm_data(dg).alpha == 1);
    BlockOp m = mat_block(Mat(2, 3));
    CHECK(index(m) == 1);
    CHECK(fredholm_data(m).alpha == 3);
    CHECK(fredholm_data(m).beta == 2);
}

TEST_CASE("exact backend invariants on random monomial operators") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> dd(-3, 3), nb(0, 4), ne(0, 5);
    for (int trial = 0; trial < 150; ++trial) {
        SeqOp t = gen::monomial_op(rng, dd(rng), nb(rng), ne(rng));
        BlockOp b = seq_block(t);
        auto d = fredholm_data(b);
        CHECK(d.alpha - d.beta == d.index);
        CHECK(d.index == index(t));
        CHECK(int(d.kernel_basis.size()) == d.alpha);
        for (auto& v : d.kernel_basis) CHECK(kills(b, v, d.window));
        CHECK(complements_range(b, d));
        // beta is the nullity of the transpose
        CHECK(fredholm_data(op_transpose(t)).alpha == d.beta);
    }
}

TEST_CASE("exact backend on mixed shapes") {
    std::mt19937 rng(22);
    SpaceShape x{Factor::Seq(), Factor::Fin(2)};
    for (int trial = 0; trial < 40; ++trial) {
        BlockOp t = block_zero(x, x);
        t.at(0, 0) = gen::monomial_op(rng, trial % 5 - 2, 3, 3);
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) t.at(1, 1).correction.set(i, j, gen::small_rat(rng));
        t.at(0, 1).correction = gen::correction(rng, 2, 2);
        t.at(1, 0).correction.set(1 + trial % 2, 1 + trial % 3, gen::small_rat(rng));
        auto d = fredholm_data(t);
        CHECK(d.alpha - d.beta == index(t));
        for (auto& v : d.kernel_basis) CHECK(kills(t, v, d.window));
        CHECK(complements_range(t, d));
        CHECK(fredholm_data(block_transpose(t)).alpha == d.beta);
    }
}

TEST_CASE("numeric backend reproduces the exact backend on monomial symbols") {
    std::mt19937 rng(23);
    FredholmOptions num;
    num.backend = FredholmOptions::Backend::Numeric;
    for (int trial = 0; trial < 40; ++trial) {
        SeqOp t = gen::monomial_op(rng, trial % 7 - 3, 3, 3);
        auto ex = fredholm_data(t);
        auto nu = fredholm_data(t, num);
        CHECK(nu.alpha == ex.alpha);
        CHECK(nu.beta == ex.beta);
        CHECK(!nu.certified);
    }
}

TEST_CASE("numeric backend on general band symbols") {
    // 2 - z: root 2 outside, T injective with dense range, index 0
    SeqOp a;
    a.symbol.set(0, 2);
    a.symbol.set(1, -1);
    auto d = fredholm_data(a);
    CHECK(d.backend == "numeric");
    CHECK(d.alpha == 0);
    CHECK(d.beta == 0);
    // 1 - 2z^-1... symbol z^-1 - 1/2: numerator 1 - z/2, root 2 outside: a decaying kernel vector 2^-n
    SeqOp b;
    b.symbol.set(-1, 1);
    b.symbol.set(0, Scalar(-1, 2));
    auto e = fredholm_data(b);
    CHECK(e.alpha == 1);
    CHECK(e.beta == 0);
    CHECK(e.index == index(b));
    std::mt19937 rng(24);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 30; ++trial) {
        SeqOp t;
        int lo = int(trial % 3) - 2;
        t.symbol = gen::band(rng, lo, lo + 2);
        if (t.symbol.is_zero() || !is_fredholm(t)) continue;
        t.correction = gen::correction(rng, 3, 2);
        try {
            auto f = fredholm_data(t);
            CHECK(f.alpha - f.beta == index(t));
            ++checked;
        } catch (const NotRepresentable&) {
        }
    }
    CHECK(checked >= 15);
}

TEST_CASE("projections and generalized inverse") {
    std::mt19937 rng(25);
    for (int trial = 0; trial < 60; ++trial) {
        BlockOp t = seq_block(gen::monomial_op(rng, trial % 7 - 3, 3, 4));
        auto wa = analyze_window(t);
        BlockOp P = kernel_projection(wa);
        CHECK(block_compose(P, P) == P);
        CHECK(block_compose(t, P).at(0, 0).is_zero());
        BlockOp Q = range_complement_projection(wa);
        CHECK(block_compose(Q, Q) == Q);
        CHECK(block_compose(Q, t).at(0, 0).is_zero());
        BlockOp H = generalized_inverse(t, wa);
        BlockOp I = block_identity(t.dom());
        CHECK(block_compose(H, t) == block_sub(I, P));
        CHECK(block_compose(t, block_compose(H, t)) == t);
        CHECK(block_compose(block_compose(t, H), block_sub(I, Q)) == block_sub(I, Q));
    }
}

TEST_CASE("range alignment") {
    BlockOp t = seq_block(shift(2));
    Iso same = range_alignment_iso(t, t);
    CHECK(is_identity(same.fwd));
    // shift(1) after the swap of e1, e2
    SeqOp sw = op_identity();
    sw.correction.set(1, 1, -1);
    sw.correction.set(2, 2, -1);
    sw.correction.set(1, 2, 1);
    sw.correction.set(2, 1, 1);
    BlockOp t2 = seq_block(op_compose(shift(1), sw));
    CHECK(index(t2) == -1);
    CHECK_THROWS_AS(range_alignment_iso(t, t2), BetaMismatch);
    CHECK(is_identity(range_alignment_iso(t, seq_block(op_compose(shift(2), sw))).fwd));
    // e1 -> e1 + e3: range span(e1 + e3, e4, e5, ...), beta 2
    SeqOp v = shift(2);
    v.correction.set(1, 1, 1);
    BlockOp t3 = seq_block(v);
    REQUIRE(fredholm_data(t3).beta == 2);
    Iso a = range_alignment_iso(t, t3);
    CHECK(is_identity(block_compose(a.fwd, a.inv)));
    CHECK(is_identity(block_compose(a.inv, a.fwd)));
    // A ran t1 inside ran t3: A t1 e_j solves t3 x = A t1 e_j on a window
    BlockOp at = block_compose(a.fwd, t);
    Layout dom = Layout::uniform(S1, 30), cod = Layout::uniform(S1, 32);
    Mat m3 = window_matrix(t3, dom, cod), m1 = window_matrix(at, dom, cod);
    for (int j = 0; j < 20; ++j) CHECK(solve(m3, m1.col(j)));
    CHECK(!is_identity(a.fwd));
    BlockOp surj = seq_block(shift(-1));
    CHECK(is_identity(range_alignment_iso(surj, seq_block(shift(-2))).fwd));
}

TEST_CASE("head_tail_iso") {
    SpaceShape s{Factor::Seq(), Factor::Fin(1)};
    Iso z = head_tail_iso(s, 0);
    CHECK(is_identity(block_compose(z.inv, z.fwd)));
    Iso h = head_tail_iso(s, 1);
    CHECK(h.fwd.cod() == SpaceShape{Factor::Fin(1), Factor::Seq(), Factor::Fin(1)});
    auto e1 = apply_full(h.fwd, block_unit_vec(s, 0, 1));
    CHECK(block_vec_equal(e1, block_unit_vec(h.fwd.cod(), 0, 1)));
    auto e2 = apply_full(h.fwd, block_unit_vec(s, 0, 2));
    CHECK(block_vec_equal(e2, block_unit_vec(h.fwd.cod(), 1, 1)));
    for (int j = 0; j <= 3; ++j) {
        Iso g = head_tail_iso(s, j);
        CHECK(is_identity(block_compose(g.inv, g.fwd)));
        CHECK(is_identity(block_compose(g.fwd, g.inv)));
    }
}
