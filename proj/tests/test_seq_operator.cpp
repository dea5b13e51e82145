#include "doctest.h"

#include "eaesc/seq_operator.hpp"
#include "gen.hpp"

using namespace eaesc;

namespace {
// Brute-force entry of a after b.
Scalar composed_entry(const SeqOp& a, const SeqOp& b, int i, int j) {
    int kmax = j + std::max(b.symbol.is_zero() ? 0 : b.symbol.hi(), 0) + b.correction.support_bound() + 2;
    Scalar s = 0;
    for (int k = 1; k <= kmax; ++k) s += a.entry(i, k) * b.entry(k, j);
    return s;
}
bool entries_match(const SeqOp& c, const SeqOp& a, const SeqOp& b, int n) {
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (c.entry(i, j) != composed_entry(a, b, i, j)) return false;
    return true;
}
}  // namespace

TEST_CASE("shift") {
    CHECK(shift(0) == op_identity());
    CHECK(index(shift(-1)) == 1);
    CHECK(index(shift(2)) == -2);
    CHECK(shift(1).entry(2, 1) == 1);
    CHECK(shift(1).entry(1, 2) == 0);
}

TEST_CASE("op_compose boundary effects") {
    CHECK(op_compose(shift(-1), shift(1)) == op_identity());
    SeqOp fb = op_compose(shift(1), shift(-1));
    SeqOp expect = op_identity();
    expect.correction.set(1, 1, -1);
    CHECK(fb == expect);
    SeqOp f = op_identity(), g = op_identity();
    f.correction.set(1, 2, 3);
    g.correction.set(2, 1, Scalar(1) / 2);
    SeqOp lhs = op_compose(f, g);
    // identity + F + G + FG
    SeqOp rhs = op_identity();
    rhs.correction.set(1, 2, 3);
    rhs.correction.set(2, 1, Scalar(1) / 2);
    rhs.correction.set(1, 1, Scalar(3) / 2);
    CHECK(lhs == rhs);
}

TEST_CASE("op_compose agrees with brute-force entry sums") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> lo(-3, 1), w(0, 3), nb(0, 4);
    for (int trial = 0; trial < 150; ++trial) {
        SeqOp a, b;
        int la = lo(rng), lb = lo(rng);
        a.symbol = gen::band(rng, la, la + w(rng));
        b.symbol = gen::band(rng, lb, lb + w(rng));
        a.correction = gen::correction(rng, nb(rng), 3);
        b.correction = gen::correction(rng, nb(rng), 3);
        SeqOp c = op_compose(a, b);
        CHECK(c.symbol == a.symbol * b.symbol);
        CHECK(entries_match(c, a, b, 14));
    }
}

TEST_CASE("add, scale and symbol bookkeeping") {
    CHECK(op_add(op_identity(), SeqOp{}) == op_identity());
    SeqOp d = op_sub(op_identity(), shift(1));
    CHECK(d.symbol.coeff(0) == 1);
    CHECK(d.symbol.coeff(1) == -1);
    SeqOp s = op_scale(2, shift(-1));
    CHECK(s.symbol == LaurentSymbol::monomial(2, -1));
    CHECK(op_sub(shift(1), shift(1)).is_zero());
}

TEST_CASE("is_fredholm and index") {
    CHECK(!is_fredholm(op_sub(op_identity(), shift(1))));
    SeqOp h = op_sub(op_scale(Scalar(1) / 2, op_identity()), shift(1));
    CHECK(is_fredholm(h));
    CHECK(index(h) == -1);
    CHECK(is_fredholm(shift(3)));
    for (int k = 0; k <= 4; ++k) CHECK(index(shift(-k)) == k);
    CHECK_THROWS_AS(index(op_sub(op_identity(), shift(1))), NotFredholm);
    // symbol 2 + z^-1: root -1/2 of the numerator 2z + 1, inside
    SeqOp g;
    g.symbol.set(0, 2);
    g.symbol.set(-1, 1);
    CHECK(index(g) == 0);
    // z^-1 (1/2 - z)... symbol 1/2 z^-1 - 1 : numerator 1/2 - z, root 1/2, winding -1+1 = 0
    SeqOp e;
    e.symbol.set(-1, Scalar(1) / 2);
    e.symbol.set(0, -1);
    CHECK(index(e) == 0);
}

TEST_CASE("index theorem and finite-rank invariance on random band operators") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> lo(-2, 1), w(0, 2);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 80; ++trial) {
        SeqOp a, b;
        int la = lo(rng), lb = lo(rng);
        a.symbol = gen::band(rng, la, la + w(rng));
        b.symbol = gen::band(rng, lb, lb + w(rng));
        if (a.symbol.is_zero() || b.symbol.is_zero() || !is_fredholm(a) || !is_fredholm(b)) continue;
        CHECK(index(op_compose(a, b)) == index(a) + index(b));
        SeqOp af = a;
        af.correction = gen::correction(rng, 4, 4);
        CHECK(index(af) == index(a));
        ++checked;
    }
    CHECK(checked >= 40);
}

TEST_CASE("apply") {
    BlockOp id = block_identity({Factor::Seq()});
    BlockVec e5 = block_unit_vec({Factor::Seq()}, 0, 5);
    auto r = apply(id, e5, 10);
    CHECK(r[0] == Vec{0, 0, 0, 0, 1, 0, 0, 0, 0, 0});
    auto s = apply(seq_block(shift(1)), block_unit_vec({Factor::Seq()}, 0, 1), 3);
    CHECK(s[0] == Vec{0, 1, 0});
    BlockVec x{{1, 1}};
    auto d = apply(seq_block(op_sub(op_identity(), shift(1))), x, 4);
    CHECK(d[0] == Vec{1, 0, -1, 0});
}

TEST_CASE("block plumbing") {
    SpaceShape sf{Factor::Seq(), Factor::Fin(2)};
    BlockOp id = block_identity(sf);
    CHECK(block_compose(id, id) == id);
    SpaceShape s1{Factor::Seq(), Factor::Fin(1)};
    BlockOp p = block_permute(s1, {1, 0});
    CHECK(p.cod() == SpaceShape{Factor::Fin(1), Factor::Seq()});
    BlockOp q = block_permute(p.cod(), {1, 0});
    CHECK(block_compose(q, p) == block_identity(s1));
    BlockOp dg = block_diag(seq_block(shift(-1)), block_identity({Factor::Fin(3)}));
    CHECK(dg.dom() == SpaceShape{Factor::Seq(), Factor::Fin(3)});
    CHECK_THROWS_AS(block_compose(id, block_identity({Factor::Seq()})), ShapeMismatch);
}

TEST_CASE("window matrix round trip") {
    std::mt19937 rng(9);
    SpaceShape s{Factor::Seq(), Factor::Fin(2), Factor::Seq()};
    Layout L = Layout::uniform(s, 4);
    Mat m(L.total, L.total);
    for (int i = 0; i < L.total; ++i)
        for (int j = 0; j < L.total; ++j) m(i, j) = gen::small_rat(rng);
    BlockOp t = from_window(L, L, m);
    CHECK(window_matrix(t, L, L) == m);
    BlockVec v = L.unflatten(m.col(2));
    CHECK(L.flatten(v) == m.col(2));
}
