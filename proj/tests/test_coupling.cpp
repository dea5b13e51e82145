#include "doctest.h"

#include "eaesc/coupling.hpp"
#include "eaesc/random_ops.hpp"

using namespace eaesc;

namespace {
const SpaceShape S1{Factor::Seq()};
BlockOp sb(const SeqOp& t) { return seq_block(t); }
FredholmData fd(int a, int b) {
    FredholmData d;
    d.alpha = a;
    d.beta = b;
    d.index = a - b;
    return d;
}
}  // namespace

TEST_CASE("eae_check") {
    CHECK(eae_check(fd(2, 1), fd(2, 1)));
    CHECK(!eae_check(fd(2, 1), fd(3, 2)));
    CHECK(eae_check(block_identity(S1), block_identity(S1)));
}

TEST_CASE("perturb_kernel cases") {
    CHECK(perturb_kernel(sb(shift(-2)), 2) == block_zero(S1, S1));
    BlockOp t = sb(shift(-2));
    BlockOp r = perturb_kernel(t, 5);
    CHECK(fredholm_data(block_add(t, r)).alpha == 5);
    CHECK(index(block_add(t, r)) == 2);
    CHECK_THROWS_AS(perturb_kernel(sb(shift(-3)), 1), IndexObstruction);
    // Case 2: shift(1) with e1 -> 0 has alpha 1, beta 2; drop to alpha 0
    SeqOp u = shift(1);
    u.correction.set(2, 1, -1);
    BlockOp tu = sb(u);
    REQUIRE(fredholm_data(tu).alpha == 1);
    BlockOp r2 = perturb_kernel(tu, 0);
    CHECK(fredholm_data(block_add(tu, r2)).alpha == 0);
    CHECK(fredholm_data(block_add(tu, r2)).beta == 1);
}

TEST_CASE("perturb_kernel on random operators and shapes") {
    rnd::Rng rng(31);
    std::vector<SpaceShape> shapes{S1, {Factor::Seq(), Factor::Fin(2)}, {Factor::Fin(1), Factor::Seq(), Factor::Seq()}};
    for (int trial = 0; trial < 60; ++trial) {
        const auto& s = shapes[trial % shapes.size()];
        int k = trial % 7 - 3;
        BlockOp t = rnd::fredholm(rng, s, k);
        for (int m = 0; m <= 5; ++m) {
            if (m < k) {
                CHECK_THROWS_AS(perturb_kernel(t, m), IndexObstruction);
                continue;
            }
            BlockOp r = perturb_kernel(t, m);
            auto d = fredholm_data(block_add(t, r));
            CHECK(d.alpha == m);
            CHECK(d.index == k);
            for (int i = 0; i < r.rows(); ++i)
                for (int j = 0; j < r.cols(); ++j) CHECK(r.at(i, j).symbol.is_zero());
        }
    }
}

TEST_CASE("witness_from_complemented") {
    auto w0 = witness_from_complemented(block_identity(S1), {Factor::Seq()});
    CHECK(witness_index(w0) == 0);
    for (int k = 0; k <= 3; ++k) {
        auto w = witness_from_complemented(sb(shift(-k)), {Factor::Fin(0)});
        CHECK(witness_index(w) == k);
    }
    auto w2 = witness_from_complemented(sb(shift(2)), S1);
    CHECK(witness_index(w2) == -2);
    auto d = fredholm_data(witness_defect(w2));
    CHECK(d.alpha == 0);
    CHECK(d.beta == 2);
    CHECK_THROWS_AS(witness_from_complemented(sb(op_sub(op_identity(), shift(1))), S1), NotFredholm);
}

TEST_CASE("perturb_witness") {
    auto w = witness_from_complemented(sb(shift(-1)), {});
    auto same = perturb_witness(w, 1);
    CHECK(fredholm_data(witness_defect(same)).alpha == 1);
    auto four = perturb_witness(w, 4);
    auto g1 = witness_defect(w), g4 = witness_defect(four);
    CHECK(fredholm_data(g4).alpha == 4);
    CHECK(index(g4) == 1);
    BlockOp diff = block_sub(block_compose(w.s, w.t), block_compose(four.s, four.t));
    CHECK(diff.at(0, 0).symbol.is_zero());
    CHECK(rank(window_matrix(diff, Layout::uniform(S1, 30), Layout::uniform(S1, 30))) <= 3);
    auto w2 = witness_from_complemented(sb(shift(-2)), {});
    CHECK_THROWS_AS(perturb_witness(w2, 0), IndexObstruction);
    CHECK_THROWS_AS(perturb_witness(zero_witness(S1, S1), 2), ZeroIndexInput);
}

TEST_CASE("Lemma 2.5 on random witnesses") {
    rnd::Rng rng(32);
    std::vector<SpaceShape> zs{{}, {Factor::Fin(2)}, S1};
    for (int trial = 0; trial < 40; ++trial) {
        auto w = rnd::witness(rng, S1, zs[trial % 3], trial % 5 - 2);
        auto gx = fredholm_data(witness_defect(w));
        auto gy = fredholm_data(block_sub(block_identity(w.t.cod()), block_compose(w.t, w.s)));
        CHECK(gx.alpha == gy.alpha);
        CHECK(gx.beta == gy.beta);
    }
}

TEST_CASE("sc_construct and sc_verify") {
    SchurCouple triv{block_identity(S1), block_identity(S1), block_zero(S1, S1), block_zero(S1, S1),
                     block_identity(S1), block_identity(S1)};
    CHECK(sc_verify(block_identity(S1), block_identity(S1), triv, 20));
    auto id = sc_construct(zero_witness(S1, S1), block_identity(S1), block_identity(S1));
    CHECK(sc_verify(block_identity(S1), block_identity(S1), id, 50));

    BlockOp u = sb(shift(-1));
    auto w = witness_from_complemented(u, {});
    auto sc = sc_construct(w, u, u);
    CHECK(sc_verify(u, u, sc, 50));
    SchurCouple bad = sc;
    bad.b.at(0, 0).correction.add(1, 1, 1);
    CHECK(!sc_verify(u, u, bad, 50));

    // index 0, alpha = 1 on both sides
    SeqOp p = op_identity();
    p.correction.set(1, 1, -1);
    SeqOp q = op_identity();
    q.correction.set(2, 2, 0);
    q.correction.set(1, 2, 1);
    q.correction.set(2, 2, -1);
    BlockOp up = sb(p), vq = sb(q);
    REQUIRE(eae_check(up, vq));
    auto sc0 = sc_construct(zero_witness(S1, S1), up, vq);
    CHECK(sc_verify(up, vq, sc0, 50));
    CHECK_THROWS_AS(sc_construct(w, sb(shift(-1)), sb(shift(-2))), NotEAE);
    auto w2 = witness_from_complemented(sb(shift(-2)), {});
    CHECK_THROWS_AS(sc_construct(w2, u, u), IndexMismatch);
}

TEST_CASE("sc_construct on random EAE pairs") {
    rnd::Rng rng(33);
    SpaceShape y1{Factor::Seq(), Factor::Fin(2)};
    for (int trial = 0; trial < 14; ++trial) {
        int k = trial % 7 - 3;
        const SpaceShape& X = trial % 2 ? y1 : S1;
        BlockOp u = rnd::fredholm(rng, X, k);
        BlockOp v = rnd::eae_partner(rng, u, S1);
        auto w = witness_from_complemented(sb(shift(-k)), X == S1 ? SpaceShape{} : SpaceShape{Factor::Fin(2)});
        auto sc = sc_construct(w, u, v);
        CHECK(sc_verify(u, v, sc, 50));
        CHECK(eae_check(u, v));
    }
}

TEST_CASE("couple_from_MN round trip") {
    auto id = sc_construct(zero_witness(S1, S1), block_identity(S1), block_identity(S1));
    auto triv = couple_from_MN({block_identity(S1), block_identity(S1)}, {block_identity(S1), block_identity(S1)},
                               zero_witness(S1, S1));
    CHECK(triv.a == block_identity(S1));
    CHECK(triv.d == block_identity(S1));
    BlockOp u = sb(shift(-1));
    auto sc = sc_construct(witness_from_complemented(u, {}), u, u);
    auto mn = couple_to_MN(sc);
    auto back = couple_from_MN(mn.m, mn.n, mn.w);
    CHECK(sc_verify(u, u, back, 30));
    CHECK(block_compose(back.b, back.d_inv) == block_compose(sc.b, sc.d_inv));
    rnd::Rng rng(34);
    Iso m = rnd::invertible(rng, S1);
    auto c = couple_from_MN(m, {block_identity(S1), block_identity(S1)}, zero_witness(S1, S1));
    // U = m^-1: U M = I - S T = I
    CHECK(is_identity(block_compose(c.a, m.fwd)));
    CHECK(sc_verify(m.inv, block_identity(S1), c, 30));
    CHECK_THROWS_AS(couple_from_MN({sb(shift(1)), sb(shift(-1))}, m, zero_witness(S1, S1)), NotInvertible);
}

TEST_CASE("witness_power") {
    auto w1 = witness_from_complemented(sb(shift(-1)), {});
    CHECK(witness_index(witness_power(w1, 1)) == 1);
    CHECK(witness_index(witness_power(w1, 3)) == 3);
    CHECK(witness_index(witness_power(w1, -1)) == -1);
    rnd::Rng rng(35);
    for (int k : {1, 2, -1}) {
        auto w = rnd::witness(rng, S1, {}, k);
        for (int m : {-3, -2, -1, 2, 3}) CHECK(witness_index(witness_power(w, m)) == k * m);
    }
}

TEST_CASE("witness_compress") {
    BlockOp id = block_identity(S1);
    auto c0 = witness_compress(zero_witness(S1, S1), id, id);
    CHECK(c0.index == 0);
    auto w = witness_from_complemented(sb(shift(-1)), {});
    auto c = witness_compress(w, sb(shift(-1)), sb(shift(-1)));
    CHECK(c.b1 == w.t);
    CHECK(c.b2 == w.s);
    CHECK(c.index == 1);
    auto c2 = witness_compress(w, sb(shift(1)), sb(shift(2)));
    CHECK(c2.index == 1);
}

TEST_CASE("sc_extend_blockdiag") {
    SpaceShape f3{Factor::Fin(3)};
    auto id = sc_construct(zero_witness(S1, S1), block_identity(S1), block_identity(S1));
    auto ext = sc_extend_blockdiag(id, f3, f3);
    SpaceShape big{Factor::Fin(3), Factor::Seq()};
    CHECK(sc_verify(block_identity(big), block_identity(big), ext, 20));
    BlockOp u = sb(shift(-1));
    auto sc = sc_construct(witness_from_complemented(u, {}), u, u);
    auto e1 = sc_extend_blockdiag(sc, S1, S1);
    BlockOp uu = block_diag(block_identity(S1), u);
    CHECK(sc_verify(uu, uu, e1, 30));
    CHECK(index(uu) == 1);
    auto twice = sc_extend_blockdiag(sc_extend_blockdiag(sc, S1, S1), f3, f3);
    auto once = sc_extend_blockdiag(sc, concat(f3, S1), concat(f3, S1));
    CHECK(twice.a == once.a);
    CHECK(twice.b == once.b);
    CHECK(twice.d_inv == once.d_inv);
}

TEST_CASE("eae_construct and eae_verify") {
    BlockOp id = block_identity(S1);
    auto e0 = eae_construct(id, id);
    CHECK(eae_verify(id, id, e0, 20));
    BlockOp u = sb(shift(-1));
    auto e1 = eae_construct(u, u);
    CHECK(eae_verify(u, u, e1, 50));
    Extension bad = e1;
    bad.e.at(0, 0).correction.add(3, 1, 1);
    CHECK(!eae_verify(u, u, bad, 50));
    CHECK_THROWS_AS(eae_construct(u, sb(shift(-2))), NotEAE);
    rnd::Rng rng(36);
    for (int trial = 0; trial < 6; ++trial) {
        int k = trial % 5 - 2;
        BlockOp a = rnd::fredholm(rng, {Factor::Seq(), Factor::Fin(1)}, k);
        BlockOp b = rnd::eae_partner(rng, a, S1);
        auto e = eae_construct(a, b);
        CHECK(eae_verify(a, b, e, 30));
    }
}
