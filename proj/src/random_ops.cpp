#include "eaesc/random_ops.hpp"

namespace eaesc::rnd {

Scalar rational(Rng& rng, int span) {
    std::uniform_int_distribution<int> n(-span, span), d(1, 2);
    return Scalar(n(rng)) / d(rng);
}

Correction correction(Rng& rng, int bound, int entries) {
    Correction c;
    if (bound <= 0) return c;
    std::uniform_int_distribution<int> idx(1, bound);
    for (int e = 0; e < entries; ++e) c.add(idx(rng), idx(rng), rational(rng));
    return c;
}

namespace {
// correction confined to a bound x bound corner, clipped to Fin sizes
Correction clipped(Rng& rng, const Factor& row, const Factor& col, int bound, int entries) {
    int rb = row.seq ? bound : std::min(bound, row.dim);
    int cb = col.seq ? bound : std::min(bound, col.dim);
    Correction c;
    if (rb <= 0 || cb <= 0) return c;
    std::uniform_int_distribution<int> ri(1, rb), ci(1, cb);
    for (int e = 0; e < entries; ++e) c.add(ri(rng), ci(rng), rational(rng));
    return c;
}
}  // namespace

BlockOp fredholm(Rng& rng, const SpaceShape& s, int k, int bound) {
    BlockOp t(s, s);
    std::uniform_int_distribution<int> coef(1, 3), cnt(0, 3);
    bool first = true;
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j) {
            SeqOp& e = t.at(i, j);
            if (i == j && s[i].seq) {
                e.symbol = LaurentSymbol::monomial(Scalar(coef(rng)), first ? -k : 0);
                first = false;
            }
            e.correction = clipped(rng, s[i], s[j], bound, cnt(rng));
        }
    t.validate();
    return t;
}

BlockOp eae_partner(Rng& rng, const BlockOp& u, const SpaceShape& y) {
    auto du = fredholm_data(u);
    BlockOp v0 = fredholm(rng, y, du.index);
    return block_add(v0, perturb_kernel(v0, du.alpha));
}

Iso invertible(Rng& rng, const SpaceShape& s, int window) {
    Layout l = Layout::uniform(s, window);
    int n = l.total;
    Mat lo = Mat::identity(n), up = Mat::identity(n);
    std::bernoulli_distribution keep(0.3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i > j && keep(rng)) lo(i, j) = rational(rng);
            if (i < j && keep(rng)) up(i, j) = rational(rng);
        }
    Mat m = lo * up;
    Mat I = Mat::identity(n);
    BlockOp id = block_identity(s);
    return {block_add(id, from_window(l, l, m - I)), block_add(id, from_window(l, l, inverse(m) - I))};
}

Witness witness(Rng& rng, const SpaceShape& y, const SpaceShape& z, int k) {
    BlockOp r = fredholm(rng, y, k);
    Witness w = witness_from_complemented(r, z);
    const SpaceShape& X = w.s.cod();
    std::uniform_int_distribution<int> cnt(0, 2);
    BlockOp fs(y, X), ft(X, y);
    for (int i = 0; i < fs.rows(); ++i)
        for (int j = 0; j < fs.cols(); ++j) fs.at(i, j).correction = clipped(rng, X[i], y[j], 3, cnt(rng));
    for (int i = 0; i < ft.rows(); ++i)
        for (int j = 0; j < ft.cols(); ++j) ft.at(i, j).correction = clipped(rng, y[i], X[j], 3, cnt(rng));
    return {block_add(w.s, fs), block_add(w.t, ft)};
}

}  // namespace eaesc::rnd
