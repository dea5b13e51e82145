#pragma once
// Random operators shared by the unit tests.
#include <random>

#include "eaesc/seq_operator.hpp"

namespace gen {

using namespace eaesc;

inline Scalar small_rat(std::mt19937& rng, int span = 3) {
    std::uniform_int_distribution<int> n(-span, span), d(1, 2);
    return Scalar(n(rng)) / d(rng);
}

inline Correction correction(std::mt19937& rng, int bound, int entries) {
    Correction c;
    std::uniform_int_distribution<int> idx(1, std::max(bound, 1));
    for (int e = 0; e < entries; ++e) c.add(idx(rng), idx(rng), small_rat(rng));
    return c;
}

inline LaurentSymbol band(std::mt19937& rng, int lo, int hi) {
    LaurentSymbol s;
    for (int j = lo; j <= hi; ++j) s.set(j, small_rat(rng));
    return s;
}

// shift(d) plus a random correction
inline SeqOp monomial_op(std::mt19937& rng, int d, int bound = 3, int entries = 3) {
    SeqOp t = shift(d);
    std::uniform_int_distribution<int> c(1, 3);
    t.symbol = LaurentSymbol::monomial(Scalar(c(rng)), d);
    t.correction = correction(rng, bound, entries);
    return t;
}

}  // namespace gen
