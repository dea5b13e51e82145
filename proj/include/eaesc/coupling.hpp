#pragma once

#include <string>

#include "eaesc/fredholm.hpp"

namespace eaesc {

// s : Y -> X, t : X -> Y
struct Witness {
    BlockOp s;
    BlockOp t;
};

struct SchurCouple {
    BlockOp a, a_inv;  // on X
    BlockOp b;         // Y -> X
    BlockOp c;         // X -> Y
    BlockOp d, d_inv;  // on Y
};

// [U 0; 0 I_X0] = E [V 0; 0 I_Y0] F with E : Y+Y0 -> X+X0, F : X+X0 -> Y+Y0.
struct Extension {
    BlockOp e, e_inv;
    BlockOp f, f_inv;
    SpaceShape x0, y0;
};

bool eae_check(const FredholmData& u, const FredholmData& v);
bool eae_check(const BlockOp& u, const BlockOp& v);

// Finite-rank R with alpha(t + R) = m.
BlockOp perturb_kernel(const BlockOp& t, int m);

BlockOp witness_defect(const Witness& w);  // I_X - s t
int witness_index(const Witness& w);

Witness perturb_witness(const Witness& w, int m);

SchurCouple sc_construct(const Witness& w, const BlockOp& u, const BlockOp& v);
bool sc_verify(const BlockOp& u, const BlockOp& v, const SchurCouple& sc, int n);

// Translation between couples and the (M, N, S, T) data with UM = I - ST,
// VN = I - TS.
struct MNData {
    Iso m;
    Iso n;
    Witness w;
};
SchurCouple couple_from_MN(const Iso& m, const Iso& n, const Witness& w);
MNData couple_to_MN(const SchurCouple& sc);

Witness witness_power(const Witness& w, int m);
Witness witness_from_complemented(const BlockOp& r, const SpaceShape& z_shape);
// Identity between the first Seq factors one way, I - shift(-k) back:
// I - s t is shift(-k) on that factor of X.
Witness witness_shared_seq(const SpaceShape& x, const SpaceShape& y, int k);
Witness zero_witness(const SpaceShape& x, const SpaceShape& y);

struct Compression {
    BlockOp b1;           // X -> Y, P_V t P_U
    BlockOp b2;           // Y -> X, P_U s P_V
    BlockOp discrepancy;  // t s - b1 b2, finite rank
    int index = 0;        // index of I - b1 b2 on ran V
};
Compression witness_compress(const Witness& w, const BlockOp& u, const BlockOp& v);

SchurCouple sc_extend_blockdiag(const SchurCouple& sc, const SpaceShape& x1, const SpaceShape& y1);

Extension eae_construct(const BlockOp& u, const BlockOp& v);
bool eae_verify(const BlockOp& u, const BlockOp& v, const Extension& ext, int n);

}  // namespace eaesc
