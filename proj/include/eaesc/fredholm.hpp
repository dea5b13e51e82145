#pragma once

#include <optional>
#include <string>

#include "eaesc/seq_operator.hpp"

namespace eaesc {

struct FredholmOptions {
    enum class Backend { Auto, Exact, Numeric };
    Backend backend = Backend::Auto;
    double tolerance = 1e-9;  // relative singular value cut, numeric backend only
};

struct FredholmData {
    int alpha = 0;
    int beta = 0;
    int index = 0;
    std::vector<BlockVec> kernel_basis;
    std::vector<BlockVec> range_complement;
    int window = 0;
    bool certified = true;
    std::string backend = "exact";
};

// Seq part of a block operator whose symbol matrix is a monomial
// permutation: domain Seq factor j goes to codomain factor target[j] with
// symbol coef[j] z^deg[j]. Fin factors have target -1.
struct MonomialPerm {
    std::vector<int> target;
    std::vector<Scalar> coef;
    std::vector<int> deg;
};
std::optional<MonomialPerm> monomial_structure(const BlockOp& t);

LaurentSymbol symbol_determinant(const BlockOp& t);  // equal Seq counts required
bool is_fredholm(const BlockOp& t);
int index(const BlockOp& t);  // throws NotFredholm

// Exact window analysis of a monomial-class operator.
struct WindowAnalysis {
    MonomialPerm perm;
    int W = 0;
    Layout dom, cod;
    Mat m;                          // window matrix
    Mat kernel;                     // dom.total x alpha
    std::vector<int> range_cols;    // column basis of m
    std::vector<int> complement;    // cod coordinates completing the column space
    int alpha() const { return kernel.cols(); }
    int beta() const { return int(complement.size()); }
};
WindowAnalysis analyze_window(const BlockOp& t, int extra = 0);

FredholmData fredholm_data(const BlockOp& t, const FredholmOptions& opt = {});
FredholmData fredholm_data(const SeqOp& t, const FredholmOptions& opt = {});

// Projection onto ker t, finite rank, supported on the window.
BlockOp kernel_projection(const WindowAnalysis& wa);
// Projection onto span(range complement) along ran t.
BlockOp range_complement_projection(const WindowAnalysis& wa);
// H with t H y = y on ran t and H t = I - P, where P = kernel_projection(wa).
BlockOp generalized_inverse(const BlockOp& t, const WindowAnalysis& wa);

struct Iso {
    BlockOp fwd;
    BlockOp inv;
};

// Invertible A on the common codomain with A[ran t1] = ran t2.
Iso range_alignment_iso(const BlockOp& t1, const BlockOp& t2);

// shape -> shape with Fin(j) inserted before Seq factor `pos` (default:
// first Seq factor): x -> ((x_1..x_j), tail shifted down by j).
Iso head_tail_iso(const SpaceShape& shape, int j, int pos = -1);

// Exact equality of a composite with the identity; the strongest
// invertibility certificate available in the class.
bool is_identity(const BlockOp& t);

}  // namespace eaesc
