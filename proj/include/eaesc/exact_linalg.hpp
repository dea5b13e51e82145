#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eaesc/errors.hpp"

namespace eaesc {

// mpq_class keeps numerator/denominator canonical (reduced, positive
// denominator) after every arithmetic operation.
using Scalar = mpq_class;
using Vec = std::vector<Scalar>;

Scalar parse_scalar(std::string_view text);  // "p/q", "p", "-p/q"
std::string to_string(const Scalar& s);
bool is_zero(const Vec& v);

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}

    static Mat identity(int n);
    static Mat from_rows(const std::vector<Vec>& rows);
    static Mat from_cols(const std::vector<Vec>& cols, int rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    const Scalar& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

    Vec row(int i) const;
    Vec col(int j) const;
    Mat transpose() const;
    Mat select_rows(const std::vector<int>& idx) const;
    Mat select_cols(const std::vector<int>& idx) const;
    bool is_zero() const;

    friend bool operator==(const Mat& a, const Mat& b);
    friend Mat operator*(const Mat& a, const Mat& b);
    friend Vec operator*(const Mat& a, const Vec& x);
    friend Mat operator+(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Scalar> a_;
};

// Reduced row echelon form; pivots are taken at the lowest usable row
// for each column scanned left to right.
struct Rref {
    Mat r;
    std::vector<int> pivots;  // pivot column of row i
};
Rref rref(const Mat& m);

int rank(const Mat& m);
std::vector<Vec> null_space(const Mat& m);
std::optional<Vec> solve(const Mat& m, const Vec& b);
Mat inverse(const Mat& m);  // throws NotInvertible

// Standard basis vectors completing `subspace` to a basis of Q^n, chosen
// greedily by lowest index.
std::vector<Vec> complement_basis(const std::vector<Vec>& subspace, int ambient_dim);
// Same, but returns the chosen coordinate indices (0-based).
std::vector<int> complement_coords(const std::vector<Vec>& subspace, int ambient_dim);

// Indices of the columns that form the lowest-index basis of the column space.
std::vector<int> column_basis(const Mat& m);

// Rows i_1 < ... < i_r such that basis restricted to them is invertible
// (lowest-index choice). basis is n x r of full column rank.
std::vector<int> pivot_rows(const Mat& basis);

// Projection onto colspan(basis) whose kernel is {x : x_p = 0 for p in
// pivot_rows(basis)}.
Mat projection_onto(const Mat& basis);

Vec unit_vec(int n, int i);

}  // namespace eaesc
