#include "doctest.h"

#include <random>

#include "eaesc/exact_linalg.hpp"

using namespace eaesc;

namespace {
Mat M(std::vector<std::vector<int>> rows) {
    std::vector<Vec> r;
    for (auto& row : rows) {
        Vec v;
        for (int x : row) v.push_back(x);
        r.push_back(v);
    }
    return Mat::from_rows(r);
}
Vec V(std::vector<int> xs) {
    Vec v;
    for (int x : xs) v.push_back(x);
    return v;
}
}  // namespace

TEST_CASE("scalars parse and stay reduced") {
    CHECK(parse_scalar("6/4") == Scalar(3, 2));
    CHECK(parse_scalar("-2/4") == Scalar(-1, 2));
    CHECK_THROWS(parse_scalar("-2/-4"));  // sign lives on the numerator
    CHECK(to_string(parse_scalar("10/5")) == "2");
    CHECK(parse_scalar("-3/9").get_den() == 3);
    CHECK_THROWS(parse_scalar("1/0"));
    CHECK_THROWS(parse_scalar("abc"));
}

TEST_CASE("rank") {
    CHECK(rank(Mat::identity(2)) == 2);
    CHECK(rank(Mat(3, 4)) == 0);
    CHECK(rank(M({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("null_space") {
    CHECK(null_space(Mat::identity(3)).empty());
    auto k = null_space(M({{1, 1}}));
    REQUIRE(k.size() == 1);
    CHECK(k[0][0] == -k[0][1]);
    auto k2 = null_space(M({{1, 2}, {2, 4}}));
    REQUIRE(k2.size() == 1);
    // any multiple of (2,-1)
    CHECK(k2[0][0] == -2 * k2[0][1]);
    CHECK(!is_zero(k2[0]));
}

TEST_CASE("solve") {
    auto x = solve(Mat::identity(2), V({3, 5}));
    REQUIRE(x);
    CHECK(*x == V({3, 5}));
    auto y = solve(M({{1, 1}}), V({2}));
    REQUIRE(y);
    CHECK(*y == V({2, 0}));
    CHECK(!solve(M({{1}, {1}}), V({1, 2})));
}

TEST_CASE("complement_basis greedy") {
    auto c0 = complement_basis({}, 2);
    CHECK(c0 == std::vector<Vec>{V({1, 0}), V({0, 1})});
    auto c1 = complement_basis({V({1, 0, 0})}, 3);
    CHECK(c1 == std::vector<Vec>{V({0, 1, 0}), V({0, 0, 1})});
    auto c2 = complement_basis({V({1, 1})}, 2);
    CHECK(c2 == std::vector<Vec>{V({1, 0})});
    CHECK_THROWS_AS(complement_basis({V({1, 1}), V({2, 2})}, 2), DependentInput);
}

TEST_CASE("inverse and projection") {
    Mat a = M({{2, 1}, {1, 1}});
    CHECK(a * inverse(a) == Mat::identity(2));
    CHECK_THROWS_AS(inverse(M({{1, 2}, {2, 4}})), NotInvertible);
    Mat b = Mat::from_cols({V({1, 1, 0})}, 3);
    Mat p = projection_onto(b);
    CHECK(p * p == p);
    CHECK(p * b == b);
    CHECK(rank(p) == 1);
}

TEST_CASE("rank-nullity and solve round trip on random matrices") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-3, 3), sz(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        int r = sz(rng), c = sz(rng);
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = trial % 3 == 0 && j % 2 ? Scalar(0) : Scalar(d(rng)) / (1 + (trial % 4));
        auto ns = null_space(m);
        CHECK(rank(m) + int(ns.size()) == c);
        for (auto& v : ns) CHECK(is_zero(m * v));
        Vec x(c);
        for (auto& e : x) e = d(rng);
        Vec b = m * x;
        auto s = solve(m, b);
        REQUIRE(s);
        CHECK(m * *s == b);
        CHECK(solve(m, b) == s);  // deterministic
        auto cb = column_basis(m);
        CHECK(int(cb.size()) == rank(m));
    }
}
