#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "eaesc/poly.hpp"

using namespace eaesc;

namespace {
QPoly P(std::vector<Scalar> c) { return QPoly(Vec(c.begin(), c.end())); }

// Independent float oracle: companion eigenvalues.
std::vector<std::complex<double>> roots(const QPoly& p) {
    int n = p.degree();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i).get_d() / p.lead().get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}
}  // namespace

TEST_CASE("arithmetic and gcd") {
    QPoly a = P({-1, 0, 1});  // z^2 - 1
    QPoly b = P({1, 1});
    QPoly q, r;
    divmod(a, b, q, r);
    CHECK(q == P({-1, 1}));
    CHECK(r.is_zero());
    CHECK(poly_gcd(a, P({-1, 1}) * P({2, 1})) == P({-1, 1}));
    CHECK(P({1, 2, 3}).reversed() == P({3, 2, 1}));
    CHECK(P({1, 2, 3}).eval(2) == 17);
}

TEST_CASE("real root counting") {
    QPoly p = P({-2, 0, 1});  // roots +-sqrt 2
    CHECK(count_real_roots(p, -2, 2) == 2);
    CHECK(count_real_roots(p, 0, 2) == 1);
    CHECK(count_real_roots(P({1, 0, 1}), -10, 10) == 0);
}

TEST_CASE("unit circle detection") {
    CHECK(has_root_on_unit_circle(P({-1, 1})));                 // 1 - z... z - 1
    CHECK(!has_root_on_unit_circle(P({Scalar(1, 2), -1})));      // 1/2 - z
    CHECK(has_root_on_unit_circle(P({1, 0, 1})));                 // +-i
    CHECK(has_root_on_unit_circle(P({1, -1, 1})));                // primitive 6th roots
    CHECK(!has_root_on_unit_circle(P({2, 0, 0, 1})));
    CHECK(!has_root_on_unit_circle(P({1, Scalar(5, 2), 1})));     // -2, -1/2
    CHECK(has_root_on_unit_circle(P({1, 1, 1}) * P({3, 1})));
}

TEST_CASE("inside-disk counts") {
    CHECK(count_roots_inside_unit_disk(P({Scalar(1, 2), -1})) == 1);
    CHECK(count_roots_inside_unit_disk(P({2, -1})) == 0);
    CHECK(count_roots_inside_unit_disk(P({0, 0, 1})) == 2);
    CHECK(count_roots_inside_unit_disk(P({1, Scalar(5, 2), 1})) == 1);
    CHECK(count_roots_inside_unit_disk(P({Scalar(1, 4), 0, 1})) == 2);  // +-i/2
    CHECK(count_roots_inside_unit_disk(P({4, 0, 1})) == 0);
}

TEST_CASE("inside-disk counts agree with a float root oracle") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-6, 6), deg(1, 7);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int n = deg(rng);
        Vec c(n + 1);
        for (auto& x : c) x = Scalar(d(rng), 1 + (trial % 3));
        if (c[n] == 0) c[n] = 1;
        QPoly p(c);
        auto rs = roots(p);
        double closest = 10;
        int inside = 0;
        for (auto z : rs) {
            closest = std::min(closest, std::abs(std::abs(z) - 1.0));
            if (std::abs(z) < 1.0) ++inside;
        }
        if (closest < 1e-6) continue;  // numerically ambiguous, skip
        REQUIRE(!has_root_on_unit_circle(p));
        CHECK(count_roots_inside_unit_disk(p) == inside);
        ++checked;
    }
    CHECK(checked > 300);
}
