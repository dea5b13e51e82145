// Validated-numeric Fredholm data for general band symbols on [Seq].
//
// Primary count: decaying solutions of the tail recurrence are matched
// against the head equations. Oracle: column sections T P_n at two sizes.
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

#include "eaesc/fredholm.hpp"

namespace eaesc {

namespace {

using cd = std::complex<double>;

struct Mode {
    cd r;       // x_n ~ n^p r^n
    int power;
};

std::vector<cd> numerator_roots(const QPoly& p) {
    int n = p.degree();
    std::vector<cd> out;
    if (n <= 0) return out;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    double lead = p.lead().get_d();
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i).get_d() / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
    std::sort(out.begin(), out.end(), [](cd a, cd b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    return out;
}

// Roots outside the closed disk give decaying modes r = 1/zeta. Nearly
// equal roots are treated as one root of higher multiplicity.
std::vector<Mode> decaying_modes(const LaurentSymbol& a) {
    std::vector<cd> outside;
    for (cd z : numerator_roots(a.numerator()))
        if (std::abs(z) > 1.0) outside.push_back(1.0 / z);
    std::vector<Mode> modes;
    std::vector<bool> used(outside.size(), false);
    for (std::size_t i = 0; i < outside.size(); ++i) {
        if (used[i]) continue;
        std::vector<cd> cluster{outside[i]};
        used[i] = true;
        for (std::size_t j = i + 1; j < outside.size(); ++j)
            if (!used[j] && std::abs(outside[j] - outside[i]) < 1e-6) {
                cluster.push_back(outside[j]);
                used[j] = true;
            }
        cd mean = 0;
        for (cd c : cluster) mean += c;
        mean /= double(cluster.size());
        for (int p = 0; p < int(cluster.size()); ++p) modes.push_back({mean, p});
    }
    return modes;
}

template <class M>
int nullity(const M& m, double tol) {
    if (m.cols() == 0) return 0;
    if (m.rows() == 0) return int(m.cols());
    Eigen::JacobiSVD<M> svd(m);
    auto s = svd.singularValues();
    double top = s.size() ? s(0) : 0.0;
    int small = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) <= tol * std::max(top, 1.0)) ++small;
    return int(m.cols()) - int(s.size()) + small;
}

int recurrence_alpha(const SeqOp& t, double tol) {
    const auto& a = t.symbol;
    int lo = a.lo(), hi = a.hi();
    int w = hi - lo;
    int nc = std::max(t.correction.support_bound(), 1);
    // the tail recurrence pins x_n to decaying modes from n = max(N, hi) - hi + 1 on
    int K = std::max(nc, std::max(nc, hi) - hi) + w + 1;
    auto modes = decaying_modes(a);
    int M = int(modes.size());
    int R = std::max(K + hi, t.correction.row_bound());
    if (R <= 0) return K + M;
    Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(R, K + M);
    auto mode_val = [&](const Mode& m, int n) {
        // normalized at n = K + 1
        double ratio = double(n) / double(K + 1);
        return std::pow(ratio, m.power) * std::pow(m.r, n - (K + 1));
    };
    for (int i = 1; i <= R; ++i) {
        for (int j = std::max(1, i - hi); j <= i - lo; ++j) {
            double aij = a.coeff(i - j).get_d();
            if (aij == 0.0) continue;
            if (j <= K) {
                sys(i - 1, j - 1) += aij;
            } else {
                for (int k = 0; k < M; ++k) sys(i - 1, K + k) += aij * mode_val(modes[k], j);
            }
        }
    }
    for (const auto& [key, v] : t.correction.entries()) {
        if (key.first <= R && key.second <= K) sys(key.first - 1, key.second - 1) += v.get_d();
    }
    return nullity(sys, tol);
}

// Section length for which the slowest decaying mode drops below 1e-14.
int section_length(const SeqOp& t) {
    double slowest = 0.0;
    for (const auto& m : decaying_modes(t.symbol)) slowest = std::max(slowest, std::abs(m.r));
    for (const auto& m : decaying_modes(op_transpose(t).symbol)) slowest = std::max(slowest, std::abs(m.r));
    int base = t.correction.support_bound() + (t.symbol.hi() - t.symbol.lo()) + 8;
    if (slowest > 0.0) base += int(std::ceil(std::log(1e-14) / std::log(slowest))) * 2;
    if (base > 600) throw NotRepresentable("numeric backend: decay too slow for a section of at most 600 columns");
    return base;
}

Eigen::MatrixXd column_section(const SeqOp& t, int n) {
    int rows = std::max(n + std::max(t.symbol.hi(), 0), t.correction.row_bound());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, n);
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= n; ++j) m(i - 1, j - 1) = t.entry(i, j).get_d();
    return m;
}

Scalar round_rational(double v) {
    const double scale = 1e12;
    mpz_class num;
    mpz_set_d(num.get_mpz_t(), std::nearbyint(v * scale));
    Scalar q(num, mpz_class("1000000000000"));
    q.canonicalize();
    return q;
}

std::vector<BlockVec> near_kernel(const Eigen::MatrixXd& m, int count) {
    std::vector<BlockVec> out;
    if (count == 0) return out;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& V = svd.matrixV();
    int n = int(m.cols());
    for (int k = 0; k < count; ++k) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = round_rational(V(i, n - 1 - k));
        while (!v.empty() && v.back() == 0) v.pop_back();
        out.push_back({v});
    }
    return out;
}

}  // namespace

FredholmData numeric_fredholm_data(const SeqOp& t, double tolerance) {
    if (!is_fredholm(t)) throw NotFredholm("numeric backend: symbol vanishes on the unit circle");
    SeqOp tt = op_transpose(t);
    int a_rec = recurrence_alpha(t, tolerance);
    int b_rec = recurrence_alpha(tt, tolerance);
    int n1 = section_length(t);
    for (int n : {n1, n1 + 5}) {
        int a_sec = nullity(column_section(t, n), tolerance);
        int b_sec = nullity(column_section(tt, n), tolerance);
        if (a_sec != a_rec || b_sec != b_rec)
            throw BackendDisagreement("numeric backend: recurrence (" + std::to_string(a_rec) + "," +
                                      std::to_string(b_rec) + ") vs section " + std::to_string(n) + " (" +
                                      std::to_string(a_sec) + "," + std::to_string(b_sec) +
                                      "); tighten the tolerance");
    }
    if (a_rec - b_rec != index(t))
        throw BackendDisagreement("numeric backend: alpha - beta differs from the winding index");
    FredholmData d;
    d.alpha = a_rec;
    d.beta = b_rec;
    d.index = a_rec - b_rec;
    d.kernel_basis = near_kernel(column_section(t, n1), a_rec);
    d.range_complement = near_kernel(column_section(tt, n1), b_rec);
    d.window = n1;
    d.certified = false;
    d.backend = "numeric";
    return d;
}

}  // namespace eaesc
