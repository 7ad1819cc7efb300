// Independent reference implementations used as test oracles. These must not
// share code paths with the library: subsets are enumerated recursively,
// least squares goes through an SVD, and residuals are computed with plain
// loops.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

/// Brute-force equal-rate threshold: recursive enumeration of nonempty
/// subsets, natural logs converted at the end.
inline double brute_c_of_w(const std::vector<double>& w, double sigma_a2, double sigma_z2) {
    const int k = static_cast<int>(w.size());
    double best = std::numeric_limits<double>::infinity();
    std::function<void(int, int, double)> rec = [&](int pos, int size, double sumsq) {
        if (pos == k) {
            if (size == 0) return;
            const double val =
                std::log1p(sigma_a2 / sigma_z2 * sumsq) / (2.0 * size * std::log(2.0));
            best = std::min(best, val);
            return;
        }
        rec(pos + 1, size, sumsq);
        rec(pos + 1, size + 1, sumsq + w[pos] * w[pos]);
    };
    rec(0, 0, 0.0);
    return best;
}

/// All size-k subsets of {1..m}, ascending, in lexicographic order.
inline std::vector<std::vector<int>> all_subsets(int m, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v <= m; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(1);
    return out;
}

/// Plain-loop normalized residual (no Eigen expressions).
inline double loop_residual(const Eigen::VectorXd& y, const Eigen::MatrixXd& a,
                            const std::vector<int>& subset1, const std::vector<double>& values) {
    const int n = static_cast<int>(y.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = y[i];
        for (std::size_t j = 0; j < subset1.size(); ++j) r -= values[j] * a(i, subset1[j] - 1);
        acc += r * r;
    }
    return acc / n;
}

/// Exhaustive least-squares support search via SVD solves.
inline std::vector<int> brute_ml_support(const Eigen::VectorXd& y, const Eigen::MatrixXd& a,
                                         int k) {
    const int m = static_cast<int>(a.cols());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_set;
    for (const auto& subset : all_subsets(m, k)) {
        Eigen::MatrixXd at(a.rows(), k);
        for (int j = 0; j < k; ++j) at.col(j) = a.col(subset[j] - 1);
        const Eigen::VectorXd v =
            at.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
        const double res = (y - at * v).squaredNorm();
        if (res < best) {
            best = res;
            best_set = subset;
        }
    }
    return best_set;
}

/// Pearson chi-square statistic against equiprobable categories.
inline double chi2_statistic(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
    const double expected = static_cast<double>(total) / counts.size();
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// Upper 0.001 critical values of the chi-square distribution (standard
// tables; Wilson-Hilferty puts them at 28.0 and 43.9).
inline constexpr double kChi2Crit001Df9 = 27.877;
inline constexpr double kChi2Crit001Df19 = 43.820;

/// Composite Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
    if (hi <= lo) return 0.0;
    const int n = panels % 2 == 0 ? panels : panels + 1;
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// P{ (1/2) log2(1 + W^2) <= r } for W uniform on [lo, hi], by quadrature of
/// the density up to the closed-form boundary.
inline double uniform_outage_quadrature(double lo, double hi, double rate) {
    const double wstar = std::sqrt(std::pow(2.0, 2.0 * rate) - 1.0);
    if (wstar <= lo) return 0.0;
    const double upper = std::min(hi, wstar);
    const double density = 1.0 / (hi - lo);
    return simpson([&](double) { return density; }, lo, upper, 512);
}

} // namespace oracles
