#include "suprec/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "suprec/errors.hpp"
#include "suprec/parallel.hpp"

namespace suprec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t binom_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (c > (static_cast<unsigned __int128>(1) << 63)) return std::uint64_t{1} << 63;
    }
    return static_cast<std::uint64_t>(c);
}

/// idx ascending 0-based; advances to the next subset in lexicographic order.
bool next_combination(std::vector<int>& idx, int m) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < m - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

/// Subset of the given lexicographic rank (combinatorial number system).
std::vector<int> unrank_combination(std::uint64_t rank, int m, int k) {
    std::vector<int> idx(k);
    int c = 0;
    std::uint64_t r = rank;
    for (int i = 0; i < k; ++i) {
        while (true) {
            const std::uint64_t with_c = binom_u64(m - 1 - c, k - 1 - i);
            if (r < with_c) break;
            r -= with_c;
            ++c;
        }
        idx[i] = c++;
    }
    return idx;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

double count_subsets(int m, int k, double cap) {
    if (k < 0 || k > m) return 0.0;
    const int kk = std::min(k, m - k);
    double c = 1.0;
    for (int i = 1; i <= kk; ++i) {
        c = c * (m - kk + i) / i;
        if (c > cap) return c;
    }
    return c;
}

double estimate_magnitude(const Eigen::VectorXd& y, double sigma_a2, double sigma_z2) {
    if (y.size() < 1) throw ConfigError("estimate_magnitude: need n >= 1");
    if (!(sigma_a2 > 0.0)) throw ConfigError("estimate_magnitude: sigma_a2 must be positive");
    const double n = static_cast<double>(y.size());
    return std::sqrt(std::abs(y.squaredNorm() / n - sigma_z2) / sigma_a2);
}

double QuantizationGrid::estimate_points(double r, double zeta, int k) {
    const double spacing = zeta / (2.0 * std::sqrt(static_cast<double>(k)));
    const double J = std::floor((r + zeta / 2.0) / spacing + 1e-9);
    return std::pow(2.0 * J + 1.0, k);
}

QuantizationGrid build_grid(double r, double zeta, int k, std::size_t point_cap,
                            bool materialize) {
    if (!(r >= 0.0)) throw ConfigError("build_grid: need r >= 0");
    if (!(zeta > 0.0)) throw ConfigError("build_grid: need zeta > 0");
    if (k < 1 || k > 16) throw ConfigError("build_grid: dimension must be in [1, 16]");

    QuantizationGrid g;
    g.radius = r;
    g.zeta = zeta;
    g.dim = k;
    g.spacing = zeta / (2.0 * std::sqrt(static_cast<double>(k)));
    g.materialized = materialize;

    if (r == 0.0) {
        g.count_ = 1;
        if (materialize) g.points.assign(static_cast<std::size_t>(k), 0.0);
        return g;
    }

    const double est = QuantizationGrid::estimate_points(r, zeta, k);
    if (est > static_cast<double>(point_cap))
        throw WorkCapError("build_grid: estimated candidate count " + std::to_string(est) +
                               " exceeds cap " + std::to_string(point_cap),
                           est, static_cast<double>(point_cap));

    const auto J = static_cast<long long>(std::floor((r + zeta / 2.0) / g.spacing + 1e-9));
    const double keep2 = (r + zeta / 2.0) * (r + zeta / 2.0);
    const double r2 = r * r;

    std::vector<long long> c(k, -J);
    std::vector<double> p(k);
    if (materialize) g.points.reserve(static_cast<std::size_t>(est) * k / 2);
    while (true) {
        double n2 = 0.0;
        for (int i = 0; i < k; ++i) {
            p[i] = g.spacing * static_cast<double>(c[i]);
            n2 += p[i] * p[i];
        }
        if (n2 <= keep2) {
            ++g.count_;
            if (materialize) {
                if (n2 > r2) {
                    const double scale = r / std::sqrt(n2);
                    for (int i = 0; i < k; ++i) g.points.push_back(p[i] * scale);
                } else {
                    for (int i = 0; i < k; ++i) g.points.push_back(p[i]);
                }
            }
        }
        int pos = k - 1;
        while (pos >= 0 && c[pos] == J) c[pos--] = -J;
        if (pos < 0) break;
        ++c[pos];
    }
    return g;
}

double QuantizationGrid::min_dist_upper(const Eigen::VectorXd& b) const {
    if (b.size() != dim) throw ConfigError("min_dist_upper: dimension mismatch");
    if (radius == 0.0) return b.norm();
    const double keep2 = (radius + zeta / 2.0) * (radius + zeta / 2.0);
    const double r2 = radius * radius;
    std::vector<long long> base(dim);
    for (int i = 0; i < dim; ++i) base[i] = std::llround(b[i] / spacing);

    double best = kInf;
    std::vector<int> off(dim, -1);
    std::vector<double> p(dim);
    while (true) {
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            p[i] = spacing * static_cast<double>(base[i] + off[i]);
            n2 += p[i] * p[i];
        }
        if (n2 <= keep2) {
            double scale = 1.0;
            if (n2 > r2) scale = radius / std::sqrt(n2);
            double d2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                const double d = p[i] * scale - b[i];
                d2 += d * d;
            }
            best = std::min(best, d2);
        }
        int pos = dim - 1;
        while (pos >= 0 && off[pos] == 1) off[pos--] = -1;
        if (pos < 0) break;
        ++off[pos];
    }
    return best == kInf ? kInf : std::sqrt(best);
}

double QuantizationGrid::min_dist_exhaustive(const Eigen::VectorXd& b) const {
    if (!materialized) throw ConfigError("min_dist_exhaustive: grid not materialized");
    if (b.size() != dim) throw ConfigError("min_dist_exhaustive: dimension mismatch");
    double best = kInf;
    for (std::size_t i = 0; i < size(); ++i) {
        double d2 = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double d = points[i * dim + j] - b[j];
            d2 += d * d;
        }
        best = std::min(best, d2);
    }
    return best == kInf ? kInf : std::sqrt(best);
}

DecoderParams default_decoder_params(double sigma_a2, double sigma_z2) {
    if (!(sigma_a2 > 0.0) || sigma_z2 < 0.0)
        throw ConfigError("default_decoder_params: bad variances");
    DecoderParams p;
    p.epsilon = 0.1 * std::sqrt(sigma_z2 / sigma_a2);
    if (p.epsilon <= 0.0) p.epsilon = 0.1; // noiseless degenerate case
    p.zeta = p.epsilon;
    return p;
}

double rule_threshold(const DecoderParams& params, double sigma_a2, double sigma_z2) {
    if (!(params.epsilon > 0.0)) throw ConfigError("rule_threshold: need epsilon > 0");
    switch (params.rule) {
        case DecodeRule::fixed_k:
            return sigma_z2 + params.epsilon * params.epsilon * sigma_a2;
        case DecodeRule::growing_k:
            return (1.0 + params.epsilon) * sigma_z2 +
                   2.0 * params.epsilon * params.epsilon * sigma_a2;
    }
    return 0.0;
}

double residual_at(const Eigen::VectorXd& y, const Eigen::MatrixXd& a,
                   std::span<const int> subset, const Eigen::VectorXd& values) {
    if (static_cast<int>(subset.size()) != values.size())
        throw ConfigError("residual_at: |subset| != |values|");
    Eigen::VectorXd r = y;
    for (std::size_t j = 0; j < subset.size(); ++j) {
        const int s = subset[j];
        if (s < 1 || s > a.cols()) throw ConfigError("residual_at: index out of range");
        r -= values[static_cast<int>(j)] * a.col(s - 1);
    }
    return r.squaredNorm() / static_cast<double>(y.size());
}

DecodeResult distance_decode_k1(const Eigen::VectorXd& y, const MeasurementMatrix& mat,
                                const DecoderParams& params, double sigma_z2) {
    if (y.size() != mat.n()) throw ConfigError("distance_decode_k1: |y| != n");
    const int m = mat.m();
    const int n = mat.n();
    if (m < 1 || n < 1) throw ConfigError("distance_decode_k1: empty problem");
    const double nominal = 2.0 * m;
    if (nominal > params.work_cap)
        throw WorkCapError("distance_decode_k1: candidate count exceeds work cap", nominal,
                           params.work_cap);

    const double what = estimate_magnitude(y, mat.sigma_a2, sigma_z2);
    const double xi = params.threshold_override.value_or(
        rule_threshold(params, mat.sigma_a2, sigma_z2));

    const Eigen::VectorXd corr = mat.a.transpose() * y;
    const double yy = y.squaredNorm();

    int best_idx = -1;
    double best_res = kInf;
    double best_value = 0.0;
    bool best_sat = false;
    std::uint64_t satisfying = 0;

    for (int s = 0; s < m; ++s) {
        const double colsq = mat.a.col(s).squaredNorm();
        const double base = yy + what * what * colsq;
        const double res_pos = (base - 2.0 * what * corr[s]) / n;
        const double res_neg = (base + 2.0 * what * corr[s]) / n;
        const double res = std::min(res_pos, res_neg);
        const bool sat = res <= xi;
        if (sat) ++satisfying;
        // A satisfying index always outranks a non-satisfying one; within a
        // class, smaller residual wins and ties keep the smaller index.
        if ((sat && !best_sat) || (sat == best_sat && res < best_res)) {
            best_idx = s;
            best_res = res;
            best_value = res_pos <= res_neg ? what : -what;
            best_sat = sat;
        }
    }

    DecodeResult out;
    out.support = {best_idx + 1};
    out.witness = Eigen::VectorXd::Constant(1, best_value);
    out.residual = best_res;
    out.rule_satisfied = best_sat;
    out.ambiguous = satisfying != 1;
    out.satisfying_count = satisfying;
    out.candidates_examined = 2 * static_cast<std::uint64_t>(m);
    return out;
}

namespace {

/// Per-worker scan state for the k >= 2 distance decoder.
struct SetScanBest {
    double res = kInf; // unnormalized ||y - A_T v||^2
    std::vector<int> set;
    Eigen::VectorXd witness;
    bool valid() const { return !set.empty(); }
};

void consider(SetScanBest& best, double res, const std::vector<int>& set,
              const Eigen::VectorXd& witness) {
    if (res < best.res || (res == best.res && (!best.valid() || lex_less(set, best.set)))) {
        best.res = res;
        best.set = set;
        best.witness = witness;
    }
}

struct WorkerResult {
    SetScanBest best_sat;
    SetScanBest best_all;
    std::uint64_t satisfying = 0;
    std::uint64_t evals = 0;
};

} // namespace

DecodeResult distance_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat, int k,
                             const DecoderParams& params, double sigma_z2) {
    const int m = mat.m();
    const int n = mat.n();
    if (y.size() != n) throw ConfigError("distance_decode: |y| != n");
    if (k < 2) throw ConfigError("distance_decode: need k >= 2 (use distance_decode_k1)");
    if (k > m) throw ConfigError("distance_decode: need k <= m");

    const double what = estimate_magnitude(y, mat.sigma_a2, sigma_z2);
    const QuantizationGrid grid =
        build_grid(what + params.zeta / 2.0, params.zeta, k, params.grid_point_cap);

    const double ncombs = count_subsets(m, k);
    const double nominal = ncombs * static_cast<double>(grid.size());
    if (nominal > params.work_cap)
        throw WorkCapError("distance_decode: C(m,k) * |grid| = " + std::to_string(nominal) +
                               " rule evaluations exceed work cap " +
                               std::to_string(params.work_cap),
                           nominal, params.work_cap);
    const auto total_sets = static_cast<std::uint64_t>(ncombs);

    const double xi = params.threshold_override.value_or(
        rule_threshold(params, mat.sigma_a2, sigma_z2));
    const double xi_n = xi * n;

    const Eigen::VectorXd corr = mat.a.transpose() * y;
    Eigen::VectorXd colsq(m);
    for (int s = 0; s < m; ++s) colsq[s] = mat.a.col(s).squaredNorm();
    const double yy = y.squaredNorm();
    const double slack = 1e-9 * std::max(1.0, yy);

    const int workers = std::max(1, params.jobs);
    std::vector<WorkerResult> results(workers);

    parallel_for(static_cast<std::uint64_t>(workers), workers, [&](std::uint64_t w) {
        const std::uint64_t lo = total_sets * w / workers;
        const std::uint64_t hi = total_sets * (w + 1) / workers;
        if (lo >= hi) return;
        WorkerResult& acc = results[w];
        std::vector<int> idx = unrank_combination(lo, m, k);
        std::vector<int> set1(k);
        Eigen::MatrixXd gram(k, k);
        Eigen::VectorXd bt(k), v(k), witness(k);

        for (std::uint64_t r = lo; r < hi; ++r, next_combination(idx, m)) {
            for (int i = 0; i < k; ++i) {
                set1[i] = idx[i] + 1;
                bt[i] = corr[idx[i]];
                gram(i, i) = colsq[idx[i]];
                for (int j = 0; j < i; ++j) {
                    const double g = mat.a.col(idx[i]).dot(mat.a.col(idx[j]));
                    gram(i, j) = g;
                    gram(j, i) = g;
                }
            }
            // Continuous least squares lower-bounds every grid evaluation on
            // this set. A set whose bound exceeds the rule threshold cannot
            // satisfy it, and one whose bound strictly exceeds the running
            // minimum cannot beat or tie it, so both are skipped without
            // touching the grid; the final argmin and its lex tie-break are
            // unaffected for any worker partition.
            double lsres = 0.0;
            {
                Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
                v = ldlt.solve(bt);
                lsres = std::max(0.0, yy - bt.dot(v));
            }
            if (lsres > xi_n + slack && lsres > acc.best_all.res) continue;

            double set_min = kInf;
            const double* pt = grid.points.data();
            std::size_t best_pt = 0;
            for (std::size_t g = 0; g < grid.size(); ++g, pt += k) {
                double quad = yy;
                for (int i = 0; i < k; ++i) {
                    double gv = 0.0;
                    for (int j = 0; j < k; ++j) gv += gram(i, j) * pt[j];
                    quad += pt[i] * (gv - 2.0 * bt[i]);
                }
                if (quad < set_min) {
                    set_min = quad;
                    best_pt = g;
                }
            }
            acc.evals += grid.size();
            set_min = std::max(0.0, set_min);
            for (int i = 0; i < k; ++i) witness[i] = grid.points[best_pt * k + i];
            if (set_min <= xi_n) {
                ++acc.satisfying;
                consider(acc.best_sat, set_min, set1, witness);
            }
            consider(acc.best_all, set_min, set1, witness);
        }
    });

    WorkerResult merged;
    for (const auto& r : results) {
        merged.satisfying += r.satisfying;
        merged.evals += r.evals;
        if (r.best_sat.valid())
            consider(merged.best_sat, r.best_sat.res, r.best_sat.set, r.best_sat.witness);
        if (r.best_all.valid())
            consider(merged.best_all, r.best_all.res, r.best_all.set, r.best_all.witness);
    }

    DecodeResult out;
    out.satisfying_count = merged.satisfying;
    out.candidates_examined = merged.evals;
    out.ambiguous = merged.satisfying != 1;
    const SetScanBest& chosen = merged.satisfying >= 1 ? merged.best_sat : merged.best_all;
    out.rule_satisfied = merged.satisfying >= 1;
    out.support = chosen.set;
    out.witness = chosen.witness;
    // Report the directly computed residual of the chosen candidate; the
    // Gram-path value used during the scan cancels badly near exact fits.
    out.residual = residual_at(y, mat.a, out.support, out.witness);
    return out;
}

namespace {

/// Least-squares residual sum over columns for one support set, via the Gram
/// system. Falls back to column-pivoted QR when the Gram matrix is close to
/// singular.
double subset_ls_residual(const Eigen::MatrixXd& a, const std::vector<int>& idx0,
                          const std::vector<const Eigen::VectorXd*>& ys,
                          const Eigen::MatrixXd& corr, const Eigen::VectorXd& colsq) {
    const int k = static_cast<int>(idx0.size());
    Eigen::MatrixXd gram(k, k);
    for (int i = 0; i < k; ++i) {
        gram(i, i) = colsq[idx0[i]];
        for (int j = 0; j < i; ++j) {
            const double g = a.col(idx0[i]).dot(a.col(idx0[j]));
            gram(i, j) = g;
            gram(j, i) = g;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    double diag_min = kInf;
    for (int i = 0; i < k; ++i) diag_min = std::min(diag_min, std::abs(ldlt.vectorD()[i]));
    const double diag_scale = gram.diagonal().maxCoeff();
    if (!(diag_min > 1e-12 * std::max(1.0, diag_scale))) {
        // Near-singular subset: use QR on the actual columns.
        Eigen::MatrixXd at(a.rows(), k);
        for (int i = 0; i < k; ++i) at.col(i) = a.col(idx0[i]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
        double total = 0.0;
        for (const auto* y : ys) total += (*y - at * qr.solve(*y)).squaredNorm();
        return total;
    }
    double total = 0.0;
    Eigen::VectorXd bt(k);
    for (std::size_t c = 0; c < ys.size(); ++c) {
        for (int i = 0; i < k; ++i) bt[i] = corr(idx0[i], static_cast<int>(c));
        total += std::max(0.0, ys[c]->squaredNorm() - bt.dot(ldlt.solve(bt)));
    }
    return total;
}

} // namespace

DecodeResult ml_decode_mmv(const std::vector<Eigen::VectorXd>& ys, const MeasurementMatrix& mat,
                           int k, double subset_cap) {
    if (ys.empty()) throw ConfigError("ml_decode_mmv: need t >= 1 measurement vectors");
    const int m = mat.m();
    const int n = mat.n();
    for (const auto& y : ys)
        if (y.size() != n) throw ConfigError("ml_decode_mmv: |y| != n");
    if (k < 1 || k > m) throw ConfigError("ml_decode_mmv: need 1 <= k <= m");
    if (k > n) throw ConfigError("ml_decode_mmv: need k <= n");

    const double ncombs = count_subsets(m, k);
    if (ncombs > subset_cap)
        throw WorkCapError("ml_decode_mmv: C(m,k) = " + std::to_string(ncombs) +
                               " candidate sets exceed cap " + std::to_string(subset_cap),
                           ncombs, subset_cap);

    const int t = static_cast<int>(ys.size());
    Eigen::MatrixXd corr(m, t);
    std::vector<const Eigen::VectorXd*> yptrs(ys.size());
    for (int c = 0; c < t; ++c) {
        corr.col(c) = mat.a.transpose() * ys[c];
        yptrs[c] = &ys[c];
    }
    Eigen::VectorXd colsq(m);
    for (int s = 0; s < m; ++s) colsq[s] = mat.a.col(s).squaredNorm();

    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> best_set;
    double best = kInf;
    std::uint64_t examined = 0;
    do {
        const double res = subset_ls_residual(mat.a, idx, yptrs, corr, colsq);
        ++examined;
        if (res < best) {
            best = res;
            best_set = idx;
        }
    } while (next_combination(idx, m));

    DecodeResult out;
    out.candidates_examined = examined;
    out.satisfying_count = 1;
    out.rule_satisfied = true;
    out.support.resize(k);
    for (int i = 0; i < k; ++i) out.support[i] = best_set[i] + 1;
    // Re-solve the winning set directly; the Gram-path value used for the
    // ranking loses accuracy to cancellation when the fit is near-exact.
    Eigen::MatrixXd at(n, k);
    for (int i = 0; i < k; ++i) at.col(i) = mat.a.col(best_set[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
    double direct = 0.0;
    for (const auto* y : yptrs) {
        const Eigen::VectorXd v = qr.solve(*y);
        direct += (*y - at * v).squaredNorm();
        if (t == 1) out.witness = v;
    }
    out.residual = direct / (static_cast<double>(n) * t);
    return out;
}

DecodeResult ml_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat, int k,
                       double subset_cap) {
    return ml_decode_mmv({y}, mat, k, subset_cap);
}

DecodeResult omp_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat, int k) {
    const int m = mat.m();
    const int n = mat.n();
    if (y.size() != n) throw ConfigError("omp_decode: |y| != n");
    if (k < 1 || k > m) throw ConfigError("omp_decode: need 1 <= k <= m");
    if (k > n) throw ConfigError("omp_decode: need k <= n");

    DecodeResult out;
    std::vector<int> chosen0;
    std::vector<bool> used(m, false);
    Eigen::VectorXd resid = y;
    Eigen::MatrixXd at(n, k);

    for (int round = 0; round < k; ++round) {
        int pick = -1;
        double best = -1.0;
        for (int s = 0; s < m; ++s) {
            if (used[s]) continue;
            const double c = std::abs(mat.a.col(s).dot(resid));
            if (c > best) {
                best = c;
                pick = s;
            }
        }
        out.candidates_examined += static_cast<std::uint64_t>(m - round);
        used[pick] = true;
        chosen0.push_back(pick);
        at.col(round) = mat.a.col(pick);

        const auto cols = round + 1;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at.leftCols(cols));
        if (qr.rank() < cols) {
            out.failed = true;
            out.support.clear();
            out.residual = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
        const Eigen::VectorXd v = qr.solve(y);
        resid = y - at.leftCols(cols) * v;
        if (round == k - 1) {
            // Order witness values by sorted support.
            std::vector<int> order(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](int a_, int b_) { return chosen0[a_] < chosen0[b_]; });
            out.witness.resize(k);
            out.support.resize(k);
            for (int i = 0; i < k; ++i) {
                out.support[i] = chosen0[order[i]] + 1;
                out.witness[i] = v[order[i]];
            }
        }
    }
    out.residual = resid.squaredNorm() / n;
    out.rule_satisfied = true;
    out.satisfying_count = 1;
    return out;
}

} // namespace suprec
