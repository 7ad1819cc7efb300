#include "suprec/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "suprec/errors.hpp"

namespace suprec {

void validate_signal_values(const SignalValues& values) {
    if (values.w.size() < 1) throw ConfigError("signal values: need k >= 1 entries");
    for (int i = 0; i < values.w.size(); ++i) {
        if (values.w[i] == 0.0)
            throw ConfigError("signal values: entry " + std::to_string(i + 1) + " is zero");
    }
}

std::vector<int> SupportIndices::sorted() const {
    std::vector<int> out = idx;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> SparseSignal::support() const {
    std::vector<int> out;
    for (int i = 0; i < entries.size(); ++i)
        if (entries[i] != 0.0) out.push_back(i + 1);
    return out;
}

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::laplace: return "laplace";
        case NoiseKind::rademacher: return "rademacher";
    }
    return "?";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "uniform") return NoiseKind::uniform;
    if (name == "laplace") return NoiseKind::laplace;
    if (name == "rademacher") return NoiseKind::rademacher;
    throw ConfigError("unknown noise kind: " + name);
}

SupportIndices draw_support(int m, int k, Rng& rng) {
    if (k < 1 || m < 1 || k > m)
        throw ConfigError("draw_support: need 1 <= k <= m, got k=" + std::to_string(k) +
                          " m=" + std::to_string(m));
    // Partial Fisher-Yates: the first k slots are a uniform ordered draw
    // without replacement, so the unordered set is uniform over all C(m,k)
    // subsets.
    std::vector<int> pool(m);
    std::iota(pool.begin(), pool.end(), 1);
    SupportIndices s;
    s.m = m;
    s.idx.resize(k);
    for (int j = 0; j < k; ++j) {
        const auto span = static_cast<std::uint64_t>(m - j);
        const auto pick = static_cast<int>(rng.next_u64() % span);
        std::swap(pool[j], pool[j + pick]);
        s.idx[j] = pool[j];
    }
    return s;
}

SparseSignal assemble_signal(const SignalValues& values, const SupportIndices& support, int m) {
    validate_signal_values(values);
    if (values.k() != support.k())
        throw ConfigError("assemble_signal: |w| != |S|");
    SparseSignal x;
    x.entries = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < support.k(); ++j) {
        const int s = support.idx[j];
        if (s < 1 || s > m) throw ConfigError("assemble_signal: index out of range");
        if (x.entries[s - 1] != 0.0) throw ConfigError("assemble_signal: duplicate index");
        x.entries[s - 1] = values.w[j];
    }
    return x;
}

MeasurementMatrix draw_matrix(int n, int m, double sigma_a2, Rng& rng) {
    if (n < 1 || m < 1) throw ConfigError("draw_matrix: need n >= 1 and m >= 1");
    if (!(sigma_a2 > 0.0)) throw ConfigError("draw_matrix: sigma_a2 must be positive");
    MeasurementMatrix mat;
    mat.sigma_a2 = sigma_a2;
    mat.a.resize(n, m);
    const double sd = std::sqrt(sigma_a2);
    // Column-major fill; one stream draws the whole matrix.
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) mat.a(i, j) = sd * rng.gaussian();
    return mat;
}

double power_ratio(const MeasurementMatrix& mat) {
    const double nm = static_cast<double>(mat.n()) * static_cast<double>(mat.m());
    return mat.a.squaredNorm() / (nm * mat.sigma_a2);
}

double draw_noise(const NoiseModel& noise, Rng& rng) {
    const double sd = std::sqrt(noise.sigma_z2);
    switch (noise.kind) {
        case NoiseKind::gaussian:
            return sd * rng.gaussian();
        case NoiseKind::uniform:
            // [-sqrt(3) sd, sqrt(3) sd] has variance sd^2.
            return sd * 1.7320508075688772 * (2.0 * rng.uniform01() - 1.0);
        case NoiseKind::laplace: {
            // Scale sd/sqrt(2) gives variance sd^2.
            const double u = rng.uniform_open01();
            const double b = sd / 1.4142135623730951;
            return u <= 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u) + 1e-300);
        }
        case NoiseKind::rademacher:
            return (rng.next_u64() & 1u) ? sd : -sd;
    }
    return 0.0;
}

Eigen::VectorXd measure(const MeasurementMatrix& mat, const SparseSignal& x,
                        const NoiseModel& noise, Rng& rng) {
    if (x.m() != mat.m())
        throw ConfigError("measure: signal dimension != matrix columns");
    if (noise.sigma_z2 < 0.0) throw ConfigError("measure: negative noise variance");
    Eigen::VectorXd y = mat.a * x.entries;
    if (noise.sigma_z2 > 0.0)
        for (int i = 0; i < y.size(); ++i) y[i] += draw_noise(noise, rng);
    return y;
}

std::vector<Eigen::VectorXd> measure_mmv(const MeasurementMatrix& mat,
                                         const std::vector<SparseSignal>& xs,
                                         const NoiseModel& noise, Rng& rng) {
    if (xs.empty()) throw ConfigError("measure_mmv: need t >= 1 signals");
    const std::vector<int> common = xs.front().support();
    for (const auto& x : xs)
        if (x.support() != common) throw ConfigError("measure_mmv: supports differ across signals");
    std::vector<Eigen::VectorXd> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(measure(mat, x, noise, rng));
    return ys;
}

SignalValues ActivityModel::draw(Rng& rng) const {
    SignalValues v;
    switch (kind) {
        case Kind::deterministic:
            v.w = w0;
            break;
        case Kind::uniform_iid: {
            v.w.resize(k);
            for (int i = 0; i < k; ++i) {
                double x = lo + (hi - lo) * rng.uniform01();
                while (x == 0.0) x = lo + (hi - lo) * rng.uniform01();
                v.w[i] = x;
            }
            break;
        }
        case Kind::gaussian_iid: {
            v.w.resize(k);
            for (int i = 0; i < k; ++i) {
                double x = mean + sd * rng.gaussian();
                while (x == 0.0) x = mean + sd * rng.gaussian();
                v.w[i] = x;
            }
            break;
        }
    }
    validate_signal_values(v);
    return v;
}

} // namespace suprec
