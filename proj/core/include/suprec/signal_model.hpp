#pragma once

#include <Eigen/Dense>

#include <vector>

#include "suprec/rng.hpp"

namespace suprec {

/// Nonzero amplitudes w_1..w_k of a sparse signal.
struct SignalValues {
    Eigen::VectorXd w;

    int k() const { return static_cast<int>(w.size()); }
    double min_abs() const { return w.cwiseAbs().minCoeff(); }
    double max_abs() const { return w.cwiseAbs().maxCoeff(); }
    double norm() const { return w.norm(); }
};

/// Throws ConfigError unless k >= 1 and every entry is nonzero.
void validate_signal_values(const SignalValues& values);

/// k distinct positions in [1, m]; order records the pairing with w.
struct SupportIndices {
    std::vector<int> idx; // 1-based
    int m = 0;

    int k() const { return static_cast<int>(idx.size()); }
    std::vector<int> sorted() const;
};

/// Dense length-m signal with exactly k nonzero entries.
struct SparseSignal {
    Eigen::VectorXd entries;

    int m() const { return static_cast<int>(entries.size()); }
    std::vector<int> support() const; // sorted, 1-based
};

struct MeasurementMatrix {
    Eigen::MatrixXd a;
    double sigma_a2 = 1.0;

    int n() const { return static_cast<int>(a.rows()); }
    int m() const { return static_cast<int>(a.cols()); }
};

enum class NoiseKind { gaussian, uniform, laplace, rademacher };

const char* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Additive noise with per-sample variance exactly sigma_z2, for every kind.
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma_z2 = 1.0;
};

/// Uniformly random size-k subset of [m], as an ordered draw without
/// replacement.
SupportIndices draw_support(int m, int k, Rng& rng);

/// Places w_j at position S_j; all other entries are exactly zero.
SparseSignal assemble_signal(const SignalValues& values, const SupportIndices& support, int m);

/// n x m matrix with i.i.d. N(0, sigma_a2) entries.
MeasurementMatrix draw_matrix(int n, int m, double sigma_a2, Rng& rng);

/// ||A||_F^2 / (n * m * sigma_a2); concentrates at 1 for large n*m.
double power_ratio(const MeasurementMatrix& mat);

/// One sample of the given noise model.
double draw_noise(const NoiseModel& noise, Rng& rng);

/// y = A x + z.
Eigen::VectorXd measure(const MeasurementMatrix& mat, const SparseSignal& x,
                        const NoiseModel& noise, Rng& rng);

/// Independent measurements of t signals sharing one support through the same
/// matrix. t == 1 reproduces measure() exactly for the same rng stream.
std::vector<Eigen::VectorXd> measure_mmv(const MeasurementMatrix& mat,
                                         const std::vector<SparseSignal>& xs,
                                         const NoiseModel& noise, Rng& rng);

/// Distribution over signal value vectors, used for random-activity runs.
struct ActivityModel {
    enum class Kind { deterministic, uniform_iid, gaussian_iid };

    Kind kind = Kind::deterministic;
    Eigen::VectorXd w0;          // deterministic
    int k = 1;                   // uniform_iid / gaussian_iid
    double lo = 0.5, hi = 1.5;   // uniform_iid
    double mean = 0.0, sd = 1.0; // gaussian_iid (unbounded support)

    /// Whether the distribution has bounded support.
    bool bounded() const { return kind != Kind::gaussian_iid; }

    int dim() const { return kind == Kind::deterministic ? static_cast<int>(w0.size()) : k; }

    SignalValues draw(Rng& rng) const;
};

} // namespace suprec
