#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "suprec/decoders.hpp"
#include "suprec/signal_model.hpp"
#include "suprec/stats.hpp"

namespace suprec {

enum class DecoderKind { distance_k1, distance, ml, omp };

const char* to_string(DecoderKind kind);
DecoderKind decoder_kind_from_string(const std::string& name);

enum class MatrixMode { redraw, fixed };

struct ModelConfig {
    int m = 0;
    int n = 0;
    int k = 1;
    double sigma_a2 = 1.0;
    double sigma_z2 = 1.0;
    NoiseKind noise = NoiseKind::gaussian;
};

/// Complete parameterization of one Monte Carlo experiment.
struct TrialConfig {
    ModelConfig model;
    std::optional<SignalValues> w;        // fixed values, or
    std::optional<ActivityModel> activity; // random activity per trial
    DecoderKind decoder = DecoderKind::distance_k1;
    DecoderParams params;
    MatrixMode matrix_mode = MatrixMode::redraw;
    std::uint64_t seed = 0;
};

void validate_trial_config(const TrialConfig& cfg);

enum class TrialOutcome { success, failure, refusal };

struct TrialResult {
    TrialOutcome outcome = TrialOutcome::failure;
    std::vector<int> planted; // sorted, 1-based
    DecodeResult decode;      // empty decode on refusal
    std::string refusal_reason;
};

/// Everything a trial draws before decoding. One substream per draw purpose,
/// keyed by (seed, trial index), so outcomes depend only on those two values.
struct TrialData {
    MeasurementMatrix matrix;
    SparseSignal signal;
    Eigen::VectorXd y;
    std::vector<int> planted; // sorted
};

TrialData make_trial_data(const TrialConfig& cfg, std::uint64_t trial_index);

using DecodeFn =
    std::function<DecodeResult(const Eigen::VectorXd& y, const MeasurementMatrix& mat,
                               const TrialConfig& cfg)>;

/// Runs one trial with the configured decoder. The decoder sees a fresh
/// support, matrix (unless MatrixMode::fixed) and noise; success means the
/// recovered set equals the planted one exactly. Work-cap refusals are a
/// separate outcome, never counted as decoding failures.
TrialResult run_trial(const TrialConfig& cfg, std::uint64_t trial_index);

/// run_trial with the decode step replaced; used by tests to inject stubs.
TrialResult run_trial_with(const TrialConfig& cfg, std::uint64_t trial_index,
                           const DecodeFn& decode);

struct ErrorEstimate {
    Proportion pe; // failures over decided (non-refused) trials
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
    std::uint64_t refusals = 0;
    std::uint64_t trials = 0;

    bool has_data() const { return successes + failures > 0; }
};

ErrorEstimate estimate_error_prob(const TrialConfig& cfg, std::uint64_t trials, int jobs = 0);

ErrorEstimate run_trials_with(const TrialConfig& cfg, std::uint64_t trials, int jobs,
                              const DecodeFn& decode);

struct SweepPoint {
    int m = 0;
    int n = 0;
};

/// Grid for a phase-transition study: explicit (m, n) points, or m values
/// paired with a fixed rate log2(m)/n.
struct SweepSpec {
    TrialConfig base;              // model.m / model.n overridden per point
    std::vector<SweepPoint> points;
    std::uint64_t trials = 1;
};

/// Expands {m_values, rate} into explicit points: n = ceil(log2(m) / rate).
std::vector<SweepPoint> points_from_rate(const std::vector<int>& m_values, double rate);

struct SweepRow {
    int m = 0;
    int n = 0;
    double rate_bits = 0.0;
    double c_w_bits = 0.0; // NaN when the signal values are random
    double pe = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t refusals = 0;
    std::string decoder;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

SweepResult sweep_phase_transition(const SweepSpec& spec, int jobs = 0);

struct OutageReport {
    ErrorEstimate empirical;  // failure rate of the full pipeline
    Proportion outage;        // Monte Carlo estimate of P{ c(W) <= rate }
    double rate = 0.0;
    int n_used = 0;
};

/// Draws W per trial, measures at n = ceil(log2(m)/rate), decodes, and
/// reports the empirical failure rate next to the outage probability
/// estimate. The two are reported side by side, not asserted against each
/// other.
OutageReport run_outage_experiment(const ActivityModel& activity, TrialConfig cfg, double rate,
                                   std::uint64_t trials, int jobs = 0,
                                   std::uint64_t outage_trials = 100000);

/// Joint-support recovery over t measurement vectors with the summed
/// least-squares decoder. t = 1 reproduces estimate_error_prob with the ml
/// decoder exactly (same seed).
ErrorEstimate run_mmv_trials(int t, const TrialConfig& cfg, std::uint64_t trials, int jobs = 0);

} // namespace suprec
