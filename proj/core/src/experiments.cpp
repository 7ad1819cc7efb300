#include "suprec/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "suprec/errors.hpp"
#include "suprec/parallel.hpp"
#include "suprec/thresholds.hpp"

namespace suprec {

const char* to_string(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::distance_k1: return "distance_k1";
        case DecoderKind::distance: return "distance";
        case DecoderKind::ml: return "ml";
        case DecoderKind::omp: return "omp";
    }
    return "?";
}

DecoderKind decoder_kind_from_string(const std::string& name) {
    if (name == "distance_k1") return DecoderKind::distance_k1;
    if (name == "distance") return DecoderKind::distance;
    if (name == "ml") return DecoderKind::ml;
    if (name == "omp") return DecoderKind::omp;
    throw ConfigError("unknown decoder: " + name);
}

void validate_trial_config(const TrialConfig& cfg) {
    const auto& mc = cfg.model;
    if (mc.m < 1 || mc.n < 1) throw ConfigError("trial config: need m >= 1 and n >= 1");
    if (mc.k < 1 || mc.k > mc.m) throw ConfigError("trial config: need 1 <= k <= m");
    if (!(mc.sigma_a2 > 0.0)) throw ConfigError("trial config: sigma_a2 must be positive");
    if (mc.sigma_z2 < 0.0) throw ConfigError("trial config: sigma_z2 must be nonnegative");
    if (cfg.w.has_value() == cfg.activity.has_value())
        throw ConfigError("trial config: provide exactly one of fixed w / activity model");
    const int k_values = cfg.w ? cfg.w->k() : cfg.activity->dim();
    if (k_values != mc.k) throw ConfigError("trial config: |w| != k");
    if (cfg.w) validate_signal_values(*cfg.w);
    switch (cfg.decoder) {
        case DecoderKind::distance_k1:
            if (mc.k != 1) throw ConfigError("trial config: distance_k1 needs k = 1");
            break;
        case DecoderKind::distance:
            if (mc.k < 2) throw ConfigError("trial config: distance decoder needs k >= 2");
            break;
        case DecoderKind::ml:
        case DecoderKind::omp:
            if (mc.n < mc.k) throw ConfigError("trial config: ml/omp need n >= k");
            break;
    }
}

namespace {

// Reserved trial index for the shared matrix in MatrixMode::fixed. Trial
// streams use (index << 8), so real trials never collide with it.
constexpr std::uint64_t kFixedMatrixTrial = ~std::uint64_t{0} >> 9;

SignalValues trial_values(const TrialConfig& cfg, std::uint64_t trial_index) {
    if (cfg.w) return *cfg.w;
    Rng rng(cfg.seed, trial_stream(trial_index, stream_purpose::values));
    return cfg.activity->draw(rng);
}

} // namespace

TrialData make_trial_data(const TrialConfig& cfg, std::uint64_t trial_index) {
    const auto& mc = cfg.model;
    TrialData data;

    Rng sup_rng(cfg.seed, trial_stream(trial_index, stream_purpose::support));
    const SupportIndices support = draw_support(mc.m, mc.k, sup_rng);

    const std::uint64_t matrix_trial =
        cfg.matrix_mode == MatrixMode::fixed ? kFixedMatrixTrial : trial_index;
    Rng mat_rng(cfg.seed, trial_stream(matrix_trial, stream_purpose::matrix));
    data.matrix = draw_matrix(mc.n, mc.m, mc.sigma_a2, mat_rng);

    const SignalValues values = trial_values(cfg, trial_index);
    data.signal = assemble_signal(values, support, mc.m);

    Rng noise_rng(cfg.seed, trial_stream(trial_index, stream_purpose::noise0));
    data.y = measure(data.matrix, data.signal, {mc.noise, mc.sigma_z2}, noise_rng);

    data.planted = support.sorted();
    return data;
}

TrialResult run_trial_with(const TrialConfig& cfg, std::uint64_t trial_index,
                           const DecodeFn& decode) {
    validate_trial_config(cfg);
    TrialData data = make_trial_data(cfg, trial_index);
    TrialResult out;
    out.planted = data.planted;
    try {
        out.decode = decode(data.y, data.matrix, cfg);
    } catch (const WorkCapError& e) {
        out.outcome = TrialOutcome::refusal;
        out.refusal_reason = e.what();
        return out;
    }
    const bool ok = !out.decode.failed && out.decode.support == out.planted;
    out.outcome = ok ? TrialOutcome::success : TrialOutcome::failure;
    return out;
}

namespace {

DecodeResult dispatch_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat,
                             const TrialConfig& cfg) {
    switch (cfg.decoder) {
        case DecoderKind::distance_k1:
            return distance_decode_k1(y, mat, cfg.params, cfg.model.sigma_z2);
        case DecoderKind::distance:
            return distance_decode(y, mat, cfg.model.k, cfg.params, cfg.model.sigma_z2);
        case DecoderKind::ml:
            return ml_decode(y, mat, cfg.model.k);
        case DecoderKind::omp:
            return omp_decode(y, mat, cfg.model.k);
    }
    throw ConfigError("unknown decoder kind");
}

} // namespace

TrialResult run_trial(const TrialConfig& cfg, std::uint64_t trial_index) {
    return run_trial_with(cfg, trial_index, dispatch_decode);
}

ErrorEstimate run_trials_with(const TrialConfig& cfg, std::uint64_t trials, int jobs,
                              const DecodeFn& decode) {
    validate_trial_config(cfg);
    if (trials < 1) throw ConfigError("need trials >= 1");

    // Outcomes land in a per-trial slot; aggregation below is sequential, so
    // the result does not depend on the worker count.
    std::vector<unsigned char> outcomes(trials);
    parallel_for(trials, jobs, [&](std::uint64_t t) {
        outcomes[t] = static_cast<unsigned char>(run_trial_with(cfg, t, decode).outcome);
    });

    ErrorEstimate est;
    est.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        switch (static_cast<TrialOutcome>(outcomes[t])) {
            case TrialOutcome::success: ++est.successes; break;
            case TrialOutcome::failure: ++est.failures; break;
            case TrialOutcome::refusal: ++est.refusals; break;
        }
    }
    est.pe = {est.failures, est.successes + est.failures};
    return est;
}

ErrorEstimate estimate_error_prob(const TrialConfig& cfg, std::uint64_t trials, int jobs) {
    return run_trials_with(cfg, trials, jobs, dispatch_decode);
}

std::vector<SweepPoint> points_from_rate(const std::vector<int>& m_values, double rate) {
    if (!(rate > 0.0)) throw ConfigError("points_from_rate: need rate > 0");
    std::vector<SweepPoint> pts;
    pts.reserve(m_values.size());
    for (int m : m_values) {
        if (m < 2) throw ConfigError("points_from_rate: need m >= 2");
        pts.push_back({m, static_cast<int>(ceil_tol(std::log2(static_cast<double>(m)) / rate))});
    }
    return pts;
}

SweepResult sweep_phase_transition(const SweepSpec& spec, int jobs) {
    if (spec.points.empty()) throw ConfigError("sweep: need at least one point");
    if (spec.trials < 1) throw ConfigError("sweep: need trials >= 1");

    SweepResult out;
    out.rows.reserve(spec.points.size());
    for (const SweepPoint& pt : spec.points) {
        TrialConfig cfg = spec.base;
        cfg.model.m = pt.m;
        cfg.model.n = pt.n;
        const ErrorEstimate est = estimate_error_prob(cfg, spec.trials, jobs);

        SweepRow row;
        row.m = pt.m;
        row.n = pt.n;
        row.rate_bits = std::log2(static_cast<double>(pt.m)) / pt.n;
        row.c_w_bits = cfg.w
                           ? c_of_w(*cfg.w, cfg.model.sigma_a2, cfg.model.sigma_z2).bits
                           : std::numeric_limits<double>::quiet_NaN();
        row.pe = est.pe.p();
        row.ci_lo = est.pe.ci_lo();
        row.ci_hi = est.pe.ci_hi();
        row.trials = spec.trials;
        row.refusals = est.refusals;
        row.decoder = to_string(cfg.decoder);
        row.seed = cfg.seed;
        out.rows.push_back(std::move(row));
    }
    return out;
}

OutageReport run_outage_experiment(const ActivityModel& activity, TrialConfig cfg, double rate,
                                   std::uint64_t trials, int jobs,
                                   std::uint64_t outage_trials) {
    if (!activity.bounded())
        throw ConfigError("run_outage_experiment: activity must have bounded support");
    if (!(rate > 0.0)) throw ConfigError("run_outage_experiment: need rate > 0");
    cfg.w.reset();
    cfg.activity = activity;
    cfg.model.n =
        static_cast<int>(ceil_tol(std::log2(static_cast<double>(cfg.model.m)) / rate));

    OutageReport report;
    report.rate = rate;
    report.n_used = cfg.model.n;
    report.empirical = estimate_error_prob(cfg, trials, jobs);
    report.outage = outage_probability(activity, cfg.model.sigma_a2, cfg.model.sigma_z2, rate,
                                       outage_trials, cfg.seed, jobs)
                        .prob;
    return report;
}

ErrorEstimate run_mmv_trials(int t, const TrialConfig& cfg, std::uint64_t trials, int jobs) {
    if (t < 1) throw ConfigError("run_mmv_trials: need t >= 1");
    if (t > 200) throw ConfigError("run_mmv_trials: t too large (max 200)");
    validate_trial_config(cfg);
    if (cfg.decoder != DecoderKind::ml)
        throw ConfigError("run_mmv_trials: only the ml decoder is supported");
    if (trials < 1) throw ConfigError("need trials >= 1");

    std::vector<unsigned char> outcomes(trials);
    parallel_for(trials, jobs, [&](std::uint64_t trial) {
        const auto& mc = cfg.model;
        Rng sup_rng(cfg.seed, trial_stream(trial, stream_purpose::support));
        const SupportIndices support = draw_support(mc.m, mc.k, sup_rng);

        const std::uint64_t matrix_trial =
            cfg.matrix_mode == MatrixMode::fixed ? kFixedMatrixTrial : trial;
        Rng mat_rng(cfg.seed, trial_stream(matrix_trial, stream_purpose::matrix));
        const MeasurementMatrix mat = draw_matrix(mc.n, mc.m, mc.sigma_a2, mat_rng);

        const SignalValues values = trial_values(cfg, trial);
        const SparseSignal x = assemble_signal(values, support, mc.m);

        // Column j draws noise from its own substream; column 0 matches the
        // single-vector pipeline, so t = 1 reproduces it exactly.
        std::vector<Eigen::VectorXd> ys;
        ys.reserve(static_cast<std::size_t>(t));
        for (int j = 0; j < t; ++j) {
            Rng noise_rng(cfg.seed, trial_stream(trial, stream_purpose::noise0 + j));
            ys.push_back(measure(mat, x, {mc.noise, mc.sigma_z2}, noise_rng));
        }

        TrialOutcome outcome = TrialOutcome::failure;
        try {
            const DecodeResult dec = ml_decode_mmv(ys, mat, mc.k);
            outcome = (!dec.failed && dec.support == support.sorted()) ? TrialOutcome::success
                                                                       : TrialOutcome::failure;
        } catch (const WorkCapError&) {
            outcome = TrialOutcome::refusal;
        }
        outcomes[trial] = static_cast<unsigned char>(outcome);
    });

    ErrorEstimate est;
    est.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        switch (static_cast<TrialOutcome>(outcomes[i])) {
            case TrialOutcome::success: ++est.successes; break;
            case TrialOutcome::failure: ++est.failures; break;
            case TrialOutcome::refusal: ++est.refusals; break;
        }
    }
    est.pe = {est.failures, est.successes + est.failures};
    return est;
}

} // namespace suprec
