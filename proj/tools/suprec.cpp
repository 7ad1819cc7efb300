// suprec - sparse support recovery simulator and threshold calculator.
//
// Subcommands: threshold, decode, sweep, validate-bounds, outage.
// Exit codes: 0 success, 2 config/usage error, 3 work-cap refusal,
// 4 bound violation (validate-bounds only).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "suprec/decoders.hpp"
#include "suprec/errors.hpp"
#include "suprec/experiments.hpp"
#include "suprec/report.hpp"
#include "suprec/tail_bounds.hpp"
#include "suprec/thresholds.hpp"
#include "suprec/version.hpp"

using nlohmann::json;
using namespace suprec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitWorkCap = 3;
constexpr int kExitBoundViolation = 4;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Seed precedence: SUPREC_SEED env var, then --seed flag, then the value
/// carried by the spec file. Returns the seed and its provenance.
std::pair<std::uint64_t, std::string> resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                                                   std::uint64_t spec_seed) {
    if (const char* env = std::getenv("SUPREC_SEED")) {
        return {std::strtoull(env, nullptr, 10), "env"};
    }
    if (flag_seed) return {*flag_seed, "flag"};
    return {spec_seed, "spec"};
}

SignalValues values_from_vector(const std::vector<double>& raw) {
    if (raw.empty()) throw ConfigError("--w must contain at least one value");
    SignalValues w;
    w.w = Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<int>(raw.size()));
    validate_signal_values(w);
    return w;
}

// ---------------------------------------------------------------- threshold

struct ThresholdArgs {
    std::vector<double> w;
    double sigma_a2 = 1.0, sigma_z2 = 1.0;
    std::optional<int> m, k;
    std::optional<double> wmin, wmax, margin;
    std::string growth;
    bool as_json = false;
};

int cmd_threshold(const ThresholdArgs& args) {
    const SignalValues w = values_from_vector(args.w);
    const RateThreshold c = c_of_w(w, args.sigma_a2, args.sigma_z2);

    json out;
    out["c_w_bits"] = c.bits;
    out["argmin_subset"] = c.argmin_subset;

    if (args.m && args.margin)
        out["achievable_n"] = achievable_n(*args.m, w, args.sigma_a2, args.sigma_z2, *args.margin);
    if (args.m && args.k && args.wmin)
        out["sufficient_n"] =
            sufficient_n_growing(*args.m, *args.k, *args.wmin, args.sigma_a2, args.sigma_z2);
    if (args.m && args.k && args.wmax)
        out["necessary_n"] =
            necessary_n_growing(*args.m, *args.k, *args.wmax, args.sigma_a2, args.sigma_z2);
    if (!args.growth.empty()) {
        const RegimeTag tag = classify_regime(args.growth);
        out["regime"] = {{"classified", tag.classified},
                         {"label", tag.label},
                         {"sufficient_order", tag.sufficient_order}};
    }

    if (args.as_json) {
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "c(w) = " << format_double(c.bits) << " bits/measurement, argmin subset {";
    for (std::size_t i = 0; i < c.argmin_subset.size(); ++i)
        std::cout << (i ? "," : "") << c.argmin_subset[i];
    std::cout << "}\n";
    if (out.contains("achievable_n"))
        std::cout << "achievable n (margin " << format_double(*args.margin)
                  << "): " << out["achievable_n"].get<long long>() << "\n";
    if (out.contains("sufficient_n"))
        std::cout << "sufficient n (growing k, asymptotic guidance): "
                  << out["sufficient_n"].get<long long>() << "\n";
    if (out.contains("necessary_n"))
        std::cout << "necessarily insufficient up to n (asymptotic guidance): "
                  << out["necessary_n"].get<long long>() << "\n";
    if (out.contains("regime")) {
        if (out["regime"]["classified"].get<bool>())
            std::cout << "regime " << out["regime"]["label"].get<std::string>()
                      << ": sufficient n = " << out["regime"]["sufficient_order"].get<std::string>()
                      << "\n";
        else
            std::cout << "regime: unclassified\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------------- decode

struct DecodeArgs {
    std::string instance_path;
    std::string decoder = "distance";
    std::optional<double> threshold;
    std::optional<double> work_cap;
};

int cmd_decode(const DecodeArgs& args) {
    json inst;
    try {
        inst = json::parse(read_text_file(args.instance_path));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("instance file: invalid JSON: ") + e.what());
    }

    int m, n, k;
    double sigma_a2, sigma_z2;
    std::vector<double> a_flat, y_raw;
    DecoderParams params;
    try {
        m = inst.at("m").get<int>();
        n = inst.at("n").get<int>();
        k = inst.at("k").get<int>();
        sigma_a2 = inst.at("sigma_a2").get<double>();
        sigma_z2 = inst.at("sigma_z2").get<double>();
        a_flat = inst.at("A").get<std::vector<double>>();
        y_raw = inst.at("y").get<std::vector<double>>();
        params = default_decoder_params(sigma_a2, sigma_z2);
        if (inst.contains("params")) {
            const json& p = inst["params"];
            if (p.contains("epsilon")) params.epsilon = p["epsilon"].get<double>();
            if (p.contains("zeta")) params.zeta = p["zeta"].get<double>();
            if (p.contains("rule"))
                params.rule = p["rule"].get<std::string>() == "growing_k" ? DecodeRule::growing_k
                                                                          : DecodeRule::fixed_k;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("instance file: ") + e.what());
    }
    if (m < 1 || n < 1) throw ConfigError("instance file: need m >= 1 and n >= 1");
    if (k < 1 || k > m) throw ConfigError("instance file: k out of range [1, m]");
    if (static_cast<int>(a_flat.size()) != n * m)
        throw ConfigError("instance file: |A| != n*m");
    if (static_cast<int>(y_raw.size()) != n) throw ConfigError("instance file: |y| != n");
    if (args.threshold) params.threshold_override = *args.threshold;
    if (args.work_cap) params.work_cap = *args.work_cap;

    MeasurementMatrix mat;
    mat.sigma_a2 = sigma_a2;
    mat.a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(a_flat.data(), n, m);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_raw.data(), n);

    DecodeResult res;
    if (args.decoder == "distance")
        res = k == 1 ? distance_decode_k1(y, mat, params, sigma_z2)
                     : distance_decode(y, mat, k, params, sigma_z2);
    else if (args.decoder == "ml")
        res = ml_decode(y, mat, k);
    else if (args.decoder == "omp")
        res = omp_decode(y, mat, k);
    else
        throw ConfigError("unknown decoder: " + args.decoder);

    json out;
    out["decoder"] = args.decoder;
    out["support"] = res.support;
    out["failed"] = res.failed;
    out["ambiguous"] = res.ambiguous;
    out["rule_satisfied"] = res.rule_satisfied;
    out["residual"] = res.residual;
    out["witness"] = std::vector<double>(res.witness.data(), res.witness.data() + res.witness.size());
    out["candidates_examined"] = res.candidates_examined;
    out["satisfying_count"] = res.satisfying_count;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string spec_path;
    std::string manifest_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
};

int cmd_sweep(const SweepArgs& args) {
    if (args.spec_path.empty() == args.manifest_path.empty())
        throw ConfigError("sweep: provide exactly one of --spec / --manifest");

    SweepSpec spec = args.spec_path.empty() ? spec_from_manifest(read_text_file(args.manifest_path))
                                            : parse_sweep_spec(read_text_file(args.spec_path));
    const auto [seed, seed_source] = resolve_seed(args.seed, spec.base.seed);
    spec.base.seed = seed;

    const SweepResult result = sweep_phase_transition(spec, args.jobs);

    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    const auto dir = std::filesystem::path(args.out_dir);
    write_text_file((dir / "results.csv").string(), to_csv(result));
    write_text_file((dir / "manifest.json").string(),
                    make_manifest("sweep", spec, seed_source, utc_timestamp()));
    std::cout << "wrote " << (dir / "results.csv").string() << " (" << result.rows.size()
              << " rows), manifest.json\n";
    return kExitOk;
}

// ----------------------------------------------------------- validate-bounds

struct ValidateArgs {
    std::vector<int> n_list = {10, 50, 200};
    std::vector<double> ratio_list = {1.5, 2.0, 4.0};
    std::vector<double> sigma_v2_list = {0.5, 1.0, 2.0};
    std::vector<std::string> profiles = {"constant", "linear_ramp", "alternating"};
    double alpha = 1.0;
    double beta = 0.125;
    std::uint64_t trials = 20000;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    bool as_json = false;
};

UProfile profile_from_string(const std::string& name) {
    if (name == "constant") return UProfile::constant;
    if (name == "linear_ramp") return UProfile::linear_ramp;
    if (name == "alternating") return UProfile::alternating;
    throw ConfigError("unknown u profile: " + name);
}

int cmd_validate_bounds(const ValidateArgs& args) {
    const auto [seed, seed_source] = resolve_seed(args.seed, 0);
    bool any_violation = false;
    json rows = json::array();

    if (!args.as_json)
        std::printf("%6s %6s %9s %12s %12s %12s  %s\n", "n", "ratio", "sigma_v2", "profile",
                    "bound", "empirical", "verdict");
    for (int n : args.n_list) {
        for (double ratio : args.ratio_list) {
            if (!(ratio > 1.0)) throw ConfigError("ratio must exceed 1 (gamma < alpha - beta)");
            for (double sv2 : args.sigma_v2_list) {
                for (const std::string& pname : args.profiles) {
                    TailQuery q;
                    q.n = n;
                    q.alpha = args.alpha;
                    q.beta = args.beta;
                    q.gamma = (args.alpha - args.beta) / ratio;
                    q.sigma_v2 = sv2;
                    const TailEstimate est =
                        empirical_tail(q, profile_from_string(pname), args.trials, seed, args.jobs);
                    const double emp = est.prob.p();
                    const bool ok = emp <= est.bound + 3.0 * est.prob.std_err();
                    any_violation |= !ok;
                    if (args.as_json) {
                        rows.push_back({{"n", n},
                                        {"ratio", ratio},
                                        {"sigma_v2", sv2},
                                        {"profile", pname},
                                        {"bound", est.bound},
                                        {"empirical", emp},
                                        {"pass", ok}});
                    } else {
                        std::printf("%6d %6.2f %9.2f %12s %12.5g %12.5g  %s\n", n, ratio, sv2,
                                    pname.c_str(), est.bound, emp, ok ? "pass" : "VIOLATION");
                    }
                }
            }
        }
    }
    if (args.as_json) {
        json out;
        out["seed"] = seed;
        out["seed_source"] = seed_source;
        out["trials"] = args.trials;
        out["cells"] = rows;
        out["all_pass"] = !any_violation;
        std::cout << out.dump(2) << "\n";
    }
    return any_violation ? kExitBoundViolation : kExitOk;
}

// ------------------------------------------------------------------- outage

struct OutageArgs {
    std::string dist = "uniform";
    std::vector<double> w;
    double lo = 0.5, hi = 1.5;
    int k = 1;
    double rate = 0.45;
    int m = 4096;
    std::uint64_t trials = 500;
    double sigma_a2 = 1.0, sigma_z2 = 1.0;
    std::string decoder = "distance_k1";
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    bool as_json = false;
};

int cmd_outage(const OutageArgs& args) {
    ActivityModel act;
    if (args.dist == "uniform") {
        act.kind = ActivityModel::Kind::uniform_iid;
        act.k = args.k;
        act.lo = args.lo;
        act.hi = args.hi;
    } else if (args.dist == "deterministic") {
        act.kind = ActivityModel::Kind::deterministic;
        act.w0 = values_from_vector(args.w).w;
    } else if (args.dist == "gaussian") {
        act.kind = ActivityModel::Kind::gaussian_iid;
        act.k = args.k;
    } else {
        throw ConfigError("unknown activity distribution: " + args.dist);
    }

    const auto [seed, seed_source] = resolve_seed(args.seed, 0);
    TrialConfig cfg;
    cfg.model.m = args.m;
    cfg.model.k = act.dim();
    cfg.model.sigma_a2 = args.sigma_a2;
    cfg.model.sigma_z2 = args.sigma_z2;
    cfg.model.n = 1; // set from rate inside the experiment
    cfg.decoder = decoder_kind_from_string(args.decoder);
    cfg.params = default_decoder_params(args.sigma_a2, args.sigma_z2);
    cfg.seed = seed;

    const OutageReport rep = run_outage_experiment(act, cfg, args.rate, args.trials, args.jobs);
    const double bound = rep.outage.p();
    const double emp = rep.empirical.pe.p();
    if (args.as_json) {
        json out;
        out["rate"] = rep.rate;
        out["n"] = rep.n_used;
        out["empirical_failure"] = emp;
        out["empirical_ci"] = {rep.empirical.pe.ci_lo(), rep.empirical.pe.ci_hi()};
        out["outage_bound"] = bound;
        out["outage_ci"] = {rep.outage.ci_lo(), rep.outage.ci_hi()};
        out["gap"] = emp - bound;
        out["refusals"] = rep.empirical.refusals;
        out["seed"] = seed;
        out["seed_source"] = seed_source;
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "rate " << format_double(rep.rate) << " bits, n = " << rep.n_used << "\n";
    std::cout << "empirical failure rate: " << format_double(emp) << "  ["
              << format_double(rep.empirical.pe.ci_lo()) << ", "
              << format_double(rep.empirical.pe.ci_hi()) << "]\n";
    std::cout << "outage bound P{c(W) <= r}: " << format_double(bound) << "  ["
              << format_double(rep.outage.ci_lo()) << ", " << format_double(rep.outage.ci_hi())
              << "]\n";
    std::cout << "gap (empirical - bound): " << format_double(emp - bound) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse support recovery: thresholds, decoders, Monte Carlo sweeps"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    ThresholdArgs th;
    auto* c_th = app.add_subcommand("threshold", "rate threshold c(w) and measurement counts");
    c_th->add_option("--w", th.w, "signal values, comma separated")->delimiter(',')->required();
    c_th->add_option("--sigma-a2", th.sigma_a2, "matrix entry variance");
    c_th->add_option("--sigma-z2", th.sigma_z2, "noise variance");
    c_th->add_option("--m", th.m, "signal dimension");
    c_th->add_option("--k", th.k, "sparsity level");
    c_th->add_option("--wmin", th.wmin, "minimum |w_j| for the sufficient-count formula");
    c_th->add_option("--wmax", th.wmax, "maximum |w_j| for the necessary-count formula");
    c_th->add_option("--margin", th.margin, "rate margin below c(w)");
    c_th->add_option("--growth", th.growth, "symbolic m-vs-k growth pattern");
    c_th->add_flag("--json", th.as_json, "JSON output");

    DecodeArgs de;
    auto* c_de = app.add_subcommand("decode", "decode one instance file");
    c_de->add_option("instance", de.instance_path, "instance JSON file")->required();
    c_de->add_option("--decoder", de.decoder, "distance | ml | omp");
    c_de->add_option("--threshold", de.threshold, "override the rule threshold");
    c_de->add_option("--work-cap", de.work_cap, "rule-evaluation work cap");

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "phase-transition sweep to CSV + manifest");
    c_sw->add_option("--spec", sw.spec_path, "sweep spec JSON file");
    c_sw->add_option("--manifest", sw.manifest_path, "rerun from a manifest");
    c_sw->add_option("--out", sw.out_dir, "output directory")->required();
    c_sw->add_option("--seed", sw.seed, "master seed (overrides spec)");
    c_sw->add_option("--jobs", sw.jobs, "worker threads (0 = auto)");

    ValidateArgs va;
    auto* c_va = app.add_subcommand("validate-bounds", "tail bound vs Monte Carlo grid");
    c_va->add_option("--n-list", va.n_list, "sample counts")->delimiter(',');
    c_va->add_option("--ratio-list", va.ratio_list, "(alpha-beta)/gamma ratios")->delimiter(',');
    c_va->add_option("--sigma-v2-list", va.sigma_v2_list, "noise variances")->delimiter(',');
    c_va->add_option("--profiles", va.profiles, "u profiles")->delimiter(',');
    c_va->add_option("--alpha", va.alpha, "second-moment center");
    c_va->add_option("--beta", va.beta, "second-moment half width");
    c_va->add_option("--trials", va.trials, "Monte Carlo trials per cell");
    c_va->add_option("--seed", va.seed, "master seed");
    c_va->add_option("--jobs", va.jobs, "worker threads (0 = auto)");
    c_va->add_flag("--json", va.as_json, "JSON output");

    OutageArgs ou;
    auto* c_ou = app.add_subcommand("outage", "random-activity outage experiment");
    c_ou->add_option("--dist", ou.dist, "uniform | deterministic | gaussian");
    c_ou->add_option("--w", ou.w, "values for deterministic activity")->delimiter(',');
    c_ou->add_option("--lo", ou.lo, "uniform activity lower bound");
    c_ou->add_option("--hi", ou.hi, "uniform activity upper bound");
    c_ou->add_option("--k", ou.k, "sparsity level");
    c_ou->add_option("--r", ou.rate, "rate log2(m)/n in bits")->required();
    c_ou->add_option("--m", ou.m, "signal dimension");
    c_ou->add_option("--trials", ou.trials, "pipeline trials");
    c_ou->add_option("--sigma-a2", ou.sigma_a2, "matrix entry variance");
    c_ou->add_option("--sigma-z2", ou.sigma_z2, "noise variance");
    c_ou->add_option("--decoder", ou.decoder, "pipeline decoder");
    c_ou->add_option("--seed", ou.seed, "master seed");
    c_ou->add_option("--jobs", ou.jobs, "worker threads (0 = auto)");
    c_ou->add_flag("--json", ou.as_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (c_th->parsed()) return cmd_threshold(th);
        if (c_de->parsed()) return cmd_decode(de);
        if (c_sw->parsed()) return cmd_sweep(sw);
        if (c_va->parsed()) return cmd_validate_bounds(va);
        if (c_ou->parsed()) return cmd_outage(ou);
    } catch (const WorkCapError& e) {
        std::cerr << "refused: " << e.what() << " (estimated " << format_double(e.estimated())
                  << ", cap " << format_double(e.cap()) << ")\n";
        return kExitWorkCap;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
