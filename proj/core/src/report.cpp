#include "suprec/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "suprec/errors.hpp"
#include "suprec/version.hpp"

namespace suprec {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

std::string to_csv(const SweepResult& result) {
    std::string out = kSweepCsvHeader;
    out.push_back('\n');
    for (const SweepRow& r : result.rows) {
        out += std::to_string(r.m);
        out.push_back(',');
        out += std::to_string(r.n);
        out.push_back(',');
        out += format_double(r.rate_bits);
        out.push_back(',');
        out += format_double(r.c_w_bits);
        out.push_back(',');
        out += format_double(r.pe);
        out.push_back(',');
        out += format_double(r.ci_lo);
        out.push_back(',');
        out += format_double(r.ci_hi);
        out.push_back(',');
        out += std::to_string(r.trials);
        out.push_back(',');
        out += std::to_string(r.refusals);
        out.push_back(',');
        out += r.decoder;
        out.push_back(',');
        out += std::to_string(r.seed);
        out.push_back('\n');
    }
    return out;
}

namespace {

ActivityModel activity_from_json(const json& j) {
    ActivityModel act;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "deterministic") {
        act.kind = ActivityModel::Kind::deterministic;
        const auto vals = j.at("w").get<std::vector<double>>();
        act.w0 = Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
    } else if (kind == "uniform_iid") {
        act.kind = ActivityModel::Kind::uniform_iid;
        act.k = j.at("k").get<int>();
        act.lo = j.at("lo").get<double>();
        act.hi = j.at("hi").get<double>();
    } else if (kind == "gaussian_iid") {
        act.kind = ActivityModel::Kind::gaussian_iid;
        act.k = j.at("k").get<int>();
        act.mean = j.value("mean", 0.0);
        act.sd = j.value("sd", 1.0);
    } else {
        throw ConfigError("unknown activity kind: " + kind);
    }
    return act;
}

json activity_to_json(const ActivityModel& act) {
    json j;
    switch (act.kind) {
        case ActivityModel::Kind::deterministic: {
            j["kind"] = "deterministic";
            std::vector<double> vals(act.w0.data(), act.w0.data() + act.w0.size());
            j["w"] = vals;
            break;
        }
        case ActivityModel::Kind::uniform_iid:
            j["kind"] = "uniform_iid";
            j["k"] = act.k;
            j["lo"] = act.lo;
            j["hi"] = act.hi;
            break;
        case ActivityModel::Kind::gaussian_iid:
            j["kind"] = "gaussian_iid";
            j["k"] = act.k;
            j["mean"] = act.mean;
            j["sd"] = act.sd;
            break;
    }
    return j;
}

SweepSpec spec_from_json_obj(const json& j) {
    SweepSpec spec;
    TrialConfig& cfg = spec.base;

    cfg.seed = j.value("seed", std::uint64_t{0});
    spec.trials = j.value("trials", std::uint64_t{1});
    cfg.decoder = decoder_kind_from_string(j.value("decoder", std::string("distance_k1")));
    cfg.model.sigma_a2 = j.value("sigma_a2", 1.0);
    cfg.model.sigma_z2 = j.value("sigma_z2", 1.0);
    cfg.model.noise = noise_kind_from_string(j.value("noise", std::string("gaussian")));
    cfg.matrix_mode =
        j.value("matrix_mode", std::string("redraw")) == "fixed" ? MatrixMode::fixed
                                                                 : MatrixMode::redraw;

    if (j.contains("w") == j.contains("activity"))
        throw ConfigError("sweep spec: provide exactly one of \"w\" / \"activity\"");
    if (j.contains("w")) {
        const auto vals = j.at("w").get<std::vector<double>>();
        SignalValues w;
        w.w = Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
        cfg.w = w;
        cfg.model.k = w.k();
    } else {
        cfg.activity = activity_from_json(j.at("activity"));
        cfg.model.k = cfg.activity->dim();
    }

    cfg.params = default_decoder_params(cfg.model.sigma_a2, cfg.model.sigma_z2);
    if (j.contains("epsilon")) cfg.params.epsilon = j.at("epsilon").get<double>();
    if (j.contains("zeta")) cfg.params.zeta = j.at("zeta").get<double>();
    if (j.contains("rule"))
        cfg.params.rule = j.at("rule").get<std::string>() == "growing_k" ? DecodeRule::growing_k
                                                                         : DecodeRule::fixed_k;
    if (j.contains("work_cap")) cfg.params.work_cap = j.at("work_cap").get<double>();
    if (j.contains("grid_point_cap"))
        cfg.params.grid_point_cap = j.at("grid_point_cap").get<std::size_t>();

    if (j.contains("points")) {
        for (const auto& p : j.at("points"))
            spec.points.push_back({p.at("m").get<int>(), p.at("n").get<int>()});
    } else if (j.contains("m_values") && j.contains("rate")) {
        spec.points = points_from_rate(j.at("m_values").get<std::vector<int>>(),
                                       j.at("rate").get<double>());
    } else {
        throw ConfigError("sweep spec: provide \"points\" or \"m_values\" + \"rate\"");
    }
    if (!spec.points.empty()) {
        cfg.model.m = spec.points.front().m;
        cfg.model.n = spec.points.front().n;
    }
    return spec;
}

json spec_to_json_obj(const SweepSpec& spec) {
    const TrialConfig& cfg = spec.base;
    json j;
    j["seed"] = cfg.seed;
    j["trials"] = spec.trials;
    j["decoder"] = to_string(cfg.decoder);
    j["sigma_a2"] = cfg.model.sigma_a2;
    j["sigma_z2"] = cfg.model.sigma_z2;
    j["noise"] = to_string(cfg.model.noise);
    j["matrix_mode"] = cfg.matrix_mode == MatrixMode::fixed ? "fixed" : "redraw";
    if (cfg.w) {
        std::vector<double> vals(cfg.w->w.data(), cfg.w->w.data() + cfg.w->w.size());
        j["w"] = vals;
    } else if (cfg.activity) {
        j["activity"] = activity_to_json(*cfg.activity);
    }
    j["epsilon"] = cfg.params.epsilon;
    j["zeta"] = cfg.params.zeta;
    j["rule"] = cfg.params.rule == DecodeRule::growing_k ? "growing_k" : "fixed_k";
    j["work_cap"] = cfg.params.work_cap;
    j["grid_point_cap"] = cfg.params.grid_point_cap;
    json pts = json::array();
    for (const auto& p : spec.points) pts.push_back({{"m", p.m}, {"n", p.n}});
    j["points"] = pts;
    return j;
}

} // namespace

SweepSpec parse_sweep_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep spec: invalid JSON: ") + e.what());
    }
    try {
        return spec_from_json_obj(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep spec: ") + e.what());
    }
}

std::string sweep_spec_json(const SweepSpec& spec) { return spec_to_json_obj(spec).dump(2); }

std::string make_manifest(const std::string& command, const SweepSpec& spec,
                          const std::string& seed_source, const std::string& timestamp) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = spec.base.seed;
    j["seed_source"] = seed_source;
    j["timestamp"] = timestamp;
    j["spec"] = spec_to_json_obj(spec);
    return j.dump(2);
}

SweepSpec spec_from_manifest(const std::string& manifest_json) {
    json j;
    try {
        j = json::parse(manifest_json);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: invalid JSON: ") + e.what());
    }
    if (!j.contains("spec")) throw ConfigError("manifest: missing \"spec\"");
    try {
        SweepSpec spec = spec_from_json_obj(j.at("spec"));
        if (j.contains("seed")) spec.base.seed = j.at("seed").get<std::uint64_t>();
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace suprec
