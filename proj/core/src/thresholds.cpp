#include "suprec/thresholds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "suprec/errors.hpp"
#include "suprec/parallel.hpp"

namespace suprec {
namespace {

void check_variances(double sigma_a2, double sigma_z2) {
    if (!(sigma_a2 > 0.0) || !(sigma_z2 > 0.0))
        throw ConfigError("variances must be positive");
}

std::vector<int> mask_to_subset(unsigned mask) {
    std::vector<int> out;
    for (int j = 0; mask != 0; ++j, mask >>= 1)
        if (mask & 1u) out.push_back(j + 1);
    return out;
}

} // namespace

RateThreshold c_of_w(const SignalValues& values, double sigma_a2, double sigma_z2) {
    validate_signal_values(values);
    check_variances(sigma_a2, sigma_z2);
    const int k = values.k();
    if (k > 24)
        throw WorkCapError("c_of_w: subset enumeration refused for k > 24 (k=" +
                               std::to_string(k) + ")",
                           std::ldexp(1.0, k), std::ldexp(1.0, 24));

    const double snr = sigma_a2 / sigma_z2;
    RateThreshold best;
    best.bits = std::numeric_limits<double>::infinity();
    std::vector<int> best_subset;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        double sumsq = 0.0;
        int size = 0;
        for (int j = 0; j < k; ++j) {
            if (mask & (1u << j)) {
                sumsq += values.w[j] * values.w[j];
                ++size;
            }
        }
        const double term = std::log2(1.0 + snr * sumsq) / (2.0 * size);
        if (term < best.bits) {
            best.bits = term;
            best_subset = mask_to_subset(mask);
        } else if (term == best.bits) {
            auto cand = mask_to_subset(mask);
            if (std::lexicographical_compare(cand.begin(), cand.end(), best_subset.begin(),
                                             best_subset.end()))
                best_subset = std::move(cand);
        }
    }
    best.argmin_subset = std::move(best_subset);
    return best;
}

long long achievable_n(int m, const SignalValues& values, double sigma_a2, double sigma_z2,
                       double margin) {
    if (m < 2) throw ConfigError("achievable_n: need m >= 2");
    const double c = c_of_w(values, sigma_a2, sigma_z2).bits;
    if (!(margin > 0.0) || margin >= c)
        throw ConfigError("achievable_n: margin must lie in (0, c(w))");
    return ceil_tol(std::log2(static_cast<double>(m)) / (c - margin));
}

long long sufficient_n_growing(int m, int k, double w_min, double sigma_a2, double sigma_z2) {
    check_variances(sigma_a2, sigma_z2);
    if (k < 2) throw ConfigError("sufficient_n_growing: need k >= 2 (use achievable_n for k = 1)");
    if (m < 1) throw ConfigError("sufficient_n_growing: need m >= 1");
    if (!(w_min > 0.0)) throw ConfigError("sufficient_n_growing: w_min must be positive");
    const double log2m = std::log2(static_cast<double>(m));
    const double log2k = std::log2(static_cast<double>(k));
    const double snr = w_min * w_min * sigma_a2 / sigma_z2;
    double worst = 0.0;
    for (int j = 1; j <= k; ++j) {
        const double num = 6.0 * k * log2k + 2.0 * j * log2m;
        const double den = std::log2(j * snr + 1.0);
        worst = std::max(worst, num / den);
    }
    return ceil_tol(worst);
}

long long necessary_n_growing(int m, int k, double w_max, double sigma_a2, double sigma_z2) {
    check_variances(sigma_a2, sigma_z2);
    if (k < 1 || m <= k) throw ConfigError("necessary_n_growing: need m > k >= 1");
    if (!(w_max > 0.0)) throw ConfigError("necessary_n_growing: w_max must be positive");
    const double num = 2.0 * k * std::log2(static_cast<double>(m) / k);
    const double den = std::log2(2.0 * k * w_max * w_max * sigma_a2 / sigma_z2 + 1.0);
    return floor_tol(num / den);
}

namespace {

std::string normalize_growth(std::string_view spec) {
    std::string out;
    for (char c : spec) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' || c == '$' ||
            c == '\\')
            continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

RegimeTag classify_regime(std::string_view growth_spec) {
    const std::string s = normalize_growth(growth_spec);
    RegimeTag tag;
    auto is = [&](std::initializer_list<const char*> alts) {
        return std::any_of(alts.begin(), alts.end(), [&](const char* a) { return s == a; });
    };
    if (is({"m=k^omega(logk)", "k^omega(logk)", "m=k^logk", "k^logk"})) {
        tag = {true, "m_poly_in_k", "k log m / log k"};
    } else if (is({"e^omega(logk)<=m<=k^o(logk)", "m=k^loglogk", "k^loglogk"})) {
        tag = {true, "mid", "k log k"};
    } else if (is({"omega(k)<=m<=e^theta(logk)", "m=k^2", "k^2"})) {
        tag = {true, "low", "k log m"};
    } else if (is({"m=theta(k)", "theta(k)"})) {
        tag = {true, "linear", "k log m"};
    }
    return tag;
}

OutageEstimate outage_probability(const ActivityModel& activity, double sigma_a2, double sigma_z2,
                                  double rate, std::uint64_t trials, std::uint64_t seed,
                                  int jobs) {
    check_variances(sigma_a2, sigma_z2);
    if (!activity.bounded())
        throw ConfigError("outage_probability: activity distribution must have bounded support");
    if (trials < 1) throw ConfigError("outage_probability: need trials >= 1");

    const std::uint64_t hits = parallel_count(trials, jobs, [&](std::uint64_t t) {
        Rng rng(seed, trial_stream(t, stream_purpose::outage));
        const SignalValues w = activity.draw(rng);
        return c_of_w(w, sigma_a2, sigma_z2).bits <= rate;
    });
    OutageEstimate est;
    est.rate = rate;
    est.prob = {hits, trials};
    return est;
}

} // namespace suprec
