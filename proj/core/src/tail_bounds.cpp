#include "suprec/tail_bounds.hpp"

#include <cmath>
#include <string>

#include "suprec/errors.hpp"
#include "suprec/parallel.hpp"

namespace suprec {

void validate_tail_query(const TailQuery& q) {
    if (q.n < 1) throw ConfigError("tail query: need n >= 1");
    if (!(q.beta > 0.0) || !(q.beta < q.alpha))
        throw ConfigError("tail query: need 0 < beta < alpha");
    if (!(q.gamma > 0.0) || !(q.gamma < q.alpha - q.beta))
        throw ConfigError("tail query: need gamma in (0, alpha - beta)");
    if (!(q.sigma_v2 > 0.0)) throw ConfigError("tail query: need sigma_v2 > 0");
}

double tail_bound(const TailQuery& q) {
    validate_tail_query(q);
    return std::pow((q.alpha - q.beta) / q.gamma, -0.5 * q.n);
}

double minimizing_lambda(double alpha_s, double theta, double gamma) {
    if (!(theta > 0.0) || !(gamma > 0.0))
        throw ConfigError("minimizing_lambda: need theta > 0 and gamma > 0");
    return (2.0 * gamma - theta - std::sqrt(theta * theta + 4.0 * alpha_s * gamma)) /
           (4.0 * theta * gamma);
}

double chernoff_objective(double lambda, double alpha_s, double theta, double gamma) {
    return lambda * gamma - lambda * alpha_s / (1.0 - 2.0 * lambda * theta) +
           0.5 * std::log(1.0 - 2.0 * lambda * theta);
}

double chernoff_exponent(double alpha_s, double theta, double gamma) {
    if (!(theta > 0.0)) throw ConfigError("chernoff_exponent: need theta > 0");
    if (!(gamma > 0.0) || !(gamma < alpha_s))
        throw ConfigError("chernoff_exponent: need 0 < gamma < alpha_s");
    const double lam = minimizing_lambda(alpha_s, theta, gamma);
    const double nats = chernoff_objective(lam, alpha_s, theta, gamma);
    return nats / 0.6931471805599453; // bits at the boundary
}

const char* to_string(UProfile profile) {
    switch (profile) {
        case UProfile::constant: return "constant";
        case UProfile::linear_ramp: return "linear_ramp";
        case UProfile::alternating: return "alternating";
    }
    return "?";
}

std::vector<double> make_u_profile(UProfile profile, int n, double alpha) {
    if (n < 1) throw ConfigError("make_u_profile: need n >= 1");
    if (!(alpha > 0.0)) throw ConfigError("make_u_profile: need alpha > 0");
    std::vector<double> raw(n);
    for (int i = 0; i < n; ++i) {
        switch (profile) {
            case UProfile::constant: raw[i] = 1.0; break;
            case UProfile::linear_ramp: raw[i] = static_cast<double>(i + 1); break;
            case UProfile::alternating: raw[i] = (i % 2 == 0) ? 1.5 : 0.5; break;
        }
    }
    double sumsq = 0.0;
    for (double r : raw) sumsq += r * r;
    const double scale = std::sqrt(alpha * n / sumsq);
    for (double& r : raw) r *= scale;
    return raw;
}

TailEstimate empirical_tail(const TailQuery& q, const std::vector<double>& u,
                            std::uint64_t trials, std::uint64_t seed, int jobs) {
    validate_tail_query(q);
    if (trials < 1000) throw ConfigError("empirical_tail: need trials >= 1000");
    if (static_cast<int>(u.size()) != q.n)
        throw ConfigError("empirical_tail: |u| != n");
    double second = 0.0;
    for (double v : u) second += v * v;
    second /= q.n;
    if (!(second > q.alpha - q.beta) || !(second < q.alpha + q.beta))
        throw ConfigError("empirical_tail: u profile second moment " + std::to_string(second) +
                          " outside (" + std::to_string(q.alpha - q.beta) + ", " +
                          std::to_string(q.alpha + q.beta) + ")");

    const double sd = std::sqrt(q.sigma_v2);
    const double cutoff = q.gamma * q.n;
    const int n = q.n;
    const std::uint64_t hits = parallel_count(trials, jobs, [&](std::uint64_t t) {
        Rng rng(seed, trial_stream(t, stream_purpose::tail));
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = u[i] - sd * rng.gaussian();
            sum += d * d;
        }
        return sum <= cutoff;
    });

    TailEstimate est;
    est.prob = {hits, trials};
    est.bound = tail_bound(q);
    return est;
}

TailEstimate empirical_tail(const TailQuery& q, UProfile profile, std::uint64_t trials,
                            std::uint64_t seed, int jobs) {
    return empirical_tail(q, make_u_profile(profile, q.n, q.alpha), trials, seed, jobs);
}

} // namespace suprec
