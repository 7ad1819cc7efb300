#pragma once

#include <cstdint>
#include <vector>

#include "suprec/rng.hpp"
#include "suprec/stats.hpp"

namespace suprec {

/// Parameters of a lower-tail query for the normalized squared distance
/// S_n = (1/n) sum (u_i - V_i)^2 with V_i ~ N(0, sigma_v2) and
/// (1/n) sum u_i^2 inside (alpha - beta, alpha + beta).
struct TailQuery {
    int n = 1;
    double alpha = 1.0;
    double beta = 0.1;
    double gamma = 0.5;
    double sigma_v2 = 1.0;
};

/// Throws ConfigError unless 0 < beta < alpha, gamma in (0, alpha - beta),
/// sigma_v2 > 0, n >= 1.
void validate_tail_query(const TailQuery& q);

/// Closed-form upper bound on P(S_n <= gamma):
///   2^(-(n/2) * log2((alpha - beta)/gamma)) = ((alpha - beta)/gamma)^(-n/2).
double tail_bound(const TailQuery& q);

/// Optimal tilt for the lower-tail exponent; always negative when
/// gamma < alpha_s:
///   lambda* = (2 gamma - theta - sqrt(theta^2 + 4 alpha_s gamma)) / (4 theta gamma).
double minimizing_lambda(double alpha_s, double theta, double gamma);

/// Tail exponent in bits per sample, so that P(S_n <= gamma) <= 2^(-n * Lambda):
///   Lambda = lambda* gamma - lambda* alpha_s / (1 - 2 lambda* theta)
///            + (1/2) ln(1 - 2 lambda* theta),   converted from nats.
/// At theta = alpha_s - gamma this equals (1/2) log2(alpha_s / gamma).
double chernoff_exponent(double alpha_s, double theta, double gamma);

/// The tilted objective in nats, g(lambda); its derivative vanishes at
/// minimizing_lambda. Exposed so tests can check stationarity directly.
double chernoff_objective(double lambda, double alpha_s, double theta, double gamma);

/// Deterministic sequences {u_i} used by the Monte Carlo oracle. All are
/// scaled so that (1/n) sum u_i^2 equals alpha exactly.
enum class UProfile { constant, linear_ramp, alternating };

const char* to_string(UProfile profile);

std::vector<double> make_u_profile(UProfile profile, int n, double alpha);

struct TailEstimate {
    Proportion prob;
    double bound = 0.0; // tail_bound of the same query
};

/// Empirical frequency of S_n <= gamma over `trials` draws, with Wilson 95%
/// interval. Caller-provided u must satisfy the second-moment window or the
/// query is rejected (the measured value is reported in the error).
TailEstimate empirical_tail(const TailQuery& q, const std::vector<double>& u,
                            std::uint64_t trials, std::uint64_t seed, int jobs = 0);

/// Convenience overload generating u from a named profile at level alpha.
TailEstimate empirical_tail(const TailQuery& q, UProfile profile, std::uint64_t trials,
                            std::uint64_t seed, int jobs = 0);

} // namespace suprec
