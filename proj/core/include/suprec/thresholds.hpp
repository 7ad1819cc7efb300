#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "suprec/signal_model.hpp"
#include "suprec/stats.hpp"

namespace suprec {

/// Equal-rate threshold in bits per measurement, with the subset of
/// coordinates that attains the minimum (lexicographically smallest on ties).
struct RateThreshold {
    double bits = 0.0;
    std::vector<int> argmin_subset; // 1-based positions into w
};

/// Exact minimum over all nonempty subsets T of
///   (1 / (2|T|)) * log2(1 + (sigma_a2/sigma_z2) * sum_{j in T} w_j^2).
/// Refuses k > 24 (enumeration is exponential in k).
RateThreshold c_of_w(const SignalValues& values, double sigma_a2, double sigma_z2);

/// Measurements sufficient at rate margin `margin` below threshold:
/// ceil(log2(m) / (c(w) - margin)).
long long achievable_n(int m, const SignalValues& values, double sigma_a2, double sigma_z2,
                       double margin);

/// Sufficient count for growing k:
/// ceil( max_{j in [k]} (6 k log2 k + 2 j log2 m) / log2(j w_min^2 sigma_a2/sigma_z2 + 1) ).
long long sufficient_n_growing(int m, int k, double w_min, double sigma_a2, double sigma_z2);

/// Largest n that is still necessarily insufficient (asymptotic guidance):
/// floor( 2 k log2(m/k) / log2(2 k w_max^2 sigma_a2/sigma_z2 + 1) ).
long long necessary_n_growing(int m, int k, double w_max, double sigma_a2, double sigma_z2);

/// One row of the growth-regime table.
struct RegimeTag {
    bool classified = false;
    std::string label;            // empty when unclassified
    std::string sufficient_order; // order of n sufficient in that regime
};

/// Classifies a symbolic growth relation of m versus k. Recognized patterns
/// (case-insensitive, whitespace ignored):
///   "k^Omega(log k)"  (e.g. "k^log k")        -> n = k log m / log k
///   "e^omega(log k) <= m <= k^o(log k)" (e.g. "k^loglog k") -> n = k log k
///   "omega(k) <= m <= e^Theta(log k)"   (e.g. "k^2")        -> n = k log m
///   "Theta(k)"                                              -> n = k log m
/// Anything else comes back unclassified, never guessed.
RegimeTag classify_regime(std::string_view growth_spec);

struct OutageEstimate {
    Proportion prob; // Monte Carlo estimate of P{ c(W) <= rate }
    double rate = 0.0;
};

/// Monte Carlo estimate of P{ c(W) <= rate } for a bounded activity model.
/// Deterministic for a given seed and independent of the job count.
OutageEstimate outage_probability(const ActivityModel& activity, double sigma_a2, double sigma_z2,
                                  double rate, std::uint64_t trials, std::uint64_t seed,
                                  int jobs = 0);

} // namespace suprec
