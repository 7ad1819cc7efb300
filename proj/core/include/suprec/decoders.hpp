#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "suprec/signal_model.hpp"

namespace suprec {

inline constexpr std::size_t kDefaultGridPointCap = std::size_t{1} << 22;
inline constexpr double kDefaultDistanceWorkCap = 1e8; // candidate-sets x grid points
inline constexpr double kDefaultSubsetCap = 1e7;       // candidate sets for ml/omp

/// sqrt(| ||y||^2 / n - sigma_z2 | / sigma_a2): magnitude estimate of |w_1|
/// (k = 1) or of ||w|| (k >= 2). Total on all inputs with n >= 1.
double estimate_magnitude(const Eigen::VectorXd& y, double sigma_a2, double sigma_z2);

/// Finite covering of the radius-r ball used as the decoder's candidate value
/// set: the lattice of spacing zeta/(2 sqrt(k)) clipped to norm r + zeta/2,
/// with outside points pulled back to the sphere. Every point of the ball is
/// within zeta/2 of some grid point.
struct QuantizationGrid {
    double radius = 0.0;
    double zeta = 0.0;
    double spacing = 0.0;
    int dim = 0;
    bool materialized = true;
    std::vector<double> points; // flat, point i occupies [i*dim, (i+1)*dim)

    std::size_t size() const { return count_; }

    Eigen::Map<const Eigen::VectorXd> point(std::size_t i) const {
        return {points.data() + i * static_cast<std::size_t>(dim), dim};
    }

    /// Distance from b to the best grid point among b's neighboring lattice
    /// cells. An upper bound on the true nearest-point distance (projections
    /// from farther cells can be closer near the sphere) that is at most
    /// zeta/2 for any b in the ball, so it certifies the covering on its own.
    /// Works without materialized points.
    double min_dist_upper(const Eigen::VectorXd& b) const;

    /// Exact nearest-point distance by full scan; needs materialized points.
    double min_dist_exhaustive(const Eigen::VectorXd& b) const;

    /// Upper bound on the candidate count before building, from the bounding
    /// lattice box.
    static double estimate_points(double r, double zeta, int k);

    std::size_t count_ = 0;
};

/// Builds the covering. Refuses (WorkCapError, with the estimate) when the
/// estimated point count exceeds point_cap. With materialize = false only the
/// count and geometry are kept.
QuantizationGrid build_grid(double r, double zeta, int k,
                            std::size_t point_cap = kDefaultGridPointCap,
                            bool materialize = true);

enum class DecodeRule { fixed_k, growing_k };

struct DecoderParams {
    double epsilon = 0.1;
    double zeta = 0.1;
    DecodeRule rule = DecodeRule::fixed_k;
    double work_cap = kDefaultDistanceWorkCap;
    std::size_t grid_point_cap = kDefaultGridPointCap;
    std::optional<double> threshold_override; // testing hook; replaces the rule threshold
    int jobs = 1;                              // candidate-set enumeration workers
};

/// epsilon = 0.1 sqrt(sigma_z2/sigma_a2) and zeta = epsilon.
DecoderParams default_decoder_params(double sigma_a2, double sigma_z2);

/// Residual threshold of the selected rule:
///   fixed_k:   sigma_z2 + eps^2 sigma_a2
///   growing_k: (1 + eps) sigma_z2 + 2 eps^2 sigma_a2
double rule_threshold(const DecoderParams& params, double sigma_a2, double sigma_z2);

struct DecodeResult {
    std::vector<int> support;  // sorted, 1-based; empty iff failed
    bool failed = false;       // no candidate could be produced
    bool ambiguous = false;    // satisfying-candidate count != 1
    bool rule_satisfied = false;
    Eigen::VectorXd witness;   // values used for the returned support
    double residual = std::numeric_limits<double>::quiet_NaN(); // (1/n)||y - A_T w||^2
    std::uint64_t candidates_examined = 0;
    std::uint64_t satisfying_count = 0;
};

/// (1/n) || y - sum_j values[j] * A(:, subset[j]) ||^2, subset 1-based.
double residual_at(const Eigen::VectorXd& y, const Eigen::MatrixXd& a,
                   std::span<const int> subset, const Eigen::VectorXd& values);

/// Distance decoding for k = 1: estimate the magnitude, then accept index s
/// when (1/n)||y - (-1)^q What A_s||^2 is below the rule threshold for either
/// sign q. A unique satisfying index is returned as-is; otherwise the
/// minimum-residual candidate is returned with the ambiguity flag set.
DecodeResult distance_decode_k1(const Eigen::VectorXd& y, const MeasurementMatrix& mat,
                                const DecoderParams& params, double sigma_z2);

/// Distance decoding for k >= 2 over all size-k supports and all grid values
/// Q(What + zeta/2, zeta). Same selection policy as the k = 1 decoder, with
/// per-set value search over the grid.
DecodeResult distance_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat, int k,
                             const DecoderParams& params, double sigma_z2);

/// Exhaustive least-squares decoder: support minimizing
/// min_v ||y - A_T v||^2 over all size-k sets T, ties lexicographic.
DecodeResult ml_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat, int k,
                       double subset_cap = kDefaultSubsetCap);

/// Joint least-squares decoder for multiple measurement vectors sharing one
/// support: minimizes the summed per-column residual. t = 1 matches
/// ml_decode exactly.
DecodeResult ml_decode_mmv(const std::vector<Eigen::VectorXd>& ys, const MeasurementMatrix& mat,
                           int k, double subset_cap = kDefaultSubsetCap);

/// Orthogonal matching pursuit: k rounds of max-|correlation| selection with
/// full least-squares re-projection each round.
DecodeResult omp_decode(const Eigen::VectorXd& y, const MeasurementMatrix& mat, int k);

/// Number of size-k subsets of [m], saturating at `cap`.
double count_subsets(int m, int k, double cap = 1e18);

} // namespace suprec
