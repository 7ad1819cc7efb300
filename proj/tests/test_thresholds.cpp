#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "suprec/errors.hpp"
#include "suprec/thresholds.hpp"
#include "support/oracles.hpp"

using namespace suprec;

namespace {

SignalValues vals(const std::vector<double>& v) {
    SignalValues w;
    w.w = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<int>(v.size()));
    return w;
}

} // namespace

TEST_CASE("c_of_w closed forms") {
    const auto single = c_of_w(vals({1}), 1.0, 1.0);
    CHECK(single.bits == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(single.argmin_subset == std::vector<int>{1});

    const auto pair = c_of_w(vals({1, 1}), 1.0, 1.0);
    CHECK(pair.bits == doctest::Approx(0.25 * std::log2(3.0)).epsilon(1e-15));
    CHECK(pair.argmin_subset == std::vector<int>{1, 2});

    // With both entries huge the pairwise term wins over the singles.
    const auto big = c_of_w(vals({100, 100}), 1.0, 1.0);
    CHECK(big.argmin_subset == std::vector<int>{1, 2});
}

TEST_CASE("c_of_w against brute-force enumeration") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> mag(0.1, 3.0);
    std::uniform_int_distribution<int> ksize(1, 8);
    for (int t = 0; t < 60; ++t) {
        const int k = ksize(gen);
        std::vector<double> w(k);
        for (double& x : w) x = mag(gen) * (gen() % 2 ? 1 : -1);
        const double sa2 = mag(gen), sz2 = mag(gen);
        const double lib = c_of_w(vals(w), sa2, sz2).bits;
        const double ref = oracles::brute_c_of_w(w, sa2, sz2);
        CHECK(std::abs(lib - ref) < 1e-12);
    }
}

TEST_CASE("c_of_w invariances") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> mag(0.2, 2.0);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> w(5);
        for (double& x : w) x = mag(gen);
        const double base = c_of_w(vals(w), 1.3, 0.7).bits;
        CHECK(base > 0.0);

        // permutation and sign invariance, exactly
        auto perm = w;
        std::shuffle(perm.begin(), perm.end(), gen);
        for (double& x : perm) x *= (gen() % 2 ? 1 : -1);
        CHECK(c_of_w(vals(perm), 1.3, 0.7).bits == base);

        // scale law: only the ratio of variances matters
        CHECK(c_of_w(vals(w), 2.0 * 1.3, 2.0 * 0.7).bits == base);

        // coordinate monotonicity
        auto boosted = w;
        boosted[t % 5] *= 1.5;
        CHECK(c_of_w(vals(boosted), 1.3, 0.7).bits >= base);

        // upper bound: never above any single-coordinate term
        for (double x : w)
            CHECK(base <= 0.5 * std::log2(1.0 + 1.3 / 0.7 * x * x) + 1e-15);
    }
}

TEST_CASE("c_of_w guards") {
    CHECK_THROWS_AS(c_of_w(vals(std::vector<double>(25, 1.0)), 1.0, 1.0), WorkCapError);
    CHECK_THROWS_AS(c_of_w(vals({0.0}), 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(c_of_w(vals({1.0}), 0.0, 1.0), ConfigError);
}

TEST_CASE("achievable_n") {
    CHECK(achievable_n(2, vals({1}), 1.0, 1.0, 1e-12) == 2);
    CHECK(achievable_n(4096, vals({1, 1}), 1.0, 1.0, 0.04624) == 35);
    CHECK(achievable_n(4096, vals({1}), 1.0, 1.0, 0.1) == 30);
    CHECK_THROWS_AS(achievable_n(4096, vals({1}), 1.0, 1.0, 0.6), ConfigError);
    CHECK_THROWS_AS(achievable_n(1, vals({1}), 1.0, 1.0, 0.1), ConfigError);
}

TEST_CASE("sufficient_n_growing") {
    CHECK(sufficient_n_growing(100, 2, 1.0, 1.0, 1.0) == 26);
    CHECK(sufficient_n_growing(100, 2, 1e12, 1.0, 1.0) <= 1);
    // monotone nondecreasing in m
    long long prev = 0;
    for (int m : {2, 10, 100, 1000, 1000000}) {
        const long long n = sufficient_n_growing(m, 2, 1.0, 1.0, 1.0);
        CHECK(n >= prev);
        prev = n;
    }
    CHECK_THROWS_AS(sufficient_n_growing(100, 1, 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("necessary_n_growing") {
    CHECK(necessary_n_growing(4096, 2, 1.0, 1.0, 1.0) == 18);
    // m = 2k with the denominator forced to 1 isolates the 2k-bit numerator
    const int k = 3;
    const double w = std::sqrt(1.0 / (2.0 * k));
    CHECK(necessary_n_growing(2 * k, k, w, 1.0, 1.0) == 2 * k);
    CHECK(necessary_n_growing(1000, 2, 1e12, 1.0, 1.0) == 0);
    CHECK_THROWS_AS(necessary_n_growing(2, 2, 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("necessary does not exceed achievable for k = 1") {
    for (int m : {16, 256, 4096}) {
        for (double w : {0.5, 1.0, 2.0}) {
            const long long nec = necessary_n_growing(m, 1, w, 1.0, 1.0);
            const long long ach = achievable_n(m, vals({w}), 1.0, 1.0, 1e-9);
            CHECK(nec <= ach);
        }
    }
}

TEST_CASE("classify_regime") {
    CHECK(classify_regime("m = k^{Omega(log k)}").sufficient_order == "k log m / log k");
    CHECK(classify_regime("k^log k").sufficient_order == "k log m / log k");
    CHECK(classify_regime("k^loglog k").sufficient_order == "k log k");
    CHECK(classify_regime("m = k^2").sufficient_order == "k log m");
    CHECK(classify_regime("Theta(k)").sufficient_order == "k log m");
    CHECK(classify_regime("Theta(k)").label == "linear");
    const auto unknown = classify_regime("m = exp(k)");
    CHECK_FALSE(unknown.classified);
    CHECK(unknown.label.empty());
}

TEST_CASE("outage_probability") {
    ActivityModel det;
    det.kind = ActivityModel::Kind::deterministic;
    det.w0 = Eigen::VectorXd::Constant(1, 1.0); // c = 0.5 exactly
    CHECK(outage_probability(det, 1.0, 1.0, 0.4, 2000, 5).prob.p() == 0.0);
    CHECK(outage_probability(det, 1.0, 1.0, 0.6, 2000, 5).prob.p() == 1.0);

    ActivityModel uni;
    uni.kind = ActivityModel::Kind::uniform_iid;
    uni.k = 1;
    uni.lo = 0.5;
    uni.hi = 1.5;
    const auto est = outage_probability(uni, 1.0, 1.0, 0.3, 100000, 5);
    const double ref = oracles::uniform_outage_quadrature(0.5, 1.5, 0.3);
    CHECK(ref == doctest::Approx(std::sqrt(std::pow(2.0, 0.6) - 1.0) - 0.5).epsilon(1e-10));
    CHECK(std::abs(est.prob.p() - ref) < 4.0 * est.prob.std_err() + 1e-6);

    ActivityModel gauss;
    gauss.kind = ActivityModel::Kind::gaussian_iid;
    CHECK_THROWS_AS(outage_probability(gauss, 1.0, 1.0, 0.3, 1000, 5), ConfigError);

    // deterministic for a given seed, independent of job count
    const auto a = outage_probability(uni, 1.0, 1.0, 0.3, 20000, 5, 1);
    const auto b = outage_probability(uni, 1.0, 1.0, 0.3, 20000, 5, 3);
    CHECK(a.prob.count == b.prob.count);
}
