#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "suprec/errors.hpp"
#include "suprec/signal_model.hpp"
#include "support/oracles.hpp"

using namespace suprec;

namespace {

SignalValues vals(std::initializer_list<double> v) {
    SignalValues w;
    w.w = Eigen::VectorXd(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) w.w[i++] = x;
    return w;
}

} // namespace

TEST_CASE("draw_support degenerate cases") {
    Rng rng(1, 0);
    CHECK(draw_support(1, 1, rng).idx == std::vector<int>{1});
    CHECK(draw_support(3, 3, rng).sorted() == std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(draw_support(3, 4, rng), ConfigError);
    CHECK_THROWS_AS(draw_support(0, 1, rng), ConfigError);
}

TEST_CASE("draw_support produces distinct in-range indices") {
    Rng rng(2, 0);
    for (int t = 0; t < 200; ++t) {
        const auto s = draw_support(20, 5, rng);
        auto sorted = s.sorted();
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        CHECK(sorted.front() >= 1);
        CHECK(sorted.back() <= 20);
    }
}

TEST_CASE("draw_support uniformity (chi-square at 0.001)") {
    struct Cell {
        int m, k;
        double crit;
    };
    for (const Cell cell : {Cell{5, 2, oracles::kChi2Crit001Df9},
                            Cell{6, 3, oracles::kChi2Crit001Df19}}) {
        const auto subsets = oracles::all_subsets(cell.m, cell.k);
        std::map<std::vector<int>, std::uint64_t> counts;
        for (const auto& s : subsets) counts[s] = 0;
        Rng rng(17, 0);
        const std::uint64_t draws = 100000;
        for (std::uint64_t t = 0; t < draws; ++t)
            ++counts.at(draw_support(cell.m, cell.k, rng).sorted());
        std::vector<std::uint64_t> flat;
        for (const auto& [_, c] : counts) flat.push_back(c);
        CHECK(oracles::chi2_statistic(flat, draws) < cell.crit);
        if (cell.m == 5) {
            for (const auto& [_, c] : counts)
                CHECK(std::abs(static_cast<double>(c) / draws - 0.1) < 0.01);
        }
    }
}

TEST_CASE("assemble_signal places values exactly") {
    SUBCASE("spec placement") {
        const auto x = assemble_signal(vals({3, -2}), {{4, 1}, 5}, 5);
        Eigen::VectorXd expect(5);
        expect << -2, 0, 0, 3, 0;
        CHECK(x.entries == expect);
    }
    SUBCASE("identity") {
        const auto x = assemble_signal(vals({1}), {{1}, 1}, 1);
        CHECK(x.entries.size() == 1);
        CHECK(x.entries[0] == 1.0);
    }
    SUBCASE("support recovered by scanning nonzeros") {
        Rng rng(3, 0);
        for (int t = 0; t < 50; ++t) {
            const auto s = draw_support(50, 5, rng);
            SignalValues w;
            w.w = Eigen::VectorXd(5);
            for (int i = 0; i < 5; ++i) w.w[i] = rng.gaussian() + 3.0;
            const auto x = assemble_signal(w, s, 50);
            CHECK(x.support() == s.sorted());
            int nnz = 0;
            for (int i = 0; i < 50; ++i) nnz += x.entries[i] != 0.0;
            CHECK(nnz == 5);
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(assemble_signal(vals({1, 2}), {{1}, 5}, 5), ConfigError);
        CHECK_THROWS_AS(assemble_signal(vals({0}), {{1}, 5}, 5), ConfigError);
        CHECK_THROWS_AS(assemble_signal(vals({1}), {{9}, 5}, 5), ConfigError);
    }
}

TEST_CASE("draw_matrix variance and determinism") {
    Rng rng(5, 0);
    const auto mat = draw_matrix(10000, 1, 4.0, rng);
    const double var = mat.a.col(0).squaredNorm() / 10000.0;
    CHECK(var > 3.8);
    CHECK(var < 4.2);

    Rng r1(6, 0), r2(6, 0);
    CHECK(draw_matrix(5, 4, 1.0, r1).a == draw_matrix(5, 4, 1.0, r2).a);
    CHECK_THROWS_AS(draw_matrix(2, 2, 0.0, rng), ConfigError);
}

TEST_CASE("power_ratio") {
    MeasurementMatrix zero;
    zero.a = Eigen::MatrixXd::Zero(2, 2);
    zero.sigma_a2 = 1.0;
    CHECK(power_ratio(zero) == 0.0);

    MeasurementMatrix rms;
    rms.sigma_a2 = 2.5;
    rms.a = Eigen::MatrixXd::Constant(3, 4, std::sqrt(2.5));
    CHECK(power_ratio(rms) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(7, 0);
    const auto mat = draw_matrix(100, 100, 1.0, rng);
    CHECK(power_ratio(mat) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("measure") {
    Rng rng(8, 0);
    const auto mat = draw_matrix(6, 3, 1.0, rng);

    SUBCASE("noiseless is exact") {
        const auto x = assemble_signal(vals({2, -1}), {{1, 3}, 3}, 3);
        Rng nrng(9, 0);
        const auto y = measure(mat, x, {NoiseKind::gaussian, 0.0}, nrng);
        CHECK((y - mat.a * x.entries).norm() == 0.0);
    }
    SUBCASE("only support columns contribute") {
        const auto x = assemble_signal(vals({1.5}), {{2}, 3}, 3);
        Rng n1(10, 0), n2(10, 0);
        const auto y_full = measure(mat, x, {NoiseKind::gaussian, 0.5}, n1);
        MeasurementMatrix restricted;
        restricted.sigma_a2 = mat.sigma_a2;
        restricted.a = mat.a.col(1);
        SparseSignal xr;
        xr.entries = Eigen::VectorXd::Constant(1, 1.5);
        const auto y_restricted = measure(restricted, xr, {NoiseKind::gaussian, 0.5}, n2);
        CHECK((y_full - y_restricted).norm() == 0.0);
    }
    SUBCASE("dimension mismatch") {
        SparseSignal bad;
        bad.entries = Eigen::VectorXd::Zero(4);
        Rng nrng(11, 0);
        CHECK_THROWS_AS(measure(mat, bad, {NoiseKind::gaussian, 1.0}, nrng), ConfigError);
    }
}

TEST_CASE("measure is linear in the signal (zero noise)") {
    Rng rng(12, 0);
    const auto mat = draw_matrix(8, 5, 1.0, rng);
    SparseSignal x1, x2, combo;
    x1.entries = Eigen::VectorXd::Zero(5);
    x2.entries = Eigen::VectorXd::Zero(5);
    x1.entries[1] = 2.0;
    x2.entries[3] = -1.0;
    combo.entries = 0.5 * x1.entries + 2.0 * x2.entries;
    Rng n1(13, 0), n2(13, 0), n3(13, 0);
    const NoiseModel none{NoiseKind::gaussian, 0.0};
    const Eigen::VectorXd lhs = measure(mat, combo, none, n1);
    const Eigen::VectorXd rhs =
        0.5 * measure(mat, x1, none, n2) + 2.0 * measure(mat, x2, none, n3);
    CHECK((lhs - rhs).norm() < 1e-10);
}

TEST_CASE("every noise kind matches its variance at 1e5 samples") {
    const double sz2 = 1.7;
    const std::uint64_t n = 100000;
    // Var of one squared sample, per kind: gaussian 2 sz^4, uniform 0.8 sz^4,
    // laplace 5 sz^4, rademacher 0.
    const std::map<NoiseKind, double> var_of_square = {
        {NoiseKind::gaussian, 2.0},
        {NoiseKind::uniform, 0.8},
        {NoiseKind::laplace, 5.0},
        {NoiseKind::rademacher, 0.0},
    };
    for (const auto& [kind, vs] : var_of_square) {
        Rng rng(14 + static_cast<int>(kind), 0);
        double sum_sq = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double z = draw_noise({kind, sz2}, rng);
            sum_sq += z * z;
        }
        const double se = std::sqrt(vs * sz2 * sz2 / static_cast<double>(n));
        CHECK(std::abs(sum_sq / n - sz2) <= 3.0 * se + 1e-9 * sz2);
    }
}

TEST_CASE("measure_mmv") {
    Rng rng(20, 0);
    const auto mat = draw_matrix(7, 10, 1.0, rng);
    Rng srng(21, 0);
    const auto s = draw_support(10, 2, srng);
    const auto x1 = assemble_signal(vals({1, 2}), s, 10);
    const auto x2 = assemble_signal(vals({-3, 0.5}), s, 10);

    SUBCASE("t=1 reduces to measure") {
        Rng n1(22, 0), n2(22, 0);
        const auto ys = measure_mmv(mat, {x1}, {NoiseKind::gaussian, 1.0}, n1);
        const auto y = measure(mat, x1, {NoiseKind::gaussian, 1.0}, n2);
        REQUIRE(ys.size() == 1);
        CHECK((ys[0] - y).norm() == 0.0);
    }
    SUBCASE("noiseless products") {
        Rng nrng(23, 0);
        const auto ys = measure_mmv(mat, {x1, x2}, {NoiseKind::gaussian, 0.0}, nrng);
        CHECK((ys[0] - mat.a * x1.entries).norm() == 0.0);
        CHECK((ys[1] - mat.a * x2.entries).norm() == 0.0);
    }
    SUBCASE("columns check out against direct computation") {
        Rng nrng(24, 0);
        const auto x3 = assemble_signal(vals({0.25, -0.5}), s, 10);
        Rng replay(24, 0);
        const auto ys = measure_mmv(mat, {x1, x2, x3}, {NoiseKind::gaussian, 0.3}, nrng);
        for (std::size_t j = 0; j < 3; ++j) {
            const SparseSignal& x = j == 0 ? x1 : (j == 1 ? x2 : x3);
            const auto direct = measure(mat, x, {NoiseKind::gaussian, 0.3}, replay);
            CHECK((ys[j] - direct).norm() == 0.0);
        }
    }
    SUBCASE("mismatched supports refused") {
        const auto other = assemble_signal(vals({1, 1}), {{1, 2}, 10}, 10);
        Rng nrng(25, 0);
        const bool same = other.support() == x1.support();
        if (!same)
            CHECK_THROWS_AS(measure_mmv(mat, {x1, other}, {NoiseKind::gaussian, 1.0}, nrng),
                            ConfigError);
    }
}

TEST_CASE("activity models") {
    ActivityModel det;
    det.kind = ActivityModel::Kind::deterministic;
    det.w0 = vals({1, -2}).w;
    Rng rng(30, 0);
    CHECK(det.draw(rng).w == det.w0);
    CHECK(det.bounded());

    ActivityModel uni;
    uni.kind = ActivityModel::Kind::uniform_iid;
    uni.k = 3;
    uni.lo = 0.5;
    uni.hi = 1.5;
    for (int t = 0; t < 100; ++t) {
        const auto w = uni.draw(rng);
        REQUIRE(w.k() == 3);
        CHECK(w.min_abs() >= 0.5);
        CHECK(w.max_abs() <= 1.5);
    }
    CHECK(uni.bounded());

    ActivityModel gauss;
    gauss.kind = ActivityModel::Kind::gaussian_iid;
    CHECK_FALSE(gauss.bounded());
}
