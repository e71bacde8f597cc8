#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "sporadic/error.hpp"
#include "sporadic/stats_tests.hpp"
#include "synthetic.hpp"

using namespace sporadic;

TEST_CASE("Kolmogorov critical value") {
    CHECK(kolmogorov_critical_value(0.01) == doctest::Approx(1.6276).epsilon(1e-4));
    CHECK(kolmogorov_critical_value(0.05) == doctest::Approx(1.3581).epsilon(1e-4));
}

TEST_CASE("ks_exponential rejects at about the nominal level on exact exponentials") {
    CounterStream rng(101);
    const int trials = 1000;
    int rejected = 0;
    std::vector<double> sample(10000);
    for (int t = 0; t < trials; ++t) {
        for (auto& x : sample) x = synthetic::exponential(rng, 2.5);
        rejected += ks_exponential(sample, 2.5).pass ? 0 : 1;
    }
    // 1% level, two binomial standard deviations around 10
    const double sd = std::sqrt(trials * 0.01 * 0.99);
    CHECK(rejected >= 10 - 2.0 * sd);
    CHECK(rejected <= 10 + 2.0 * sd);
}

TEST_CASE("ks_exponential edge cases") {
    SUBCASE("picket fence") {
        const std::vector<double> fence(500, 2.0);
        const auto report = ks_exponential(fence, 0.5);
        CHECK(report.statistic == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
        CHECK_FALSE(report.pass);
    }
    SUBCASE("sample at the reference quantiles sits at the minimum distance 1/(2n)") {
        const std::size_t n = 400;
        std::vector<double> quantiles;
        for (std::size_t i = 0; i < n; ++i) {
            quantiles.push_back(-std::log1p(-(i + 0.5) / n) / 3.0);
        }
        const auto report = ks_exponential(quantiles, 3.0);
        CHECK(report.statistic == doctest::Approx(0.5 / n).epsilon(1e-9));
        CHECK(report.pass);
    }
    SUBCASE("rescaling spacings and rate together leaves the statistic unchanged") {
        CounterStream rng(5);
        std::vector<double> sample(300);
        for (auto& x : sample) x = synthetic::exponential(rng, 1.3);
        std::vector<double> scaled = sample;
        for (auto& x : scaled) x *= 7.0;
        CHECK(ks_exponential(sample, 1.0).statistic ==
              doctest::Approx(ks_exponential(scaled, 1.0 / 7.0).statistic).epsilon(1e-12));
    }
    SUBCASE("too few spacings") {
        CHECK_THROWS_AS(ks_exponential(std::vector<double>(19, 1.0), 1.0), InsufficientSampleError);
    }
}

TEST_CASE("count_independence") {
    CounterStream rng(2);
    SUBCASE("independent Poisson columns are rejected at most at the nominal level") {
        const int trials = 1000;
        int rejected = 0;
        for (int t = 0; t < trials; ++t) {
            CountTable table(500, std::vector<std::size_t>(3));
            for (auto& row : table) {
                for (auto& c : row) c = synthetic::poisson(rng, 1.5);
            }
            rejected += count_independence(table).pass ? 0 : 1;
        }
        CHECK(rejected <= 10 + 2.0 * std::sqrt(trials * 0.01 * 0.99));
    }
    SUBCASE("duplicated column fails") {
        CountTable table(300, std::vector<std::size_t>(2));
        for (auto& row : table) {
            row[0] = synthetic::poisson(rng, 1.5);
            row[1] = row[0];
        }
        CHECK_FALSE(count_independence(table).pass);
    }
    SUBCASE("degenerate margin is flagged") {
        CountTable table(200, std::vector<std::size_t>{0, 1});
        const auto report = count_independence(table);
        CHECK(report.flagged);
        CHECK_FALSE(report.pass);
    }
    SUBCASE("insufficient samples") {
        CHECK_THROWS_AS(count_independence(CountTable(1, std::vector<std::size_t>{1, 2})),
                        InsufficientSampleError);
        CHECK_THROWS_AS(count_independence(CountTable(200, std::vector<std::size_t>{1})),
                        InsufficientSampleError);
    }
}

TEST_CASE("variance_mean_ratio") {
    CHECK(variance_mean_ratio(std::vector<std::size_t>(10, 4)) == 0.0);
    CHECK_FALSE(variance_mean_ratio(std::vector<std::size_t>(10, 0)).has_value());
    CHECK_THROWS_AS(variance_mean_ratio(std::vector<std::size_t>{}), ValidationError);
    CounterStream rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> counts(10000);
        for (auto& c : counts) c = synthetic::poisson(rng, 2.0);
        const auto ratio = variance_mean_ratio(counts);
        REQUIRE(ratio.has_value());
        CHECK(*ratio >= 0.9);
        CHECK(*ratio <= 1.1);
    }
}

TEST_CASE("linear_fit") {
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.5};
    std::vector<double> y;
    for (const double v : x) y.push_back(2.0 * v + 1.0);
    auto fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-14));

    fit = linear_fit(x, std::vector<double>(5, 3.0));
    CHECK(fit.slope == 0.0);
    CHECK(fit.r_squared == 0.0);

    CHECK_THROWS_AS(linear_fit(std::vector<double>(4, 1.0), std::vector<double>(4, 0.0)), ValidationError);
    CHECK_THROWS_AS(linear_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InsufficientSampleError);

    CounterStream rng(44);
    std::vector<double> xs(60), ys(60);
    Eigen::MatrixXd A(60, 2);
    Eigen::VectorXd b(60);
    for (int i = 0; i < 60; ++i) {
        xs[i] = 10.0 * rng.next_unit();
        ys[i] = -0.7 * xs[i] + 3.0 + 0.5 * synthetic::normal(rng);
        A(i, 0) = xs[i];
        A(i, 1) = 1.0;
        b(i) = ys[i];
    }
    const Eigen::Vector2d normal = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    fit = linear_fit(xs, ys);
    CHECK(std::abs(fit.slope - normal(0)) < 1e-10);
    CHECK(std::abs(fit.intercept - normal(1)) < 1e-10);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
}
