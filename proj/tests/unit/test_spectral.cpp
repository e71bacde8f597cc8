#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "sporadic/error.hpp"
#include "sporadic/hamiltonian.hpp"
#include "sporadic/rng.hpp"
#include "sporadic/spectral.hpp"

using namespace sporadic;

namespace {

DisorderModel model_with(double lambda) { return {SingleSiteLaw::uniform(-1.0, 0.0), lambda}; }

SparseHamiltonian random_hamiltonian(int d, std::int64_t L, double lambda, std::uint64_t seed,
                                     std::int64_t M = 2) {
    LatticeSpec spec{d, L, M, {}};
    const auto model = model_with(lambda);
    return assemble_hamiltonian(spec, model, sample_disorder(spec, model, seed));
}

// random symmetric matrix with -1 couplings on a random sparse graph
SparseHamiltonian random_graph(std::size_t n, CounterStream& rng) {
    SparseHamiltonian H;
    for (std::size_t i = 0; i < n; ++i) {
        H.diagonal.push_back(8.0 * rng.next_unit() - 4.0);
        H.sites.push_back({static_cast<std::int64_t>(i)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < std::min(n, i + 6); ++j) {
            if (rng.next_unit() < 0.5) {
                H.pairs.emplace_back(i, j);
            }
        }
    }
    return H;
}

std::size_t dense_count(const std::vector<double>& ev, const EnergyInterval& I) {
    std::size_t count = 0;
    for (const double e : ev) count += I.contains(e) ? 1 : 0;
    return count;
}

}  // namespace

TEST_CASE("dense_spectrum basics") {
    SparseHamiltonian one;
    one.diagonal = {1.25};
    one.sites = {{0}};
    const auto s = dense_spectrum(one, true);
    CHECK(s.eigenvalues == std::vector<double>{1.25});
    CHECK(std::abs((*s.eigenvectors)(0, 0)) == doctest::Approx(1.0));

    for (std::int64_t L : {3, 10, 50}) {
        const auto H = random_hamiltonian(1, L, 1e-300, 1);  // potential negligible
        const auto ev = dense_spectrum(H, false).eigenvalues;
        for (std::int64_t j = 1; j <= L; ++j) {
            const double exact = 2.0 - 2.0 * std::cos(j * std::numbers::pi / (L + 1));
            CHECK(std::abs(ev[static_cast<std::size_t>(j - 1)] - exact) < 1e-10);
        }
    }
}

TEST_CASE("dense_spectrum invariants and reconstruction") {
    CounterStream rng(5);
    for (int trial = 0; trial < 4; ++trial) {
        const SparseHamiltonian H =
            trial < 2 ? random_graph(50, rng) : random_hamiltonian(trial - 1, 7, 6.0, trial);
        const auto s = dense_spectrum(H, true);
        const Eigen::MatrixXd& Q = *s.eigenvectors;
        const auto n = static_cast<Eigen::Index>(H.size());
        Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(s.eigenvalues.data(), n);
        CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
        CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((to_dense(H) - Q * lambda.asDiagonal() * Q.transpose()).norm() < 1e-8);
        CHECK(s.residual_norm < 1e-8 * H.scale());
        double trace = 0.0;
        for (const double d : H.diagonal) trace += d;
        CHECK(std::abs(lambda.sum() - trace) < 1e-8 * n * H.scale());
    }
}

TEST_CASE("dense_spectrum cap") {
    const auto H = random_hamiltonian(1, 100, 1.0, 1);
    CHECK_THROWS_AS(dense_spectrum(H, false, 50), CapacityError);
}

TEST_CASE("count_in_interval matches dense counts") {
    CounterStream rng(2024);
    const auto H0 = random_hamiltonian(2, 6, 8.0, 3);
    const auto ev0 = dense_spectrum(H0, false).eigenvalues;
    CHECK(count_in_interval(H0, {ev0.back() + 1.0, ev0.back() + 2.0}).count == 0);
    CHECK(count_in_interval(H0, {ev0.front() - 3.0, ev0.front() - 0.5}).count == 0);
    CHECK(count_in_interval(H0, {ev0.front() - 1.0, ev0.back() + 1.0}).count == H0.size());

    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 2;
        const std::int64_t L = d == 1 ? 5 + static_cast<std::int64_t>(rng.next_unit() * 395)
                                      : 2 + static_cast<std::int64_t>(rng.next_unit() * 18);
        const double lambda = 0.5 + 20.0 * rng.next_unit();
        const auto H = random_hamiltonian(d, L, lambda, 1000 + trial, 2 + trial % 3);
        const auto ev = dense_spectrum(H, false).eigenvalues;
        const double a = ev.front() - 1.0 + (ev.back() - ev.front() + 2.0) * rng.next_unit();
        const double b = a + (ev.back() + 1.0 - a) * rng.next_unit() + 1e-3;
        const EnergyInterval I{a, b};
        CHECK(count_in_interval(H, I).count == dense_count(ev, I));
    }
}

TEST_CASE("count_in_interval nudges at exact eigenvalues") {
    const auto H = random_hamiltonian(1, 3, 1e-300, 1);  // eigenvalues 2 - sqrt2, 2, 2 + sqrt2
    const auto result = count_in_interval(H, {2.0, 5.0});
    CHECK(result.count == 2);
    CHECK(result.nudges >= 1);
    CHECK(count_in_interval(H, {0.0, 2.0}).count == 1);
}

TEST_CASE("rank-one monotonicity of eigenvalues") {
    const auto model = model_with(5.0);
    const auto H = random_hamiltonian(2, 6, 5.0, 17);
    const auto before = dense_spectrum(H, false).eigenvalues;
    const std::size_t j = *H.index_of({0, 0});
    const auto after =
        dense_spectrum(with_diagonal(H, j, H.diagonal[j] + 0.7), false).eigenvalues;
    for (std::size_t k = 0; k < before.size(); ++k) {
        CHECK(after[k] >= before[k] - 1e-12);
    }
    (void)model;
}

TEST_CASE("weighted_projector_trace") {
    const auto H = random_hamiltonian(2, 6, 7.0, 9);
    const auto s = dense_spectrum(H, true);
    std::vector<std::size_t> all(H.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const std::vector<std::size_t> some = {0, 3, 8, 20, 35};

    const EnergyInterval I{-3.0, 1.0};
    CHECK(weighted_projector_trace(s, I, all) ==
          doctest::Approx(static_cast<double>(count_in_interval(H, I).count)).epsilon(1e-12));
    const EnergyInterval everything{s.eigenvalues.front() - 1, s.eigenvalues.back() + 1};
    CHECK(weighted_projector_trace(s, everything, some) == doctest::Approx(5.0).epsilon(1e-12));

    const double e = s.eigenvalues[10];
    const EnergyInterval single{e - 1e-9, e + 1e-9};
    REQUIRE(count_in_spectrum(s, single) == 1);
    double expected = 0.0;
    for (const auto i : some) expected += std::pow((*s.eigenvectors)(static_cast<Eigen::Index>(i), 10), 2);
    CHECK(weighted_projector_trace(s, single, some) == doctest::Approx(expected).epsilon(1e-14));

    const EnergyInterval left{-3.0, -1.0}, right{-1.0, 1.0};
    CHECK(std::abs(weighted_projector_trace(s, left, some) + weighted_projector_trace(s, right, some) -
                   weighted_projector_trace(s, I, some)) < 1e-10);
    const double t = weighted_projector_trace(s, I, some);
    CHECK(t >= 0.0);
    CHECK(t <= std::min<double>(some.size(), count_in_spectrum(s, I)) + 1e-12);

    auto without = s;
    without.eigenvectors.reset();
    CHECK_THROWS_AS(weighted_projector_trace(without, I, some), ValidationError);
}

TEST_CASE("resolvent_column") {
    using cplx = std::complex<double>;
    SUBCASE("1x1") {
        SparseHamiltonian one;
        one.diagonal = {-0.75};
        one.sites = {{0}};
        const auto z = ComplexShift::make(-1.0, 0.1);
        const auto g = resolvent_column(one, z, 0);
        CHECK(std::abs(g.values[0] - 1.0 / (cplx(-0.75) - z.value())) < 1e-15);
    }
    SUBCASE("spectral expansion and symmetry") {
        CounterStream rng(77);
        const auto H = random_graph(30, rng);
        const auto s = dense_spectrum(H, true);
        const Eigen::MatrixXd& Q = *s.eigenvectors;
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            const auto z = ComplexShift::make(0.3, eps);
            for (std::size_t y : {0u, 7u, 29u}) {
                const auto g = resolvent_column(H, z, y);
                double gnorm = 0.0;
                for (const auto& v : g.values) gnorm += std::norm(v);
                CHECK(g.residual < 1e-10 * std::sqrt(gnorm));
                for (std::size_t x = 0; x < 30; ++x) {
                    cplx expected = 0.0;
                    for (Eigen::Index k = 0; k < 30; ++k) {
                        expected += Q(x, k) * Q(y, k) / (s.eigenvalues[k] - z.value());
                    }
                    CHECK(std::abs(g.values[x] - expected) < 1e-8 * std::max(1.0, std::abs(expected)));
                }
            }
        }
    }
    SUBCASE("G(x,y) = G(y,x)") {
        const auto H = random_hamiltonian(2, 8, 10.0, 4);
        const auto z = ComplexShift::make(-2.0, 1e-3);
        for (std::size_t x : {0u, 13u, 40u}) {
            const auto gx = resolvent_column(H, z, x);
            for (std::size_t y : {2u, 27u, 63u}) {
                const auto gy = resolvent_column(H, z, y);
                CHECK(std::abs(gx.values[y] - gy.values[x]) < 1e-10 * std::max(1.0, std::abs(gx.values[y])));
            }
        }
    }
    SUBCASE("epsilon must be positive") {
        CHECK_THROWS_AS(ComplexShift::make(0.0, 0.0), ValidationError);
    }
}

TEST_CASE("interlacing_check") {
    CounterStream rng(31337);
    const auto model = model_with(10.0);
    std::size_t violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 1 + trial % 2;
        const std::int64_t L = d == 1 ? 40 : 8;
        LatticeSpec spec{d, L, 2, {}};
        const auto r = sample_disorder(spec, model, 5000 + trial);
        const auto H = assemble_hamiltonian(spec, model, r);
        const auto& gamma = r.sites;
        const auto& site = gamma[static_cast<std::size_t>(rng.next_unit() * gamma.size())];
        const std::size_t j = *H.index_of(site);
        const double tau = model.law.quantile(rng.next_unit());
        const double a = -10.0 + 10.0 * rng.next_unit();
        const EnergyInterval I{a, a + 4.0 * rng.next_unit() + 1e-3};
        const std::size_t diff = interlacing_check(H, model, j, tau, I);
        // dense oracle on both sides
        const auto before = dense_spectrum(H, false).eigenvalues;
        const auto after = dense_spectrum(with_diagonal(H, j, 2.0 * d + model.coupling * tau), false).eigenvalues;
        const auto nb = static_cast<long>(dense_count(before, I));
        const auto na = static_cast<long>(dense_count(after, I));
        CHECK(static_cast<long>(diff) == std::abs(nb - na));
        violations += diff > 1 ? 1 : 0;
    }
    CHECK(violations == 0);

    const auto H = random_hamiltonian(1, 20, 10.0, 2);
    const std::size_t j = *H.index_of({0});
    const double v = (H.diagonal[j] - 2.0) / 10.0;
    CHECK(interlacing_check(H, model, j, v, {-5.0, -1.0}) == 0);
    CHECK(interlacing_check(H, model, j, -0.2, {-100.0, 100.0}) == 0);
}
