#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "sporadic/disorder.hpp"
#include "sporadic/error.hpp"
#include "sporadic/hamiltonian.hpp"
#include "sporadic/lattice.hpp"
#include "sporadic/rng.hpp"
#include "sporadic/spectral.hpp"

using namespace sporadic;

namespace {

LatticeSpec cube(int d, std::int64_t L, std::int64_t M = 2) {
    LatticeSpec spec;
    spec.dimension = d;
    spec.side = L;
    spec.period = M;
    return spec;
}

DisorderModel default_model(double lambda = 1.0) {
    return {SingleSiteLaw::uniform(-1.0, 0.0), lambda};
}

// independent dense assembly straight from the definition, used as an oracle
Eigen::MatrixXd dense_reference(const LatticeSpec& spec, const DisorderModel& model,
                                const DisorderRealization& realization) {
    const auto sites = enumerate_cube(spec);
    const auto n = static_cast<Eigen::Index>(sites.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        H(i, i) = 2.0 * spec.dimension + model.coupling * realization.potential(sites[i]);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (l1_distance(sites[i], sites[j]) == 1) {
                H(i, j) = -1.0;
            }
        }
    }
    return H;
}

}  // namespace

TEST_CASE("enumerate_cube matches the window -L/2 < i - n <= L/2") {
    CHECK(enumerate_cube(cube(1, 3)) == std::vector<Site>{{-1}, {0}, {1}});
    CHECK(enumerate_cube(cube(2, 2)) == std::vector<Site>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(enumerate_cube(cube(2, 5)).size() == 25);

    for (int d = 1; d <= 3; ++d) {
        for (std::int64_t L : {1, 2, 3, 4, 7, 10}) {
            LatticeSpec spec = cube(d, L);
            spec.center = Site(static_cast<std::size_t>(d), 3);
            const auto sites = enumerate_cube(spec);
            CHECK(sites.size() == static_cast<std::size_t>(std::pow(L, d)));
            CHECK(std::is_sorted(sites.begin(), sites.end()));
            for (std::size_t k = 0; k < sites.size(); ++k) {
                for (const auto c : sites[k]) {
                    CHECK(2.0 * (c - 3) > -static_cast<double>(L));
                    CHECK(2.0 * (c - 3) <= static_cast<double>(L));
                }
                REQUIRE(cube_index(spec, sites[k]) == k);
                CHECK(cube_site(spec, k) == sites[k]);
            }
        }
    }
    CHECK(enumerate_cube(cube(3, 100)).size() == 1000000);
}

TEST_CASE("cube_volume reports overflow explicitly") {
    CHECK_THROWS_AS(cube_volume(cube(8, 1 << 20)), CapacityError);
    CHECK_THROWS_AS(cube(1, 4, 1).validate(), ValidationError);
    CHECK_THROWS_AS(cube(0, 4).validate(), ValidationError);
}

TEST_CASE("sublattice_sites") {
    CHECK(sublattice_sites(cube(1, 8, 2)) == std::vector<Site>{{-2}, {0}, {2}, {4}});
    CHECK(sublattice_sites(cube(1, 9, 3)) == std::vector<Site>{{-3}, {0}, {3}});
    CHECK(sublattice_sites(cube(2, 4, 2)).size() == 4);
    for (int d = 1; d <= 3; ++d) {
        for (std::int64_t L = 1; L <= 9; ++L) {
            for (std::int64_t M = 2; M <= 4; ++M) {
                const auto count = static_cast<double>(sublattice_sites(cube(d, L, M)).size());
                CHECK(count >= std::pow(L / M, d));
                CHECK(count <= std::pow((L + M - 1) / M, d));
                if (L % M == 0) {
                    CHECK(count == std::pow(L / M, d));
                }
            }
        }
    }
}

TEST_CASE("disorder model validation") {
    CHECK_NOTHROW(default_model().validate());
    CHECK_THROWS_AS((DisorderModel{SingleSiteLaw::uniform(0.5, 1.0), 1.0}.validate()),
                    ValidationError);
    CHECK_THROWS_AS((DisorderModel{SingleSiteLaw::uniform(0.0, 1.0), 1.0}.validate()),
                    ValidationError);
    CHECK_THROWS_AS((DisorderModel{SingleSiteLaw::uniform(-1.0, -1.0), 1.0}.validate()),
                    ValidationError);
    CHECK_THROWS_AS((DisorderModel{SingleSiteLaw::uniform(-1.0, 0.0), 0.0}.validate()),
                    ValidationError);
    CHECK_THROWS_AS((DisorderModel{SingleSiteLaw::uniform(-INFINITY, 0.0), 1.0}.validate()),
                    ValidationError);
}

TEST_CASE("sample_disorder is deterministic, supported and stable under enlargement") {
    const auto model = default_model();
    const auto spec = cube(2, 12, 2);
    const auto a = sample_disorder(spec, model, 42);
    const auto b = sample_disorder(spec, model, 42);
    CHECK(a.values == b.values);
    CHECK(a.sites == sublattice_sites(spec));
    CHECK(sample_disorder(spec, model, 43).values != a.values);
    for (const double v : a.values) {
        CHECK(v >= -1.0);
        CHECK(v <= 0.0);
    }
    const auto big = sample_disorder(cube(2, 30, 2), model, 42);
    for (std::size_t k = 0; k < a.sites.size(); ++k) {
        CHECK(big.value_at(a.sites[k]) == a.values[k]);
    }
}

TEST_CASE("uniform[-1,0] sample mean") {
    // 10^4 draws: mean within 5 standard errors of -1/2, sd of uniform[-1,0] is 1/sqrt(12)
    const auto realization = sample_disorder(cube(1, 20000, 2), default_model(), 7);
    REQUIRE(realization.values.size() == 10000);
    const double mean =
        std::accumulate(realization.values.begin(), realization.values.end(), 0.0) / 10000.0;
    CHECK(std::abs(mean + 0.5) < 5.0 / std::sqrt(12.0) / 100.0);
}

TEST_CASE("realization JSON round trip") {
    const auto r = sample_disorder(cube(2, 6, 3), default_model(), 11);
    const auto back = realization_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(back.sites == r.sites);
    CHECK(back.values == r.values);
    CHECK(back.seed == r.seed);
}

TEST_CASE("assemble_hamiltonian small cases") {
    SUBCASE("single site") {
        const auto model = default_model(2.5);
        const auto spec = cube(1, 1);
        const auto r = sample_disorder(spec, model, 3);
        const auto H = assemble_hamiltonian(spec, model, r);
        REQUIRE(H.size() == 1);
        CHECK(H.diagonal[0] == doctest::Approx(2.0 + 2.5 * r.values[0]).epsilon(1e-15));
        CHECK(H.pairs.empty());
    }
    SUBCASE("d=2, L=1, lambda=1, v=-1 gives [3]") {
        const auto model = default_model(1.0);
        const auto spec = cube(2, 1);
        auto r = with_value(sample_disorder(spec, model, 1), Site{0, 0}, -1.0);
        const auto H = assemble_hamiltonian(spec, model, r);
        REQUIRE(H.size() == 1);
        CHECK(H.diagonal[0] == 3.0);
    }
    SUBCASE("free chain L=3") {
        const auto spec = cube(1, 3);
        const auto model = default_model(1.0);
        auto r = sample_disorder(spec, model, 1);
        for (auto& v : r.values) v = 0.0;
        const auto H = assemble_hamiltonian(spec, model, r);
        CHECK(H.diagonal == std::vector<double>{2.0, 2.0, 2.0});
        CHECK(H.pairs.size() == 2);
        const auto spectrum = dense_spectrum(H, false);
        CHECK(spectrum.eigenvalues[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
        CHECK(spectrum.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(spectrum.eigenvalues[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("assemble_hamiltonian agrees with the dense definition") {
    for (int d = 1; d <= 3; ++d) {
        for (std::int64_t L : {2, 3, 5}) {
            LatticeSpec spec = cube(d, L, 2 + (L % 2));
            spec.center = Site(static_cast<std::size_t>(d), -1);
            const auto model = default_model(3.0);
            const auto r = sample_disorder(spec, model, 99);
            const auto H = assemble_hamiltonian(spec, model, r);
            CHECK((to_dense(H) - dense_reference(spec, model, r)).cwiseAbs().maxCoeff() == 0.0);
            CHECK(H.bandwidth() == cube_bandwidth(spec));
        }
    }
}

TEST_CASE("free operator spectrum lies in [0, 4d]") {
    for (int d = 1; d <= 2; ++d) {
        for (std::int64_t L : {1, 4, 9, 16}) {
            const auto spec = cube(d, L);
            const auto model = default_model(1.0);
            auto r = sample_disorder(spec, model, 5);
            std::fill(r.values.begin(), r.values.end(), 0.0);
            const auto ev = dense_spectrum(assemble_hamiltonian(spec, model, r), false).eigenvalues;
            CHECK(ev.front() >= -1e-10);
            CHECK(ev.back() <= 4.0 * d + 1e-10);
        }
    }
}

TEST_CASE("assemble_free_restricted") {
    SUBCASE("d=1, M=2, L=4") {
        const auto H = assemble_free_restricted(cube(1, 4, 2));
        CHECK(H.sites == std::vector<Site>{{-1}, {1}});
        CHECK(H.diagonal == std::vector<double>{2.0, 2.0});
        CHECK(H.pairs.empty());
    }
    SUBCASE("d=1, M=2 is 2 times the identity for any L") {
        for (std::int64_t L = 1; L <= 40; ++L) {
            const auto H = assemble_free_restricted(cube(1, L, 2));
            CHECK(H.pairs.empty());
            CHECK(std::all_of(H.diagonal.begin(), H.diagonal.end(), [](double x) { return x == 2.0; }));
        }
    }
    SUBCASE("empty site set") {
        // L=1 holds only the origin, which is on the sublattice
        const auto H = assemble_free_restricted(cube(2, 1, 2));
        CHECK(H.size() == 0);
        CHECK(dense_spectrum(H, true).eigenvalues.empty());
    }
    SUBCASE("positive bottom of the spectrum") {
        for (int d = 1; d <= 3; ++d) {
            for (std::int64_t M : {2, 3, 4}) {
                for (std::int64_t L : {4, 6, 9}) {
                    if (std::pow(L, d) > 800) continue;
                    const auto H = assemble_free_restricted(cube(d, L, M));
                    const auto ev = dense_spectrum(H, false).eigenvalues;
                    REQUIRE(!ev.empty());
                    CHECK(ev.front() > 0.0);
                }
            }
        }
    }
}

TEST_CASE("assemble_decoupled is a direct sum") {
    const auto model = default_model(4.0);
    SUBCASE("d=1, M=2, L=4") {
        const auto spec = cube(1, 4, 2);
        const auto r = sample_disorder(spec, model, 8);
        const auto H = assemble_decoupled(spec, model, r);
        CHECK(H.pairs.empty());
        CHECK(H.diagonal[0] == 2.0);
        CHECK(H.diagonal[1] == 2.0 + 4.0 * r.values[0]);
        CHECK(H.diagonal[2] == 2.0);
        CHECK(H.diagonal[3] == 2.0 + 4.0 * r.values[1]);
    }
    SUBCASE("spectrum is the union of block spectra") {
        const auto spec = cube(2, 6, 3);
        const auto r = sample_disorder(spec, model, 8);
        const auto H = assemble_decoupled(spec, model, r);
        const auto full = assemble_hamiltonian(spec, model, r);
        CHECK(H.diagonal == full.diagonal);
        std::vector<double> expected = dense_spectrum(assemble_free_restricted(spec), false).eigenvalues;
        for (const double v : r.values) {
            expected.push_back(4.0 + 4.0 * v);
        }
        std::sort(expected.begin(), expected.end());
        const auto ev = dense_spectrum(H, false).eigenvalues;
        REQUIRE(ev.size() == expected.size());
        for (std::size_t k = 0; k < ev.size(); ++k) {
            CHECK(ev[k] == doctest::Approx(expected[k]).epsilon(1e-12));
        }
        for (const auto& [i, j] : H.pairs) {
            CHECK(on_sublattice(H.sites[i], 3) == on_sublattice(H.sites[j], 3));
        }
    }
}

TEST_CASE("apply_hamiltonian") {
    const auto model = default_model(2.0);
    const auto spec = cube(2, 7, 2);
    const auto H = assemble_hamiltonian(spec, model, sample_disorder(spec, model, 1));
    const std::vector<double> zero(H.size(), 0.0);
    CHECK(apply_hamiltonian(H, zero) == zero);
    CHECK_THROWS_AS(apply_hamiltonian(H, std::vector<double>(3)), ValidationError);

    SparseHamiltonian one;
    one.diagonal = {-1.5};
    one.sites = {{0}};
    CHECK(apply_hamiltonian(one, std::vector<double>{4.0}) == std::vector<double>{-6.0});

    const Eigen::MatrixXd dense = to_dense(H);
    CounterStream rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> u(H.size()), w(H.size());
        for (auto& x : u) x = 2.0 * rng.next_unit() - 1.0;
        for (auto& x : w) x = 2.0 * rng.next_unit() - 1.0;
        const auto Hu = apply_hamiltonian(H, u);
        const auto Hw = apply_hamiltonian(H, w);
        const double lhs = std::inner_product(Hu.begin(), Hu.end(), w.begin(), 0.0);
        const double rhs = std::inner_product(u.begin(), u.end(), Hw.begin(), 0.0);
        CHECK(std::abs(lhs - rhs) < 1e-12 * H.scale() * H.size());
        const Eigen::VectorXd ref = dense * Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            CHECK(Hu[i] == doctest::Approx(ref(static_cast<Eigen::Index>(i))).epsilon(1e-14));
        }
    }
}

TEST_CASE("translation covariance") {
    const auto model = default_model(5.0);
    for (int d = 1; d <= 2; ++d) {
        const auto spec = cube(d, 6, 2);
        const auto r = sample_disorder(spec, model, 21);
        Site shift(static_cast<std::size_t>(d), 4);
        shift[0] = -2;
        const auto moved = translate(r, shift);
        const auto H = assemble_hamiltonian(spec, model, r);
        const auto H_moved = assemble_hamiltonian(moved.spec, model, moved);
        CHECK(H.diagonal == H_moved.diagonal);
        CHECK(H.pairs == H_moved.pairs);
        CHECK_THROWS_AS(translate(r, Site(static_cast<std::size_t>(d), 1)), ValidationError);
    }
}

TEST_CASE("mismatched realization is rejected") {
    const auto model = default_model();
    const auto r = sample_disorder(cube(1, 8), model, 1);
    CHECK_THROWS_AS(assemble_hamiltonian(cube(1, 10), model, r), ValidationError);
}
