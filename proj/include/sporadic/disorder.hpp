#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sporadic/lattice.hpp"

namespace sporadic {

/// Single-site law mu. Only the uniform family is implemented; `kind` leaves room for more.
struct SingleSiteLaw {
    enum class Kind { Uniform };

    Kind kind = Kind::Uniform;
    double lower = -1.0;
    double upper = 0.0;

    static SingleSiteLaw uniform(double a, double b) { return {Kind::Uniform, a, b}; }

    /// inf supp mu
    double support_min() const { return lower; }
    double support_max() const { return upper; }
    /// max |x| over supp mu
    double max_abs() const;
    /// sup of the density
    double density_bound() const;
    double density(double x) const;
    /// Inverse CDF on [0, 1).
    double quantile(double u) const;
    double mean() const;
    std::string describe() const;
};

/// Single-site law together with the coupling lambda.
struct DisorderModel {
    SingleSiteLaw law;
    double coupling = 1.0;

    /// Compact support, bounded density, more than one point, inf supp < 0, lambda > 0.
    void validate() const;
};

/// One draw of the potential on the active sites of a cube.
///
/// Values are stored for the sites of Lambda cap M Z^d only; every other site
/// carries potential zero.
struct DisorderRealization {
    LatticeSpec spec;
    std::uint64_t seed = 0;
    std::vector<Site> sites;     // lexicographic, on the sublattice
    std::vector<double> values;  // parallel to sites

    std::optional<double> value_at(const Site& site) const;
    /// Potential V(site), zero off the sublattice. Throws if site is on the sublattice but unknown.
    double potential(const Site& site) const;
};

/// Value of the potential at an absolute sublattice site. Depends only on (seed, site).
double site_potential(const DisorderModel& model, std::uint64_t seed, const Site& site);

/// One i.i.d. draw per site of Lambda cap M Z^d.
DisorderRealization sample_disorder(const LatticeSpec& spec, const DisorderModel& model,
                                    std::uint64_t seed);

/// Moves the realization by a sublattice vector: the potential at site + shift equals
/// the old potential at site. Throws ValidationError if shift is not in M Z^d.
DisorderRealization translate(const DisorderRealization& realization, const Site& shift);

/// Copy of the realization with the potential at one sublattice site replaced.
DisorderRealization with_value(const DisorderRealization& realization, const Site& site,
                               double value);

nlohmann::json to_json(const DisorderRealization& realization);
DisorderRealization realization_from_json(const nlohmann::json& j);

}  // namespace sporadic
