#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sporadic {

/// Absolute lattice coordinate in Z^d.
using Site = std::vector<std::int64_t>;

/// Cube Lambda_L(n) in Z^d together with the period M of the sublattice M Z^d.
///
/// The cube holds the sites i with -L/2 < i_v - n_v <= L/2 on every axis,
/// enumerated lexicographically with the first axis varying slowest.
struct LatticeSpec {
    int dimension = 1;
    std::int64_t side = 1;
    std::int64_t period = 2;
    Site center;  // empty means the origin

    /// Throws ValidationError unless d >= 1, L >= 1, M >= 2 and |center| == d.
    void validate() const;

    /// Center coordinate along one axis (origin if no center was given).
    std::int64_t center_coord(int axis) const;

    /// Smallest coordinate of the cube along one axis.
    std::int64_t lower(int axis) const;
};

/// Number of sites L^d. Throws CapacityError if it is not addressable.
std::size_t cube_volume(const LatticeSpec& spec);

/// All L^d sites of the cube in lexicographic order.
std::vector<Site> enumerate_cube(const LatticeSpec& spec);

/// Lexicographic index of a site, or nullopt if the site lies outside the cube.
std::optional<std::size_t> cube_index(const LatticeSpec& spec, const Site& site);

/// Inverse of cube_index.
Site cube_site(const LatticeSpec& spec, std::size_t index);

/// True if every coordinate is divisible by the period.
bool on_sublattice(const Site& site, std::int64_t period);

/// Sites of the cube that belong to M Z^d, in lexicographic order.
std::vector<Site> sublattice_sites(const LatticeSpec& spec);

std::int64_t l1_distance(const Site& a, const Site& b);

/// Largest index distance between nearest neighbours in the lexicographic order, L^(d-1).
std::size_t cube_bandwidth(const LatticeSpec& spec);

}  // namespace sporadic
