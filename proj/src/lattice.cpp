#include "sporadic/lattice.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include "sporadic/error.hpp"

namespace sporadic {

void LatticeSpec::validate() const {
    if (dimension < 1) {
        throw ValidationError("dimension d must be >= 1, got " + std::to_string(dimension));
    }
    if (side < 1) {
        throw ValidationError("side L must be >= 1, got " + std::to_string(side));
    }
    if (period < 2) {
        throw ValidationError("period M must be >= 2, got " + std::to_string(period));
    }
    if (!center.empty() && center.size() != static_cast<std::size_t>(dimension)) {
        throw ValidationError("center has " + std::to_string(center.size()) +
                              " coordinates, expected " + std::to_string(dimension));
    }
}

std::int64_t LatticeSpec::center_coord(int axis) const {
    return center.empty() ? 0 : center[static_cast<std::size_t>(axis)];
}

std::int64_t LatticeSpec::lower(int axis) const {
    // -L/2 < k <= L/2  <=>  -(L-1)/2 <= k (integer division)
    return center_coord(axis) - (side - 1) / 2;
}

std::size_t cube_volume(const LatticeSpec& spec) {
    spec.validate();
    const auto limit = static_cast<unsigned __int128>(std::numeric_limits<std::ptrdiff_t>::max());
    unsigned __int128 volume = 1;
    for (int axis = 0; axis < spec.dimension; ++axis) {
        volume *= static_cast<unsigned __int128>(spec.side);
        if (volume > limit) {
            throw CapacityError("cube volume L^d exceeds the addressable size (L=" +
                                std::to_string(spec.side) +
                                ", d=" + std::to_string(spec.dimension) + ")");
        }
    }
    return static_cast<std::size_t>(volume);
}

Site cube_site(const LatticeSpec& spec, std::size_t index) {
    const auto side = static_cast<std::size_t>(spec.side);
    Site site(static_cast<std::size_t>(spec.dimension));
    for (int axis = spec.dimension - 1; axis >= 0; --axis) {
        site[static_cast<std::size_t>(axis)] = spec.lower(axis) + static_cast<std::int64_t>(index % side);
        index /= side;
    }
    return site;
}

std::vector<Site> enumerate_cube(const LatticeSpec& spec) {
    const std::size_t volume = cube_volume(spec);
    std::vector<Site> sites;
    sites.reserve(volume);
    Site current(static_cast<std::size_t>(spec.dimension));
    for (int axis = 0; axis < spec.dimension; ++axis) {
        current[static_cast<std::size_t>(axis)] = spec.lower(axis);
    }
    for (std::size_t k = 0; k < volume; ++k) {
        sites.push_back(current);
        // odometer increment, last axis fastest
        for (int axis = spec.dimension - 1; axis >= 0; --axis) {
            auto& c = current[static_cast<std::size_t>(axis)];
            if (++c < spec.lower(axis) + spec.side) {
                break;
            }
            c = spec.lower(axis);
        }
    }
    return sites;
}

std::optional<std::size_t> cube_index(const LatticeSpec& spec, const Site& site) {
    if (site.size() != static_cast<std::size_t>(spec.dimension)) {
        return std::nullopt;
    }
    std::size_t index = 0;
    for (int axis = 0; axis < spec.dimension; ++axis) {
        const std::int64_t offset = site[static_cast<std::size_t>(axis)] - spec.lower(axis);
        if (offset < 0 || offset >= spec.side) {
            return std::nullopt;
        }
        index = index * static_cast<std::size_t>(spec.side) + static_cast<std::size_t>(offset);
    }
    return index;
}

bool on_sublattice(const Site& site, std::int64_t period) {
    for (const auto c : site) {
        if (c % period != 0) {
            return false;
        }
    }
    return true;
}

std::vector<Site> sublattice_sites(const LatticeSpec& spec) {
    std::vector<Site> out;
    for (auto& site : enumerate_cube(spec)) {
        if (on_sublattice(site, spec.period)) {
            out.push_back(std::move(site));
        }
    }
    return out;
}

std::int64_t l1_distance(const Site& a, const Site& b) {
    std::int64_t distance = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        distance += std::llabs(a[k] - b[k]);
    }
    return distance;
}

std::size_t cube_bandwidth(const LatticeSpec& spec) {
    std::size_t band = 1;
    for (int axis = 1; axis < spec.dimension; ++axis) {
        band *= static_cast<std::size_t>(spec.side);
    }
    return spec.side > 1 ? band : 0;
}

}  // namespace sporadic
