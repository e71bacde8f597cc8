#include "sporadic/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sporadic {

std::size_t SparseHamiltonian::bandwidth() const {
    std::size_t band = 0;
    for (const auto& [i, j] : pairs) {
        band = std::max<std::size_t>(band, j - i);
    }
    return band;
}

double SparseHamiltonian::scale() const {
    double bound = 1.0;
    for (const double d : diagonal) {
        bound = std::max(bound, std::abs(d) + 2.0 * dimension);
    }
    return bound;
}

std::optional<std::size_t> SparseHamiltonian::index_of(const Site& site) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), site);
    if (it == sites.end() || *it != site) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - sites.begin());
}

namespace {

void check_realization(const LatticeSpec& spec, const DisorderRealization& realization) {
    const auto& other = realization.spec;
    bool same = other.dimension == spec.dimension && other.side == spec.side &&
                other.period == spec.period;
    for (int axis = 0; same && axis < spec.dimension; ++axis) {
        same = other.center_coord(axis) == spec.center_coord(axis);
    }
    if (!same) {
        throw ValidationError("disorder realization was drawn for a different cube");
    }
    if (realization.values.size() != realization.sites.size()) {
        throw ValidationError("disorder realization is malformed");
    }
}

// Shared assembly over a subset of the cube. Pairs are the nearest-neighbour bonds
// (l1 distance 1) inside the cube that pass keep_pair.
SparseHamiltonian assemble_subset(const LatticeSpec& spec,
                                  const std::function<bool(const Site&)>& keep_site,
                                  const std::function<bool(bool, bool)>& keep_pair,
                                  const std::function<double(const Site&)>& diagonal_of) {
    const std::size_t volume = cube_volume(spec);
    if (volume > std::numeric_limits<std::uint32_t>::max()) {
        throw CapacityError("cube too large for 32-bit site indices");
    }
    std::vector<Site> all = enumerate_cube(spec);
    std::vector<std::int64_t> remap(volume, -1);
    std::vector<char> on_gamma(volume);

    SparseHamiltonian H;
    H.dimension = spec.dimension;
    for (std::size_t k = 0; k < volume; ++k) {
        on_gamma[k] = on_sublattice(all[k], spec.period);
        if (keep_site(all[k])) {
            remap[k] = static_cast<std::int64_t>(H.sites.size());
            H.diagonal.push_back(diagonal_of(all[k]));
            H.sites.push_back(all[k]);
        }
    }

    std::vector<std::size_t> stride(static_cast<std::size_t>(spec.dimension), 1);
    for (int axis = spec.dimension - 2; axis >= 0; --axis) {
        stride[static_cast<std::size_t>(axis)] =
            stride[static_cast<std::size_t>(axis) + 1] * static_cast<std::size_t>(spec.side);
    }
    const std::int64_t top = spec.side - 1;
    for (std::size_t k = 0; k < volume; ++k) {
        if (remap[k] < 0) {
            continue;
        }
        for (int axis = 0; axis < spec.dimension; ++axis) {
            const auto a = static_cast<std::size_t>(axis);
            if (all[k][a] - spec.lower(axis) == top) {
                continue;
            }
            const std::size_t n = k + stride[a];
            if (remap[n] < 0 || !keep_pair(on_gamma[k], on_gamma[n])) {
                continue;
            }
            H.pairs.emplace_back(static_cast<std::uint32_t>(remap[k]),
                                 static_cast<std::uint32_t>(remap[n]));
        }
    }
    std::sort(H.pairs.begin(), H.pairs.end());
    return H;
}

}  // namespace

SparseHamiltonian assemble_hamiltonian(const LatticeSpec& spec, const DisorderModel& model,
                                       const DisorderRealization& realization) {
    spec.validate();
    model.validate();
    check_realization(spec, realization);
    const double free_diag = 2.0 * spec.dimension;
    return assemble_subset(
        spec, [](const Site&) { return true; }, [](bool, bool) { return true; },
        [&](const Site& s) { return free_diag + model.coupling * realization.potential(s); });
}

SparseHamiltonian assemble_free_restricted(const LatticeSpec& spec) {
    spec.validate();
    const double free_diag = 2.0 * spec.dimension;
    return assemble_subset(
        spec, [&](const Site& s) { return !on_sublattice(s, spec.period); },
        [](bool a, bool b) { return !a && !b; }, [&](const Site&) { return free_diag; });
}

SparseHamiltonian assemble_decoupled(const LatticeSpec& spec, const DisorderModel& model,
                                     const DisorderRealization& realization) {
    spec.validate();
    model.validate();
    check_realization(spec, realization);
    const double free_diag = 2.0 * spec.dimension;
    return assemble_subset(
        spec, [](const Site&) { return true; }, [](bool a, bool b) { return a == b; },
        [&](const Site& s) { return free_diag + model.coupling * realization.potential(s); });
}

SparseHamiltonian with_diagonal(const SparseHamiltonian& H, std::size_t index, double value) {
    if (index >= H.size()) {
        throw ValidationError("with_diagonal: index out of range");
    }
    SparseHamiltonian out = H;
    out.diagonal[index] = value;
    return out;
}

std::vector<double> apply_hamiltonian(const SparseHamiltonian& H, std::span<const double> v) {
    std::vector<double> out(H.size());
    apply_hamiltonian<double>(H, v, std::span<double>(out));
    return out;
}

}  // namespace sporadic
