#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sporadic/disorder.hpp"
#include "sporadic/error.hpp"
#include "sporadic/lattice.hpp"

namespace sporadic {

/// Real symmetric finite-volume operator.
///
/// Diagonal entries are stored explicitly; every off-diagonal entry equals -1 and
/// is stored once as an index pair (i < j). Indices follow the lexicographic
/// order of the retained sites.
struct SparseHamiltonian {
    int dimension = 1;
    std::vector<double> diagonal;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<Site> sites;

    std::size_t size() const { return diagonal.size(); }
    /// max |i - j| over stored pairs
    std::size_t bandwidth() const;
    /// Gershgorin bound on the spectral radius, at least 1.
    double scale() const;
    std::optional<std::size_t> index_of(const Site& site) const;
};

/// H_{omega,Lambda} = chi_Lambda (H_0 + lambda V) chi_Lambda with the full diagonal 2d on the boundary.
SparseHamiltonian assemble_hamiltonian(const LatticeSpec& spec, const DisorderModel& model,
                                       const DisorderRealization& realization);

/// Free operator restricted to the sites of the cube off the sublattice.
SparseHamiltonian assemble_free_restricted(const LatticeSpec& spec);

/// H_{omega,Lambda} with all bonds between sublattice and non-sublattice sites removed.
SparseHamiltonian assemble_decoupled(const LatticeSpec& spec, const DisorderModel& model,
                                     const DisorderRealization& realization);

/// Copy of H with one diagonal entry replaced.
SparseHamiltonian with_diagonal(const SparseHamiltonian& H, std::size_t index, double value);

/// out = H v. Works for real and complex vectors.
template <typename Scalar>
void apply_hamiltonian(const SparseHamiltonian& H, std::span<const Scalar> v, std::span<Scalar> out) {
    if (v.size() != H.size() || out.size() != H.size()) {
        throw ValidationError("apply_hamiltonian: vector length does not match operator size");
    }
    for (std::size_t i = 0; i < H.size(); ++i) {
        out[i] = H.diagonal[i] * v[i];
    }
    for (const auto& [i, j] : H.pairs) {
        out[i] -= v[j];
        out[j] -= v[i];
    }
}

std::vector<double> apply_hamiltonian(const SparseHamiltonian& H, std::span<const double> v);

}  // namespace sporadic
