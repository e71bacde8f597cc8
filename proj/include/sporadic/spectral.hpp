#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sporadic/disorder.hpp"
#include "sporadic/hamiltonian.hpp"

namespace sporadic {

/// Largest operator the dense eigensolver accepts by default.
inline constexpr std::size_t kDenseCap = 4096;

struct SpectrumResult {
    std::vector<double> eigenvalues;              // ascending
    std::optional<Eigen::MatrixXd> eigenvectors;  // column k belongs to eigenvalue k
    /// max_k |H psi_k - e_k psi_k|, zero when no vectors were requested
    double residual_norm = 0.0;
};

/// Half-open energy interval [lower, upper).
struct EnergyInterval {
    double lower = 0.0;
    double upper = 0.0;

    static EnergyInterval make(double lower, double upper);
    static EnergyInterval centered(double center, double width);
    double length() const { return upper - lower; }
    bool contains(double e) const { return e >= lower && e < upper; }
};

/// z = energy + i epsilon with epsilon > 0.
struct ComplexShift {
    double energy = 0.0;
    double epsilon = 1e-3;

    static ComplexShift make(double energy, double epsilon);
    std::complex<double> value() const { return {energy, epsilon}; }
};

/// Full eigendecomposition. Throws CapacityError above `cap` sites.
SpectrumResult dense_spectrum(const SparseHamiltonian& H, bool want_vectors,
                              std::size_t cap = kDenseCap);

/// Dense copy of H, mostly for tests and small diagnostics.
Eigen::MatrixXd to_dense(const SparseHamiltonian& H);

struct InertiaCount {
    std::size_t count = 0;
    int nudges = 0;  // shift nudges needed across both factorizations
};

/// Number of eigenvalues strictly below `energy`, via the inertia of H - energy.
InertiaCount count_below(const SparseHamiltonian& H, double energy);

/// Number of eigenvalues in [a, b) from two shifted factorizations.
InertiaCount count_in_interval(const SparseHamiltonian& H, const EnergyInterval& interval);

/// Sum over eigenvalues in I of ||chi_S psi_k||^2. Requires eigenvectors.
double weighted_projector_trace(const SpectrumResult& spectrum, const EnergyInterval& interval,
                                std::span<const std::size_t> subset);

/// Count of eigenvalues in I, read off a computed spectrum.
std::size_t count_in_spectrum(const SpectrumResult& spectrum, const EnergyInterval& interval);

struct ResolventColumn {
    std::vector<std::complex<double>> values;  // G(x, y) = values[x]
    double residual = 0.0;                     // ||(H - z) g - e_y||
};

/// Column y of (H - z)^{-1}.
ResolventColumn resolvent_column(const SparseHamiltonian& H, const ComplexShift& z,
                                 std::size_t column);

/// |N_I(H) - N_I(H with V(j) = tau)| for the active site with operator index `site_index`.
std::size_t interlacing_check(const SparseHamiltonian& H, const DisorderModel& model,
                              std::size_t site_index, double tau, const EnergyInterval& interval);

}  // namespace sporadic
