#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sporadic/disorder.hpp"
#include "sporadic/hamiltonian.hpp"
#include "sporadic/lattice.hpp"
#include "sporadic/spectral.hpp"
#include "sporadic/stats_tests.hpp"

namespace sporadic {

// ---------------------------------------------------------------------------
// Density of states

/// nu_L(I) = (number of eigenvalues in I) / L^d.
double dos_finite_volume(const SpectrumResult& spectrum, std::int64_t side, int dimension,
                         const EnergyInterval& interval);

/// tr(chi_{Lambda_M(cell)} E(I)) / M^d on the finite cube. `H` supplies the site map.
/// The default cell is Lambda_M(0). Sites of the cell outside the cube are ignored.
double dos_cell_trace(const SpectrumResult& spectrum, const SparseHamiltonian& H,
                      const LatticeSpec& spec, const EnergyInterval& interval,
                      const Site& cell_center = {});

/// Centers of the (L/M)^d blocks of side M that tile the cube. Requires M | L.
std::vector<Site> tiling_cell_centers(const LatticeSpec& spec);

// ---------------------------------------------------------------------------
// Wegner / Minami

struct RatioEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::size_t realizations = 0;
};

/// mean N(I) / (|Lambda| |I|). Requires I = [a, b) with b < 0 unless `diagnostic`.
RatioEstimate wegner_ratio(std::span<const std::size_t> counts, std::size_t volume,
                           const EnergyInterval& interval, bool diagnostic = false);

/// mean N(N - 1) / (|Lambda|^2 |I|^2). Same domain rule as wegner_ratio.
RatioEstimate minami_ratio(std::span<const std::size_t> counts, std::size_t volume,
                           const EnergyInterval& interval, bool diagnostic = false);

/// Ratios over a sequence of interval widths with a log-log trend.
struct ScalingScan {
    std::vector<double> widths;
    std::vector<RatioEstimate> ratios;
    double max_ratio = 0.0;
    /// OLS of log(ratio) on log(width), over the nonzero ratios; nullopt with < 3 of them.
    std::optional<LinearFit> log_fit;
};

ScalingScan make_scaling_scan(std::span<const double> widths, std::span<const RatioEstimate> ratios);

/// Dyadic widths w0, w0/2, ..., down to (and including) w_min.
std::vector<double> dyadic_widths(double widest, double narrowest);

// ---------------------------------------------------------------------------
// Rescaled level statistics

struct PointProcessSample {
    std::vector<double> points;     // (e_k - E) L^d, ascending, inside `window`
    std::vector<double> next_gaps;  // rescaled gap from each point to the next eigenvalue, if any
    EnergyInterval window;          // in rescaled units
    double energy = 0.0;
    std::int64_t side = 0;
    int dimension = 1;
    std::uint64_t seed = 0;

    std::size_t count_in(const EnergyInterval& subwindow) const;
};

PointProcessSample rescaled_points(const SpectrumResult& spectrum, double energy,
                                   std::int64_t side, int dimension, const EnergyInterval& window,
                                   std::uint64_t seed = 0);

/// Mean point count per unit rescaled length. Samples must share (E, L, window).
RatioEstimate intensity_estimate(std::span<const PointProcessSample> samples,
                                 const EnergyInterval& window);

/// Symmetric difference quotient nu((E - eps, E + eps)) / (2 eps) over a decreasing eps grid.
struct DensityTabulation {
    double energy = 0.0;
    std::vector<double> epsilons;
    std::vector<double> values;
    std::vector<double> standard_errors;
    std::vector<double> richardson;  // eps^2-extrapolation of consecutive pairs
    double estimate = 0.0;
    double estimate_se = 0.0;
    double chosen_epsilon = 0.0;
    bool stable = false;
    double relative_spread = 0.0;  // (max - min) / |estimate| over the accepted prefix
};

/// `spectra` holds the eigenvalues of each realization on a cube with `volume` sites.
DensityTabulation dos_density_estimate(std::span<const std::vector<double>> spectra,
                                       std::size_t volume, double energy,
                                       std::span<const double> epsilons);

/// Scan of candidate energies for a stable, positive density estimate.
struct DensityScan {
    std::vector<DensityTabulation> candidates;
    std::optional<std::size_t> chosen;
};

DensityScan scan_density_energies(std::span<const std::vector<double>> spectra,
                                  std::size_t volume, std::span<const double> energies,
                                  std::span<const double> epsilons);

// ---------------------------------------------------------------------------
// Resolvent side

struct DecayFit {
    std::vector<std::int64_t> distances;
    std::vector<double> moments;          // ensemble mean of the shell-averaged |G|^s
    std::vector<double> standard_errors;
    std::vector<double> log_moments;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool fitted = false;  // false with fewer than 3 distances; slope and intercept then stay 0
    std::size_t realizations = 0;
};

struct FractionalMomentParams {
    double energy = -1.0;
    double epsilon = 1e-3;
    double s = 0.3;
    Site source;                      // empty: cube center
    std::int64_t max_distance = -1;   // -1: L/4 (central half of the cube)
};

/// For each l1 distance r, the mean over realizations of the average over y at distance r
/// of |(H - E - i eps)^{-1}(x, y)|^s, with an OLS fit of log mean on r.
DecayFit fractional_moment_profile(const LatticeSpec& spec, const DisorderModel& model,
                                   const FractionalMomentParams& params,
                                   std::span<const std::uint64_t> seeds, unsigned threads = 1);

/// max over x of sum over y in the cube minus the sublattice of
/// |(H_{0,Gamma^c} - E)^{-1}(x, y)|^s e^{s delta |x - y|}. Requires E below the restricted spectrum.
double free_resolvent_bound(const LatticeSpec& spec, double energy, double s, double delta);

/// max over eigenpairs with eigenvalue <= e_tilde of ||psi|| / ||chi_Gamma psi||;
/// nullopt when no eigenvalue lies at or below e_tilde.
std::optional<double> unique_continuation_ratio(const SpectrumResult& spectrum,
                                                const SparseHamiltonian& H, std::int64_t period,
                                                double e_tilde);

/// lambda max|supp mu| / |E~|, the bound implied by ||(H_0 - E)^{-1}|| <= 1/|E|.
double unique_continuation_bound(const DisorderModel& model, double e_tilde);

/// int <delta_j, E_{H(tau)}(I) delta_j> d mu(tau), midpoint rule with `nodes` nodes over supp mu.
double spectral_average_check(const LatticeSpec& spec, const DisorderModel& model,
                              const DisorderRealization& base, const Site& site,
                              const EnergyInterval& interval, std::size_t nodes,
                              bool diagnostic = false);

struct DecouplingConstants {
    double c_s = 0.0;          // max over the alpha grid of int |x - alpha|^-s d mu
    double c_s_argmax = 0.0;
    double d_s = 0.0;          // max over the (alpha, beta, gamma) grid of the decoupling ratio
};

/// Grid estimates of the single-site decoupling constants. The C_s maximizer is refined by
/// golden-section search around the best grid point.
DecouplingConstants decoupling_constants(const SingleSiteLaw& law, double s,
                                         std::span<const double> alpha_grid,
                                         std::span<const std::complex<double>> triple_grid);

/// Default alpha grid: `points` equally spaced values covering supp mu with a margin of 1.
std::vector<double> default_alpha_grid(const SingleSiteLaw& law, std::size_t points = 201);

struct ConditionalMomentResult {
    double ratio = 0.0;
    double standard_error = 0.0;
    double numerator = 0.0;    // E |lambda V(x) + 2d - z|^-s |G(w,y)|^s
    double denominator = 0.0;  // E |G(w,y)|^s
    std::size_t realizations = 0;
};

/// Monte Carlo estimate of E[|lambda V(x) + 2d - z|^-s |G(w,y)|^s] / E[|G(w,y)|^s].
ConditionalMomentResult conditional_moment_ratio(const LatticeSpec& spec,
                                                 const DisorderModel& model, const Site& x,
                                                 const Site& w, const Site& y,
                                                 const ComplexShift& z, double s,
                                                 std::span<const std::uint64_t> seeds,
                                                 unsigned threads = 1);

}  // namespace sporadic
