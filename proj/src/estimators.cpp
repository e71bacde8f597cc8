#include "sporadic/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sporadic/banded_ldlt.hpp"
#include "sporadic/ensemble.hpp"
#include "sporadic/error.hpp"
#include "sporadic/quadrature.hpp"

namespace sporadic {

namespace {

double volume_of(std::int64_t side, int dimension) {
    if (side < 1 || dimension < 1) {
        throw ValidationError("volume needs L >= 1 and d >= 1");
    }
    return std::pow(static_cast<double>(side), dimension);
}

void check_interval(const EnergyInterval& interval) {
    if (!(interval.lower < interval.upper) || !std::isfinite(interval.lower) ||
        !std::isfinite(interval.upper)) {
        throw ValidationError("interval must be finite with lower < upper");
    }
}

void check_negative_interval(const EnergyInterval& interval, bool diagnostic, const char* who) {
    check_interval(interval);
    if (!diagnostic && interval.upper >= 0.0) {
        throw DomainError(std::string(who) + ": interval must lie below 0 (upper end " +
                          std::to_string(interval.upper) + ")");
    }
}

void check_fractional_s(double s) {
    if (!(s > 0.0 && s < 0.5)) {
        throw ValidationError("fractional power s must lie in (0, 1/2)");
    }
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(std::span<const double> values) {
    MeanSe out;
    const auto n = static_cast<double>(values.size());
    for (const double v : values) out.mean += v;
    out.mean /= n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

Site resolve_site(const LatticeSpec& spec, const Site& site) {
    if (!site.empty()) {
        if (static_cast<int>(site.size()) != spec.dimension) {
            throw ValidationError("site dimension does not match the lattice");
        }
        return site;
    }
    Site c(static_cast<std::size_t>(spec.dimension));
    for (int v = 0; v < spec.dimension; ++v) c[static_cast<std::size_t>(v)] = spec.center_coord(v);
    return c;
}

std::size_t operator_index(const SparseHamiltonian& H, const Site& site) {
    const auto idx = H.index_of(site);
    if (!idx) {
        throw ValidationError("site lies outside the cube");
    }
    return *idx;
}

}  // namespace

// ---------------------------------------------------------------------------

double dos_finite_volume(const SpectrumResult& spectrum, std::int64_t side, int dimension,
                         const EnergyInterval& interval) {
    return static_cast<double>(count_in_spectrum(spectrum, interval)) / volume_of(side, dimension);
}

double dos_cell_trace(const SpectrumResult& spectrum, const SparseHamiltonian& H,
                      const LatticeSpec& spec, const EnergyInterval& interval,
                      const Site& cell_center) {
    spec.validate();
    Site c = cell_center.empty() ? Site(static_cast<std::size_t>(spec.dimension), 0) : cell_center;
    if (static_cast<int>(c.size()) != spec.dimension) {
        throw ValidationError("cell center dimension does not match the lattice");
    }
    LatticeSpec cell{spec.dimension, spec.period, spec.period, c};
    std::vector<std::size_t> subset;
    for (const Site& site : enumerate_cube(cell)) {
        if (const auto idx = H.index_of(site)) subset.push_back(*idx);
    }
    return weighted_projector_trace(spectrum, interval, subset) /
           volume_of(spec.period, spec.dimension);
}

std::vector<Site> tiling_cell_centers(const LatticeSpec& spec) {
    spec.validate();
    if (spec.side % spec.period != 0) {
        throw ValidationError("cell tiling needs M to divide L");
    }
    const std::int64_t blocks = spec.side / spec.period;
    LatticeSpec grid{spec.dimension, blocks, 2, Site(static_cast<std::size_t>(spec.dimension), 0)};
    std::vector<Site> centers;
    for (const Site& k : enumerate_cube(grid)) {
        Site c(k.size());
        for (int v = 0; v < spec.dimension; ++v) {
            const auto u = static_cast<std::size_t>(v);
            const std::int64_t block = k[u] - grid.lower(v);
            c[u] = spec.lower(v) + block * spec.period + (spec.period - 1) / 2;
        }
        centers.push_back(std::move(c));
    }
    return centers;
}

// ---------------------------------------------------------------------------

RatioEstimate wegner_ratio(std::span<const std::size_t> counts, std::size_t volume,
                           const EnergyInterval& interval, bool diagnostic) {
    check_negative_interval(interval, diagnostic, "wegner_ratio");
    if (counts.empty()) throw InsufficientSampleError("wegner_ratio needs at least one realization");
    if (volume == 0) throw ValidationError("wegner_ratio needs a nonempty volume");
    std::vector<double> v(counts.begin(), counts.end());
    const MeanSe m = mean_and_se(v);
    const double norm = static_cast<double>(volume) * interval.length();
    return {m.mean / norm, m.se / norm, counts.size()};
}

RatioEstimate minami_ratio(std::span<const std::size_t> counts, std::size_t volume,
                           const EnergyInterval& interval, bool diagnostic) {
    check_negative_interval(interval, diagnostic, "minami_ratio");
    if (counts.empty()) throw InsufficientSampleError("minami_ratio needs at least one realization");
    if (volume == 0) throw ValidationError("minami_ratio needs a nonempty volume");
    std::vector<double> v;
    v.reserve(counts.size());
    for (const std::size_t n : counts) {
        const auto x = static_cast<double>(n);
        v.push_back(n == 0 ? 0.0 : x * (x - 1.0));
    }
    const MeanSe m = mean_and_se(v);
    const double norm = std::pow(static_cast<double>(volume) * interval.length(), 2);
    return {m.mean / norm, m.se / norm, counts.size()};
}

ScalingScan make_scaling_scan(std::span<const double> widths, std::span<const RatioEstimate> ratios) {
    if (widths.size() != ratios.size()) {
        throw ValidationError("scaling scan: widths and ratios differ in length");
    }
    ScalingScan scan;
    scan.widths.assign(widths.begin(), widths.end());
    scan.ratios.assign(ratios.begin(), ratios.end());
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < widths.size(); ++k) {
        scan.max_ratio = std::max(scan.max_ratio, ratios[k].value);
        if (ratios[k].value > 0.0) {
            lx.push_back(std::log(widths[k]));
            ly.push_back(std::log(ratios[k].value));
        }
    }
    if (lx.size() >= 3) scan.log_fit = linear_fit(lx, ly);
    return scan;
}

std::vector<double> dyadic_widths(double widest, double narrowest) {
    if (!(widest > 0.0) || !(narrowest > 0.0) || narrowest > widest) {
        throw ValidationError("dyadic_widths needs 0 < narrowest <= widest");
    }
    std::vector<double> out;
    for (double w = widest; w >= narrowest * (1.0 - 1e-12); w *= 0.5) out.push_back(w);
    return out;
}

// ---------------------------------------------------------------------------

std::size_t PointProcessSample::count_in(const EnergyInterval& subwindow) const {
    const auto lo = std::lower_bound(points.begin(), points.end(), subwindow.lower);
    const auto hi = std::lower_bound(points.begin(), points.end(), subwindow.upper);
    return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

PointProcessSample rescaled_points(const SpectrumResult& spectrum, double energy,
                                   std::int64_t side, int dimension, const EnergyInterval& window,
                                   std::uint64_t seed) {
    check_interval(window);
    const double scale = volume_of(side, dimension);
    PointProcessSample out;
    out.window = window;
    out.energy = energy;
    out.side = side;
    out.dimension = dimension;
    out.seed = seed;
    const auto& ev = spectrum.eigenvalues;
    for (std::size_t k = 0; k < ev.size(); ++k) {
        const double p = (ev[k] - energy) * scale;
        if (!window.contains(p)) continue;
        out.points.push_back(p);
        if (k + 1 < ev.size()) out.next_gaps.push_back((ev[k + 1] - ev[k]) * scale);
    }
    return out;
}

RatioEstimate intensity_estimate(std::span<const PointProcessSample> samples,
                                 const EnergyInterval& window) {
    check_interval(window);
    if (samples.empty()) throw InsufficientSampleError("intensity_estimate needs samples");
    const PointProcessSample& first = samples.front();
    std::vector<double> counts;
    counts.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.energy != first.energy || s.side != first.side || s.dimension != first.dimension ||
            s.window.lower != first.window.lower || s.window.upper != first.window.upper) {
            throw ValidationError("intensity_estimate: samples differ in (E, L, window)");
        }
        if (window.lower < s.window.lower || window.upper > s.window.upper) {
            throw ValidationError("intensity_estimate: window exceeds the sampled window");
        }
        counts.push_back(static_cast<double>(s.count_in(window)));
    }
    const MeanSe m = mean_and_se(counts);
    return {m.mean / window.length(), m.se / window.length(), samples.size()};
}

DensityTabulation dos_density_estimate(std::span<const std::vector<double>> spectra,
                                       std::size_t volume, double energy,
                                       std::span<const double> epsilons) {
    if (spectra.empty()) throw InsufficientSampleError("dos_density_estimate needs spectra");
    if (epsilons.empty()) throw ValidationError("dos_density_estimate needs an epsilon grid");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0.0) || (k > 0 && !(epsilons[k] < epsilons[k - 1]))) {
            throw ValidationError("epsilon grid must be positive and strictly decreasing");
        }
    }
    DensityTabulation tab;
    tab.energy = energy;
    tab.epsilons.assign(epsilons.begin(), epsilons.end());
    const auto vol = static_cast<double>(volume);
    for (const double eps : epsilons) {
        std::vector<double> per;
        per.reserve(spectra.size());
        for (const auto& ev : spectra) {
            // open interval (E - eps, E + eps)
            const auto lo = std::upper_bound(ev.begin(), ev.end(), energy - eps);
            const auto hi = std::lower_bound(ev.begin(), ev.end(), energy + eps);
            const double n = hi > lo ? static_cast<double>(hi - lo) : 0.0;
            per.push_back(n / vol / (2.0 * eps));
        }
        const MeanSe m = mean_and_se(per);
        tab.values.push_back(m.mean);
        tab.standard_errors.push_back(m.se);
    }
    for (std::size_t k = 0; k + 1 < epsilons.size(); ++k) {
        const double a = epsilons[k] * epsilons[k];
        const double b = epsilons[k + 1] * epsilons[k + 1];
        tab.richardson.push_back((a * tab.values[k + 1] - b * tab.values[k]) / (a - b));
    }

    // walk toward small eps while neighbouring values agree within 3 combined standard errors
    std::size_t accepted = 0;
    for (std::size_t k = 1; k < epsilons.size(); ++k) {
        const double tol = 3.0 * std::hypot(tab.standard_errors[k], tab.standard_errors[k - 1]);
        if (std::abs(tab.values[k] - tab.values[k - 1]) > tol) break;
        accepted = k;
    }
    tab.stable = accepted > 0;
    tab.estimate = tab.values[accepted];
    tab.estimate_se = tab.standard_errors[accepted];
    tab.chosen_epsilon = epsilons[accepted];
    const auto [mn, mx] = std::minmax_element(tab.values.begin(), tab.values.begin() + static_cast<std::ptrdiff_t>(accepted) + 1);
    if (*mx == *mn) {
        tab.relative_spread = 0.0;
    } else {
        tab.relative_spread = tab.estimate != 0.0 ? (*mx - *mn) / std::abs(tab.estimate)
                                                  : std::numeric_limits<double>::infinity();
    }
    return tab;
}

DensityScan scan_density_energies(std::span<const std::vector<double>> spectra,
                                  std::size_t volume, std::span<const double> energies,
                                  std::span<const double> epsilons) {
    DensityScan scan;
    for (const double e : energies) {
        scan.candidates.push_back(dos_density_estimate(spectra, volume, e, epsilons));
    }
    for (std::size_t k = 0; k < scan.candidates.size(); ++k) {
        const auto& c = scan.candidates[k];
        if (!c.stable || !(c.estimate > 3.0 * c.estimate_se) || !(c.estimate > 0.0)) continue;
        if (!scan.chosen || c.relative_spread < scan.candidates[*scan.chosen].relative_spread) {
            scan.chosen = k;
        }
    }
    return scan;
}

// ---------------------------------------------------------------------------

DecayFit fractional_moment_profile(const LatticeSpec& spec, const DisorderModel& model,
                                   const FractionalMomentParams& params,
                                   std::span<const std::uint64_t> seeds, unsigned threads) {
    spec.validate();
    model.validate();
    check_fractional_s(params.s);
    if (!(params.energy < 0.0)) throw DomainError("fractional_moment_profile needs E < 0");
    const ComplexShift z = ComplexShift::make(params.energy, params.epsilon);
    if (seeds.empty()) throw InsufficientSampleError("fractional_moment_profile needs realizations");
    const Site x = resolve_site(spec, params.source);
    const std::int64_t rmax = params.max_distance >= 0 ? params.max_distance : spec.side / 4;

    const std::vector<Site> sites = enumerate_cube(spec);
    const auto x_index = cube_index(spec, x);
    if (!x_index) throw ValidationError("source site lies outside the cube");
    std::vector<std::int64_t> dist(sites.size());
    std::vector<std::size_t> shell_size(static_cast<std::size_t>(rmax) + 1, 0);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        dist[i] = l1_distance(sites[i], x);
        if (dist[i] <= rmax) ++shell_size[static_cast<std::size_t>(dist[i])];
    }

    using Row = std::vector<double>;
    const std::function<Row(std::size_t)> one = [&](std::size_t r) {
        const DisorderRealization omega = sample_disorder(spec, model, seeds[r]);
        const SparseHamiltonian H = assemble_hamiltonian(spec, model, omega);
        const ResolventColumn g = resolvent_column(H, z, *x_index);
        Row shell(shell_size.size(), 0.0);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            if (dist[i] <= rmax) shell[static_cast<std::size_t>(dist[i])] += std::pow(std::abs(g.values[i]), params.s);
        }
        for (std::size_t k = 0; k < shell.size(); ++k) {
            if (shell_size[k] > 0) shell[k] /= static_cast<double>(shell_size[k]);
        }
        return shell;
    };
    const std::vector<Row> rows = parallel_map<Row>(seeds.size(), threads, one);

    DecayFit fit;
    fit.realizations = seeds.size();
    std::vector<double> xs;
    for (std::size_t k = 0; k < shell_size.size(); ++k) {
        if (shell_size[k] == 0) continue;
        std::vector<double> column;
        column.reserve(rows.size());
        for (const Row& row : rows) column.push_back(row[k]);
        const MeanSe m = mean_and_se(column);
        if (!(m.mean > 0.0)) continue;
        fit.distances.push_back(static_cast<std::int64_t>(k));
        fit.moments.push_back(m.mean);
        fit.standard_errors.push_back(m.se);
        fit.log_moments.push_back(std::log(m.mean));
        xs.push_back(static_cast<double>(k));
    }
    if (xs.size() >= 3) {
        const LinearFit lf = linear_fit(xs, fit.log_moments);
        fit.slope = lf.slope;
        fit.intercept = lf.intercept;
        fit.r_squared = lf.r_squared;
        fit.fitted = true;
    }
    return fit;
}

double free_resolvent_bound(const LatticeSpec& spec, double energy, double s, double delta) {
    if (!(energy < 0.0)) throw DomainError("free_resolvent_bound needs E < 0");
    if (!(s > 0.0) || !(delta >= 0.0)) throw ValidationError("free_resolvent_bound needs s > 0 and delta >= 0");
    const SparseHamiltonian H = assemble_free_restricted(spec);
    if (H.size() == 0) return 0.0;
    if (count_below(H, energy).count > 0 || count_below(H, std::nextafter(energy, INFINITY)).count > 0) {
        throw DomainError("free_resolvent_bound: E is not below the restricted free spectrum");
    }
    // H - E is positive definite here, so the unpivoted factorization is stable
    const BandedLdlt<double> ldlt(H, energy, 0.0);
    if (!ldlt.ok()) throw NumericError("free_resolvent_bound: factorization failed");
    double sup = 0.0;
    std::vector<double> column(H.size());
    for (std::size_t x = 0; x < H.size(); ++x) {
        std::fill(column.begin(), column.end(), 0.0);
        column[x] = 1.0;
        ldlt.solve_in_place(column);
        double sum = 0.0;
        for (std::size_t y = 0; y < H.size(); ++y) {
            const auto r = static_cast<double>(l1_distance(H.sites[x], H.sites[y]));
            sum += std::pow(std::abs(column[y]), s) * std::exp(s * delta * r);
        }
        sup = std::max(sup, sum);
    }
    return sup;
}

std::optional<double> unique_continuation_ratio(const SpectrumResult& spectrum,
                                                const SparseHamiltonian& H, std::int64_t period,
                                                double e_tilde) {
    if (!(e_tilde < 0.0)) throw DomainError("unique_continuation_ratio needs E~ < 0");
    if (!spectrum.eigenvectors) throw ValidationError("unique_continuation_ratio needs eigenvectors");
    std::vector<Eigen::Index> gamma;
    for (std::size_t i = 0; i < H.size(); ++i) {
        if (on_sublattice(H.sites[i], period)) gamma.push_back(static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXd& Q = *spectrum.eigenvectors;
    std::optional<double> worst;
    for (std::size_t k = 0; k < spectrum.eigenvalues.size() && spectrum.eigenvalues[k] <= e_tilde; ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        double on = 0.0;
        for (const Eigen::Index i : gamma) on += Q(i, col) * Q(i, col);
        const double ratio = on > 0.0 ? Q.col(col).norm() / std::sqrt(on)
                                      : std::numeric_limits<double>::infinity();
        worst = std::max(worst.value_or(0.0), ratio);
    }
    return worst;
}

double unique_continuation_bound(const DisorderModel& model, double e_tilde) {
    if (!(e_tilde < 0.0)) throw DomainError("unique_continuation_bound needs E~ < 0");
    return model.coupling * model.law.max_abs() / std::abs(e_tilde);
}

double spectral_average_check(const LatticeSpec& spec, const DisorderModel& model,
                              const DisorderRealization& base, const Site& site,
                              const EnergyInterval& interval, std::size_t nodes, bool diagnostic) {
    check_negative_interval(interval, diagnostic, "spectral_average_check");
    model.validate();
    if (nodes == 0) throw ValidationError("spectral_average_check needs at least one node");
    if (!on_sublattice(site, spec.period)) throw ValidationError("spectral_average_check needs a sublattice site");
    const SparseHamiltonian H = assemble_hamiltonian(spec, model, base);
    const std::size_t j = operator_index(H, site);
    const auto J = static_cast<Eigen::Index>(j);
    const double lo = model.law.support_min();
    const double h = (model.law.support_max() - lo) / static_cast<double>(nodes);
    const double diag0 = 2.0 * spec.dimension;
    double total = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        const double tau = lo + (static_cast<double>(k) + 0.5) * h;
        const SparseHamiltonian Ht = with_diagonal(H, j, diag0 + model.coupling * tau);
        const SpectrumResult spec_t = dense_spectrum(Ht, true);
        double weight = 0.0;
        for (std::size_t e = 0; e < spec_t.eigenvalues.size(); ++e) {
            if (!interval.contains(spec_t.eigenvalues[e])) continue;
            const double a = (*spec_t.eigenvectors)(J, static_cast<Eigen::Index>(e));
            weight += a * a;
        }
        total += model.law.density(tau) * h * weight;
    }
    return total;
}

namespace {

double decoupling_ratio(const SingleSiteLaw& law, double s, std::complex<double> alpha,
                        std::complex<double> beta, std::complex<double> gamma) {
    const double cuts[] = {alpha.real(), beta.real(), gamma.real()};
    const double num = integrate_law(
        law,
        [&](const QuadraturePoint& p) {
            return std::pow(p.distance(gamma), s) * std::pow(p.distance(alpha), -s) * std::pow(p.distance(beta), -s);
        },
        cuts);
    const double mid = integrate_law(
        law, [&](const QuadraturePoint& p) { return std::pow(p.distance(gamma), s) * std::pow(p.distance(beta), -s); },
        cuts);
    return num / (mid * inverse_moment(law, alpha, s));
}

}  // namespace

std::vector<double> default_alpha_grid(const SingleSiteLaw& law, std::size_t points) {
    if (points < 2) throw ValidationError("alpha grid needs at least two points");
    const double lo = law.support_min() - 1.0;
    const double hi = law.support_max() + 1.0;
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

DecouplingConstants decoupling_constants(const SingleSiteLaw& law, double s,
                                         std::span<const double> alpha_grid,
                                         std::span<const std::complex<double>> triple_grid) {
    check_fractional_s(s);
    if (alpha_grid.empty()) throw ValidationError("decoupling_constants needs an alpha grid");
    DecouplingConstants out;
    std::size_t best = 0;
    for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
        const double v = inverse_moment(law, alpha_grid[k], s);
        if (v > out.c_s) {
            out.c_s = v;
            best = k;
        }
    }
    out.c_s_argmax = alpha_grid[best];
    if (alpha_grid.size() > 1) {
        // golden-section refinement of the maximizer between the neighbouring grid points
        double a = alpha_grid[best > 0 ? best - 1 : best];
        double b = alpha_grid[best + 1 < alpha_grid.size() ? best + 1 : best];
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        auto f = [&](double t) { return inverse_moment(law, t, s); };
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
            if (fc > fd) {
                b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
            } else {
                a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
            }
        }
        const double t = 0.5 * (a + b);
        const double ft = f(t);
        if (ft > out.c_s) {
            out.c_s = ft;
            out.c_s_argmax = t;
        }
    }
    for (const auto alpha : triple_grid) {
        for (const auto beta : triple_grid) {
            for (const auto gamma : triple_grid) {
                out.d_s = std::max(out.d_s, decoupling_ratio(law, s, alpha, beta, gamma));
            }
        }
    }
    return out;
}

ConditionalMomentResult conditional_moment_ratio(const LatticeSpec& spec,
                                                 const DisorderModel& model, const Site& x,
                                                 const Site& w, const Site& y,
                                                 const ComplexShift& z, double s,
                                                 std::span<const std::uint64_t> seeds,
                                                 unsigned threads) {
    spec.validate();
    model.validate();
    check_fractional_s(s);
    if (!on_sublattice(x, spec.period)) throw ValidationError("conditional_moment_ratio: x must be a sublattice site");
    if (seeds.size() < 2) throw InsufficientSampleError("conditional_moment_ratio needs at least 2 realizations");
    const auto wi = cube_index(spec, w);
    const auto yi = cube_index(spec, y);
    if (!wi || !yi || !cube_index(spec, x)) throw ValidationError("conditional_moment_ratio: site outside the cube");
    const std::complex<double> zv = z.value();
    using Pair = std::pair<double, double>;
    const std::function<Pair(std::size_t)> one = [&](std::size_t r) {
        const DisorderRealization omega = sample_disorder(spec, model, seeds[r]);
        const SparseHamiltonian H = assemble_hamiltonian(spec, model, omega);
        const ResolventColumn g = resolvent_column(H, z, *yi);
        const double gs = std::pow(std::abs(g.values[*wi]), s);
        const double f = std::pow(std::abs(model.coupling * omega.potential(x) + 2.0 * spec.dimension - zv), -s);
        return Pair{f * gs, gs};
    };
    const std::vector<Pair> rows = parallel_map<Pair>(seeds.size(), threads, one);
    ConditionalMomentResult out;
    out.realizations = rows.size();
    const auto n = static_cast<double>(rows.size());
    for (const auto& [a, b] : rows) {
        out.numerator += a;
        out.denominator += b;
    }
    out.numerator /= n;
    out.denominator /= n;
    out.ratio = out.numerator / out.denominator;
    // delta method for a ratio of means
    double ss = 0.0;
    for (const auto& [a, b] : rows) {
        const double u = a - out.ratio * b;
        ss += u * u;
    }
    out.standard_error = std::sqrt(ss / (n - 1.0) / n) / out.denominator;
    return out;
}

}  // namespace sporadic
