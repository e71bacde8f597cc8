#include "sporadic/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>

#include "sporadic/ensemble.hpp"
#include "sporadic/estimators.hpp"
#include "sporadic/hamiltonian.hpp"
#include "sporadic/spectral.hpp"
#include "sporadic/stats_tests.hpp"
#include "sporadic/tables.hpp"

#ifndef SPORADIC_VERSION
#define SPORADIC_VERSION "unknown"
#endif

namespace sporadic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kDensityPilotStream = 1;

nlohmann::json maybe(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json to_json(const RatioEstimate& r) {
    return {{"value", r.value}, {"standard_error", r.standard_error}, {"realizations", r.realizations}};
}

nlohmann::json to_json(const std::optional<LinearFit>& fit) {
    if (!fit) return nullptr;
    return {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r_squared", fit->r_squared}};
}

nlohmann::json to_json(const DensityTabulation& t) {
    return {{"energy", t.energy},
            {"estimate", t.estimate},
            {"standard_error", t.estimate_se},
            {"chosen_epsilon", t.chosen_epsilon},
            {"stable", t.stable},
            {"relative_spread", maybe(t.relative_spread)},
            {"epsilons", t.epsilons},
            {"values", t.values},
            {"standard_errors", t.standard_errors},
            {"richardson", t.richardson}};
}

nlohmann::json to_json(const DecayFit& f) {
    return {{"slope", f.slope},       {"intercept", f.intercept}, {"r_squared", f.r_squared},
            {"fitted", f.fitted},     {"realizations", f.realizations},
            {"distances", f.distances}, {"log_moments", f.log_moments}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Files collected during a run, written at the end in insertion order.
struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    void csv(const std::string& name, const CsvTable& t) { files.emplace_back(name, t.render()); }
    void json(const std::string& name, const nlohmann::json& j) { files.emplace_back(name, render_json(j)); }
};

struct Context {
    const ExperimentConfig& cfg;
    const RunOptions& opt;
    std::uint64_t master;
    Outputs out;
    nlohmann::json summary = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();

    std::vector<std::uint64_t> seed_list(std::uint64_t m, std::size_t n) const {
        std::vector<std::uint64_t> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = derive_seed(m, i);
        return s;
    }
    std::size_t volume() const { return cube_volume(cfg.lattice); }
};

SparseHamiltonian build(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.model.coupling == 0.0) {
        // free operator: unit coupling with every potential value set to zero
        DisorderModel unit{cfg.model.law, 1.0};
        DisorderRealization omega = sample_disorder(cfg.lattice, unit, seed);
        std::fill(omega.values.begin(), omega.values.end(), 0.0);
        return assemble_hamiltonian(cfg.lattice, unit, omega);
    }
    return assemble_hamiltonian(cfg.lattice, cfg.model, sample_disorder(cfg.lattice, cfg.model, seed));
}

Site center_site(const LatticeSpec& spec) {
    Site c(static_cast<std::size_t>(spec.dimension));
    for (int v = 0; v < spec.dimension; ++v) c[static_cast<std::size_t>(v)] = spec.center_coord(v);
    return c;
}

std::vector<std::vector<double>> eigenvalue_lists(const ExperimentConfig& cfg, const LatticeSpec& lattice,
                                                  const DisorderModel& model,
                                                  const std::vector<std::uint64_t>& seeds, unsigned threads) {
    const std::function<std::vector<double>(std::size_t)> one = [&](std::size_t i) {
        const auto H = assemble_hamiltonian(lattice, model, sample_disorder(lattice, model, seeds[i]));
        return dense_spectrum(H, false).eigenvalues;
    };
    (void)cfg;
    return parallel_map<std::vector<double>>(seeds.size(), threads, one);
}

/// Picks the reference energy by the density-of-states scan on a pilot ensemble.
/// Candidates whose rescaled windows would reach 0 are skipped.
double select_energy(Context& ctx, double window_upper) {
    const auto& cfg = ctx.cfg;
    if (cfg.energy) return *cfg.energy;
    const std::size_t r = cfg.dos_realizations ? cfg.dos_realizations : cfg.realizations;
    const std::uint64_t pilot = auxiliary_master(ctx.master, kDensityPilotStream);
    const auto seeds = ctx.seed_list(pilot, r);
    const auto spectra = eigenvalue_lists(cfg, cfg.lattice, cfg.model, seeds, ctx.opt.threads);
    const double scale = std::pow(static_cast<double>(cfg.lattice.side), cfg.lattice.dimension);
    std::vector<double> energies;
    for (double e : cfg.dos_energies) {
        if (e + window_upper / scale < 0.0 && e + cfg.dos_eps.front() < 0.0) energies.push_back(e);
    }
    const DensityScan scan = scan_density_energies(spectra, ctx.volume(), energies, cfg.dos_eps);

    CsvTable t{{"energy", "epsilon", "value", "standard_error", "chosen"}, {}};
    nlohmann::json candidates = nlohmann::json::array();
    for (std::size_t k = 0; k < scan.candidates.size(); ++k) {
        const auto& c = scan.candidates[k];
        for (std::size_t e = 0; e < c.epsilons.size(); ++e) {
            t.add({c.energy, c.epsilons[e], c.values[e], c.standard_errors[e],
                   std::int64_t{scan.chosen && *scan.chosen == k ? 1 : 0}});
        }
        candidates.push_back(to_json(c));
    }
    ctx.out.csv("dos_scan.csv", t);
    ctx.seeds["density_pilot"] = {{"master", pilot}, {"realizations", r}};
    if (!scan.chosen) {
        throw DomainError("density-of-states scan found no stable energy with positive density");
    }
    ctx.summary["energy_scan"] = {{"candidates", candidates}, {"chosen", scan.candidates[*scan.chosen].energy}};
    ctx.summary["density"] = to_json(scan.candidates[*scan.chosen]);
    return scan.candidates[*scan.chosen].energy;
}

// ---------------------------------------------------------------------------

void run_spectrum(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto seeds = ctx.seed_list(ctx.master, cfg.realizations);
    const std::function<SpectrumResult(std::size_t)> one = [&](std::size_t i) {
        return dense_spectrum(build(cfg, seeds[i]), cfg.vectors);
    };
    const auto spectra = parallel_map<SpectrumResult>(seeds.size(), ctx.opt.threads, one);
    CsvTable t{{"realization", "seed", "index", "eigenvalue"}, {}};
    double lo = INFINITY, hi = -INFINITY, residual = 0.0;
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        const auto& ev = spectra[i].eigenvalues;
        for (std::size_t k = 0; k < ev.size(); ++k) {
            t.add({static_cast<std::uint64_t>(i), seeds[i], static_cast<std::uint64_t>(k), ev[k]});
        }
        if (!ev.empty()) {
            lo = std::min(lo, ev.front());
            hi = std::max(hi, ev.back());
        }
        residual = std::max(residual, spectra[i].residual_norm);
    }
    ctx.out.csv("eigenvalues.csv", t);
    ctx.summary["size"] = ctx.volume();
    ctx.summary["min_eigenvalue"] = maybe(lo);
    ctx.summary["max_eigenvalue"] = maybe(hi);
    ctx.summary["max_residual"] = residual;
}

void run_dos(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto seeds = ctx.seed_list(ctx.master, cfg.realizations);
    const EnergyInterval I = EnergyInterval::make(cfg.interval->first, cfg.interval->second);
    struct Row {
        std::vector<double> eigenvalues;
        std::size_t count;
        double nu1;
        double nu2;
    };
    const std::function<Row(std::size_t)> one = [&](std::size_t i) {
        const auto H = build(cfg, seeds[i]);
        const auto sp = dense_spectrum(H, cfg.vectors);
        Row r{sp.eigenvalues, count_in_spectrum(sp, I),
              dos_finite_volume(sp, cfg.lattice.side, cfg.lattice.dimension, I), kNaN};
        if (cfg.vectors) r.nu2 = dos_cell_trace(sp, H, cfg.lattice, I);
        return r;
    };
    const auto rows = parallel_map<Row>(seeds.size(), ctx.opt.threads, one);
    CsvTable t{{"realization", "seed", "count", "nu_finite_volume", "nu_cell_trace"}, {}};
    std::vector<double> nu1, nu2;
    std::vector<std::vector<double>> spectra;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.add({static_cast<std::uint64_t>(i), seeds[i], static_cast<std::uint64_t>(rows[i].count), rows[i].nu1, rows[i].nu2});
        nu1.push_back(rows[i].nu1);
        if (cfg.vectors) nu2.push_back(rows[i].nu2);
        spectra.push_back(rows[i].eigenvalues);
    }
    ctx.out.csv("dos.csv", t);
    const auto tab = dos_density_estimate(spectra, ctx.volume(), *cfg.energy, cfg.dos_eps);
    CsvTable d{{"epsilon", "value", "standard_error"}, {}};
    for (std::size_t k = 0; k < tab.epsilons.size(); ++k) d.add({tab.epsilons[k], tab.values[k], tab.standard_errors[k]});
    ctx.out.csv("density.csv", d);
    ctx.summary["interval"] = {I.lower, I.upper};
    ctx.summary["nu_finite_volume"] = to_json(aggregate(nu1));
    ctx.summary["nu_cell_trace"] = nu2.empty() ? nlohmann::json(nullptr) : to_json(aggregate(nu2));
    ctx.summary["density"] = to_json(tab);
}

void run_wegner_minami(Context& ctx, bool minami) {
    const auto& cfg = ctx.cfg;
    const auto seeds = ctx.seed_list(ctx.master, cfg.realizations);
    const auto widths = dyadic_widths(cfg.width_max, cfg.width_min);
    std::vector<EnergyInterval> intervals;
    for (double w : widths) intervals.push_back(EnergyInterval::centered(*cfg.energy, w));
    using Counts = std::vector<InertiaCount>;
    const std::function<Counts(std::size_t)> one = [&](std::size_t i) {
        const auto H = build(cfg, seeds[i]);
        Counts c;
        for (const auto& I : intervals) c.push_back(count_in_interval(H, I));
        return c;
    };
    const auto rows = parallel_map<Counts>(seeds.size(), ctx.opt.threads, one);

    CsvTable t{{"realization", "seed", "width", "lower", "upper", "count", "nudges"}, {}};
    std::vector<std::vector<std::size_t>> per_width(widths.size());
    std::int64_t nudges = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < widths.size(); ++k) {
            t.add({static_cast<std::uint64_t>(i), seeds[i], widths[k], intervals[k].lower, intervals[k].upper,
                   static_cast<std::uint64_t>(rows[i][k].count), std::int64_t{rows[i][k].nudges}});
            per_width[k].push_back(rows[i][k].count);
            nudges += rows[i][k].nudges;
        }
    }
    ctx.out.csv("counts.csv", t);

    std::vector<RatioEstimate> ratios;
    CsvTable s{{"width", "lower", "upper", "ratio", "standard_error"}, {}};
    for (std::size_t k = 0; k < widths.size(); ++k) {
        const auto r = minami ? minami_ratio(per_width[k], ctx.volume(), intervals[k], cfg.diagnostic)
                              : wegner_ratio(per_width[k], ctx.volume(), intervals[k], cfg.diagnostic);
        ratios.push_back(r);
        s.add({widths[k], intervals[k].lower, intervals[k].upper, r.value, r.standard_error});
    }
    ctx.out.csv("scan.csv", s);
    const auto scan = make_scaling_scan(widths, ratios);
    ctx.summary["energy"] = *cfg.energy;
    ctx.summary["statistic"] = minami ? "minami_ratio" : "wegner_ratio";
    ctx.summary["widths"] = widths;
    nlohmann::json rj = nlohmann::json::array();
    for (const auto& r : ratios) rj.push_back(to_json(r));
    ctx.summary["ratios"] = rj;
    ctx.summary["max_ratio"] = scan.max_ratio;
    ctx.summary["log_fit"] = to_json(scan.log_fit);
    ctx.summary["zero_ratio_points"] =
        std::count_if(ratios.begin(), ratios.end(), [](const auto& r) { return r.value == 0.0; });
    ctx.summary["nudges"] = nudges;
    if (minami) {
        const auto& narrow = per_width.back();
        const auto at_most_one = std::count_if(narrow.begin(), narrow.end(), [](std::size_t n) { return n <= 1; });
        ctx.summary["fraction_at_most_one"] = static_cast<double>(at_most_one) / static_cast<double>(narrow.size());
    }
}

void run_levelstats(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const EnergyInterval window = EnergyInterval::make(cfg.windows.front(), cfg.windows.back());
    const double energy = select_energy(ctx, window.upper);
    const auto seeds = ctx.seed_list(ctx.master, cfg.realizations);
    const std::function<PointProcessSample(std::size_t)> one = [&](std::size_t i) {
        const auto sp = dense_spectrum(build(cfg, seeds[i]), false);
        return rescaled_points(sp, energy, cfg.lattice.side, cfg.lattice.dimension, window, seeds[i]);
    };
    const auto samples = parallel_map<PointProcessSample>(seeds.size(), ctx.opt.threads, one);

    std::vector<EnergyInterval> subwindows;
    for (std::size_t k = 1; k < cfg.windows.size(); ++k) {
        subwindows.push_back(EnergyInterval::make(cfg.windows[k - 1], cfg.windows[k]));
    }
    CsvTable points{{"realization", "seed", "point", "next_gap"}, {}};
    std::vector<std::string> cols{"realization", "seed", "total"};
    for (std::size_t k = 0; k < subwindows.size(); ++k) cols.push_back("window_" + std::to_string(k));
    CsvTable counts{cols, {}};
    CountTable table;
    std::vector<std::size_t> totals;
    std::vector<double> gaps;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& smp = samples[i];
        for (std::size_t p = 0; p < smp.points.size(); ++p) {
            const double gap = p < smp.next_gaps.size() ? smp.next_gaps[p] : kNaN;
            points.add({static_cast<std::uint64_t>(i), seeds[i], smp.points[p], gap});
            if (p < smp.next_gaps.size()) gaps.push_back(gap);
        }
        std::vector<Cell> row{static_cast<std::uint64_t>(i), seeds[i], static_cast<std::uint64_t>(smp.points.size())};
        std::vector<std::size_t> c;
        for (const auto& w : subwindows) {
            c.push_back(smp.count_in(w));
            row.emplace_back(static_cast<std::uint64_t>(c.back()));
        }
        counts.add(std::move(row));
        table.push_back(c);
        totals.push_back(smp.points.size());
    }
    ctx.out.csv("points.csv", points);
    ctx.out.csv("window_counts.csv", counts);

    const RatioEstimate intensity = intensity_estimate(samples, window);
    ctx.summary["energy"] = energy;
    ctx.summary["energy_source"] = cfg.energy ? "config" : "density_scan";
    ctx.summary["window"] = {window.lower, window.upper};
    ctx.summary["windows"] = cfg.windows;
    ctx.summary["intensity"] = to_json(intensity);
    ctx.summary["spacings"] = gaps.size();

    nlohmann::json tests = nlohmann::json::object();
    try {
        tests["ks_exponential"] = to_json(ks_exponential(gaps, intensity.value));
    } catch (const InsufficientSampleError& e) {
        tests["ks_exponential"] = {{"error", e.what()}};
    }
    const auto vm = variance_mean_ratio(totals);
    tests["variance_mean_ratio"] = vm ? nlohmann::json(*vm) : nlohmann::json(nullptr);
    try {
        tests["count_independence"] = to_json(count_independence(table));
    } catch (const InsufficientSampleError& e) {
        tests["count_independence"] = {{"error", e.what()}};
    }
    ctx.summary["tests"] = tests;

    if (ctx.summary.contains("density")) {
        const double n = ctx.summary["density"]["estimate"].get<double>();
        const double cells = std::pow(static_cast<double>(cfg.lattice.period), cfg.lattice.dimension);
        const double reference = n / cells;
        ctx.summary["intensity_reference"] = {
            {"n_over_cell_volume", reference},
            {"relative_deviation", std::abs(intensity.value - reference) / reference},
            {"n", n},
            {"relative_deviation_vs_n", std::abs(intensity.value - n) / n}};
    }
}

void run_fracmom(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const double energy = select_energy(ctx, cfg.windows.back());
    const auto seeds = ctx.seed_list(ctx.master, cfg.realizations);
    CsvTable t{{"run", "lambda", "energy", "epsilon", "distance", "moment", "standard_error", "log_moment"}, {}};
    auto profile = [&](const std::string& run, const DisorderModel& model, double e, double eps) {
        FractionalMomentParams p;
        p.energy = e;
        p.epsilon = eps;
        p.s = cfg.s;
        p.max_distance = cfg.max_distance;
        const auto fit = fractional_moment_profile(cfg.lattice, model, p, seeds, ctx.opt.threads);
        for (std::size_t k = 0; k < fit.distances.size(); ++k) {
            t.add({run, model.coupling, e, eps, fit.distances[k], fit.moments[k], fit.standard_errors[k], fit.log_moments[k]});
        }
        auto j = to_json(fit);
        j["lambda"] = model.coupling;
        j["energy"] = e;
        j["epsilon"] = eps;
        return std::pair{fit, j};
    };
    nlohmann::json fits = nlohmann::json::array();
    std::vector<double> slopes;
    for (double eps : cfg.eps_grid) {
        auto [fit, j] = profile("main", cfg.model, energy, eps);
        fits.push_back(j);
        slopes.push_back(fit.slope);
    }
    const double reference = slopes.back();
    double spread = 0.0;
    for (double sl : slopes) spread = std::max(spread, std::abs(sl - reference) / std::abs(reference));
    ctx.summary["energy"] = energy;
    ctx.summary["s"] = cfg.s;
    ctx.summary["fits"] = fits;
    ctx.summary["reference_epsilon"] = cfg.eps_grid.back();
    ctx.summary["slope_relative_spread"] = spread;
    if (cfg.contrast_lambda) {
        const DisorderModel weak{cfg.model.law, *cfg.contrast_lambda};
        auto [fit, j] = profile("contrast", weak, *cfg.contrast_energy, cfg.eps_grid.back());
        ctx.summary["contrast"] = j;
    }
    ctx.out.csv("profile.csv", t);
}

void run_freeres(Context& ctx) {
    const auto& cfg = ctx.cfg;
    CsvTable t{{"energy", "s", "delta", "bound", "closed_form"}, {}};
    const bool closed = cfg.lattice.dimension == 1 && cfg.lattice.period == 2;
    double worst = 0.0, deviation = 0.0;
    for (double e : cfg.energies) {
        for (double s : cfg.s_grid) {
            const double D = free_resolvent_bound(cfg.lattice, e, s, cfg.delta);
            const double exact = closed ? std::pow(2.0 - e, -s) : kNaN;
            t.add({e, s, cfg.delta, D, exact});
            worst = std::max(worst, D);
            if (closed) deviation = std::max(deviation, std::abs(D - exact));
        }
    }
    ctx.out.csv("freeres.csv", t);
    ctx.summary["max_bound"] = worst;
    ctx.summary["all_below_one"] = worst < 1.0;
    ctx.summary["closed_form_max_deviation"] = closed ? nlohmann::json(deviation) : nlohmann::json(nullptr);
}

void run_checks(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto seeds = ctx.seed_list(ctx.master, cfg.realizations);
    const Site x = center_site(cfg.lattice);

    // unique continuation
    const std::function<double(std::size_t)> uc = [&](std::size_t i) {
        const auto H = build(cfg, seeds[i]);
        const auto r = unique_continuation_ratio(dense_spectrum(H, true), H, cfg.lattice.period, cfg.e_tilde);
        return r ? *r : kNaN;
    };
    const auto ratios = parallel_map<double>(seeds.size(), ctx.opt.threads, uc);
    const double bound = unique_continuation_bound(cfg.model, cfg.e_tilde);
    CsvTable u{{"realization", "seed", "ratio"}, {}};
    std::size_t violations = 0, empty = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        u.add({static_cast<std::uint64_t>(i), seeds[i], ratios[i]});
        if (std::isnan(ratios[i])) {
            ++empty;
            continue;
        }
        worst = std::max(worst, ratios[i]);
        if (ratios[i] > bound) ++violations;
    }
    ctx.out.csv("unique_continuation.csv", u);
    ctx.summary["unique_continuation"] = {{"e_tilde", cfg.e_tilde}, {"bound", bound}, {"max_ratio", worst},
                                          {"violations", violations}, {"empty", empty},
                                          {"checked", ratios.size() - empty}};

    // spectral averaging over a dyadic width scan
    const auto base = sample_disorder(cfg.lattice, cfg.model, seeds[0]);
    const auto widths = dyadic_widths(cfg.width_max, cfg.width_min);
    const std::function<double(std::size_t)> sa = [&](std::size_t k) {
        return spectral_average_check(cfg.lattice, cfg.model, base, x, EnergyInterval::centered(*cfg.energy, widths[k]),
                                      cfg.tau_nodes, cfg.diagnostic);
    };
    const auto values = parallel_map<double>(widths.size(), ctx.opt.threads, sa);
    CsvTable a{{"width", "lower", "upper", "value", "ratio"}, {}};
    std::vector<RatioEstimate> sratios;
    for (std::size_t k = 0; k < widths.size(); ++k) {
        const auto I = EnergyInterval::centered(*cfg.energy, widths[k]);
        a.add({widths[k], I.lower, I.upper, values[k], values[k] / widths[k]});
        sratios.push_back({values[k] / widths[k], 0.0, 1});
    }
    ctx.out.csv("spectral_average.csv", a);
    const auto sscan = make_scaling_scan(widths, sratios);
    ctx.summary["spectral_average"] = {{"energy", *cfg.energy},
                                       {"site", x},
                                       {"max_ratio", sscan.max_ratio},
                                       {"bound", cfg.model.law.density_bound() / cfg.model.coupling},
                                       {"log_fit", to_json(sscan.log_fit)},
                                       {"widths", widths}};

    // decoupling constants
    const auto& law = cfg.model.law;
    const auto grid = default_alpha_grid(law, cfg.alpha_points);
    std::vector<std::complex<double>> triple;
    for (double re : {law.support_min(), 0.5 * (law.support_min() + law.support_max()), law.support_max(), law.support_max() + 1.0}) {
        for (double im : {0.0, 0.5}) triple.emplace_back(re, im);
    }
    const auto dc = decoupling_constants(law, cfg.s, grid, triple);
    ctx.summary["decoupling"] = {{"s", cfg.s}, {"c_s", dc.c_s}, {"c_s_argmax", dc.c_s_argmax}, {"d_s", dc.d_s},
                                 {"alpha_points", grid.size()}, {"triple_points", triple.size()}};

    // conditional moment ratio across the coupling grid, common seeds
    Site w = x, y = x;
    w[0] += 1;
    y[0] += cfg.cond_distance;
    const auto z = ComplexShift::make(*cfg.energy, cfg.epsilon);
    CsvTable c{{"lambda", "ratio", "standard_error", "numerator", "denominator"}, {}};
    std::vector<double> lx, ly, lse;
    for (double lambda : cfg.lambda_grid) {
        const DisorderModel m{law, lambda};
        const auto r = conditional_moment_ratio(cfg.lattice, m, x, w, y, z, cfg.s, seeds, ctx.opt.threads);
        c.add({lambda, r.ratio, r.standard_error, r.numerator, r.denominator});
        lx.push_back(std::log(lambda));
        ly.push_back(std::log(r.ratio));
        lse.push_back(r.standard_error / r.ratio);
    }
    ctx.out.csv("conditional_moment.csv", c);
    const auto fit = linear_fit(lx, ly);
    // propagated from the per-point standard errors of log(ratio)
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    double sxx = 0.0, var = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        var += std::pow((lx[k] - mx) * lse[k], 2);
    }
    ctx.summary["conditional_moment"] = {{"x", x}, {"w", w}, {"y", y}, {"energy", *cfg.energy}, {"epsilon", cfg.epsilon},
                                         {"s", cfg.s}, {"lambda_grid", cfg.lambda_grid}, {"log_fit", to_json(std::optional{fit})},
                                         {"slope_standard_error", std::sqrt(var) / sxx},
                                         {"target_slope", -cfg.s},
                                         {"relative_deviation", std::abs(fit.slope + cfg.s) / cfg.s}};
}

}  // namespace

std::string library_version() { return SPORADIC_VERSION; }

std::uint64_t auxiliary_master(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream * kGoldenGamma));
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json files_json = nlohmann::json::array();
    for (const auto& f : files) files_json.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {{"schema_version", kSchemaVersion}, {"version", version}, {"timestamp", timestamp},
            {"config", config},                 {"seeds", seeds},     {"files", files_json}};
}

RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    Context ctx{config, options, options.seed_override.value_or(config.master_seed), {}};
    ctx.seeds = {{"master", ctx.master},
                 {"realizations", config.realizations},
                 {"derivation", "mix64(master + (index + 1) * 0x9e3779b97f4a7c15)"},
                 {"first", derive_seed(ctx.master, 0)},
                 {"last", derive_seed(ctx.master, config.realizations - 1)}};
    ctx.summary["schema_version"] = kSchemaVersion;
    ctx.summary["kind"] = to_string(config.kind);
    ctx.summary["lattice"] = {{"d", config.lattice.dimension}, {"L", config.lattice.side}, {"M", config.lattice.period}};
    ctx.summary["model"] = {{"law", config.model.law.describe()}, {"lambda", config.model.coupling}};
    ctx.summary["realizations"] = config.realizations;
    ctx.summary["master_seed"] = ctx.master;

    switch (config.kind) {
        case ExperimentKind::Spectrum: run_spectrum(ctx); break;
        case ExperimentKind::Dos: run_dos(ctx); break;
        case ExperimentKind::Wegner: run_wegner_minami(ctx, false); break;
        case ExperimentKind::Minami: run_wegner_minami(ctx, true); break;
        case ExperimentKind::LevelStats: run_levelstats(ctx); break;
        case ExperimentKind::FracMom: run_fracmom(ctx); break;
        case ExperimentKind::FreeRes: run_freeres(ctx); break;
        case ExperimentKind::Checks: run_checks(ctx); break;
    }
    ctx.out.json("summary.json", ctx.summary);

    RunManifest m;
    m.config = config.echo();
    m.config["text"] = config.source;
    if (options.seed_override) m.config["seed_override"] = *options.seed_override;
    m.version = library_version();
    m.timestamp = utc_timestamp();
    m.seeds = ctx.seeds;
    m.summary = ctx.summary;
    for (const auto& [name, content] : ctx.out.files) {
        if (options.write_files) write_atomic(options.out_dir / name, content);
        m.files.push_back({name, sha256_hex(content), content.size()});
    }
    if (options.write_files) write_atomic(options.out_dir / "manifest.json", render_json(m.to_json()));
    return m;
}

}  // namespace sporadic
