#include "sporadic/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sporadic {

void EnsembleSpec::validate() const {
    if (realizations < 1) {
        throw ValidationError("ensemble needs at least one realization");
    }
    lattice.validate();
    model.validate();
}

EnsembleStats aggregate(std::span<const double> values) {
    if (values.empty()) {
        throw InsufficientSampleError("aggregate needs at least one value");
    }
    EnsembleStats stats;
    stats.count = values.size();
    stats.min = std::numeric_limits<double>::infinity();
    stats.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    const double n = static_cast<double>(values.size());
    // clamp guards the last-ulp drift of sum / n for constant input
    stats.mean = std::clamp(sum / n, stats.min, stats.max);
    if (values.size() == 1) {
        stats.single_sample = true;
        return stats;
    }
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - stats.mean) * (v - stats.mean);
    }
    stats.variance = ss / (n - 1.0);
    stats.standard_error = std::sqrt(stats.variance / n);
    return stats;
}

nlohmann::json to_json(const EnsembleStats& stats) {
    return {{"count", stats.count},
            {"mean", stats.mean},
            {"variance", stats.variance},
            {"standard_error", stats.standard_error},
            {"min", stats.min},
            {"max", stats.max},
            {"single_sample", stats.single_sample}};
}

EnsembleRun run_ensemble(const EnsembleSpec& spec, const Statistic& statistic, unsigned threads) {
    spec.validate();
    std::vector<std::optional<RealizationRecord>> partial(spec.realizations);
    std::function<RealizationRecord(std::size_t)> task = [&](std::size_t index) {
        const std::uint64_t seed = spec.seed(index);
        const DisorderRealization realization = sample_disorder(spec.lattice, spec.model, seed);
        RealizationRecord record{index, seed, statistic({index, seed, realization}), {}};
        partial[index] = record;
        return record;
    };
    EnsembleRun run;
    try {
        run.table = parallel_map<RealizationRecord>(spec.realizations, threads, task);
    } catch (EnsembleFailure& failure) {
        for (const auto i : failure.completed_indices) {
            failure.partial_table.push_back(*partial[i]);
        }
        throw;
    }
    std::vector<double> values;
    values.reserve(run.table.size());
    for (const auto& record : run.table) {
        values.push_back(record.value);
    }
    run.stats = aggregate(values);
    return run;
}

}  // namespace sporadic
