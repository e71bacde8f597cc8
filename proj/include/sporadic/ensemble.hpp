#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sporadic/disorder.hpp"
#include "sporadic/error.hpp"
#include "sporadic/lattice.hpp"
#include "sporadic/rng.hpp"

namespace sporadic {

/// Seed of realization `index` under `master`: mix64(master + (index + 1) * golden gamma).
/// Injective in index for a fixed master and in master for a fixed index.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master + (index + 1) * kGoldenGamma);
}

struct EnsembleSpec {
    std::size_t realizations = 1;
    std::uint64_t master_seed = 0;
    LatticeSpec lattice;
    DisorderModel model;
    std::string statistic;  // descriptive label

    void validate() const;
    std::uint64_t seed(std::size_t index) const { return derive_seed(master_seed, index); }
};

struct EnsembleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; reported as 0 when count == 1
    double standard_error = 0.0;
    double min = 0.0;
    double max = 0.0;
    bool single_sample = false;  // variance undefined, count == 1
};

/// Index-ordered reduction. Throws InsufficientSampleError on empty input.
EnsembleStats aggregate(std::span<const double> values);

nlohmann::json to_json(const EnsembleStats& stats);

struct RealizationRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
    std::string metadata;
};

struct EnsembleRun {
    EnsembleStats stats;
    std::vector<RealizationRecord> table;  // ordered by index
};

/// A realization failed. Carries the failing index and every record completed before the abort.
class EnsembleFailure : public Error {
public:
    EnsembleFailure(std::size_t index, const std::string& what, std::vector<std::size_t> completed)
        : Error("realization " + std::to_string(index) + " failed: " + what),
          failed_index(index), completed_indices(std::move(completed)) {}

    std::size_t failed_index;
    std::vector<std::size_t> completed_indices;
    std::vector<RealizationRecord> partial_table;
};

/// Runs fn(index) for index in [0, count) on up to `threads` workers and returns the
/// results ordered by index. Output does not depend on the number of threads.
/// The first failure stops further scheduling and is rethrown as EnsembleFailure.
template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned threads,
                            const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex failure_mutex;
    std::optional<std::size_t> failed;
    std::string failure_message;

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::size_t index = next.fetch_add(1);
            if (index >= count) {
                return;
            }
            try {
                slots[index] = fn(index);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                if (!failed || index < *failed) {
                    failed = index;
                    failure_message = e.what();
                }
                stop = true;
            }
        }
    };

    const unsigned width = std::max(1u, threads);
    if (width == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(width, count); ++t) {
            pool.emplace_back(worker);
        }
    }

    if (failed) {
        std::vector<std::size_t> completed;
        for (std::size_t i = 0; i < count; ++i) {
            if (slots[i]) completed.push_back(i);
        }
        throw EnsembleFailure(*failed, failure_message, std::move(completed));
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

/// Context handed to a statistic: the realization index, its seed and the sampled disorder.
struct RealizationContext {
    std::size_t index;
    std::uint64_t seed;
    const DisorderRealization& realization;
};

using Statistic = std::function<double(const RealizationContext&)>;

/// Evaluates the statistic on R seeded realizations and aggregates in index order.
/// On failure the thrown EnsembleFailure carries the completed records.
EnsembleRun run_ensemble(const EnsembleSpec& spec, const Statistic& statistic, unsigned threads = 1);

}  // namespace sporadic
