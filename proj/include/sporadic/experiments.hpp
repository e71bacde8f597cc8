#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sporadic/config.hpp"

namespace sporadic {

struct RunOptions {
    std::filesystem::path out_dir;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed_override;
    bool write_files = true;
};

struct OutputFile {
    std::string name;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    nlohmann::json config;
    std::string version;
    std::string timestamp;  // UTC, ISO 8601
    nlohmann::json seeds;
    std::vector<OutputFile> files;
    nlohmann::json summary;  // also written as summary.json

    nlohmann::json to_json() const;
};

/// Master seed of an auxiliary ensemble (for example the density-of-states pilot),
/// kept apart from the main realization seeds.
std::uint64_t auxiliary_master(std::uint64_t master, std::uint64_t stream);

/// Runs one experiment and writes its CSV/JSON outputs plus manifest.json into out_dir.
RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options);

std::string library_version();

}  // namespace sporadic
