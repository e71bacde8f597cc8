#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sporadic/disorder.hpp"
#include "sporadic/error.hpp"
#include "sporadic/lattice.hpp"

namespace sporadic {

enum class ExperimentKind { Spectrum, Dos, Wegner, Minami, LevelStats, FracMom, FreeRes, Checks };

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& name);

/// Configuration problem, with the 1-based line of the offending entry (0 if not tied to a line).
class ConfigError : public ValidationError {
public:
    ConfigError(std::size_t line, const std::string& message)
        : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line(line) {}
    std::size_t line;
};

/// One experiment, read from flat `key = value` text.
///
/// Entries are separated by newlines or commas; `#` starts a comment. Lists are
/// whitespace separated. Unknown and repeated keys are rejected.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Spectrum;
    LatticeSpec lattice{1, 16, 2, {}};
    DisorderModel model{SingleSiteLaw::uniform(-1.0, 0.0), 1.0};
    std::size_t realizations = 1;
    std::uint64_t master_seed = 0;

    std::optional<double> energy = -3.0;  // nullopt: chosen by the density-of-states scan
    double s = 0.3;
    double delta = 0.0;
    double epsilon = 1e-3;
    std::vector<double> eps_grid{1e-1, 1e-2, 1e-3};
    std::optional<std::pair<double, double>> interval;
    double width_max = 0.5;
    double width_min = 1.0 / 64.0;
    std::vector<double> windows{-75.0, -25.0, 25.0, 75.0};  // edges of adjacent rescaled windows
    std::vector<double> dos_energies;
    std::vector<double> dos_eps{1.0, 0.5, 0.25, 0.125};
    std::size_t dos_realizations = 0;  // 0: same as realizations
    std::int64_t max_distance = -1;
    std::optional<double> contrast_lambda;
    std::optional<double> contrast_energy;
    std::vector<double> lambda_grid{5.0, 10.0, 20.0, 40.0};
    double e_tilde = -1.0;
    std::size_t tau_nodes = 4000;
    std::size_t alpha_points = 201;
    std::int64_t cond_distance = 8;
    std::vector<double> energies{-0.1, -0.5, -1.0, -2.0, -4.0};
    std::vector<double> s_grid{0.1, 0.3, 0.45};
    bool vectors = false;
    bool diagnostic = false;
    std::optional<std::filesystem::path> output;

    /// Normalized key -> value text of every entry that was set, for the manifest echo.
    std::map<std::string, std::string> entries;
    std::map<std::string, std::size_t> lines;
    std::string source;

    /// Module preconditions for this kind. Throws ConfigError.
    void validate() const;
    nlohmann::json echo() const;
};

/// Parses and validates. The first problem is reported as a ConfigError with its line.
/// `kind` supplies the experiment kind when the text has no `kind` key; if both are present
/// they must agree.
ExperimentConfig parse_config(const std::string& text, std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<ExperimentKind> kind = std::nullopt);

}  // namespace sporadic
