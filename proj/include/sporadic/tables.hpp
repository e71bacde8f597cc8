#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sporadic {

inline constexpr int kSchemaVersion = 1;

/// CSV cell. Reals are written with 17 significant digits so they read back exactly.
using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Appends a row; throws ValidationError if its width differs from the header.
    void add(std::vector<Cell> row);
    std::string render() const;
};

std::string format_real(double value);

/// Header and raw cell text of a CSV written by CsvTable.
struct ParsedCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};
ParsedCsv parse_csv(const std::string& text);

/// Writes through a temporary file in the same directory followed by a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Pretty JSON text with a trailing newline.
std::string render_json(const nlohmann::json& j);

}  // namespace sporadic
