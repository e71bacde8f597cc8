#include "sporadic/tables.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "sporadic/error.hpp"

namespace sporadic {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_real(v);
            else if constexpr (std::is_same_v<T, std::string>) return quote(v);
            else return std::to_string(v);
        },
        cell);
}

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return buf.data();
}

void CsvTable::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw ValidationError("csv row has " + std::to_string(row.size()) + " cells, header has " +
                              std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
    std::string out;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        out += (k ? "," : "") + quote(columns[k]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += render_cell(row[k]);
        }
        out += '\n';
    }
    return out;
}

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    auto finish_record = [&] {
        record.push_back(field);
        field.clear();
        if (out.columns.empty() && out.rows.empty() && !any) {
            out.columns = record;
            any = true;
        } else {
            out.rows.push_back(record);
        }
        record.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            record.push_back(field);
            field.clear();
        } else if (c == '\n') {
            finish_record();
        } else {
            field += c;
        }
    }
    if (!field.empty() || !record.empty()) finish_record();
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("rename to " + path.string() + " failed: " + ec.message());
    }
}

std::string sha256_hex(const std::string& content) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(content.data(), content.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace sporadic
