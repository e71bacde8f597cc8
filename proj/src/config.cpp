#include "sporadic/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "sporadic/spectral.hpp"

namespace sporadic {

namespace {

const std::map<std::string, ExperimentKind>& kind_names() {
    static const std::map<std::string, ExperimentKind> names{
        {"spectrum", ExperimentKind::Spectrum},     {"dos", ExperimentKind::Dos},
        {"wegner", ExperimentKind::Wegner},         {"minami", ExperimentKind::Minami},
        {"levelstats", ExperimentKind::LevelStats}, {"fracmom", ExperimentKind::FracMom},
        {"freeres", ExperimentKind::FreeRes},       {"checks", ExperimentKind::Checks}};
    return names;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_real(const std::string& text, std::size_t line, const std::string& key) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigError(line, key + ": expected a finite real number, got '" + text + "'");
    }
    return v;
}

std::int64_t to_int(const std::string& text, std::size_t line, const std::string& key) {
    std::int64_t v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(line, key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& text, std::size_t line, const std::string& key) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(line, key + ": expected a nonnegative integer, got '" + text + "'");
    }
    return v;
}

std::size_t to_count(const std::string& text, std::size_t line, const std::string& key) {
    return static_cast<std::size_t>(to_uint(text, line, key));
}

bool to_bool(const std::string& text, std::size_t line, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(line, key + ": expected true or false, got '" + text + "'");
}

std::vector<double> to_reals(const std::string& text, std::size_t line, const std::string& key) {
    std::vector<double> out;
    for (const auto& w : words(text)) out.push_back(to_real(w, line, key));
    if (out.empty()) throw ConfigError(line, key + ": expected a list of reals");
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, std::size_t, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"kind", [](auto& c, const auto& v, auto line, const auto& key) {
             const auto k = parse_kind(v);
             if (!k) throw ConfigError(line, key + ": unknown experiment kind '" + v + "'");
             c.kind = *k;
         }},
        {"d", [](auto& c, const auto& v, auto line, const auto& key) { c.lattice.dimension = static_cast<int>(to_int(v, line, key)); }},
        {"L", [](auto& c, const auto& v, auto line, const auto& key) { c.lattice.side = to_int(v, line, key); }},
        {"M", [](auto& c, const auto& v, auto line, const auto& key) { c.lattice.period = to_int(v, line, key); }},
        {"center", [](auto& c, const auto& v, auto line, const auto& key) {
             c.lattice.center.clear();
             for (const auto& w : words(v)) c.lattice.center.push_back(to_int(w, line, key));
         }},
        {"lambda", [](auto& c, const auto& v, auto line, const auto& key) { c.model.coupling = to_real(v, line, key); }},
        {"a", [](auto& c, const auto& v, auto line, const auto& key) { c.model.law.lower = to_real(v, line, key); }},
        {"b", [](auto& c, const auto& v, auto line, const auto& key) { c.model.law.upper = to_real(v, line, key); }},
        {"realizations", [](auto& c, const auto& v, auto line, const auto& key) { c.realizations = to_count(v, line, key); }},
        {"seed", [](auto& c, const auto& v, auto line, const auto& key) { c.master_seed = to_uint(v, line, key); }},
        {"energy", [](auto& c, const auto& v, auto line, const auto& key) {
             if (v == "auto") c.energy.reset();
             else c.energy = to_real(v, line, key);
         }},
        {"s", [](auto& c, const auto& v, auto line, const auto& key) { c.s = to_real(v, line, key); }},
        {"delta", [](auto& c, const auto& v, auto line, const auto& key) { c.delta = to_real(v, line, key); }},
        {"epsilon", [](auto& c, const auto& v, auto line, const auto& key) { c.epsilon = to_real(v, line, key); }},
        {"eps_grid", [](auto& c, const auto& v, auto line, const auto& key) { c.eps_grid = to_reals(v, line, key); }},
        {"interval", [](auto& c, const auto& v, auto line, const auto& key) {
             const auto r = to_reals(v, line, key);
             if (r.size() != 2) throw ConfigError(line, key + ": expected two reals 'lower upper'");
             c.interval = std::pair{r[0], r[1]};
         }},
        {"width_max", [](auto& c, const auto& v, auto line, const auto& key) { c.width_max = to_real(v, line, key); }},
        {"width_min", [](auto& c, const auto& v, auto line, const auto& key) { c.width_min = to_real(v, line, key); }},
        {"windows", [](auto& c, const auto& v, auto line, const auto& key) { c.windows = to_reals(v, line, key); }},
        {"dos_energies", [](auto& c, const auto& v, auto line, const auto& key) { c.dos_energies = to_reals(v, line, key); }},
        {"dos_eps", [](auto& c, const auto& v, auto line, const auto& key) { c.dos_eps = to_reals(v, line, key); }},
        {"dos_realizations", [](auto& c, const auto& v, auto line, const auto& key) { c.dos_realizations = to_count(v, line, key); }},
        {"max_distance", [](auto& c, const auto& v, auto line, const auto& key) { c.max_distance = to_int(v, line, key); }},
        {"contrast_lambda", [](auto& c, const auto& v, auto line, const auto& key) { c.contrast_lambda = to_real(v, line, key); }},
        {"contrast_energy", [](auto& c, const auto& v, auto line, const auto& key) { c.contrast_energy = to_real(v, line, key); }},
        {"lambda_grid", [](auto& c, const auto& v, auto line, const auto& key) { c.lambda_grid = to_reals(v, line, key); }},
        {"e_tilde", [](auto& c, const auto& v, auto line, const auto& key) { c.e_tilde = to_real(v, line, key); }},
        {"tau_nodes", [](auto& c, const auto& v, auto line, const auto& key) { c.tau_nodes = to_count(v, line, key); }},
        {"alpha_points", [](auto& c, const auto& v, auto line, const auto& key) { c.alpha_points = to_count(v, line, key); }},
        {"cond_distance", [](auto& c, const auto& v, auto line, const auto& key) { c.cond_distance = to_int(v, line, key); }},
        {"energies", [](auto& c, const auto& v, auto line, const auto& key) { c.energies = to_reals(v, line, key); }},
        {"s_grid", [](auto& c, const auto& v, auto line, const auto& key) { c.s_grid = to_reals(v, line, key); }},
        {"vectors", [](auto& c, const auto& v, auto line, const auto& key) { c.vectors = to_bool(v, line, key); }},
        {"diagnostic", [](auto& c, const auto& v, auto line, const auto& key) { c.diagnostic = to_bool(v, line, key); }},
        {"output", [](auto& c, const auto& v, auto, const auto&) { c.output = std::filesystem::path(v); }},
    };
    return table;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (!(v[k] < v[k - 1])) return false;
    }
    return true;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto& [name, k] : kind_names()) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& name) {
    const auto it = kind_names().find(name);
    if (it == kind_names().end()) return std::nullopt;
    return it->second;
}

void ExperimentConfig::validate() const {
    auto at = [&](const std::string& key) {
        const auto it = lines.find(key);
        return it == lines.end() ? std::size_t{0} : it->second;
    };
    auto fail = [&](const std::string& key, const std::string& message) { throw ConfigError(at(key), message); };

    if (lattice.dimension < 1) fail("d", "d must be >= 1");
    if (lattice.side < 1) fail("L", "L must be >= 1");
    if (lattice.period < 2) fail("M", "M must be >= 2 (the sublattice is M Z^d with M >= 2)");
    if (!lattice.center.empty() && static_cast<int>(lattice.center.size()) != lattice.dimension) {
        fail("center", "center needs d coordinates");
    }
    try {
        (void)cube_volume(lattice);
    } catch (const Error& e) {
        fail("L", e.what());
    }
    const auto& law = model.law;
    if (!(law.lower < 0.0)) fail("a", "inf supp mu must be < 0 (need a < 0)");
    if (!(law.lower < law.upper)) fail("b", "uniform[a, b] needs a < b");
    const bool free_allowed = kind == ExperimentKind::Spectrum || kind == ExperimentKind::FreeRes;
    if (model.coupling < 0.0 || (model.coupling == 0.0 && !free_allowed)) {
        fail("lambda", "lambda must be > 0");
    }
    if (realizations < 1) fail("realizations", "realizations must be >= 1");

    const std::size_t volume = cube_volume(lattice);
    const bool dense = kind == ExperimentKind::Spectrum || kind == ExperimentKind::LevelStats ||
                       kind == ExperimentKind::Dos || kind == ExperimentKind::Checks ||
                       (kind == ExperimentKind::FracMom && !energy);
    if (dense && volume > kDenseCap) {
        fail("L", "L^d = " + std::to_string(volume) + " exceeds the dense cap of " + std::to_string(kDenseCap));
    }

    auto need_s = [&] {
        if (!(s > 0.0 && s < 0.5)) fail("s", "s must lie in (0, 1/2)");
    };
    auto need_widths = [&] {
        if (!(width_min > 0.0 && width_min <= width_max)) fail("width_min", "need 0 < width_min <= width_max");
    };
    auto need_dos_scan = [&] {
        if (!energy) {
            if (dos_energies.empty()) fail("energy", "energy = auto needs dos_energies");
            if (dos_eps.empty() || dos_eps.front() <= 0.0 || !strictly_decreasing(dos_eps)) {
                fail("dos_eps", "dos_eps must be positive and strictly decreasing");
            }
        }
    };

    switch (kind) {
        case ExperimentKind::Spectrum:
            break;
        case ExperimentKind::Dos:
            if (!interval || !(interval->first < interval->second)) fail("interval", "dos needs interval = lower upper with lower < upper");
            if (!energy) fail("energy", "dos needs a numeric energy");
            if (dos_eps.empty() || dos_eps.front() <= 0.0 || !strictly_decreasing(dos_eps)) {
                fail("dos_eps", "dos_eps must be positive and strictly decreasing");
            }
            break;
        case ExperimentKind::Wegner:
        case ExperimentKind::Minami:
            if (!energy) fail("energy", to_string(kind) + " needs a numeric energy");
            need_widths();
            if (!diagnostic && !(*energy + 0.5 * width_max < 0.0)) {
                fail("energy", "every interval [a, b) must have b < 0 (energy + width_max / 2 = " +
                                   std::to_string(*energy + 0.5 * width_max) + ")");
            }
            break;
        case ExperimentKind::LevelStats:
            if (windows.size() < 2) fail("windows", "windows needs at least two edges");
            for (std::size_t k = 1; k < windows.size(); ++k) {
                if (!(windows[k] > windows[k - 1])) fail("windows", "window edges must increase");
            }
            need_dos_scan();
            if (energy && !(*energy < 0.0)) fail("energy", "energy must be < 0");
            break;
        case ExperimentKind::FracMom:
            need_s();
            need_dos_scan();
            if (energy && !(*energy < 0.0)) fail("energy", "energy must be < 0");
            if (eps_grid.empty() || eps_grid.front() <= 0.0 || !strictly_decreasing(eps_grid)) {
                fail("eps_grid", "eps_grid must be positive and strictly decreasing");
            }
            if (contrast_lambda.has_value() != contrast_energy.has_value()) {
                fail("contrast_lambda", "contrast run needs both contrast_lambda and contrast_energy");
            }
            if (contrast_lambda && !(*contrast_lambda > 0.0)) fail("contrast_lambda", "contrast_lambda must be > 0");
            if (contrast_energy && !(*contrast_energy < 0.0)) fail("contrast_energy", "contrast_energy must be < 0");
            break;
        case ExperimentKind::FreeRes:
            if (!(s > 0.0)) fail("s", "s must be > 0");
            for (double sv : s_grid) {
                if (!(sv > 0.0)) fail("s_grid", "s_grid entries must be > 0");
            }
            for (double e : energies) {
                if (!(e < 0.0)) fail("energies", "energies must be < 0");
            }
            if (!(delta >= 0.0)) fail("delta", "delta must be >= 0");
            break;
        case ExperimentKind::Checks:
            need_s();
            need_widths();
            if (!energy) fail("energy", "checks needs a numeric energy");
            if (!diagnostic && !(*energy + 0.5 * width_max < 0.0)) fail("energy", "spectral averaging intervals need b < 0");
            if (!(e_tilde < 0.0)) fail("e_tilde", "e_tilde must be < 0");
            if (tau_nodes < 1) fail("tau_nodes", "tau_nodes must be >= 1");
            if (alpha_points < 2) fail("alpha_points", "alpha_points must be >= 2");
            if (lambda_grid.size() < 3) fail("lambda_grid", "lambda_grid needs at least 3 values");
            for (double l : lambda_grid) {
                if (!(l > 0.0)) fail("lambda_grid", "lambda_grid entries must be > 0");
            }
            if (cond_distance < 1 || 2 * cond_distance >= lattice.side) fail("cond_distance", "cond_distance must lie in [1, L/2)");
            if (realizations < 2) fail("realizations", "checks needs at least 2 realizations");
            break;
    }
    if (kind == ExperimentKind::FracMom || kind == ExperimentKind::Checks) {
        if (!(epsilon > 0.0)) fail("epsilon", "epsilon must be > 0");
    }
}

nlohmann::json ExperimentConfig::echo() const {
    nlohmann::json j = nlohmann::json::object();
    j["kind"] = to_string(kind);
    for (const auto& [k, v] : entries) j["entries"][k] = v;
    return j;
}

ExperimentConfig parse_config(const std::string& text, std::optional<ExperimentKind> kind) {
    ExperimentConfig c;
    if (kind) c.kind = *kind;
    c.source = text;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::stringstream parts(raw);
        for (std::string part; std::getline(parts, part, ',');) {
            part = trim(part);
            if (part.empty()) continue;
            const auto eq = part.find('=');
            if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value', got '" + part + "'");
            const std::string key = trim(part.substr(0, eq));
            const std::string value = trim(part.substr(eq + 1));
            const auto it = setters().find(key);
            if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
            if (c.lines.count(key)) {
                throw ConfigError(line, "key '" + key + "' repeated (first set on line " + std::to_string(c.lines[key]) + ")");
            }
            if (value.empty()) throw ConfigError(line, key + ": missing value");
            it->second(c, value, line, key);
            if (key == "kind" && kind && c.kind != *kind) {
                throw ConfigError(line, "config kind '" + value + "' does not match requested kind '" +
                                            to_string(*kind) + "'");
            }
            c.lines[key] = line;
            c.entries[key] = value;
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), kind);
}

}  // namespace sporadic
