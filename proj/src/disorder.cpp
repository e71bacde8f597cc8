#include "sporadic/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sporadic/error.hpp"
#include "sporadic/rng.hpp"

namespace sporadic {

double SingleSiteLaw::max_abs() const { return std::max(std::abs(lower), std::abs(upper)); }

double SingleSiteLaw::density_bound() const { return 1.0 / (upper - lower); }

double SingleSiteLaw::density(double x) const {
    return (x >= lower && x <= upper) ? density_bound() : 0.0;
}

double SingleSiteLaw::quantile(double u) const { return lower + (upper - lower) * u; }

double SingleSiteLaw::mean() const { return 0.5 * (lower + upper); }

std::string SingleSiteLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "uniform[" << lower << ", " << upper << "]";
    return os.str();
}

void DisorderModel::validate() const {
    if (!std::isfinite(coupling) || coupling <= 0.0) {
        throw ValidationError("coupling lambda must be a finite number > 0");
    }
    const auto& mu = law;
    if (!std::isfinite(mu.lower) || !std::isfinite(mu.upper)) {
        throw ValidationError("single-site law must have compact support");
    }
    if (!(mu.lower < mu.upper)) {
        throw ValidationError(
            "support of the single-site law must contain more than one point (need a < b)");
    }
    if (!(mu.lower < 0.0)) {
        throw ValidationError("inf supp mu must be < 0 (got a = " + std::to_string(mu.lower) + ")");
    }
}

std::optional<double> DisorderRealization::value_at(const Site& site) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), site);
    if (it == sites.end() || *it != site) {
        return std::nullopt;
    }
    return values[static_cast<std::size_t>(it - sites.begin())];
}

double DisorderRealization::potential(const Site& site) const {
    if (!on_sublattice(site, spec.period)) {
        return 0.0;
    }
    auto v = value_at(site);
    if (!v) {
        throw ValidationError("realization has no value for a sublattice site of the cube");
    }
    return *v;
}

double site_potential(const DisorderModel& model, std::uint64_t seed, const Site& site) {
    return model.law.quantile(unit_interval(keyed_hash(seed, site)));
}

DisorderRealization sample_disorder(const LatticeSpec& spec, const DisorderModel& model,
                                    std::uint64_t seed) {
    spec.validate();
    model.validate();
    DisorderRealization out;
    out.spec = spec;
    out.seed = seed;
    out.sites = sublattice_sites(spec);
    out.values.reserve(out.sites.size());
    for (const auto& site : out.sites) {
        out.values.push_back(site_potential(model, seed, site));
    }
    return out;
}

DisorderRealization translate(const DisorderRealization& realization, const Site& shift) {
    const auto& spec = realization.spec;
    if (shift.size() != static_cast<std::size_t>(spec.dimension) ||
        !on_sublattice(shift, spec.period)) {
        throw ValidationError("translation vector must lie in M Z^d");
    }
    DisorderRealization out = realization;
    out.spec.center.resize(static_cast<std::size_t>(spec.dimension));
    for (int axis = 0; axis < spec.dimension; ++axis) {
        out.spec.center[static_cast<std::size_t>(axis)] =
            spec.center_coord(axis) + shift[static_cast<std::size_t>(axis)];
    }
    for (auto& site : out.sites) {
        for (std::size_t k = 0; k < site.size(); ++k) {
            site[k] += shift[k];
        }
    }
    return out;
}

DisorderRealization with_value(const DisorderRealization& realization, const Site& site,
                               double value) {
    DisorderRealization out = realization;
    auto it = std::lower_bound(out.sites.begin(), out.sites.end(), site);
    if (it == out.sites.end() || *it != site) {
        throw ValidationError("site is not an active sublattice site of the realization");
    }
    out.values[static_cast<std::size_t>(it - out.sites.begin())] = value;
    return out;
}

nlohmann::json to_json(const DisorderRealization& realization) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["seed"] = realization.seed;
    j["dimension"] = realization.spec.dimension;
    j["side"] = realization.spec.side;
    j["period"] = realization.spec.period;
    Site center(static_cast<std::size_t>(realization.spec.dimension));
    for (int axis = 0; axis < realization.spec.dimension; ++axis) {
        center[static_cast<std::size_t>(axis)] = realization.spec.center_coord(axis);
    }
    j["center"] = center;
    auto& values = j["values"] = nlohmann::json::array();
    for (std::size_t k = 0; k < realization.sites.size(); ++k) {
        values.push_back({{"site", realization.sites[k]}, {"value", realization.values[k]}});
    }
    return j;
}

DisorderRealization realization_from_json(const nlohmann::json& j) {
    DisorderRealization out;
    out.seed = j.at("seed").get<std::uint64_t>();
    out.spec.dimension = j.at("dimension").get<int>();
    out.spec.side = j.at("side").get<std::int64_t>();
    out.spec.period = j.at("period").get<std::int64_t>();
    out.spec.center = j.at("center").get<Site>();
    out.spec.validate();
    for (const auto& entry : j.at("values")) {
        out.sites.push_back(entry.at("site").get<Site>());
        out.values.push_back(entry.at("value").get<double>());
    }
    return out;
}

}  // namespace sporadic
