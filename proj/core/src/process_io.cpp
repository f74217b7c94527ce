#include "maxlln/process_io.hpp"

#include <fmt/format.h>

#include "maxlln/errors.hpp"

namespace maxlln {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

}  // namespace maxlln

namespace maxlln::processes {

namespace {

using nlohmann::json;

template <class T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw ConfigError(fmt::format("missing field '{}'", name));
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("field '{}' has the wrong type", name));
    }
}

template <class T>
T field_or(const json& j, const char* name, T fallback) {
    return j.contains(name) ? field<T>(j, name) : fallback;
}

InnovationLaw law_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("field 'innovation' must be an object");
    const auto law = field_or<std::string>(j, "law", "gaussian");
    const double scale = field_or<double>(j, "scale", 1.0);
    if (law == "gaussian") return InnovationLaw::gaussian(scale);
    if (law == "subexponential") return InnovationLaw::subexponential(field<double>(j, "gamma2"), scale);
    if (law == "pareto") return InnovationLaw::pareto(field<double>(j, "phi"), scale);
    throw ConfigError(fmt::format("unknown innovation law '{}'", law));
}

}  // namespace

json to_json(const ProcessSpec& spec) {
    json j;
    j["family"] = std::string(family_name(spec.family()));
    switch (spec.family()) {
        case Family::linear: {
            const auto& p = std::get<LinearParams>(spec.params);
            using R = LinearParams::Rule;
            if (p.rule == R::geometric) {
                j["rule"] = "geometric";
                j["rate"] = p.rate;
            } else if (p.rule == R::exp_decay) {
                j["rule"] = "exp_decay";
                j["decay"] = p.decay;
                j["gamma1"] = p.gamma1;
            } else {
                j["rule"] = "explicit";
                j["coefficients"] = p.coefficients;
            }
            break;
        }
        case Family::lipschitz_markov: {
            const auto& p = std::get<MarkovParams>(spec.params);
            j["rho"] = p.rho;
            j["map"] = p.map == MarkovMap::linear ? "linear" : "soft_threshold";
            if (p.map == MarkovMap::soft_threshold) j["threshold"] = p.threshold;
            break;
        }
        case Family::iterated_random_fn:
            j["lambda"] = std::get<IteratedParams>(spec.params).lambda;
            break;
        case Family::gaussian_ar1_coords:
            j["zeta"] = std::get<GaussianAr1CoordsParams>(spec.params).zeta;
            break;
        case Family::random_walk_time:
            break;
        case Family::lp_trend:
            j["exponent"] = std::get<TrendParams>(spec.params).exponent;
            break;
    }
    json law;
    law["law"] = std::string(innovation_name(spec.innovation.family));
    law["scale"] = spec.innovation.scale;
    if (spec.innovation.family == InnovationFamily::subexponential) law["gamma2"] = spec.innovation.tail;
    if (spec.innovation.family == InnovationFamily::pareto) law["phi"] = spec.innovation.tail;
    j["innovation"] = law;
    if (spec.burn_in) j["burn_in"] = *spec.burn_in;
    if (spec.common_coordinates) j["common_coordinates"] = true;
    return j;
}

ProcessSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("process spec must be a JSON object");
    ProcessSpec spec;
    const auto family = field<std::string>(j, "family");
    if (family == "linear") {
        LinearParams p;
        const auto rule = field_or<std::string>(j, "rule", "geometric");
        if (rule == "geometric") {
            p.rule = LinearParams::Rule::geometric;
            p.rate = field<double>(j, "rate");
        } else if (rule == "exp_decay") {
            p.rule = LinearParams::Rule::exp_decay;
            p.decay = field<double>(j, "decay");
            p.gamma1 = field<double>(j, "gamma1");
        } else if (rule == "explicit") {
            p.rule = LinearParams::Rule::explicit_list;
            p.coefficients = field<std::vector<double>>(j, "coefficients");
        } else {
            throw ConfigError(fmt::format("unknown linear rule '{}'", rule));
        }
        spec.params = p;
    } else if (family == "lipschitz_markov") {
        MarkovParams p;
        p.rho = field<double>(j, "rho");
        const auto map = field_or<std::string>(j, "map", "linear");
        if (map == "linear") {
            p.map = MarkovMap::linear;
        } else if (map == "soft_threshold") {
            p.map = MarkovMap::soft_threshold;
            p.threshold = field_or<double>(j, "threshold", 1.0);
        } else {
            throw ConfigError(fmt::format("unknown markov map '{}'", map));
        }
        spec.params = p;
    } else if (family == "iterated_random_fn") {
        spec.params = IteratedParams{field<double>(j, "lambda")};
    } else if (family == "gaussian_ar1_coords") {
        spec.params = GaussianAr1CoordsParams{field<double>(j, "zeta")};
    } else if (family == "random_walk_time") {
        spec.params = RandomWalkParams{};
    } else if (family == "lp_trend") {
        spec.params = TrendParams{field<double>(j, "exponent")};
    } else {
        throw ConfigError(fmt::format("unknown process family '{}'", family));
    }
    if (j.contains("innovation")) spec.innovation = law_from_json(j.at("innovation"));
    if (j.contains("burn_in")) spec.burn_in = field<std::int64_t>(j, "burn_in");
    spec.common_coordinates = field_or<bool>(j, "common_coordinates", false);
    validate(spec);
    return spec;
}

std::string spec_hash(const ProcessSpec& spec) { return hex64(fnv1a64(to_json(spec).dump())); }

}  // namespace maxlln::processes
