#include "maxlln_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "maxlln/errors.hpp"
#include "maxlln/parallel.hpp"

namespace maxlln::cli {

namespace {

[[noreturn]] void wrong_type(const std::string& path, const char* want) {
    throw ConfigError(fmt::format("field '{}' must be {}", path, want));
}

}  // namespace

Node::Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) wrong_type(path_.empty() ? "<config>" : path_, "an object");
}

std::string Node::child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Node::has(const std::string& key) const { return j_->contains(key) && !(*j_)[key].is_null(); }

Node Node::at(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    return Node((*j_)[key], child_path(key));
}

double Node::number(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (!v.is_number()) wrong_type(child_path(key), "a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) wrong_type(child_path(key), "finite");
    return d;
}

double Node::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

std::optional<double> Node::maybe_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
}

std::int64_t Node::integer(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    wrong_type(child_path(key), "an integer");
}

std::int64_t Node::integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::uint64_t Node::uint64(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    wrong_type(child_path(key), "a non-negative integer");
}

bool Node::boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = (*j_)[key];
    if (!v.is_boolean()) wrong_type(child_path(key), "true or false");
    return v.get<bool>();
}

std::string Node::string(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (!v.is_string()) wrong_type(child_path(key), "a string");
    return v.get<std::string>();
}

std::string Node::string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
}

std::vector<double> Node::numbers(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (!v.is_array()) wrong_type(child_path(key), "an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) wrong_type(fmt::format("{}[{}]", child_path(key), i), "a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::vector<std::int64_t> Node::integers(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (!v.is_array()) wrong_type(child_path(key), "an array of integers");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) wrong_type(fmt::format("{}[{}]", child_path(key), i), "an integer");
        out.push_back(v[i].get<std::int64_t>());
    }
    return out;
}

std::vector<std::string> Node::strings(const std::string& key) const {
    if (!has(key)) throw ConfigError(fmt::format("missing required field '{}'", child_path(key)));
    const json& v = (*j_)[key];
    if (v.is_string()) {
        // "x1,x2" is accepted as well as ["x1", "x2"]
        std::vector<std::string> out;
        std::string cur;
        for (char c : v.get<std::string>()) {
            if (c == ',') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    }
    if (!v.is_array()) wrong_type(child_path(key), "an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) wrong_type(fmt::format("{}[{}]", child_path(key), i), "a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

void Node::only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, _] : j_->items()) {
        bool found = false;
        for (const char* a : allowed) found = found || key == a;
        if (!found) throw ConfigError(fmt::format("unknown field '{}'", child_path(key)));
    }
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"simulate",       "estimate-dependence", "bound-check",
                                                "rate-study",     "test-maxcorr",        "test-screening",
                                                "test-partial",   "size-power"};
    return names;
}

std::size_t config_workers(const Node& cfg) {
    std::size_t requested = 0;
    if (cfg.has("workers")) {
        const json& w = cfg.raw()["workers"];
        if (w.is_string()) {
            if (w.get<std::string>() != "auto") wrong_type("workers", "a positive integer or \"auto\"");
        } else {
            const std::int64_t n = cfg.integer("workers");
            if (n < 1) wrong_type("workers", "a positive integer or \"auto\"");
            requested = static_cast<std::size_t>(n);
        }
    }
    if (const char* env = std::getenv("MAXLLN_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw ConfigError("MAXLLN_THREADS must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    return resolve_workers(requested);
}

json load_json_arg(const std::string& arg, const std::string& field) {
    try {
        if (!arg.empty() && arg.front() == '{') return json::parse(arg);
        std::ifstream in(arg);
        if (!in) throw ConfigError(fmt::format("field '{}': cannot open '{}'", field, arg));
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("field '{}': invalid JSON ({})", field, e.what()));
    }
}

}  // namespace maxlln::cli
