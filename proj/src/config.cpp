#include "memeprobe/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "memeprobe/error.hpp"

namespace memeprobe {

namespace {

constexpr const char* kModule = "cli";

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorCode::InvalidArgument, kModule, "config: " + message);
}

template <typename T>
T get_as(const nlohmann::json& value, const char* key) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        config_error(fmt::format("'{}' has the wrong type", key));
    }
}

std::size_t get_count(const nlohmann::json& value, const char* key) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        config_error(fmt::format("'{}' must be a non-negative integer", key));
    }
    return value.get<std::size_t>();
}

MemeSpec spec_from_json(const nlohmann::json& obj) {
    if (!obj.is_object() || !obj.contains("name") || !obj.contains("factors")) {
        config_error("each score spec needs 'name' and 'factors'");
    }
    MemeSpec spec;
    spec.name = get_as<std::string>(obj.at("name"), "name");
    for (const auto& f : obj.at("factors")) spec.factors.push_back(parse_factor(get_as<std::string>(f, "factors")));
    return spec;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Parse, kModule, std::string("config: ") + e.what());
    }
    if (!root.is_object()) config_error("top level must be an object");

    RunConfig config;
    for (const auto& [key, value] : root.items()) {
        if (key == "tau") {
            if (!value.is_number()) config_error("'tau' must be a number");
            config.tau = value.get<double>();
        } else if (key == "kde_grid") {
            config.kde_grid = get_count(value, "kde_grid");
        } else if (key == "stability_sizes") {
            if (!value.is_array()) config_error("'stability_sizes' must be an array");
            config.stability_sizes.clear();
            for (const auto& s : value) config.stability_sizes.push_back(get_count(s, "stability_sizes"));
        } else if (key == "stability_repeats") {
            config.stability_repeats = get_count(value, "stability_repeats");
        } else if (key == "seed") {
            if (!value.is_number_integer()) config_error("'seed' must be an integer");
            config.seed = value.get<std::uint64_t>();
        } else if (key == "score_specs") {
            if (!value.is_array()) config_error("'score_specs' must be an array");
            for (const auto& s : value) config.score_specs.push_back(spec_from_json(s));
        } else {
            config_error("unknown key '" + key + "'");
        }
    }
    validate(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, kModule, "cannot open config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides) {
    if (overrides.tau) config.tau = *overrides.tau;
    if (overrides.kde_grid) config.kde_grid = *overrides.kde_grid;
    if (overrides.stability_sizes) config.stability_sizes = *overrides.stability_sizes;
    if (overrides.stability_repeats) config.stability_repeats = *overrides.stability_repeats;
    if (overrides.seed) config.seed = *overrides.seed;
    config.score_specs.insert(config.score_specs.end(), overrides.score_specs.begin(), overrides.score_specs.end());
    validate(config);
}

void validate(const RunConfig& config) {
    if (!(config.tau >= 0.0 && config.tau <= 1.0)) config_error(fmt::format("tau = {} outside [0, 1]", config.tau));
    if (config.kde_grid < 2) config_error("kde_grid must be at least 2");
    if (config.stability_repeats < 2) config_error("stability_repeats must be at least 2");
    if (config.stability_sizes.empty()) config_error("stability_sizes is empty");
    for (std::size_t s : config.stability_sizes) {
        if (s == 0) config_error("stability sizes must be positive");
    }
    for (std::size_t a = 0; a < config.score_specs.size(); ++a) {
        for (const auto& builtin : builtin_catalog()) {
            if (builtin.name == config.score_specs[a].name) {
                config_error("score spec '" + builtin.name + "' shadows a built-in score");
            }
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (config.score_specs[a].name == config.score_specs[b].name) {
                config_error("score spec '" + config.score_specs[a].name + "' is defined twice");
            }
        }
    }
}

MemeSpec parse_spec_argument(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
        config_error("score spec '" + std::string(text) + "' must look like NAME=factor,factor");
    }
    MemeSpec spec;
    spec.name = std::string(text.substr(0, eq));
    std::string_view rest = text.substr(eq + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        spec.factors.push_back(parse_factor(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return spec;
}

std::string describe(const RunConfig& config) {
    std::vector<std::string> specs;
    for (const auto& spec : config.score_specs) {
        std::vector<std::string> factors;
        for (const auto& f : spec.factors) factors.push_back(format_factor(f));
        specs.push_back(fmt::format("{}={}", spec.name, fmt::join(factors, "*")));
    }
    return fmt::format("tau={} seed={} kde_grid={} stability_sizes={} stability_repeats={} score_specs=[{}]",
                       config.tau, config.seed, config.kde_grid, fmt::join(config.stability_sizes, ","),
                       config.stability_repeats, fmt::join(specs, ";"));
}

}  // namespace memeprobe
