// Copyright 2026 The qkr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkr/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qkr/errors.hpp"

namespace qkr {

using nlohmann::json;

std::string to_string(Backend backend) { return backend == Backend::Exact ? "exact" : "gates"; }

Backend parse_backend(const std::string& text) {
    if (text == "exact") return Backend::Exact;
    if (text == "gates") return Backend::Gates;
    throw ConfigError("unknown backend '" + text + "' (expected exact or gates)");
}

namespace {

std::string kernel_name(QftKernel kernel) { return kernel == QftKernel::FusedLayers ? "fused" : "gate-by-gate"; }

QftKernel parse_kernel(const std::string& text) {
    if (text == "fused") return QftKernel::FusedLayers;
    if (text == "gate-by-gate") return QftKernel::GateByGate;
    throw ConfigError("unknown kernel '" + text + "' (expected fused or gate-by-gate)");
}

// Recognised keys in expansion order; the first varies slowest.
struct KeySpec {
    const char* section;
    const char* key;
    bool list_valued;  // the value itself is a list, so a grid axis is a list of lists
};

constexpr KeySpec kKeys[] = {
    {"model", "n_q", false},          {"model", "k", false},
    {"model", "K", false},            {"model", "initial_momentum", false},
    {"noise", "epsilon", false},      {"noise", "seed", false},
    {"noise", "realizations", false}, {"run", "backend", false},
    {"run", "steps", false},          {"run", "record_every", false},
    {"run", "snapshot_times", true},  {"run", "checkpoints", false},
    {"run", "kernel", false},         {"output", "dir", false},
    {"resume", "dir", false},         {"resume", "at", false},
};

template <typename T>
T get_as(const json& value, const std::string& where) {
    try {
        return value.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config key " + where + ": " + e.what());
    }
}

std::int64_t get_integer(const json& value, const std::string& where) {
    if (!value.is_number_integer() && !(value.is_number_float() && std::floor(value.get<double>()) == value.get<double>())) {
        throw ConfigError("config key " + where + " must be an integer");
    }
    return value.is_number_integer() ? value.get<std::int64_t>() : static_cast<std::int64_t>(value.get<double>());
}

void assign(ExperimentConfig& cfg, const std::string& section, const std::string& key, const json& value,
            const std::filesystem::path& base_dir) {
    const std::string where = section + "." + key;
    if (section == "model") {
        if (key == "n_q") cfg.n_qubits = static_cast<int>(get_integer(value, where));
        else if (key == "k") cfg.k = get_as<double>(value, where);
        else if (key == "K") cfg.chaos_parameter = get_as<double>(value, where);
        else if (key == "initial_momentum") cfg.initial_momentum = get_integer(value, where);
    } else if (section == "noise") {
        if (key == "epsilon") cfg.epsilon = get_as<double>(value, where);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(get_integer(value, where));
        else if (key == "realizations") cfg.realizations = static_cast<int>(get_integer(value, where));
    } else if (section == "run") {
        if (key == "backend") cfg.backend = parse_backend(get_as<std::string>(value, where));
        else if (key == "steps") cfg.steps = get_integer(value, where);
        else if (key == "record_every") {
            if (value.is_string() && value.get<std::string>() == "adaptive") cfg.record_every.reset();
            else cfg.record_every = get_integer(value, where);
        } else if (key == "snapshot_times") {
            if (!value.is_array()) throw ConfigError("config key " + where + " must be a list of kicks");
            cfg.snapshot_times.clear();
            for (const auto& v : value) cfg.snapshot_times.push_back(get_integer(v, where));
        } else if (key == "checkpoints") cfg.checkpoints = get_as<bool>(value, where);
        else if (key == "kernel") cfg.kernel = parse_kernel(get_as<std::string>(value, where));
    } else if (section == "output") {
        std::filesystem::path p = get_as<std::string>(value, where);
        cfg.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (section == "resume") {
        if (key == "dir") {
            std::filesystem::path p = get_as<std::string>(value, where);
            cfg.resume_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        } else if (key == "at") {
            cfg.resume_at = get_integer(value, where);
        }
    }
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

void validate(const ExperimentConfig& c) {
    if (c.n_qubits < kMinQubits || c.n_qubits > kMaxQubits) {
        throw ConfigError("n_q must lie in [2, 24], got " + std::to_string(c.n_qubits));
    }
    if (!(c.k > 0.0) || !std::isfinite(c.k)) throw ConfigError("k must be positive");
    if (!(c.chaos_parameter > 0.0) || !std::isfinite(c.chaos_parameter)) throw ConfigError("K must be positive");
    if (c.steps < 1) throw ConfigError("steps must be >= 1, got " + std::to_string(c.steps));
    if (c.record_every && *c.record_every < 1) {
        throw ConfigError("record_every must be >= 1, got " + std::to_string(*c.record_every));
    }
    for (const auto t : c.snapshot_times) {
        if (t < 0 || t > c.steps) {
            throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, " + std::to_string(c.steps) + "]");
        }
    }
    if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) throw ConfigError("epsilon must be >= 0");
    if (c.backend == Backend::Exact && c.epsilon != 0.0) {
        throw ConfigError("the exact backend has no gate imperfections; epsilon must be 0");
    }
    if (c.realizations < 1) throw ConfigError("realizations must be >= 1");
    const auto half = std::int64_t{1} << (c.n_qubits - 1);
    if (c.initial_momentum < -half || c.initial_momentum >= half) {
        throw ConfigError("initial_momentum outside [-N/2, N/2)");
    }
    if (!c.resume_dir.empty()) {
        if (c.resume_at <= 0 || c.resume_at > c.steps) throw ConfigError("resume.at must lie in (0, steps]");
    }
}

std::vector<std::int64_t> record_times(const ExperimentConfig& c) {
    std::vector<std::int64_t> times;
    if (c.record_every) {
        for (std::int64_t t = 0; t <= c.steps; t += *c.record_every) times.push_back(t);
    } else {
        for (std::int64_t t = 0; t <= std::min<std::int64_t>(c.steps, 1000); ++t) times.push_back(t);
        for (std::int64_t t = 1010; t <= c.steps; t += 10) times.push_back(t);
    }
    if (times.back() != c.steps) times.push_back(c.steps);
    return times;
}

std::uint64_t realization_seed(const ExperimentConfig& c, int realization) {
    return c.seed ^ static_cast<std::uint64_t>(realization);
}

std::string grid_point_name(const ExperimentConfig& c) {
    return to_string(c.backend) + "_nq" + std::to_string(c.n_qubits) + "_k" + format_number(c.k) + "_K" +
           format_number(c.chaos_parameter) + "_eps" + format_number(c.epsilon);
}

std::vector<ExperimentConfig> parse_config_grid(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    std::set<std::string> known_sections;
    for (const auto& spec : kKeys) known_sections.insert(spec.section);
    for (const auto& [section, body] : doc.items()) {
        if (section == "name" || section == "description" || section == "analysis") continue;
        if (!known_sections.count(section)) throw ConfigError("unknown config section '" + section + "'");
        if (!body.is_object()) throw ConfigError("config section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            bool found = false;
            for (const auto& spec : kKeys) {
                if (section == spec.section && key == spec.key) found = true;
            }
            if (!found) throw ConfigError("unknown config key '" + section + "." + key + "'");
        }
    }

    struct Axis {
        std::string section, key;
        std::vector<json> values;
    };
    std::vector<Axis> axes;
    for (const auto& spec : kKeys) {
        if (!doc.contains(spec.section) || !doc[spec.section].contains(spec.key)) continue;
        const json& v = doc[spec.section][spec.key];
        const bool is_axis = spec.list_valued ? (v.is_array() && !v.empty() && v.front().is_array()) : v.is_array();
        Axis axis{spec.section, spec.key, {}};
        if (is_axis) {
            if (v.empty()) throw ConfigError(std::string("grid axis ") + spec.section + "." + spec.key + " is empty");
            for (const auto& item : v) axis.values.push_back(item);
        } else {
            axis.values.push_back(v);
        }
        axes.push_back(std::move(axis));
    }

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();

    std::vector<ExperimentConfig> grid;
    grid.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        ExperimentConfig cfg;
        std::size_t rem = flat;
        std::vector<std::size_t> pick(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            pick[a] = rem % axes[a].values.size();
            rem /= axes[a].values.size();
        }
        for (std::size_t a = 0; a < axes.size(); ++a) {
            assign(cfg, axes[a].section, axes[a].key, axes[a].values[pick[a]], base_dir);
        }
        validate(cfg);
        grid.push_back(std::move(cfg));
    }

    if (grid.size() > 1) {
        std::map<std::string, int> uses;
        for (const auto& c : grid) ++uses[grid_point_name(c)];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto name = grid_point_name(grid[i]);
            if (uses[name] > 1) name += "_i" + std::to_string(i);
            if (!grid[i].output_dir.empty()) grid[i].output_dir /= name;
        }
    }
    return grid;
}

std::vector<ExperimentConfig> load_config_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_grid(buf.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["model"] = {{"n_q", c.n_qubits}, {"k", c.k}, {"K", c.chaos_parameter}, {"initial_momentum", c.initial_momentum}};
    doc["noise"] = {{"epsilon", c.epsilon}, {"seed", c.seed}, {"realizations", c.realizations}};
    json run = {{"backend", to_string(c.backend)},
                {"steps", c.steps},
                {"snapshot_times", c.snapshot_times},
                {"checkpoints", c.checkpoints},
                {"kernel", kernel_name(c.kernel)}};
    if (c.record_every) run["record_every"] = *c.record_every;
    else run["record_every"] = "adaptive";
    doc["run"] = run;
    doc["output"] = {{"dir", c.output_dir.string()}};
    if (!c.resume_dir.empty()) doc["resume"] = {{"dir", c.resume_dir.string()}, {"at", c.resume_at}};
    return doc.dump(2);
}

}  // namespace qkr
