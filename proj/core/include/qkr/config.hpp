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

#ifndef QKR_CONFIG_HPP
#define QKR_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qkr/qft_circuit.hpp"

namespace qkr {

enum class Backend { Exact, Gates };

std::string to_string(Backend backend);
Backend parse_backend(const std::string& text);

/// One simulation: parameters, schedule, seeding and output location.
struct ExperimentConfig {
    Backend backend = Backend::Gates;
    int n_qubits = 12;
    double k = 10.0;
    double chaos_parameter = 5.0;
    double epsilon = 0.0;
    std::int64_t steps = 1000;
    /// Kicks between records; nullopt selects the adaptive schedule (every
    /// kick up to t = 1000, every 10 kicks after).
    std::optional<std::int64_t> record_every;
    std::vector<std::int64_t> snapshot_times;
    std::uint64_t seed = 1;
    int realizations = 1;
    /// Empty keeps everything in memory.
    std::filesystem::path output_dir;
    /// Also write the full complex state (and random stream) at each
    /// snapshot time, so a run can be resumed.
    bool checkpoints = false;
    std::int64_t initial_momentum = 0;
    QftKernel kernel = QftKernel::FusedLayers;
    /// Continue from the checkpoints of an earlier run of the same config.
    std::filesystem::path resume_dir;
    std::int64_t resume_at = 0;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError if an invariant is violated: steps >= 1,
/// record_every >= 1, snapshot times within [0, steps], epsilon >= 0, no
/// noise on the exact backend, valid physical parameters.
void validate(const ExperimentConfig& config);

/// Kicks at which a record is taken: always t = 0 and t = steps.
std::vector<std::int64_t> record_times(const ExperimentConfig& config);

/// Seed of realization r: seed XOR r.
std::uint64_t realization_seed(const ExperimentConfig& config, int realization);

/// Directory name that identifies a grid point, e.g. "gates_nq12_k10_K5_eps0.0001".
std::string grid_point_name(const ExperimentConfig& config);

/// Expands a JSON config with sections "model", "noise", "run" and "output".
/// Any scalar key given as a list becomes a grid axis (snapshot_times needs a
/// list of lists); the Cartesian product is returned in row-major key order.
/// With more than one grid point each output goes to output.dir/<grid point>.
std::vector<ExperimentConfig> parse_config_grid(const std::string& json_text,
                                                const std::filesystem::path& base_dir = {});
std::vector<ExperimentConfig> load_config_grid(const std::filesystem::path& path);

/// JSON echo of a single config (the shape accepted back by
/// parse_config_grid).
std::string config_to_json(const ExperimentConfig& config);

}  // namespace qkr

#endif  // QKR_CONFIG_HPP
