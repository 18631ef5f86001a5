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

#ifndef QKR_SWEEP_HPP
#define QKR_SWEEP_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qkr/config.hpp"
#include "qkr/experiment.hpp"
#include "qkr/observables.hpp"

namespace qkr {

struct DiffusionWindow {
    std::int64_t t_lo;
    std::int64_t t_hi;
    /// True when [5 t_q, t_eps / 5] held fewer than three bins inside the
    /// data and the second half of the run was used instead.
    bool fallback;
};

/// [5 t_q, t_eps / 5] clipped to [t_min, t_max]; if that leaves fewer than
/// three bins, [t_max - (t_max - t_min) / 2, t_max].
DiffusionWindow choose_diffusion_window(const TimescalePrediction& prediction, std::int64_t t_min,
                                        std::int64_t t_max, std::int64_t bin);

/// Diffusion fit of one realization-averaged series.
struct DiffusionSummary {
    DiffusionWindow window;
    LinearFit fit;
    double ratio_primary;    // D_fit / (5 eps^2 N^2); NaN for eps = 0
    double ratio_alternate;  // D_fit / (n_q eps^2 N^2 / 2)
    std::vector<BinnedPoint> points;
};

/// Fits `series` with the window chosen from `config`'s predicted time scales.
DiffusionSummary summarize_diffusion(const ExperimentConfig& config, const ObservableSeries& series,
                                     std::int64_t bin);

struct SweepEntry {
    ExperimentConfig config;
    std::string name;                // grid_point_name, made unique
    std::string error;               // empty on success
    ObservableSeries mean_series;    // average over realizations
    std::optional<RunManifest> manifest;
    std::optional<DiffusionSummary> diffusion;
    std::string diffusion_error;     // why no fit was possible
};

struct CollapsePoint {
    std::size_t entry;  // index into SweepResult::entries
    double eps2_t;      // eps^2 t
    double n2_scaled;   // <n^2> / N^2
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::vector<CollapsePoint> collapse;
    /// Pooled fit of n2_scaled against eps2_t; absent with fewer than 2 points.
    std::optional<LinearFit> collapse_fit;
};

struct SweepOptions {
    unsigned threads = 1;
    std::int64_t bin = 1000;
    /// Where sweep_summary.json, collapse.csv and dfit.csv go; empty skips.
    std::filesystem::path summary_dir;
};

/// Runs every config on a pool of `threads` workers. A config that throws is
/// recorded in its entry and does not stop the others. Throws ConfigError for
/// an empty grid.
SweepResult run_sweep(const std::vector<ExperimentConfig>& grid, const SweepOptions& options = {});

/// Summary JSON as written to sweep_summary.json.
std::string sweep_summary_json(const SweepResult& result);

}  // namespace qkr

#endif  // QKR_SWEEP_HPP
