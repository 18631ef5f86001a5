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

#ifndef QKR_EXPERIMENT_HPP
#define QKR_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "qkr/config.hpp"
#include "qkr/io.hpp"
#include "qkr/observables.hpp"

namespace qkr {

/// Norm drift |sum |psi|^2 - 1| above which a run is aborted.
inline constexpr double kNormDriftLimit = 1e-6;

struct Snapshot {
    int realization;
    std::int64_t t;
    ProbabilityDistribution dist;
};

struct ExperimentResult {
    std::vector<ObservableSeries> series;  // one per realization
    std::vector<Snapshot> snapshots;       // realization-major, increasing t
    RunManifest manifest;
};

struct RunOptions {
    /// Called after every record; returning true ends that realization early.
    /// The series and manifest then stop at the current kick.
    std::function<bool(int realization, const SeriesRecord& record)> stop_after;
};

/// Output layout under config.output_dir:
///   manifest.json
///   r{r}/series.csv
///   r{r}/snapshot_t{T}.csv
///   r{r}/checkpoint_t{T}.bin   (when config.checkpoints)
///
/// Throws ConfigError for an invalid config, IoError when the output cannot
/// be written, InvariantViolation when the norm drifts past kNormDriftLimit.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Directory of realization r inside a run directory.
std::filesystem::path realization_dir(const std::filesystem::path& run_dir, int realization);

}  // namespace qkr

#endif  // QKR_EXPERIMENT_HPP
