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

#ifndef QKR_ANALYZE_HPP
#define QKR_ANALYZE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qkr/io.hpp"
#include "qkr/observables.hpp"

namespace qkr {

enum class AnalysisTask { DiffusionFit, TpDetect, PlateauTrace, PeakReport, Predict };

std::string to_string(AnalysisTask task);
/// Accepts "diffusion-fit", "tp-detect", "plateau-trace", "peak-report",
/// "predict". Throws ConfigError otherwise.
AnalysisTask parse_analysis_task(const std::string& text);

struct AnalyzeOptions {
    AnalysisTask task = AnalysisTask::Predict;
    /// Clean (epsilon = 0) run or directory of runs; required by TpDetect.
    std::filesystem::path reference;
    std::optional<std::int64_t> t_lo;  // overrides the default diffusive window
    std::optional<std::int64_t> t_hi;
    std::int64_t bin = 1000;
    double tp_threshold = 1.5;
    std::size_t tp_hold = 10;
    PeakDetectorOptions peaks;
    /// Report path; empty writes <input>/report_<task>.json.
    std::filesystem::path out;
};

/// A run directory read back and checked against its manifest.
struct LoadedRun {
    std::filesystem::path dir;
    RunManifest manifest;
    std::vector<ObservableSeries> series;  // one per realization
};

/// Reads manifest.json and every r{r}/series.csv, after verifying all
/// listed checksums. Throws IoError naming the offending file.
LoadedRun load_run(const std::filesystem::path& run_dir);

/// `input` itself if it holds manifest.json, otherwise its immediate
/// subdirectories that do, sorted by name. Throws IoError if there is none.
std::vector<std::filesystem::path> find_runs(const std::filesystem::path& input);

/// Truncates every series to the longest t grid they all share, then averages.
ObservableSeries average_common_prefix(std::span<const ObservableSeries> series);

/// JSON object with every closed-form time scale and rate.
std::string prediction_json(const RotatorParams& params, double epsilon);

/// Runs `options.task` over the runs found under `input`, writes the JSON
/// report and returns its text. The report depends only on the inputs.
std::string analyze(const std::filesystem::path& input, const AnalyzeOptions& options);

}  // namespace qkr

#endif  // QKR_ANALYZE_HPP
