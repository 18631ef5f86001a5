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

#ifndef QKR_IO_HPP
#define QKR_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qkr/config.hpp"
#include "qkr/observables.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

/// %.17g, the shortest printf form that round-trips every double.
std::string format_double(double x);

/// series.csv: header "t,n2,ipr,norm_err", one row per record.
void write_series_csv(const std::filesystem::path& path, const ObservableSeries& series);
ObservableSeries read_series_csv(const std::filesystem::path& path, SeriesMetadata metadata = {});

/// snapshot_t{T}.csv: header "n,W", rows in increasing signed n.
void write_snapshot_csv(const std::filesystem::path& path, const ProbabilityDistribution& dist);
ProbabilityDistribution read_snapshot_csv(const std::filesystem::path& path);

std::string snapshot_file_name(std::int64_t t);
std::string checkpoint_file_name(std::int64_t t);

/// Hex SHA-256 of a file's bytes. Throws IoError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// Full state plus the random-stream position at kick t.
struct Checkpoint {
    std::int64_t t = 0;
    std::string stream;  // NoiseModel::save_stream()
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    StateVector state{kMinQubits};
};

/// One JSON header line followed by 2N little-endian doubles (re, im).
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path& path);

struct RealizationInfo {
    int index = 0;
    std::uint64_t seed = 0;
    std::uint64_t draw_counter = 0;
    std::int64_t steps_completed = 0;
    bool operator==(const RealizationInfo&) const = default;
};

struct FileEntry {
    std::string path;  // relative to the run directory
    std::string sha256;
    std::uintmax_t bytes = 0;
    bool operator==(const FileEntry&) const = default;
};

/// Everything needed to reproduce and audit a run.
struct RunManifest {
    ExperimentConfig config;
    std::string software_version;
    std::vector<RealizationInfo> realizations;
    double wall_seconds = 0.0;
    std::vector<FileEntry> files;
};

std::string software_version();

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Recomputes every listed checksum under `run_dir`; throws IoError naming
/// the first missing or modified file.
void verify_manifest_files(const std::filesystem::path& run_dir, const RunManifest& manifest);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qkr

#endif  // QKR_IO_HPP
