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

#include "qkr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <set>

#include "qkr/errors.hpp"
#include "qkr/qft_circuit.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

namespace fs = std::filesystem;

fs::path realization_dir(const fs::path& run_dir, int realization) {
    return run_dir / ("r" + std::to_string(realization));
}

namespace {

struct RealizationOutput {
    ObservableSeries series;
    std::vector<Snapshot> snapshots;
    RealizationInfo info;
    std::vector<fs::path> files;  // relative to the run directory
};

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
}

class Realization {
  public:
    Realization(const ExperimentConfig& cfg, int r, const RotorPropagator& prop, const GatePlan* plan)
        : cfg_(cfg),
          r_(r),
          prop_(prop),
          plan_(plan),
          noise_(cfg.epsilon, realization_seed(cfg, r)),
          state_(init_delta_state(prop.params(), cfg.initial_momentum)) {
        out_.series = ObservableSeries(SeriesMetadata{cfg.k, cfg.chaos_parameter, cfg.n_qubits, cfg.epsilon,
                                                      realization_seed(cfg, r)});
        out_.info.index = r;
        out_.info.seed = realization_seed(cfg, r);
        snapshot_times_ = std::set<std::int64_t>(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
        if (!cfg.output_dir.empty()) dir_ = realization_dir(cfg.output_dir, r);
    }

    RealizationOutput run(const RunOptions& options) {
        std::int64_t t = 0;
        const auto times = record_times(cfg_);
        auto next_record = times.begin();
        if (!cfg_.resume_dir.empty()) {
            t = resume();
            next_record = std::upper_bound(times.begin(), times.end(), t);
        } else {
            if (!dir_.empty()) prepare_output_dir(dir_);
            if (visit(t, next_record, times.end(), options)) return finish(t);
        }
        while (t < cfg_.steps) {
            if (plan_) step_gates(state_, prop_, *plan_, noise_, cfg_.kernel);
            else prop_.step_exact(state_);
            ++t;
            if (visit(t, next_record, times.end(), options)) break;
        }
        return finish(t);
    }

  private:
    using TimeIter = std::vector<std::int64_t>::const_iterator;

    // Records and dumps whatever falls on kick t. Returns true to stop.
    bool visit(std::int64_t t, TimeIter& next_record, TimeIter end, const RunOptions& options) {
        bool stop = false;
        if (next_record != end && *next_record == t) {
            ++next_record;
            const auto rec = observe(state_, t);
            if (!(rec.norm_err <= kNormDriftLimit)) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "norm drift %.3e exceeds %.0e at t = %lld in realization %d",
                              rec.norm_err, kNormDriftLimit, static_cast<long long>(t), r_);
                throw InvariantViolation(buf);
            }
            out_.series.push_back(rec);
            if (options.stop_after && options.stop_after(r_, rec)) stop = true;
        }
        if (snapshot_times_.count(t)) {
            out_.snapshots.push_back({r_, t, probabilities(state_)});
            if (!dir_.empty()) {
                write_snapshot_csv(dir_ / snapshot_file_name(t), out_.snapshots.back().dist);
                add_file(snapshot_file_name(t));
                if (cfg_.checkpoints) {
                    write_checkpoint(dir_ / checkpoint_file_name(t),
                                     Checkpoint{t, noise_.save_stream(), noise_.seed(), noise_.epsilon(), state_});
                    add_file(checkpoint_file_name(t));
                }
            }
        }
        return stop;
    }

    // Restores state, stream, records and snapshots up to resume_at.
    std::int64_t resume() {
        const auto src = realization_dir(cfg_.resume_dir, r_);
        const std::int64_t at = cfg_.resume_at;
        auto cp = read_checkpoint(src / checkpoint_file_name(at));
        if (cp.t != at || cp.seed != noise_.seed() || cp.epsilon != cfg_.epsilon ||
            cp.state.n_qubits() != cfg_.n_qubits) {
            throw ConfigError("checkpoint " + (src / checkpoint_file_name(at)).string() +
                              " does not belong to this configuration");
        }
        const auto old = read_series_csv(src / "series.csv", out_.series.metadata());
        std::vector<Snapshot> old_snapshots;
        for (const auto t : snapshot_times_) {
            if (t > at) break;
            old_snapshots.push_back({r_, t, read_snapshot_csv(src / snapshot_file_name(t))});
        }
        if (!dir_.empty()) prepare_output_dir(dir_);
        for (const auto& rec : old.records()) {
            if (rec.t > at) break;
            out_.series.push_back(rec);
        }
        if (out_.series.empty() || out_.series.back().t != at) {
            throw IoError((src / "series.csv").string() + " has no record at t = " + std::to_string(at));
        }
        for (auto& s : old_snapshots) {
            if (!dir_.empty()) {
                write_snapshot_csv(dir_ / snapshot_file_name(s.t), s.dist);
                add_file(snapshot_file_name(s.t));
                if (cfg_.checkpoints) {
                    const auto from = src / checkpoint_file_name(s.t);
                    const auto to = dir_ / checkpoint_file_name(s.t);
                    std::error_code ec;
                    if (!fs::exists(to) || !fs::equivalent(from, to, ec)) {
                        fs::copy_file(from, to, fs::copy_options::overwrite_existing, ec);
                        if (ec) throw IoError("cannot copy " + from.string() + ": " + ec.message());
                    }
                    add_file(checkpoint_file_name(s.t));
                }
            }
            out_.snapshots.push_back(std::move(s));
        }
        state_ = std::move(cp.state);
        noise_.restore_stream(cp.stream);
        return at;
    }

    RealizationOutput finish(std::int64_t t) {
        out_.info.steps_completed = t;
        out_.info.draw_counter = noise_.draw_counter();
        if (!dir_.empty()) {
            write_series_csv(dir_ / "series.csv", out_.series);
            add_file("series.csv");
        }
        return std::move(out_);
    }

    void add_file(const std::string& name) {
        out_.files.push_back(fs::path("r" + std::to_string(r_)) / name);
    }

    const ExperimentConfig& cfg_;
    int r_;
    const RotorPropagator& prop_;
    const GatePlan* plan_;
    NoiseModel noise_;
    StateVector state_;
    std::set<std::int64_t> snapshot_times_;
    fs::path dir_;
    RealizationOutput out_;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const auto started = std::chrono::steady_clock::now();
    if (!config.output_dir.empty()) prepare_output_dir(config.output_dir);

    const RotatorParams params(config.k, config.chaos_parameter, config.n_qubits);
    const RotorPropagator propagator(params);
    std::optional<GatePlan> plan;
    if (config.backend == Backend::Gates) plan.emplace(config.n_qubits);

    ExperimentResult result;
    result.manifest.config = config;
    result.manifest.software_version = software_version();
    std::vector<fs::path> files;
    for (int r = 0; r < config.realizations; ++r) {
        Realization job(config, r, propagator, plan ? &*plan : nullptr);
        auto out = job.run(options);
        result.series.push_back(std::move(out.series));
        for (auto& s : out.snapshots) result.snapshots.push_back(std::move(s));
        result.manifest.realizations.push_back(out.info);
        files.insert(files.end(), out.files.begin(), out.files.end());
    }

    if (!config.output_dir.empty()) {
        std::sort(files.begin(), files.end());
        files.erase(std::unique(files.begin(), files.end()), files.end());
        for (const auto& rel : files) {
            const auto full = config.output_dir / rel;
            result.manifest.files.push_back({rel.generic_string(), sha256_file(full), fs::file_size(full)});
        }
    }
    result.manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (!config.output_dir.empty()) write_manifest(config.output_dir / "manifest.json", result.manifest);
    return result;
}

}  // namespace qkr
