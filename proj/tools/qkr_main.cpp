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

// qkr: command-line front end for the kicked rotator simulator.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qkr/analyze.hpp"
#include "qkr/classical.hpp"
#include "qkr/config.hpp"
#include "qkr/errors.hpp"
#include "qkr/experiment.hpp"
#include "qkr/io.hpp"
#include "qkr/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kInvariant = 2, kIo = 3 };

struct RunArgs {
    std::string config;
    std::string backend = "gates";
    int nq = 12;
    double k = 10.0;
    double bigk = 5.0;
    double eps = 0.0;
    std::int64_t steps = 1000;
    std::string record_every = "adaptive";
    std::vector<std::int64_t> snapshots;
    std::uint64_t seed = 1;
    int realizations = 1;
    std::string out;
    std::string kernel = "fused";
    std::string resume;
    std::int64_t resume_at = 0;
};

struct SweepArgs {
    std::string config;
    unsigned threads = 1;
    std::int64_t bin = 1000;
    std::string out;
};

struct ClassicalArgs {
    double k = 10.0;
    double bigk = 5.0;
    std::size_t ntraj = 10000;
    std::int64_t steps = 1000;
    std::uint64_t seed = 1;
    std::string out;
};

struct AnalyzeArgs {
    std::string input;
    std::string task;
    std::string reference;
    std::int64_t t_lo = -1;
    std::int64_t t_hi = -1;
    std::int64_t bin = 1000;
    double threshold = 1.5;
    std::size_t hold = 10;
    std::string out;
};

struct PredictArgs {
    double k = 10.0;
    double bigk = 5.0;
    int nq = 12;
    double eps = 1e-4;
};

// Flags given explicitly on the command line override a --config file.
std::vector<qkr::ExperimentConfig> build_run_configs(const RunArgs& a, const CLI::App& cmd) {
    std::vector<qkr::ExperimentConfig> grid;
    if (!a.config.empty()) grid = qkr::load_config_grid(a.config);
    else grid.emplace_back();
    const bool from_file = !a.config.empty();
    auto given = [&](const char* name) { return !from_file || cmd.count(name) > 0; };
    for (auto& c : grid) {
        if (given("--backend")) c.backend = qkr::parse_backend(a.backend);
        if (given("--nq")) c.n_qubits = a.nq;
        if (given("--k")) c.k = a.k;
        if (given("--bigk")) c.chaos_parameter = a.bigk;
        if (given("--eps")) c.epsilon = a.eps;
        if (given("--steps")) c.steps = a.steps;
        if (given("--record-every")) {
            if (a.record_every == "adaptive") c.record_every.reset();
            else {
                try {
                    c.record_every = std::stoll(a.record_every);
                } catch (const std::exception&) {
                    throw qkr::ConfigError("--record-every must be an integer or 'adaptive'");
                }
            }
        }
        if (given("--snapshot-at")) c.snapshot_times = a.snapshots;
        if (given("--seed")) c.seed = a.seed;
        if (given("--realizations")) c.realizations = a.realizations;
        if (given("--out") && !(from_file && grid.size() > 1)) c.output_dir = a.out;
        if (cmd.count("--checkpoint")) c.checkpoints = true;
        if (given("--kernel")) {
            if (a.kernel == "fused") c.kernel = qkr::QftKernel::FusedLayers;
            else if (a.kernel == "gate-by-gate") c.kernel = qkr::QftKernel::GateByGate;
            else throw qkr::ConfigError("--kernel must be fused or gate-by-gate");
        }
        if (cmd.count("--resume")) {
            c.resume_dir = a.resume;
            c.resume_at = a.resume_at;
        }
        qkr::validate(c);
    }
    return grid;
}

int do_run(const RunArgs& a, const CLI::App& cmd) {
    const auto grid = build_run_configs(a, cmd);
    for (const auto& c : grid) {
        if (auto warn = qkr::RotatorParams(c.k, c.chaos_parameter, c.n_qubits).regime_warning()) {
            std::cerr << "warning: " << *warn << "\n";
        }
        const auto result = qkr::run_experiment(c);
        const auto& last = result.series.front().back();
        std::printf("%s: %d realization(s), t = %lld, <n^2> = %.6g, ipr = %.6g, %.2f s%s%s\n",
                    qkr::grid_point_name(c).c_str(), c.realizations, static_cast<long long>(last.t), last.n2,
                    last.ipr, result.manifest.wall_seconds, c.output_dir.empty() ? "" : ", written to ",
                    c.output_dir.string().c_str());
    }
    return kOk;
}

int do_sweep(const SweepArgs& a) {
    const auto grid = qkr::load_config_grid(a.config);
    qkr::SweepOptions opt;
    opt.threads = a.threads;
    opt.bin = a.bin;
    if (!a.out.empty()) opt.summary_dir = a.out;
    else if (!grid.front().output_dir.empty())
        opt.summary_dir = grid.size() > 1 ? grid.front().output_dir.parent_path() : grid.front().output_dir;
    const auto result = qkr::run_sweep(grid, opt);
    std::size_t failed = 0;
    for (const auto& e : result.entries) {
        if (!e.error.empty()) {
            ++failed;
            std::fprintf(stderr, "%s: failed: %s\n", e.name.c_str(), e.error.c_str());
        } else if (e.diffusion) {
            std::printf("%s: D_fit = %.6g (ratio %.3g), window [%lld, %lld]%s\n", e.name.c_str(),
                        e.diffusion->fit.slope, e.diffusion->ratio_primary,
                        static_cast<long long>(e.diffusion->window.t_lo),
                        static_cast<long long>(e.diffusion->window.t_hi),
                        e.diffusion->window.fallback ? " (fallback)" : "");
        } else {
            std::printf("%s: no diffusion fit: %s\n", e.name.c_str(), e.diffusion_error.c_str());
        }
    }
    if (result.collapse_fit) {
        std::printf("collapse: slope %.4g, R^2 %.4f over %zu points\n", result.collapse_fit->slope,
                    result.collapse_fit->r_squared, result.collapse_fit->samples);
    }
    std::printf("%zu of %zu configs completed\n", result.entries.size() - failed, result.entries.size());
    return failed == 0 ? kOk : kInvariant;
}

int do_classical(const ClassicalArgs& a) {
    const auto d = qkr::classical_diffusion(a.k, a.bigk, a.ntraj, a.steps, a.seed);
    std::printf("D = %.6g (k^2/2 = %.6g)\n", d.rate, a.k * a.k / 2.0);
    if (!a.out.empty()) {
        std::ostringstream csv;
        csv << "t,n2\n";
        for (std::size_t t = 0; t < d.second_moment.size(); ++t) {
            csv << t << ',' << qkr::format_double(d.second_moment[t]) << '\n';
        }
        const std::filesystem::path dir = a.out;
        qkr::write_text_file(dir / "classical.csv", csv.str());
        std::ostringstream js;
        js << "{\n  \"k\": " << qkr::format_double(a.k) << ",\n  \"K\": " << qkr::format_double(a.bigk)
           << ",\n  \"trajectories\": " << a.ntraj << ",\n  \"steps\": " << a.steps << ",\n  \"seed\": " << a.seed
           << ",\n  \"rate\": " << qkr::format_double(d.rate) << "\n}\n";
        qkr::write_text_file(dir / "classical_summary.json", js.str());
    }
    return kOk;
}

int do_analyze(const AnalyzeArgs& a) {
    qkr::AnalyzeOptions opt;
    opt.task = qkr::parse_analysis_task(a.task);
    opt.reference = a.reference;
    if (a.t_lo >= 0) opt.t_lo = a.t_lo;
    if (a.t_hi >= 0) opt.t_hi = a.t_hi;
    opt.bin = a.bin;
    opt.tp_threshold = a.threshold;
    opt.tp_hold = a.hold;
    opt.out = a.out;
    std::cout << qkr::analyze(a.input, opt);
    return kOk;
}

int do_predict(const PredictArgs& a) {
    std::cout << qkr::prediction_json(qkr::RotatorParams(a.k, a.bigk, a.nq), a.eps) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum kicked rotator simulator with a noisy gate-level QFT"};
    app.set_version_flag("--version", qkr::software_version());
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Simulate one configuration");
    run_cmd->add_option("--config", run.config, "JSON config file (flags override it)");
    run_cmd->add_option("--backend", run.backend, "exact or gates")->capture_default_str();
    run_cmd->add_option("--nq", run.nq, "Number of qubits")->capture_default_str();
    run_cmd->add_option("--k", run.k, "Kick strength k")->capture_default_str();
    run_cmd->add_option("--bigk", run.bigk, "Chaos parameter K = kT")->capture_default_str();
    run_cmd->add_option("--eps", run.eps, "Gate imperfection amplitude")->capture_default_str();
    run_cmd->add_option("--steps", run.steps, "Number of kicks")->capture_default_str();
    run_cmd->add_option("--record-every", run.record_every, "Kicks between records, or 'adaptive'")
        ->capture_default_str();
    run_cmd->add_option("--snapshot-at", run.snapshots, "Kick at which W_n is written (repeatable)");
    run_cmd->add_option("--seed", run.seed, "Base seed")->capture_default_str();
    run_cmd->add_option("--realizations", run.realizations, "Noise realizations")->capture_default_str();
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_flag("--checkpoint", "Write full-state checkpoints at snapshot times");
    run_cmd->add_option("--kernel", run.kernel, "fused or gate-by-gate")->capture_default_str();
    auto* resume_opt = run_cmd->add_option("--resume", run.resume, "Run directory with checkpoints");
    run_cmd->add_option("--resume-at", run.resume_at, "Checkpoint kick to resume from")->needs(resume_opt);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a config grid");
    sweep_cmd->add_option("--config", sweep.config, "JSON config file with list-valued keys")->required();
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads")
        ->default_val(std::max(1u, std::thread::hardware_concurrency()));
    sweep_cmd->add_option("--bin", sweep.bin, "Bin width for diffusion fits")->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out, "Directory for the summary tables");

    ClassicalArgs classical;
    auto* classical_cmd = app.add_subcommand("classical", "Iterate the standard map ensemble");
    classical_cmd->add_option("--k", classical.k, "Kick strength k")->capture_default_str();
    classical_cmd->add_option("--bigk", classical.bigk, "Chaos parameter K")->capture_default_str();
    classical_cmd->add_option("--ntraj", classical.ntraj, "Trajectories")->capture_default_str();
    classical_cmd->add_option("--steps", classical.steps, "Kicks")->capture_default_str();
    classical_cmd->add_option("--seed", classical.seed, "Seed")->capture_default_str();
    classical_cmd->add_option("--out", classical.out, "Output directory");

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Post-process run directories");
    analyze_cmd->add_option("--input", analyze.input, "Run directory or directory of runs")->required();
    analyze_cmd->add_option("--task", analyze.task, "diffusion-fit, tp-detect, plateau-trace, peak-report, predict")
        ->required();
    analyze_cmd->add_option("--reference", analyze.reference, "Clean run(s) for tp-detect");
    analyze_cmd->add_option("--t-lo", analyze.t_lo, "Fit window start");
    analyze_cmd->add_option("--t-hi", analyze.t_hi, "Fit window end");
    analyze_cmd->add_option("--bin", analyze.bin, "Bin width")->capture_default_str();
    analyze_cmd->add_option("--threshold", analyze.threshold, "IPR ratio threshold")->capture_default_str();
    analyze_cmd->add_option("--hold", analyze.hold, "Records the ratio must hold")->capture_default_str();
    analyze_cmd->add_option("--out", analyze.out, "Report path");

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "Print the closed-form time scales");
    predict_cmd->add_option("--k", predict.k, "Kick strength k")->capture_default_str();
    predict_cmd->add_option("--bigk", predict.bigk, "Chaos parameter K")->capture_default_str();
    predict_cmd->add_option("--nq", predict.nq, "Number of qubits")->capture_default_str();
    predict_cmd->add_option("--eps", predict.eps, "Gate imperfection amplitude")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run_cmd) return do_run(run, *run_cmd);
        if (*sweep_cmd) return do_sweep(sweep);
        if (*classical_cmd) return do_classical(classical);
        if (*analyze_cmd) return do_analyze(analyze);
        if (*predict_cmd) return do_predict(predict);
    } catch (const qkr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const qkr::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kConfig;
    } catch (const qkr::RangeError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return kConfig;
    } catch (const qkr::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const qkr::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const qkr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvariant;
    }
    return kOk;
}
