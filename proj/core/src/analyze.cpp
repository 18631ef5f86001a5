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

#include "qkr/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"
#include "qkr/errors.hpp"
#include "qkr/experiment.hpp"
#include "qkr/sweep.hpp"

namespace qkr {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(AnalysisTask task) {
    switch (task) {
        case AnalysisTask::DiffusionFit: return "diffusion-fit";
        case AnalysisTask::TpDetect: return "tp-detect";
        case AnalysisTask::PlateauTrace: return "plateau-trace";
        case AnalysisTask::PeakReport: return "peak-report";
        case AnalysisTask::Predict: return "predict";
    }
    return "unknown";
}

AnalysisTask parse_analysis_task(const std::string& text) {
    for (auto t : {AnalysisTask::DiffusionFit, AnalysisTask::TpDetect, AnalysisTask::PlateauTrace,
                   AnalysisTask::PeakReport, AnalysisTask::Predict}) {
        if (text == to_string(t)) return t;
    }
    throw ConfigError("unknown analysis task '" + text +
                      "' (expected diffusion-fit, tp-detect, plateau-trace, peak-report or predict)");
}

LoadedRun load_run(const fs::path& run_dir) {
    LoadedRun run;
    run.dir = run_dir;
    run.manifest = read_manifest(run_dir / "manifest.json");
    verify_manifest_files(run_dir, run.manifest);
    const auto& c = run.manifest.config;
    for (const auto& info : run.manifest.realizations) {
        const auto path = realization_dir(run_dir, info.index) / "series.csv";
        run.series.push_back(read_series_csv(
            path, SeriesMetadata{c.k, c.chaos_parameter, c.n_qubits, c.epsilon, info.seed}));
    }
    if (run.series.empty()) throw IoError(run_dir.string() + ": manifest lists no realizations");
    return run;
}

std::vector<fs::path> find_runs(const fs::path& input) {
    if (fs::exists(input / "manifest.json")) return {input};
    std::vector<fs::path> runs;
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
        for (const auto& entry : fs::directory_iterator(input)) {
            if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) runs.push_back(entry.path());
        }
    }
    if (runs.empty()) throw IoError("no manifest.json in " + input.string() + " or its subdirectories");
    std::sort(runs.begin(), runs.end());
    return runs;
}

namespace {

ObservableSeries truncated(const ObservableSeries& s, std::size_t n) {
    ObservableSeries out(s.metadata());
    for (std::size_t i = 0; i < n && i < s.size(); ++i) out.push_back(s[i]);
    return out;
}

// Records shared by a and b from the start.
std::size_t common_length(const ObservableSeries& a, const ObservableSeries& b) {
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n].t == b[n].t) ++n;
    return n;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json prediction_object(const RotatorParams& params, double epsilon) {
    const auto p = predict_timescales(params, epsilon);
    const auto alt = predict_timescales(params, epsilon, RateForm::Alternate);
    const auto prim = predict_timescales(params, epsilon, RateForm::Primary);
    return {{"k", params.k()},
            {"K", params.chaos_parameter()},
            {"n_q", params.n_qubits()},
            {"epsilon", epsilon},
            {"t_q", number_or_null(p.t_q)},
            {"t_q_primary_rate", number_or_null(prim.t_q)},
            {"t_q_alternate_rate", number_or_null(alt.t_q)},
            {"t_eps", number_or_null(p.t_eps)},
            {"t_p", number_or_null(p.t_p)},
            {"D", p.D},
            {"D_eps", p.D_eps},
            {"D_eps_alt", p.D_eps_alt},
            {"localization_length", p.localization}};
}

RotatorParams params_of(const ExperimentConfig& c) { return RotatorParams(c.k, c.chaos_parameter, c.n_qubits); }

json run_header(const LoadedRun& run) {
    const auto& c = run.manifest.config;
    json files = json::array();
    for (const auto& f : run.manifest.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return {{"run", run.dir.filename().string()},
            {"backend", to_string(c.backend)},
            {"n_q", c.n_qubits},
            {"k", c.k},
            {"K", c.chaos_parameter},
            {"epsilon", c.epsilon},
            {"seed", c.seed},
            {"realizations", c.realizations},
            {"files", files}};
}

json diffusion_fit(const std::vector<LoadedRun>& runs, const AnalyzeOptions& opt) {
    json results = json::array();
    std::vector<double> xs, ys;
    for (const auto& run : runs) {
        const auto& c = run.manifest.config;
        json r = run_header(run);
        r["prediction"] = prediction_object(params_of(c), c.epsilon);
        const auto mean = average_common_prefix(run.series);
        try {
            DiffusionWindow window;
            if (opt.t_lo && opt.t_hi) {
                window = {*opt.t_lo, *opt.t_hi, false};
            } else {
                window = choose_diffusion_window(predict_timescales(params_of(c), c.epsilon), mean[0].t,
                                                 mean.back().t, opt.bin);
                if (opt.t_lo) window.t_lo = *opt.t_lo;
                if (opt.t_hi) window.t_hi = *opt.t_hi;
            }
            const auto fit = fit_diffusion(mean, window.t_lo, window.t_hi, opt.bin);
            const auto pred = predict_timescales(params_of(c), c.epsilon);
            r["t_lo"] = window.t_lo;
            r["t_hi"] = window.t_hi;
            r["window_fallback"] = window.fallback;
            r["D_fit"] = fit.slope;
            r["r_squared"] = fit.r_squared;
            r["bins"] = fit.samples;
            r["ratio_primary"] = number_or_null(pred.D_eps > 0 ? fit.slope / pred.D_eps : NAN);
            r["ratio_alternate"] = number_or_null(pred.D_eps_alt > 0 ? fit.slope / pred.D_eps_alt : NAN);
            if (c.epsilon > 0) {
                const double n_sq = std::ldexp(1.0, 2 * c.n_qubits);
                for (const auto& p : bin_series(mean, window.t_lo, window.t_hi, opt.bin)) {
                    xs.push_back(c.epsilon * c.epsilon * p.t);
                    ys.push_back(p.n2 / n_sq);
                }
            }
        } catch (const ParameterError& e) {
            r["error"] = e.what();
        }
        results.push_back(std::move(r));
    }
    json out = {{"runs", results}};
    if (xs.size() >= 2) {
        try {
            const auto f = least_squares(xs, ys);
            out["collapse_fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
                                   {"points", f.samples}, {"predicted_slope", 5.0}};
        } catch (const ParameterError&) {
        }
    }
    return out;
}

json tp_detect(const std::vector<LoadedRun>& runs, const AnalyzeOptions& opt) {
    if (opt.reference.empty()) throw ConfigError("tp-detect needs a reference (clean) run");
    std::vector<LoadedRun> refs;
    for (const auto& dir : find_runs(opt.reference)) refs.push_back(load_run(dir));
    json results = json::array();
    for (const auto& run : runs) {
        const auto& c = run.manifest.config;
        const LoadedRun* ref = nullptr;
        for (const auto& candidate : refs) {
            const auto& rc = candidate.manifest.config;
            if (rc.n_qubits == c.n_qubits && rc.k == c.k && rc.chaos_parameter == c.chaos_parameter &&
                rc.initial_momentum == c.initial_momentum && rc.epsilon == 0.0) {
                ref = &candidate;
                break;
            }
        }
        if (!ref) {
            throw ConfigError("no clean reference run matches " + run.dir.string());
        }
        const auto clean = average_common_prefix(ref->series);
        json r = run_header(run);
        r["reference"] = ref->dir.filename().string();
        r["prediction"] = prediction_object(params_of(c), c.epsilon);

        json per = json::array();
        double sum = 0.0;
        int reached = 0;
        for (const auto& s : run.series) {
            const auto n = common_length(s, clean);
            const auto tp = detect_tp(truncated(s, n), truncated(clean, n), opt.tp_threshold, opt.tp_hold);
            per.push_back(tp ? json(*tp) : json(nullptr));
            if (tp) {
                sum += static_cast<double>(*tp);
                ++reached;
            }
        }
        r["t_p_per_realization"] = per;
        r["reached"] = reached;
        const bool all = reached == static_cast<int>(run.series.size());
        r["t_p_mean"] = all ? json(sum / reached) : json(nullptr);

        const auto mean = average_common_prefix(run.series);
        const auto n = common_length(mean, clean);
        const auto tp = detect_tp(truncated(mean, n), truncated(clean, n), opt.tp_threshold, opt.tp_hold);
        r["t_p_of_mean_ipr"] = tp ? json(*tp) : json(nullptr);
        const double predicted = predict_timescales(params_of(c), c.epsilon).t_p;
        if (all && std::isfinite(predicted)) r["ratio_to_prediction"] = (sum / reached) / predicted;
        results.push_back(std::move(r));
    }
    return {{"runs", results}, {"threshold", opt.tp_threshold}, {"hold", opt.tp_hold}};
}

// Realization-averaged snapshot at each snapshot time of a run.
std::vector<std::pair<std::int64_t, ProbabilityDistribution>> averaged_snapshots(const LoadedRun& run) {
    std::vector<std::pair<std::int64_t, ProbabilityDistribution>> out;
    auto times = run.manifest.config.snapshot_times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (const auto t : times) {
        std::vector<ProbabilityDistribution> dists;
        for (const auto& info : run.manifest.realizations) {
            if (info.steps_completed < t) continue;
            dists.push_back(read_snapshot_csv(realization_dir(run.dir, info.index) / snapshot_file_name(t)));
        }
        if (!dists.empty()) out.emplace_back(t, average_distributions(dists));
    }
    return out;
}

json plateau_trace(const std::vector<LoadedRun>& runs) {
    json results = json::array();
    for (const auto& run : runs) {
        json r = run_header(run);
        const auto& c = run.manifest.config;
        r["prediction"] = prediction_object(params_of(c), c.epsilon);
        json rows = json::array();
        std::vector<double> lx, ly;
        for (const auto& [t, dist] : averaged_snapshots(run)) {
            const double w = plateau_level(dist);
            rows.push_back({{"t", t}, {"plateau", w}});
            if (t > 0 && w > 0) {
                lx.push_back(std::log(static_cast<double>(t)));
                ly.push_back(std::log(w));
            }
        }
        r["trace"] = rows;
        if (lx.size() >= 2) {
            try {
                const auto f = least_squares(lx, ly);
                r["log_log_slope"] = f.slope;
                r["log_log_r_squared"] = f.r_squared;
            } catch (const ParameterError&) {
            }
        }
        results.push_back(std::move(r));
    }
    return {{"runs", results}};
}

json peak_report(const std::vector<LoadedRun>& runs, const AnalyzeOptions& opt) {
    json results = json::array();
    for (const auto& run : runs) {
        json r = run_header(run);
        const auto& c = run.manifest.config;
        json rows = json::array();
        for (const auto& [t, dist] : averaged_snapshots(run)) {
            const auto peaks = detect_peaks(dist, opt.peaks);
            const auto levels = detected_power_levels(peaks, c.n_qubits);
            rows.push_back({{"t", t}, {"peaks", peaks}, {"power_levels", levels}, {"power_level_count", levels.size()}});
        }
        r["snapshots"] = rows;
        results.push_back(std::move(r));
    }
    return {{"runs", results},
            {"detector", {{"threshold", opt.peaks.threshold}, {"half_window", opt.peaks.half_window}}}};
}

json predict_all(const std::vector<LoadedRun>& runs) {
    json results = json::array();
    for (const auto& run : runs) {
        json r = run_header(run);
        r["prediction"] = prediction_object(params_of(run.manifest.config), run.manifest.config.epsilon);
        results.push_back(std::move(r));
    }
    return {{"runs", results}};
}

}  // namespace

ObservableSeries average_common_prefix(std::span<const ObservableSeries> series) {
    if (series.empty()) throw ParameterError("average_common_prefix: no inputs");
    std::size_t n = series.front().size();
    for (const auto& s : series) n = std::min(n, common_length(series.front(), s));
    std::vector<ObservableSeries> cut;
    cut.reserve(series.size());
    for (const auto& s : series) cut.push_back(truncated(s, n));
    return average_series(cut);
}

std::string prediction_json(const RotatorParams& params, double epsilon) {
    return prediction_object(params, epsilon).dump(2);
}

std::string analyze(const fs::path& input, const AnalyzeOptions& options) {
    std::vector<LoadedRun> runs;
    for (const auto& dir : find_runs(input)) runs.push_back(load_run(dir));

    json report;
    report["task"] = to_string(options.task);
    report["software_version"] = software_version();
    report["bin"] = options.bin;
    switch (options.task) {
        case AnalysisTask::DiffusionFit: report["result"] = diffusion_fit(runs, options); break;
        case AnalysisTask::TpDetect: report["result"] = tp_detect(runs, options); break;
        case AnalysisTask::PlateauTrace: report["result"] = plateau_trace(runs); break;
        case AnalysisTask::PeakReport: report["result"] = peak_report(runs, options); break;
        case AnalysisTask::Predict: report["result"] = predict_all(runs); break;
    }
    const std::string text = report.dump(2) + "\n";
    const auto out = options.out.empty() ? input / ("report_" + to_string(options.task) + ".json") : options.out;
    write_text_file(out, text);
    return text;
}

}  // namespace qkr
