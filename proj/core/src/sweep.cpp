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

#include "qkr/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qkr/errors.hpp"
#include "qkr/io.hpp"

namespace qkr {

using nlohmann::json;

DiffusionWindow choose_diffusion_window(const TimescalePrediction& prediction, std::int64_t t_min,
                                        std::int64_t t_max, std::int64_t bin) {
    if (bin < 1) throw ParameterError("bin must be >= 1");
    if (t_max <= t_min) throw ParameterError("empty time range");
    if (const auto w = diffusive_window(prediction, t_min, t_max)) {
        if ((w->second - w->first + 1) / bin >= 3) return {w->first, w->second, false};
    }
    return {t_max - (t_max - t_min) / 2, t_max, true};
}

DiffusionSummary summarize_diffusion(const ExperimentConfig& config, const ObservableSeries& series,
                                     std::int64_t bin) {
    if (series.size() < 2) throw ParameterError("series too short for a diffusion fit");
    const RotatorParams params(config.k, config.chaos_parameter, config.n_qubits);
    const auto pred = predict_timescales(params, config.epsilon);
    DiffusionSummary s;
    s.window = choose_diffusion_window(pred, series[0].t, series.back().t, bin);
    s.fit = fit_diffusion(series, s.window.t_lo, s.window.t_hi, bin);
    s.points = bin_series(series, s.window.t_lo, s.window.t_hi, bin);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.ratio_primary = pred.D_eps > 0.0 ? s.fit.slope / pred.D_eps : nan;
    s.ratio_alternate = pred.D_eps_alt > 0.0 ? s.fit.slope / pred.D_eps_alt : nan;
    return s;
}

namespace {

void run_entry(SweepEntry& entry, std::int64_t bin) {
    try {
        auto result = run_experiment(entry.config);
        entry.mean_series = average_series(result.series);
        entry.manifest = std::move(result.manifest);
    } catch (const std::exception& e) {
        entry.error = e.what();
        return;
    }
    try {
        entry.diffusion = summarize_diffusion(entry.config, entry.mean_series, bin);
    } catch (const Error& e) {
        entry.diffusion_error = e.what();
    }
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_tables(const SweepResult& result, const std::filesystem::path& dir) {
    std::ostringstream collapse;
    collapse << "config,n_q,epsilon,eps2_t,n2_over_N2\n";
    for (const auto& p : result.collapse) {
        const auto& e = result.entries[p.entry];
        collapse << e.name << ',' << e.config.n_qubits << ',' << format_double(e.config.epsilon) << ','
                 << format_double(p.eps2_t) << ',' << format_double(p.n2_scaled) << '\n';
    }
    write_text_file(dir / "collapse.csv", collapse.str());

    std::ostringstream dfit;
    dfit << "config,n_q,k,K,epsilon,t_lo,t_hi,fallback,D_fit,r_squared,ratio_primary,ratio_alternate\n";
    for (const auto& e : result.entries) {
        if (!e.diffusion) continue;
        const auto& d = *e.diffusion;
        dfit << e.name << ',' << e.config.n_qubits << ',' << format_double(e.config.k) << ','
             << format_double(e.config.chaos_parameter) << ',' << format_double(e.config.epsilon) << ','
             << d.window.t_lo << ',' << d.window.t_hi << ',' << (d.window.fallback ? 1 : 0) << ','
             << format_double(d.fit.slope) << ',' << format_double(d.fit.r_squared) << ','
             << format_double(d.ratio_primary) << ',' << format_double(d.ratio_alternate) << '\n';
    }
    write_text_file(dir / "dfit.csv", dfit.str());
    write_text_file(dir / "sweep_summary.json", sweep_summary_json(result) + "\n");
}

}  // namespace

SweepResult run_sweep(const std::vector<ExperimentConfig>& grid, const SweepOptions& options) {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    if (options.bin < 1) throw ConfigError("bin must be >= 1");
    SweepResult result;
    result.entries.resize(grid.size());
    std::map<std::string, int> uses;
    for (const auto& c : grid) ++uses[grid_point_name(c)];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto& e = result.entries[i];
        e.config = grid[i];
        e.name = grid_point_name(grid[i]);
        if (uses[e.name] > 1) e.name += "_i" + std::to_string(i);
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) run_entry(result.entries[i], options.bin);
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(grid.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& e = result.entries[i];
        if (!e.diffusion) continue;
        const double n_sq = std::ldexp(1.0, 2 * e.config.n_qubits);
        const double eps2 = e.config.epsilon * e.config.epsilon;
        for (const auto& p : e.diffusion->points) {
            result.collapse.push_back({i, eps2 * p.t, p.n2 / n_sq});
            xs.push_back(eps2 * p.t);
            ys.push_back(p.n2 / n_sq);
        }
    }
    try {
        if (xs.size() >= 2) result.collapse_fit = least_squares(xs, ys);
    } catch (const ParameterError&) {
        // all-zero epsilon: no collapse line
    }

    if (!options.summary_dir.empty()) write_tables(result, options.summary_dir);
    return result;
}

std::string sweep_summary_json(const SweepResult& result) {
    json doc;
    doc["software_version"] = software_version();
    doc["entries"] = json::array();
    std::size_t failures = 0;
    for (const auto& e : result.entries) {
        json j;
        j["name"] = e.name;
        j["config"] = json::parse(config_to_json(e.config));
        j["status"] = e.error.empty() ? "ok" : "failed";
        if (!e.error.empty()) {
            j["error"] = e.error;
            ++failures;
        }
        if (e.diffusion) {
            const auto& d = *e.diffusion;
            j["diffusion"] = {{"t_lo", d.window.t_lo},
                              {"t_hi", d.window.t_hi},
                              {"window_fallback", d.window.fallback},
                              {"D_fit", d.fit.slope},
                              {"r_squared", d.fit.r_squared},
                              {"bins", d.fit.samples},
                              {"ratio_primary", number_or_null(d.ratio_primary)},
                              {"ratio_alternate", number_or_null(d.ratio_alternate)}};
        } else if (!e.diffusion_error.empty()) {
            j["diffusion_error"] = e.diffusion_error;
        }
        doc["entries"].push_back(std::move(j));
    }
    doc["failures"] = failures;
    if (result.collapse_fit) {
        doc["collapse_fit"] = {{"slope", result.collapse_fit->slope},
                               {"intercept", result.collapse_fit->intercept},
                               {"r_squared", result.collapse_fit->r_squared},
                               {"points", result.collapse_fit->samples}};
    }
    return doc.dump(2);
}

}  // namespace qkr
