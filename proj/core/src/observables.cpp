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

#include "qkr/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qkr/errors.hpp"

namespace qkr {

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.size() < 4 || !std::has_single_bit(weights_.size())) {
        throw ParameterError("ProbabilityDistribution: size must be a power of two >= 4, got " +
                             std::to_string(weights_.size()));
    }
}

double ProbabilityDistribution::total() const {
    double sum = 0.0;
    for (double w : weights_) sum += w;
    return sum;
}

ProbabilityDistribution probabilities(const StateVector& state) {
    state.require(Representation::Momentum, "probabilities");
    std::vector<double> w(state.dim());
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::norm(amps[i]);
    }
    return ProbabilityDistribution(std::move(w));
}

double second_moment(const ProbabilityDistribution& dist) {
    const auto w = dist.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto n = static_cast<double>(signed_momentum(i, w.size()));
        sum += n * n * w[i];
    }
    return sum;
}

double ipr(const ProbabilityDistribution& dist) {
    double sum = 0.0;
    for (double w : dist.weights()) sum += w * w;
    if (sum == 0.0) {
        throw DomainError("ipr of an all-zero distribution");
    }
    return 1.0 / sum;
}

double plateau_level(const ProbabilityDistribution& dist) {
    const std::size_t dim = dist.dim();
    const auto n_qubits = std::countr_zero(dim);
    const auto half = static_cast<std::int64_t>(dim / 2);
    const std::int64_t quarter = half / 2;

    auto near_power = [&](std::int64_t n) {
        const std::int64_t a = n < 0 ? -n : n;
        for (int m = 1; m < n_qubits; ++m) {
            const std::int64_t p = std::int64_t{1} << m;
            if (a >= p - 1 && a <= p + 1) return true;
        }
        return false;
    };

    std::vector<double> window;
    window.reserve(dim / 2);
    for (std::int64_t a = quarter; a < half; ++a) {
        for (const std::int64_t n : {a, -a}) {
            if (!near_power(n)) window.push_back(dist.at_momentum(n));
        }
    }
    if (window.empty()) {
        throw ParameterError("plateau_level: no levels left after excluding the 2^m neighbourhoods (N = " +
                             std::to_string(dim) + ")");
    }
    return median(std::move(window));
}

std::vector<std::int64_t> detect_peaks(const ProbabilityDistribution& dist, const PeakDetectorOptions& options) {
    const std::size_t dim = dist.dim();
    const auto w = dist.weights();
    // On short lattices the window would wrap onto itself.
    const auto hw = std::min(static_cast<std::size_t>(std::max(1, options.half_window)), (dim - 1) / 2);
    std::vector<std::int64_t> peaks;
    std::vector<double> neighbours;
    neighbours.reserve(2 * hw);
    for (std::size_t i = 0; i < dim; ++i) {
        neighbours.clear();
        for (std::size_t d = 1; d <= hw; ++d) {
            neighbours.push_back(w[(i + d) % dim]);
            neighbours.push_back(w[(i + dim - d) % dim]);
        }
        const double local = median(neighbours);
        if (w[i] > options.threshold * local) {
            peaks.push_back(signed_momentum(i, dim));
        }
    }
    std::sort(peaks.begin(), peaks.end());
    return peaks;
}

std::vector<std::int64_t> detected_power_levels(std::span<const std::int64_t> peaks, int n_qubits) {
    std::vector<std::int64_t> found;
    for (int m = 1; m < n_qubits; ++m) {
        const std::int64_t p = std::int64_t{1} << m;
        const std::int64_t wrapped = -(std::int64_t{1} << (n_qubits - 1));
        for (const std::int64_t level : {-p, p}) {
            // +N/2 is the same level as -N/2 on the periodic lattice.
            const std::int64_t probe = level == -wrapped ? wrapped : level;
            if (std::binary_search(peaks.begin(), peaks.end(), probe) &&
                std::find(found.begin(), found.end(), probe) == found.end()) {
                found.push_back(probe);
            }
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

ProbabilityDistribution average_distributions(std::span<const ProbabilityDistribution> dists) {
    if (dists.empty()) {
        throw ParameterError("average_distributions: no inputs");
    }
    std::vector<double> acc(dists.front().dim(), 0.0);
    for (const auto& d : dists) {
        if (d.dim() != acc.size()) {
            throw ParameterError("average_distributions: dimension mismatch");
        }
        const auto w = d.weights();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[i];
    }
    const double inv = 1.0 / static_cast<double>(dists.size());
    for (double& a : acc) a *= inv;
    return ProbabilityDistribution(std::move(acc));
}

LocalizationFit fit_localization_length(const ProbabilityDistribution& dist, std::int64_t n_lo, std::int64_t n_hi) {
    const auto half = static_cast<std::int64_t>(dist.dim() / 2);
    if (n_lo < 0 || n_hi >= half || n_hi - n_lo < 1) {
        throw ParameterError("fit_localization_length: need 0 <= n_lo < n_hi < N/2");
    }
    std::vector<double> x, y;
    for (std::int64_t a = n_lo; a <= n_hi; ++a) {
        const double w = 0.5 * (dist.at_momentum(a) + dist.at_momentum(-a));
        if (w > 0.0) {
            x.push_back(static_cast<double>(a));
            y.push_back(std::log(w));
        }
    }
    const LinearFit fit = least_squares(x, y);
    if (!(fit.slope < 0.0)) {
        throw ParameterError("fit_localization_length: tail does not decay");
    }
    return {-2.0 / fit.slope, fit, n_lo, n_hi};
}

void ObservableSeries::push_back(const SeriesRecord& record) {
    if (!records_.empty() && record.t <= records_.back().t) {
        throw ParameterError("ObservableSeries: t must increase strictly (" + std::to_string(record.t) +
                             " after " + std::to_string(records_.back().t) + ")");
    }
    if (!std::isfinite(record.n2) || !std::isfinite(record.ipr) || !std::isfinite(record.norm_err)) {
        throw ParameterError("ObservableSeries: non-finite record at t = " + std::to_string(record.t));
    }
    records_.push_back(record);
}

SeriesRecord observe(const StateVector& state, std::int64_t t) {
    state.require(Representation::Momentum, "observe");
    const auto amps = state.amplitudes();
    const std::size_t dim = amps.size();
    double norm = 0.0, n2 = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double w = std::norm(amps[i]);
        const auto n = static_cast<double>(signed_momentum(i, dim));
        norm += w;
        n2 += n * n * w;
        w2 += w * w;
    }
    if (w2 == 0.0) {
        throw DomainError("observe: state is identically zero");
    }
    return {t, n2, 1.0 / w2, std::abs(norm - 1.0)};
}

ObservableSeries average_series(std::span<const ObservableSeries> series) {
    if (series.empty()) {
        throw ParameterError("average_series: no inputs");
    }
    const auto& first = series.front();
    for (const auto& s : series) {
        if (s.size() != first.size()) {
            throw ParameterError("average_series: series lengths differ");
        }
    }
    ObservableSeries out(first.metadata());
    const double inv = 1.0 / static_cast<double>(series.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        SeriesRecord r{first[i].t, 0.0, 0.0, 0.0};
        for (const auto& s : series) {
            if (s[i].t != r.t) {
                throw ParameterError("average_series: t grids differ at record " + std::to_string(i));
            }
            r.n2 += s[i].n2;
            r.ipr += s[i].ipr;
            r.norm_err = std::max(r.norm_err, s[i].norm_err);
        }
        r.n2 *= inv;
        r.ipr *= inv;
        out.push_back(r);
    }
    return out;
}

std::vector<BinnedPoint> bin_series(const ObservableSeries& series, std::int64_t t_lo, std::int64_t t_hi,
                                    std::int64_t bin) {
    if (bin < 1) {
        throw ParameterError("fit_diffusion: bin must be >= 1");
    }
    if (series.empty() || t_lo >= t_hi || t_lo < series[0].t || t_hi > series.back().t) {
        throw ParameterError("fit_diffusion: window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                             "] is empty or outside the series range");
    }
    std::vector<BinnedPoint> points;
    const std::int64_t n_bins = (t_hi - t_lo + 1) / bin;
    std::size_t i = 0;
    const auto records = series.records();
    while (i < records.size() && records[i].t < t_lo) ++i;
    for (std::int64_t b = 0; b < n_bins; ++b) {
        const std::int64_t start = t_lo + b * bin;
        const std::int64_t stop = start + bin;
        double st = 0.0, sn = 0.0;
        std::size_t count = 0;
        while (i < records.size() && records[i].t < stop) {
            st += static_cast<double>(records[i].t);
            sn += records[i].n2;
            ++count;
            ++i;
        }
        if (count > 0) {
            points.push_back({st / static_cast<double>(count), sn / static_cast<double>(count)});
        }
    }
    return points;
}

LinearFit fit_diffusion(const ObservableSeries& series, std::int64_t t_lo, std::int64_t t_hi, std::int64_t bin) {
    const auto points = bin_series(series, t_lo, t_hi, bin);
    if (points.size() < 3) {
        throw ParameterError("fit_diffusion: need at least 3 bins, got " + std::to_string(points.size()));
    }
    std::vector<double> x, y;
    for (const auto& p : points) {
        x.push_back(p.t);
        y.push_back(p.n2);
    }
    return least_squares(x, y);
}

std::optional<std::int64_t> detect_tp(const ObservableSeries& noisy, const ObservableSeries& clean, double threshold,
                                      std::size_t hold) {
    if (noisy.size() != clean.size()) {
        throw ParameterError("detect_tp: series have " + std::to_string(noisy.size()) + " and " +
                             std::to_string(clean.size()) + " records");
    }
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        if (noisy[i].t != clean[i].t) {
            throw ParameterError("detect_tp: t grids differ at record " + std::to_string(i));
        }
    }
    std::size_t run = 0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        if (noisy[i].ipr / clean[i].ipr >= threshold) {
            ++run;
            if (run == hold + 1) {
                return noisy[i - hold].t;
            }
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

TimescalePrediction predict_timescales(const RotatorParams& params, double epsilon, RateForm form) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ParameterError("predict_timescales: epsilon must be finite and >= 0");
    }
    const double k = params.k();
    const double nq = params.n_qubits();
    const auto N = static_cast<double>(params.dim());
    TimescalePrediction p{};
    p.D = 0.5 * k * k;
    p.localization = 0.5 * p.D;
    p.D_eps = 5.0 * epsilon * epsilon * N * N;
    p.D_eps_alt = 0.5 * nq * epsilon * epsilon * N * N;
    if (epsilon == 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        p.t_q = p.t_eps = p.t_p = inf;
        return p;
    }
    switch (form) {
        case RateForm::ClosedForm:
            p.t_q = k * k * k * k / (epsilon * epsilon * nq * N * N);
            p.t_eps = 2.0 / (nq * epsilon * epsilon);
            break;
        case RateForm::Primary:
            p.t_q = p.D * p.D / p.D_eps;
            p.t_eps = N * N / p.D_eps;
            break;
        case RateForm::Alternate:
            p.t_q = p.D * p.D / p.D_eps_alt;
            p.t_eps = N * N / p.D_eps_alt;
            break;
    }
    p.t_p = 0.33 / ((epsilon * nq) * (epsilon * nq));
    return p;
}

std::optional<std::pair<std::int64_t, std::int64_t>> diffusive_window(const TimescalePrediction& prediction,
                                                                     std::int64_t t_min, std::int64_t t_max) {
    if (!std::isfinite(prediction.t_q)) return std::nullopt;
    const double lo = std::max(5.0 * prediction.t_q, static_cast<double>(t_min));
    const double hi = std::min(prediction.t_eps / 5.0, static_cast<double>(t_max));
    if (!(lo < hi)) return std::nullopt;
    return std::make_pair(static_cast<std::int64_t>(std::ceil(lo)), static_cast<std::int64_t>(std::floor(hi)));
}

}  // namespace qkr
