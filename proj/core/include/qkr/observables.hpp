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

#ifndef QKR_OBSERVABLES_HPP
#define QKR_OBSERVABLES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qkr/fit.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

/// W_n over the N momentum levels, stored by raw index (see signed_momentum).
class ProbabilityDistribution {
  public:
    /// Takes ownership of `weights`; the size must be a power of two >= 4.
    explicit ProbabilityDistribution(std::vector<double> weights);

    std::size_t dim() const { return weights_.size(); }
    std::span<const double> weights() const { return weights_; }
    double at_index(std::size_t i) const { return weights_[i]; }
    /// W_n for signed n in [-N/2, N/2).
    double at_momentum(std::int64_t n) const { return weights_[momentum_index(n, dim())]; }
    double total() const;

  private:
    std::vector<double> weights_;
};

/// W_n = |psi_n|^2. Requires the momentum representation.
ProbabilityDistribution probabilities(const StateVector& state);

/// sum_n n^2 W_n over signed n.
double second_moment(const ProbabilityDistribution& dist);

/// Inverse participation ratio 1 / sum_n W_n^2. Throws DomainError for an
/// all-zero distribution.
double ipr(const ProbabilityDistribution& dist);

/// Median of W_n over N/4 <= |n| < N/2 with the levels n = +-2^m +- 1
/// (m = 1..n_q-1) removed. Throws ParameterError when nothing remains.
double plateau_level(const ProbabilityDistribution& dist);

struct PeakDetectorOptions {
    double threshold = 10.0;  // peak / local median
    int half_window = 8;      // local median over [n-8, n+8] without n
};

/// Levels whose weight exceeds `threshold` times the median of their
/// neighbours, in increasing signed n. The window wraps periodically.
std::vector<std::int64_t> detect_peaks(const ProbabilityDistribution& dist, const PeakDetectorOptions& options = {});

/// The members of {+-2^m : m = 1..n_q-1} that appear in `peaks`.
std::vector<std::int64_t> detected_power_levels(std::span<const std::int64_t> peaks, int n_qubits);

/// Time average sum_t W_n(t) / count; all inputs must share one dimension.
ProbabilityDistribution average_distributions(std::span<const ProbabilityDistribution> dists);

struct LocalizationFit {
    double length;     // l in W_n ~ exp(-2 |n| / l)
    LinearFit fit;     // log W against |n|
    std::int64_t n_lo;
    std::int64_t n_hi;
};

/// Fits log((W_n + W_-n) / 2) against |n| on n_lo <= |n| <= n_hi.
LocalizationFit fit_localization_length(const ProbabilityDistribution& dist, std::int64_t n_lo, std::int64_t n_hi);

struct SeriesRecord {
    std::int64_t t;
    double n2;
    double ipr;
    double norm_err;
    bool operator==(const SeriesRecord&) const = default;
};

/// Parameters describing how a series was produced.
struct SeriesMetadata {
    double k = 0.0;
    double chaos_parameter = 0.0;
    int n_qubits = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// Per-kick diagnostics in strictly increasing t.
class ObservableSeries {
  public:
    ObservableSeries() = default;
    explicit ObservableSeries(SeriesMetadata metadata) : metadata_(metadata) {}

    /// Throws ParameterError when t does not increase or a field is not finite.
    void push_back(const SeriesRecord& record);

    const SeriesMetadata& metadata() const { return metadata_; }
    std::span<const SeriesRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const SeriesRecord& operator[](std::size_t i) const { return records_[i]; }
    const SeriesRecord& back() const { return records_.back(); }

  private:
    SeriesMetadata metadata_;
    std::vector<SeriesRecord> records_;
};

/// Record computed from a momentum-representation state at kick t.
SeriesRecord observe(const StateVector& state, std::int64_t t);

/// Recordwise mean over realizations; all series must share the t grid.
ObservableSeries average_series(std::span<const ObservableSeries> series);

/// Least-squares slope of bin-averaged <n^2> against bin-averaged t over the
/// records with t_lo <= t <= t_hi. Bins are [t_lo + i*bin, t_lo + (i+1)*bin);
/// a trailing partial bin is dropped. Throws ParameterError for an invalid
/// window or fewer than 3 bins.
LinearFit fit_diffusion(const ObservableSeries& series, std::int64_t t_lo, std::int64_t t_hi, std::int64_t bin);

/// Bin-averaged (t, <n^2>) points as used by fit_diffusion.
struct BinnedPoint {
    double t;
    double n2;
};
std::vector<BinnedPoint> bin_series(const ObservableSeries& series, std::int64_t t_lo, std::int64_t t_hi,
                                    std::int64_t bin);

/// First t with ipr_noisy / ipr_clean >= threshold that stays there for the
/// next `hold` records; nullopt if never. Throws ParameterError when the two
/// series have different t grids.
std::optional<std::int64_t> detect_tp(const ObservableSeries& noisy, const ObservableSeries& clean,
                                      double threshold = 1.5, std::size_t hold = 10);

/// Which imperfection-rate form drives t_q.
enum class RateForm {
    ClosedForm,  // t_q = k^4 / (eps^2 n_q N^2), the literal closed form
    Primary,     // t_q = D^2 / D_eps with D_eps = 5 eps^2 N^2
    Alternate,   // t_q = D^2 / D_eps with D_eps = n_q eps^2 N^2 / 2
};

struct TimescalePrediction {
    double t_q;
    double t_eps;
    double t_p;
    double D;             // k^2 / 2
    double D_eps;         // 5 eps^2 N^2
    double D_eps_alt;     // n_q eps^2 N^2 / 2
    double localization;  // D / 2
};

/// Closed-form time scales and rates. For epsilon = 0 the time scales are
/// +infinity and the imperfection rates 0. Throws ParameterError for
/// negative epsilon.
TimescalePrediction predict_timescales(const RotatorParams& params, double epsilon,
                                       RateForm form = RateForm::ClosedForm);

/// Default diffusive window [5 t_q, t_eps / 5] intersected with [t_min, t_max].
/// Returns nullopt if empty.
std::optional<std::pair<std::int64_t, std::int64_t>> diffusive_window(const TimescalePrediction& prediction,
                                                                     std::int64_t t_min, std::int64_t t_max);

}  // namespace qkr

#endif  // QKR_OBSERVABLES_HPP
