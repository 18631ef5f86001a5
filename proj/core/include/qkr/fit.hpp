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

#ifndef QKR_FIT_HPP
#define QKR_FIT_HPP

#include <span>
#include <vector>

namespace qkr {

struct LinearFit {
    double slope;
    double intercept;
    double r_squared;  // 1 for a constant y that is fitted exactly
    std::size_t samples;
};

/// Ordinary least squares y = slope x + intercept. Throws ParameterError for
/// fewer than 2 samples, mismatched lengths or constant x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Median of `values` (mean of the middle pair for even sizes). Throws
/// ParameterError when empty.
double median(std::vector<double> values);

}  // namespace qkr

#endif  // QKR_FIT_HPP
