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

#ifndef QKR_FOURIER_HPP
#define QKR_FOURIER_HPP

#include <complex>
#include <cstddef>
#include <memory>

namespace qkr {

class StateVector;

enum class TransformDirection { ToAngle, ToMomentum };

/// Unitary DFT between momentum and angle representations of size N.
///
///   ToAngle:     psi(theta_l) = N^{-1/2} sum_n psi_n exp(+i n theta_l)
///   ToMomentum:  the inverse, kernel exp(-i n theta_l)
///
/// Backed by FFTW in-place plans created with FFTW_ESTIMATE so the arithmetic
/// (and therefore every rounding error) is identical from run to run.
class FourierTransform {
  public:
    explicit FourierTransform(std::size_t dim);
    ~FourierTransform();
    FourierTransform(FourierTransform&&) noexcept;
    FourierTransform& operator=(FourierTransform&&) noexcept;
    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    std::size_t dim() const { return dim_; }

    /// Transforms `state` in place and flips its representation tag. Throws
    /// StateError if the state is not in the direction's source
    /// representation or has the wrong dimension.
    void apply(StateVector& state, TransformDirection direction) const;

    /// Raw in-place transform of `dim()` amplitudes, without the tag check.
    void apply_raw(std::complex<double>* data, TransformDirection direction) const;

  private:
    struct Plans;
    std::size_t dim_;
    double scale_;
    std::unique_ptr<Plans> plans_;
};

}  // namespace qkr

#endif  // QKR_FOURIER_HPP
