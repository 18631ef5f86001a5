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

#include "qkr/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

namespace {

// The FFTW planner is not thread-safe; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan make_plan(std::size_t dim, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* scratch = fftw_alloc_complex(dim);
    if (scratch == nullptr) {
        throw Error("fftw_alloc_complex failed for dim " + std::to_string(dim));
    }
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(dim), scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) {
        throw Error("fftw_plan_dft_1d failed for dim " + std::to_string(dim));
    }
    return plan;
}

}  // namespace

struct FourierTransform::Plans {
    fftw_plan to_angle = nullptr;
    fftw_plan to_momentum = nullptr;

    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (to_angle != nullptr) fftw_destroy_plan(to_angle);
        if (to_momentum != nullptr) fftw_destroy_plan(to_momentum);
    }
};

FourierTransform::FourierTransform(std::size_t dim)
    : dim_(dim), scale_(1.0 / std::sqrt(static_cast<double>(dim))), plans_(std::make_unique<Plans>()) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw RangeError("FourierTransform: dimension must be a power of two >= 2, got " +
                         std::to_string(dim));
    }
    // FFTW_BACKWARD carries exp(+2 pi i j l / N), the ToAngle kernel.
    plans_->to_angle = make_plan(dim, FFTW_BACKWARD);
    plans_->to_momentum = make_plan(dim, FFTW_FORWARD);
}

FourierTransform::~FourierTransform() = default;
FourierTransform::FourierTransform(FourierTransform&&) noexcept = default;
FourierTransform& FourierTransform::operator=(FourierTransform&&) noexcept = default;

void FourierTransform::apply_raw(std::complex<double>* data, TransformDirection direction) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(direction == TransformDirection::ToAngle ? plans_->to_angle : plans_->to_momentum,
                     buf, buf);
    for (std::size_t i = 0; i < dim_; ++i) {
        data[i] *= scale_;
    }
}

void FourierTransform::apply(StateVector& state, TransformDirection direction) const {
    if (state.dim() != dim_) {
        throw StateError("FourierTransform: state has dim " + std::to_string(state.dim()) +
                         ", transform has dim " + std::to_string(dim_));
    }
    if (direction == TransformDirection::ToAngle) {
        state.require(Representation::Momentum, "exact_transform(ToAngle)");
    } else {
        state.require(Representation::Angle, "exact_transform(ToMomentum)");
    }
    apply_raw(state.data(), direction);
    state.set_representation(direction == TransformDirection::ToAngle ? Representation::Angle
                                                                      : Representation::Momentum);
}

}  // namespace qkr
