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

#include "qkr/rotor.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "complex_ops.hpp"
#include "qkr/errors.hpp"

namespace qkr {

std::string to_string(Representation rep) {
    return rep == Representation::Momentum ? "momentum" : "angle";
}

void check_qubit_count(int n_qubits) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw RangeError("qubit count must lie in [" + std::to_string(kMinQubits) + ", " +
                         std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
    }
}

StateVector::StateVector(int n_qubits, Representation rep) : n_qubits_(n_qubits), representation_(rep) {
    check_qubit_count(n_qubits);
    amplitudes_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
}

double StateVector::norm_squared() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) {
        sum += std::norm(a);
    }
    return sum;
}

void StateVector::require(Representation expected, const char* operation) const {
    if (representation_ != expected) {
        throw StateError(std::string(operation) + " requires the " + to_string(expected) +
                         " representation, state is in the " + to_string(representation_) +
                         " representation");
    }
}

RotatorParams::RotatorParams(double k, double chaos_parameter, int n_qubits)
    : k_(k), chaos_parameter_(chaos_parameter), n_qubits_(n_qubits) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ParameterError("kick strength k must be positive and finite");
    }
    if (!(chaos_parameter > 0.0) || !std::isfinite(chaos_parameter)) {
        throw ParameterError("chaos parameter K must be positive and finite");
    }
    check_qubit_count(n_qubits);
}

std::optional<std::string> RotatorParams::regime_warning() const {
    if (k_ > chaos_parameter_ && chaos_parameter_ > 1.0) {
        return std::nullopt;
    }
    std::ostringstream out;
    out << "parameters k=" << k_ << ", K=" << chaos_parameter_
        << " lie outside the quantum-chaos regime k > K > 1";
    return out.str();
}

StateVector init_delta_state(const RotatorParams& params, std::int64_t n0) {
    const auto dim = params.dim();
    const auto half = static_cast<std::int64_t>(dim / 2);
    if (n0 < -half || n0 >= half) {
        throw RangeError("initial momentum " + std::to_string(n0) + " outside [" + std::to_string(-half) +
                         ", " + std::to_string(half) + ")");
    }
    StateVector state(params.n_qubits(), Representation::Momentum);
    state[momentum_index(n0, dim)] = 1.0;
    return state;
}

RotorPropagator::RotorPropagator(const RotatorParams& params)
    : params_(params), transform_(params.dim()), rotation_(params.dim()), kick_(params.dim()) {
    const auto dim = params.dim();
    const double half_period = 0.5 * params.period();
    const double k = params.k();
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        // n^2 <= 2^46 at the qubit cap, exact in both int64 and double.
        const std::int64_t n = signed_momentum(i, dim);
        const double n2 = static_cast<double>(n * n);
        rotation_[i] = std::polar(1.0, -half_period * n2);
        kick_[i] = std::polar(1.0, -k * std::cos(dtheta * static_cast<double>(i)));
    }
}

void RotorPropagator::check_dim(const StateVector& state) const {
    if (state.n_qubits() != params_.n_qubits()) {
        throw StateError("state has " + std::to_string(state.n_qubits()) + " qubits, propagator has " +
                         std::to_string(params_.n_qubits()));
    }
}

void RotorPropagator::apply_rotation_phase(StateVector& state) const {
    check_dim(state);
    state.require(Representation::Momentum, "apply_rotation_phase");
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] = detail::cmul(amps[i], rotation_[i]);
    }
}

void RotorPropagator::apply_kick_phase(StateVector& state) const {
    check_dim(state);
    state.require(Representation::Angle, "apply_kick_phase");
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] = detail::cmul(amps[i], kick_[i]);
    }
}

void RotorPropagator::exact_transform(StateVector& state, TransformDirection direction) const {
    check_dim(state);
    transform_.apply(state, direction);
}

void RotorPropagator::step_exact(StateVector& state) const {
    apply_rotation_phase(state);
    transform_.apply(state, TransformDirection::ToAngle);
    apply_kick_phase(state);
    transform_.apply(state, TransformDirection::ToMomentum);
}

}  // namespace qkr
