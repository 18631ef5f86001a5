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

#ifndef QKR_QFT_CIRCUIT_HPP
#define QKR_QFT_CIRCUIT_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qkr/rotor.hpp"

namespace qkr {

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Amplitude, 4>;

/// One-qubit Hadamard-like gate n.sigma on `target`.
struct AGate {
    int target;
    bool operator==(const AGate&) const = default;
};

/// Controlled phase exp(i angle) on basis states with both bits set.
struct BGate {
    int control;
    int target;
    double angle;
    bool operator==(const BGate&) const = default;
};

/// Noiseless relabeling i -> bitreverse(i).
struct ReverseGate {
    bool operator==(const ReverseGate&) const = default;
};

using QftGate = std::variant<AGate, BGate, ReverseGate>;

enum class QftDirection { Forward, Inverse };

/// Elementary-gate decomposition of the quantum Fourier transform on n_q
/// qubits: for j = n_q-1 down to 0, A(j) then B(j, k, pi / 2^(j-k)) for each
/// k < j in descending order, then one Reverse.
///
/// Executed as listed, the circuit maps |a> to N^{-1/2} sum_b e^{+2 pi i ab/N} |b>
/// on raw indices. `forward_is_native()` records whether that native kernel
/// equals the exact ToAngle transform; Forward execution runs the native
/// circuit when it does and the conjugate-reversed circuit when it does not.
class GatePlan {
  public:
    explicit GatePlan(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::span<const QftGate> gates() const { return gates_; }
    std::size_t a_gate_count() const { return static_cast<std::size_t>(n_qubits_); }
    std::size_t b_gate_count() const {
        return static_cast<std::size_t>(n_qubits_) * static_cast<std::size_t>(n_qubits_ - 1) / 2;
    }
    bool forward_is_native() const { return forward_is_native_; }

    /// Random values consumed by one noisy transform (2 per A gate, 1 per B).
    std::uint64_t draws_per_transform() const { return 2 * a_gate_count() + b_gate_count(); }

  private:
    int n_qubits_;
    std::vector<QftGate> gates_;
    bool forward_is_native_;
};

GatePlan build_qft_plan(int n_qubits);

/// Per-gate imperfection sampler.
///
/// A gates: the axis n0 = (1/sqrt2, 0, 1/sqrt2) is tilted by a polar angle
/// uniform in [0, epsilon] in a direction given by an azimuth uniform in
/// [0, 2 pi). B gates: the ideal angle receives an offset uniform in
/// [-epsilon, epsilon].
///
/// Uniform variates are the top 53 bits of successive mt19937_64 outputs,
/// drawn one gate at a time in execution order; the stream is therefore
/// bit-reproducible for a given seed and is never touched by kernel loops.
class NoiseModel {
  public:
    NoiseModel(double epsilon, std::uint64_t seed);

    double epsilon() const { return epsilon_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t draw_counter() const { return draw_counter_; }

    /// Next uniform variate in [0, 1).
    double uniform();

    Matrix2 sample_a_gate();
    double sample_b_angle(double ideal_angle);

    /// Engine state and counter as text, for checkpoints.
    std::string save_stream() const;
    void restore_stream(const std::string& text);

  private:
    double epsilon_;
    std::uint64_t seed_;
    std::uint64_t draw_counter_ = 0;
    std::mt19937_64 engine_;
};

/// The ideal A gate, (sigma_x + sigma_z) / sqrt 2.
Matrix2 hadamard();

/// Unit axis n -> n.sigma.
Matrix2 axis_gate(double nx, double ny, double nz);

/// Operator (spectral) norm of a - b.
double operator_distance(const Matrix2& a, const Matrix2& b);

/// Pairs amplitudes across bit `qubit` and multiplies each pair by `u`.
void apply_single_qubit_gate(StateVector& state, int qubit, const Matrix2& u);

/// Multiplies amplitudes with bits `control` and `target` both set by exp(i theta).
void apply_controlled_phase(StateVector& state, int control, int target, double theta);

/// Permutes amplitudes by full index bit reversal.
void apply_bit_reversal(StateVector& state);

/// How `noisy_qft` dispatches the sampled gates.
///
/// GateByGate applies each elementary gate with its own kernel. FusedLayers
/// folds every A gate and its adjacent run of same-control B gates into one
/// pass over the pairs of that qubit. Both consume the random stream in the
/// same order; they differ only in floating-point rounding.
enum class QftKernel { GateByGate, FusedLayers };

/// Runs the QFT circuit on `state` with a fresh imperfection sample for every
/// gate, and flips the representation tag (Forward: momentum -> angle).
/// Inverse runs the conjugated gates in reverse order with independent draws.
void noisy_qft(StateVector& state, const GatePlan& plan, NoiseModel& noise, QftDirection direction,
               QftKernel kernel = QftKernel::FusedLayers);

/// One kick with the transforms done by the noisy circuit: exact rotation
/// phase, Forward QFT, exact kick phase, Inverse QFT.
void step_gates(StateVector& state, const RotorPropagator& propagator, const GatePlan& plan,
                NoiseModel& noise, QftKernel kernel = QftKernel::FusedLayers);

}  // namespace qkr

#endif  // QKR_QFT_CIRCUIT_HPP
