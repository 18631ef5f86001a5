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

#ifndef QKR_ROTOR_HPP
#define QKR_ROTOR_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkr/fourier.hpp"

namespace qkr {

using Amplitude = std::complex<double>;

inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 24;

enum class Representation { Momentum, Angle };

std::string to_string(Representation rep);

/// Throws RangeError unless kMinQubits <= n_qubits <= kMaxQubits.
void check_qubit_count(int n_qubits);

/// Signed momentum of basis index `index` on `dim` levels: n = i for
/// i < dim/2, otherwise i - dim.
constexpr std::int64_t signed_momentum(std::size_t index, std::size_t dim) {
    const auto i = static_cast<std::int64_t>(index);
    const auto d = static_cast<std::int64_t>(dim);
    return i < d / 2 ? i : i - d;
}

/// Inverse of signed_momentum; `n` must lie in [-dim/2, dim/2).
constexpr std::size_t momentum_index(std::int64_t n, std::size_t dim) {
    const auto d = static_cast<std::int64_t>(dim);
    return static_cast<std::size_t>(n < 0 ? n + d : n);
}

/// Wavefunction on N = 2^n_q levels, tagged with its current representation.
///
/// Amplitude i is the coefficient of |n = signed_momentum(i)> in the momentum
/// representation, or of theta_i = 2 pi i / N in the angle representation.
class StateVector {
  public:
    explicit StateVector(int n_qubits, Representation rep = Representation::Momentum);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    Representation representation() const { return representation_; }
    void set_representation(Representation rep) { representation_ = rep; }

    std::span<Amplitude> amplitudes() { return amplitudes_; }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    Amplitude* data() { return amplitudes_.data(); }
    const Amplitude* data() const { return amplitudes_.data(); }

    Amplitude& operator[](std::size_t i) { return amplitudes_[i]; }
    const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const;

    /// Throws StateError unless the state is in representation `expected`.
    void require(Representation expected, const char* operation) const;

  private:
    int n_qubits_;
    Representation representation_;
    std::vector<Amplitude> amplitudes_;
};

/// Physical parameters of the kicked rotator. The period T = K / k is always
/// derived, never stored.
class RotatorParams {
  public:
    RotatorParams(double k, double chaos_parameter, int n_qubits);

    double k() const { return k_; }
    double chaos_parameter() const { return chaos_parameter_; }
    double period() const { return chaos_parameter_ / k_; }
    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return std::size_t{1} << n_qubits_; }

    /// Non-empty when the parameters fall outside the quantum-chaos regime
    /// k > K > 1 used by the shipped presets.
    std::optional<std::string> regime_warning() const;

    bool operator==(const RotatorParams&) const = default;

  private:
    double k_;
    double chaos_parameter_;
    int n_qubits_;
};

/// Momentum eigenstate |n0>.
StateVector init_delta_state(const RotatorParams& params, std::int64_t n0);

/// One-period evolution of the kicked rotator with precomputed diagonal
/// factors exp(-i T n^2 / 2) and exp(-i k cos theta) and an exact FFT between
/// the two representations.
///
/// The propagator is immutable after construction; one instance may drive any
/// number of states concurrently.
class RotorPropagator {
  public:
    explicit RotorPropagator(const RotatorParams& params);

    const RotatorParams& params() const { return params_; }
    const FourierTransform& transform() const { return transform_; }

    std::span<const Amplitude> rotation_multipliers() const { return rotation_; }
    std::span<const Amplitude> kick_multipliers() const { return kick_; }

    /// psi_n <- psi_n exp(-i T n^2 / 2). Requires the momentum representation.
    void apply_rotation_phase(StateVector& state) const;
    /// psi(theta_l) <- psi(theta_l) exp(-i k cos theta_l). Requires the angle
    /// representation.
    void apply_kick_phase(StateVector& state) const;
    void exact_transform(StateVector& state, TransformDirection direction) const;
    /// rotation, transform to angle, kick, transform back.
    void step_exact(StateVector& state) const;

  private:
    void check_dim(const StateVector& state) const;

    RotatorParams params_;
    FourierTransform transform_;
    std::vector<Amplitude> rotation_;
    std::vector<Amplitude> kick_;
};

}  // namespace qkr

#endif  // QKR_ROTOR_HPP
