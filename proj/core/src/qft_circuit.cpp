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

#include "qkr/qft_circuit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "complex_ops.hpp"
#include "qkr/errors.hpp"

namespace qkr {

namespace {

using detail::cmul;

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

std::vector<QftGate> qft_gates(int n_qubits) {
    std::vector<QftGate> gates;
    gates.reserve(static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(n_qubits + 1) / 2 + 1);
    for (int j = n_qubits - 1; j >= 0; --j) {
        gates.emplace_back(AGate{j});
        for (int k = j - 1; k >= 0; --k) {
            gates.emplace_back(BGate{j, k, std::numbers::pi / static_cast<double>(std::uint64_t{1} << (j - k))});
        }
    }
    gates.emplace_back(ReverseGate{});
    return gates;
}

void check_qubit(const StateVector& state, int qubit, const char* what) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw RangeError(std::string(what) + ": qubit " + std::to_string(qubit) + " outside [0, " +
                         std::to_string(state.n_qubits()) + ")");
    }
}

Matrix2 adjoint(const Matrix2& u) {
    return {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
}

// A gate (or B gate) with its imperfection already drawn.
struct SampledA {
    int target;
    Matrix2 matrix;
};
struct SampledB {
    int control;
    int target;
    double angle;
};
using SampledGate = std::variant<SampledA, SampledB, ReverseGate>;

std::vector<SampledGate> sample_circuit(const GatePlan& plan, NoiseModel& noise, bool native) {
    const auto gates = plan.gates();
    std::vector<SampledGate> out;
    out.reserve(gates.size());
    auto sample = [&](const QftGate& g, bool conjugate) {
        if (const auto* a = std::get_if<AGate>(&g)) {
            const Matrix2 m = noise.sample_a_gate();
            out.emplace_back(SampledA{a->target, conjugate ? adjoint(m) : m});
        } else if (const auto* b = std::get_if<BGate>(&g)) {
            const double angle = noise.sample_b_angle(b->angle);
            out.emplace_back(SampledB{b->control, b->target, conjugate ? -angle : angle});
        } else {
            out.emplace_back(ReverseGate{});
        }
    };
    if (native) {
        for (const auto& g : gates) sample(g, false);
    } else {
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) sample(*it, true);
    }
    return out;
}

// Multiplies rows of `phase` (size 2^pivot) so that phase[lo] is the product of
// exp(i angle_k) over the set bits k of lo.
void build_phase_table(std::vector<Amplitude>& phase, const std::vector<double>& bit_angles, int pivot) {
    phase.resize(std::size_t{1} << pivot);
    phase[0] = 1.0;
    for (int k = 0; k < pivot; ++k) {
        const std::size_t half = std::size_t{1} << k;
        if (bit_angles[static_cast<std::size_t>(k)] == 0.0) {
            std::copy_n(phase.begin(), half, phase.begin() + static_cast<std::ptrdiff_t>(half));
            continue;
        }
        const Amplitude e = std::polar(1.0, bit_angles[static_cast<std::size_t>(k)]);
        for (std::size_t t = 0; t < half; ++t) {
            phase[t | half] = cmul(phase[t], e);
        }
    }
}

enum class LayerOrder { GateThenPhase, PhaseThenGate };

// One pass over the pairs of bit `pivot`: the 2x2 gate plus the diagonal phase
// on the upper member, phase indexed by the lower bits.
void fused_layer(StateVector& state, int pivot, const Matrix2& u, const std::vector<Amplitude>& phase,
                 LayerOrder order) {
    const std::size_t dim = state.dim();
    const std::size_t stride = std::size_t{1} << pivot;
    Amplitude* amps = state.data();
    const Amplitude u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
    for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
        Amplitude* lo_half = amps + hi;
        Amplitude* up_half = amps + hi + stride;
        if (order == LayerOrder::GateThenPhase) {
            for (std::size_t lo = 0; lo < stride; ++lo) {
                const Amplitude x0 = lo_half[lo];
                const Amplitude x1 = up_half[lo];
                lo_half[lo] = cmul(u00, x0) + cmul(u01, x1);
                up_half[lo] = cmul(cmul(u10, x0) + cmul(u11, x1), phase[lo]);
            }
        } else {
            for (std::size_t lo = 0; lo < stride; ++lo) {
                const Amplitude x0 = lo_half[lo];
                const Amplitude x1 = cmul(up_half[lo], phase[lo]);
                lo_half[lo] = cmul(u00, x0) + cmul(u01, x1);
                up_half[lo] = cmul(u10, x0) + cmul(u11, x1);
            }
        }
    }
}

void phase_layer(StateVector& state, int pivot, const std::vector<Amplitude>& phase) {
    const std::size_t dim = state.dim();
    const std::size_t stride = std::size_t{1} << pivot;
    Amplitude* amps = state.data();
    for (std::size_t hi = stride; hi < dim; hi += 2 * stride) {
        for (std::size_t lo = 0; lo < stride; ++lo) {
            amps[hi + lo] = cmul(amps[hi + lo], phase[lo]);
        }
    }
}

void run_gate_by_gate(StateVector& state, const std::vector<SampledGate>& circuit) {
    for (const auto& g : circuit) {
        if (const auto* a = std::get_if<SampledA>(&g)) {
            apply_single_qubit_gate(state, a->target, a->matrix);
        } else if (const auto* b = std::get_if<SampledB>(&g)) {
            apply_controlled_phase(state, b->control, b->target, b->angle);
        } else {
            apply_bit_reversal(state);
        }
    }
}

// Groups [A(j), B(j,k<j)...] and [B(j,k<j)..., A(j)] into single passes.
void run_fused(StateVector& state, const std::vector<SampledGate>& circuit) {
    const int n_qubits = state.n_qubits();
    std::vector<Amplitude> phase;
    phase.reserve(state.dim() / 2);
    std::vector<double> bit_angles(static_cast<std::size_t>(n_qubits));

    // Accumulates the run of B gates starting at `i` whose higher bit is
    // `pivot`; returns the index one past the run.
    auto collect_phases = [&](std::size_t i, int pivot) {
        std::fill(bit_angles.begin(), bit_angles.end(), 0.0);
        while (i < circuit.size()) {
            const auto* b = std::get_if<SampledB>(&circuit[i]);
            if (b == nullptr) break;
            const int high = std::max(b->control, b->target);
            const int low = std::min(b->control, b->target);
            if (high != pivot) break;
            bit_angles[static_cast<std::size_t>(low)] += b->angle;
            ++i;
        }
        return i;
    };

    std::size_t i = 0;
    while (i < circuit.size()) {
        const auto& g = circuit[i];
        if (const auto* a = std::get_if<SampledA>(&g)) {
            check_qubit(state, a->target, "noisy_qft");
            const std::size_t end = collect_phases(i + 1, a->target);
            if (end == i + 1) {
                apply_single_qubit_gate(state, a->target, a->matrix);
            } else {
                build_phase_table(phase, bit_angles, a->target);
                fused_layer(state, a->target, a->matrix, phase, LayerOrder::GateThenPhase);
            }
            i = end;
        } else if (const auto* b = std::get_if<SampledB>(&g)) {
            check_qubit(state, b->control, "noisy_qft");
            check_qubit(state, b->target, "noisy_qft");
            const int pivot = std::max(b->control, b->target);
            const std::size_t end = collect_phases(i, pivot);
            build_phase_table(phase, bit_angles, pivot);
            const auto* next_a = end < circuit.size() ? std::get_if<SampledA>(&circuit[end]) : nullptr;
            if (next_a != nullptr && next_a->target == pivot) {
                fused_layer(state, pivot, next_a->matrix, phase, LayerOrder::PhaseThenGate);
                i = end + 1;
            } else {
                phase_layer(state, pivot, phase);
                i = end;
            }
        } else {
            apply_bit_reversal(state);
            ++i;
        }
    }
}

// Sign of the native kernel of the construction rule, checked on the
// smallest instance: the rule is uniform in n_q, so the 2-qubit circuit has
// the same orientation as every larger one.
bool native_matches_to_angle() {
    StateVector probe(2, Representation::Momentum);
    probe[1] = 1.0;
    for (const auto& g : qft_gates(2)) {
        if (const auto* a = std::get_if<AGate>(&g)) {
            apply_single_qubit_gate(probe, a->target, hadamard());
        } else if (const auto* b = std::get_if<BGate>(&g)) {
            apply_controlled_phase(probe, b->control, b->target, b->angle);
        } else {
            apply_bit_reversal(probe);
        }
    }
    // ToAngle kernel: <1| F |1> = exp(+2 pi i / 4) / 2 = i / 2.
    return std::abs(probe[1] - Amplitude{0.0, 0.5}) < 1e-12;
}

}  // namespace

GatePlan::GatePlan(int n_qubits) : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits);
    gates_ = qft_gates(n_qubits);
    static const bool native = native_matches_to_angle();
    forward_is_native_ = native;
}

GatePlan build_qft_plan(int n_qubits) { return GatePlan(n_qubits); }

NoiseModel::NoiseModel(double epsilon, std::uint64_t seed) : epsilon_(epsilon), seed_(seed), engine_(seed) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ParameterError("imperfection amplitude epsilon must be finite and >= 0");
    }
}

double NoiseModel::uniform() {
    ++draw_counter_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Matrix2 NoiseModel::sample_a_gate() {
    const double tilt = epsilon_ * uniform();
    const double azimuth = 2.0 * std::numbers::pi * uniform();
    // n0 = (s, 0, s); tilt towards e1 = (s, 0, -s) and e2 = (0, 1, 0).
    const double c = std::cos(tilt);
    const double s = std::sin(tilt);
    const double in_plane = s * std::cos(azimuth) * kInvSqrt2;
    const double nx = c * kInvSqrt2 + in_plane;
    const double ny = s * std::sin(azimuth);
    const double nz = c * kInvSqrt2 - in_plane;
    return axis_gate(nx, ny, nz);
}

double NoiseModel::sample_b_angle(double ideal_angle) {
    return ideal_angle + epsilon_ * (2.0 * uniform() - 1.0);
}

std::string NoiseModel::save_stream() const {
    std::ostringstream out;
    out << draw_counter_ << ' ' << engine_;
    return out.str();
}

void NoiseModel::restore_stream(const std::string& text) {
    std::istringstream in(text);
    std::uint64_t counter = 0;
    std::mt19937_64 engine;
    in >> counter >> engine;
    if (!in) {
        throw ParameterError("NoiseModel: malformed random-stream state");
    }
    draw_counter_ = counter;
    engine_ = engine;
}

Matrix2 hadamard() { return axis_gate(kInvSqrt2, 0.0, kInvSqrt2); }

Matrix2 axis_gate(double nx, double ny, double nz) {
    return {Amplitude{nz, 0.0}, Amplitude{nx, -ny}, Amplitude{nx, ny}, Amplitude{-nz, 0.0}};
}

double operator_distance(const Matrix2& a, const Matrix2& b) {
    const Amplitude d00 = a[0] - b[0], d01 = a[1] - b[1], d10 = a[2] - b[2], d11 = a[3] - b[3];
    const double frob2 = std::norm(d00) + std::norm(d01) + std::norm(d10) + std::norm(d11);
    const double det2 = std::norm(d00 * d11 - d01 * d10);
    const double disc = std::max(0.0, frob2 * frob2 - 4.0 * det2);
    return std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
}

void apply_single_qubit_gate(StateVector& state, int qubit, const Matrix2& u) {
    check_qubit(state, qubit, "apply_single_qubit_gate");
    const std::size_t dim = state.dim();
    const std::size_t stride = std::size_t{1} << qubit;
    Amplitude* amps = state.data();
    const Amplitude u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
    for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
        for (std::size_t i0 = hi; i0 < hi + stride; ++i0) {
            const Amplitude x0 = amps[i0];
            const Amplitude x1 = amps[i0 + stride];
            amps[i0] = cmul(u00, x0) + cmul(u01, x1);
            amps[i0 + stride] = cmul(u10, x0) + cmul(u11, x1);
        }
    }
}

void apply_controlled_phase(StateVector& state, int control, int target, double theta) {
    check_qubit(state, control, "apply_controlled_phase");
    check_qubit(state, target, "apply_controlled_phase");
    if (control == target) {
        throw RangeError("apply_controlled_phase: control and target must differ, both are " +
                         std::to_string(control));
    }
    const Amplitude phase = std::polar(1.0, theta);
    const std::size_t both = (std::size_t{1} << control) | (std::size_t{1} << target);
    const std::size_t quarter = state.dim() / 4;
    const int low = std::min(control, target);
    const int high = std::max(control, target);
    const std::size_t low_mask = (std::size_t{1} << low) - 1;
    const std::size_t mid_mask = ((std::size_t{1} << (high - 1)) - 1) & ~low_mask;
    Amplitude* amps = state.data();
    for (std::size_t r = 0; r < quarter; ++r) {
        // Insert zero bits at positions `low` and `high`, then set both.
        const std::size_t idx = (r & low_mask) | ((r & mid_mask) << 1) | ((r & ~(low_mask | mid_mask)) << 2);
        amps[idx | both] = cmul(amps[idx | both], phase);
    }
}

void apply_bit_reversal(StateVector& state) {
    const std::size_t dim = state.dim();
    Amplitude* amps = state.data();
    std::size_t rev = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (i < rev) std::swap(amps[i], amps[rev]);
        std::size_t bit = dim >> 1;
        while (rev & bit) {
            rev ^= bit;
            bit >>= 1;
        }
        rev |= bit;
    }
}

void noisy_qft(StateVector& state, const GatePlan& plan, NoiseModel& noise, QftDirection direction,
               QftKernel kernel) {
    if (state.n_qubits() != plan.n_qubits()) {
        throw StateError("noisy_qft: state has " + std::to_string(state.n_qubits()) + " qubits, plan has " +
                         std::to_string(plan.n_qubits()));
    }
    const bool forward = direction == QftDirection::Forward;
    state.require(forward ? Representation::Momentum : Representation::Angle,
                  forward ? "noisy_qft(Forward)" : "noisy_qft(Inverse)");
    const bool native = forward == plan.forward_is_native();
    const auto circuit = sample_circuit(plan, noise, native);
    if (kernel == QftKernel::GateByGate) {
        run_gate_by_gate(state, circuit);
    } else {
        run_fused(state, circuit);
    }
    state.set_representation(forward ? Representation::Angle : Representation::Momentum);
}

void step_gates(StateVector& state, const RotorPropagator& propagator, const GatePlan& plan, NoiseModel& noise,
                QftKernel kernel) {
    if (plan.n_qubits() != propagator.params().n_qubits()) {
        throw StateError("step_gates: plan and propagator disagree on the qubit count");
    }
    propagator.apply_rotation_phase(state);
    noisy_qft(state, plan, noise, QftDirection::Forward, kernel);
    propagator.apply_kick_phase(state);
    noisy_qft(state, plan, noise, QftDirection::Inverse, kernel);
}

}  // namespace qkr
