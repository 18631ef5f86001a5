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

#include <benchmark/benchmark.h>

#include "qkr/classical.hpp"
#include "qkr/observables.hpp"
#include "qkr/qft_circuit.hpp"
#include "qkr/rotor.hpp"

namespace {

using namespace qkr;

StateVector spread_state(int n_q) {
    StateVector s(n_q);
    const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) s[i] = std::polar(a, 0.37 * static_cast<double>(i));
    return s;
}

void BM_StepExact(benchmark::State& st) {
    const int n_q = static_cast<int>(st.range(0));
    const RotorPropagator prop(RotatorParams(10.0, 5.0, n_q));
    auto psi = spread_state(n_q);
    for (auto _ : st) {
        prop.step_exact(psi);
        benchmark::DoNotOptimize(psi.data());
    }
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_StepExact)->DenseRange(8, 16, 2);

void BM_StepGates(benchmark::State& st) {
    const int n_q = static_cast<int>(st.range(0));
    const auto kernel = st.range(1) ? QftKernel::FusedLayers : QftKernel::GateByGate;
    const RotorPropagator prop(RotatorParams(10.0, 5.0, n_q));
    const GatePlan plan(n_q);
    NoiseModel noise(1e-4, 1);
    auto psi = spread_state(n_q);
    for (auto _ : st) {
        step_gates(psi, prop, plan, noise, kernel);
        benchmark::DoNotOptimize(psi.data());
    }
    st.SetItemsProcessed(st.iterations());
    st.SetLabel(st.range(1) ? "fused" : "gate-by-gate");
}
BENCHMARK(BM_StepGates)->ArgsProduct({{8, 10, 12, 14}, {0, 1}});

void BM_SingleQubitGate(benchmark::State& st) {
    const int n_q = 14;
    const int qubit = static_cast<int>(st.range(0));
    auto psi = spread_state(n_q);
    const auto h = hadamard();
    for (auto _ : st) {
        apply_single_qubit_gate(psi, qubit, h);
        benchmark::DoNotOptimize(psi.data());
    }
    st.SetBytesProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim() * sizeof(Amplitude)));
}
BENCHMARK(BM_SingleQubitGate)->Arg(0)->Arg(7)->Arg(13);

void BM_Observe(benchmark::State& st) {
    const auto psi = spread_state(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(observe(psi, 0));
}
BENCHMARK(BM_Observe)->Arg(12)->Arg(16);

void BM_ClassicalStep(benchmark::State& st) {
    auto e = ClassicalEnsemble::uniform_angles(10.0, 5.0, static_cast<std::size_t>(st.range(0)), 1);
    for (auto _ : st) {
        e.step();
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ClassicalStep)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
