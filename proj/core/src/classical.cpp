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

#include "qkr/classical.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/fit.hpp"

namespace qkr {

double wrap_angle(double theta) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value rounds r + 2 pi up to exactly 2 pi.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

ClassicalEnsemble::ClassicalEnsemble(double k, double period, std::vector<Trajectory> trajectories)
    : k_(k), period_(period), trajectories_(std::move(trajectories)) {
    for (auto& tr : trajectories_) {
        tr.theta = wrap_angle(tr.theta);
    }
}

ClassicalEnsemble ClassicalEnsemble::uniform_angles(double k, double chaos_parameter, std::size_t n_trajectories,
                                                    std::uint64_t seed) {
    if (!(k > 0.0) || !(chaos_parameter > 0.0)) {
        throw ParameterError("classical ensemble: k and K must be positive");
    }
    std::mt19937_64 engine(seed);
    std::vector<Trajectory> trajectories(n_trajectories);
    for (auto& tr : trajectories) {
        tr.n = 0.0;
        tr.theta = 2.0 * std::numbers::pi * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
    }
    return ClassicalEnsemble(k, chaos_parameter / k, std::move(trajectories));
}

void ClassicalEnsemble::step() {
    for (auto& tr : trajectories_) {
        tr.n += k_ * std::sin(tr.theta);
        tr.theta = wrap_angle(tr.theta + period_ * tr.n);
    }
}

void ClassicalEnsemble::step_back() {
    for (auto& tr : trajectories_) {
        tr.theta = wrap_angle(tr.theta - period_ * tr.n);
        tr.n -= k_ * std::sin(tr.theta);
    }
}

double ClassicalEnsemble::second_moment() const {
    if (trajectories_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& tr : trajectories_) sum += tr.n * tr.n;
    return sum / static_cast<double>(trajectories_.size());
}

ClassicalEnsemble step_classical(ClassicalEnsemble ensemble) {
    ensemble.step();
    return ensemble;
}

ClassicalDiffusion classical_diffusion(double k, double chaos_parameter, std::size_t n_trajectories,
                                       std::int64_t t_max, std::uint64_t seed) {
    if (n_trajectories < 100) {
        throw ParameterError("classical_diffusion_rate: need at least 100 trajectories, got " +
                             std::to_string(n_trajectories));
    }
    if (t_max < 100) {
        throw ParameterError("classical_diffusion_rate: need t_max >= 100, got " + std::to_string(t_max));
    }
    auto ensemble = ClassicalEnsemble::uniform_angles(k, chaos_parameter, n_trajectories, seed);
    ClassicalDiffusion out;
    out.second_moment.reserve(static_cast<std::size_t>(t_max) + 1);
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(t_max) + 1);
    out.second_moment.push_back(ensemble.second_moment());
    t.push_back(0.0);
    for (std::int64_t i = 1; i <= t_max; ++i) {
        ensemble.step();
        out.second_moment.push_back(ensemble.second_moment());
        t.push_back(static_cast<double>(i));
    }
    out.rate = least_squares(t, out.second_moment).slope;
    return out;
}

double classical_diffusion_rate(double k, double chaos_parameter, std::size_t n_trajectories, std::int64_t t_max,
                                std::uint64_t seed) {
    return classical_diffusion(k, chaos_parameter, n_trajectories, t_max, seed).rate;
}

}  // namespace qkr
