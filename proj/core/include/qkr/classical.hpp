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

#ifndef QKR_CLASSICAL_HPP
#define QKR_CLASSICAL_HPP

#include <cstdint>
#include <vector>

namespace qkr {

struct Trajectory {
    double n;      // unbounded action
    double theta;  // angle in [0, 2 pi)
};

/// Reduces an angle to [0, 2 pi).
double wrap_angle(double theta);

/// Trajectories of the Chirikov standard map
///   n' = n + k sin theta,  theta' = theta + T n'.
class ClassicalEnsemble {
  public:
    ClassicalEnsemble(double k, double period, std::vector<Trajectory> trajectories);

    /// n = 0 for every trajectory, angles uniform in [0, 2 pi).
    static ClassicalEnsemble uniform_angles(double k, double chaos_parameter, std::size_t n_trajectories,
                                            std::uint64_t seed);

    double k() const { return k_; }
    double period() const { return period_; }
    const std::vector<Trajectory>& trajectories() const { return trajectories_; }

    void step();
    /// Exact inverse of step(): theta -= T n, then n -= k sin theta.
    void step_back();

    /// Ensemble mean of n^2.
    double second_moment() const;

  private:
    double k_;
    double period_;
    std::vector<Trajectory> trajectories_;
};

ClassicalEnsemble step_classical(ClassicalEnsemble ensemble);

struct ClassicalDiffusion {
    double rate;                     // least-squares slope of <n^2> vs t
    std::vector<double> second_moment;  // <n^2> at t = 0..t_max
};

/// Iterates an n = 0, uniform-angle ensemble for `t_max` kicks and fits the
/// slope of <n^2>(t). Throws ParameterError for n_traj < 100 or t_max < 100.
ClassicalDiffusion classical_diffusion(double k, double chaos_parameter, std::size_t n_trajectories,
                                       std::int64_t t_max, std::uint64_t seed);

double classical_diffusion_rate(double k, double chaos_parameter, std::size_t n_trajectories, std::int64_t t_max,
                                std::uint64_t seed);

}  // namespace qkr

#endif  // QKR_CLASSICAL_HPP
