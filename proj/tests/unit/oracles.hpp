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

// Brute-force reference implementations and generators shared by the tests.
// Nothing here calls into the library's transforms or kernels.

#ifndef QKR_TESTS_ORACLES_HPP
#define QKR_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "qkr/rotor.hpp"

namespace qkr::testing {

using cd = std::complex<double>;
using Vec = std::vector<cd>;
using Dense = std::vector<Vec>;  // row-major

inline std::int64_t signed_n(std::size_t i, std::size_t dim) {
    return i < dim / 2 ? static_cast<std::int64_t>(i) : static_cast<std::int64_t>(i) - static_cast<std::int64_t>(dim);
}

/// psi(theta_l) = N^{-1/2} sum_n psi_n exp(+i n theta_l), summed directly.
inline Vec dft_to_angle(const Vec& psi) {
    const std::size_t dim = psi.size();
    Vec out(dim);
    for (std::size_t l = 0; l < dim; ++l) {
        cd acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(signed_n(i, dim)) *
                                 static_cast<double>(l) / static_cast<double>(dim);
            acc += psi[i] * std::polar(1.0, phase);
        }
        out[l] = acc / std::sqrt(static_cast<double>(dim));
    }
    return out;
}

inline Vec dft_to_momentum(const Vec& phi) {
    const std::size_t dim = phi.size();
    Vec out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        cd acc = 0.0;
        for (std::size_t l = 0; l < dim; ++l) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(signed_n(i, dim)) *
                                 static_cast<double>(l) / static_cast<double>(dim);
            acc += phi[l] * std::polar(1.0, phase);
        }
        out[i] = acc / std::sqrt(static_cast<double>(dim));
    }
    return out;
}

inline Dense identity(std::size_t dim) {
    Dense m(dim, Vec(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1.0;
    return m;
}

inline Dense matmul(const Dense& a, const Dense& b) {
    const std::size_t n = a.size();
    Dense c(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Vec apply(const Dense& m, const Vec& v) {
    Vec out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline Dense kron(const Dense& a, const Dense& b) {
    const std::size_t na = a.size(), nb = b.size();
    Dense c(na * nb, Vec(na * nb, 0.0));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) c[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return c;
}

/// Dense operator of a one-qubit gate u on qubit j of an n-qubit register,
/// built as I (x) ... (x) u (x) ... (x) I with qubit 0 the least significant.
inline Dense single_qubit_operator(int n_qubits, int j, const std::array<cd, 4>& u) {
    const Dense u2 = {{u[0], u[1]}, {u[2], u[3]}};
    Dense op = {{1.0}};
    for (int q = n_qubits - 1; q >= 0; --q) op = kron(op, q == j ? u2 : identity(2));
    return op;
}

/// Dense DFT matrix F[l][i] = N^{-1/2} exp(+i n_i theta_l).
inline Dense dft_matrix(std::size_t dim) {
    Dense f(dim, Vec(dim));
    for (std::size_t l = 0; l < dim; ++l)
        for (std::size_t i = 0; i < dim; ++i)
            f[l][i] = std::polar(1.0 / std::sqrt(static_cast<double>(dim)),
                                 2.0 * std::numbers::pi * static_cast<double>(signed_n(i, dim)) *
                                     static_cast<double>(l) / static_cast<double>(dim));
    return f;
}

inline Dense adjoint(const Dense& m) {
    const std::size_t n = m.size();
    Dense a(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = std::conj(m[j][i]);
    return a;
}

/// One-kick unitary U = F^{-1} D_kick F D_rot as a dense matrix.
inline Dense dense_kick_operator(double k, double period, std::size_t dim) {
    Dense d_rot(dim, Vec(dim, 0.0)), d_kick(dim, Vec(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        const double n = static_cast<double>(signed_n(i, dim));
        d_rot[i][i] = std::polar(1.0, -period * n * n / 2.0);
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(dim);
        d_kick[i][i] = std::polar(1.0, -k * std::cos(theta));
    }
    const Dense f = dft_matrix(dim);
    return matmul(adjoint(f), matmul(d_kick, matmul(f, d_rot)));
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(std::span<const cd> a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Normalized state with independent Gaussian real and imaginary parts.
inline Vec random_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(dim);
    double norm = 0.0;
    for (auto& a : v) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(norm);
    return v;
}

inline StateVector to_state(const Vec& v, int n_qubits, Representation rep = Representation::Momentum) {
    StateVector s(n_qubits, rep);
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i];
    return s;
}

inline Vec to_vec(const StateVector& s) { return Vec(s.amplitudes().begin(), s.amplitudes().end()); }

/// Random 2x2 unitary in Euler-angle form.
inline std::array<cd, 4> random_unitary2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng) / 4.0;
    // e^{ia} [[e^{ib} cos d, e^{ic} sin d], [-e^{-ic} sin d, e^{-ib} cos d]]
    const cd g = std::polar(1.0, a);
    return {g * std::polar(std::cos(d), b), g * std::polar(std::sin(d), c), -g * std::polar(std::sin(d), -c),
            g * std::polar(std::cos(d), -b)};
}

}  // namespace qkr::testing

#endif  // QKR_TESTS_ORACLES_HPP
