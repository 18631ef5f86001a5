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

#ifndef QKR_SRC_COMPLEX_OPS_HPP
#define QKR_SRC_COMPLEX_OPS_HPP

#include <complex>

namespace qkr::detail {

// Plain complex product. std::complex operator* carries the C99 Annex G
// inf/nan recovery branch, which blocks vectorization of the inner loops.
inline std::complex<double> cmul(const std::complex<double>& a, const std::complex<double>& b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace qkr::detail

#endif  // QKR_SRC_COMPLEX_OPS_HPP
