// Copyright 2026 The Combkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "combkit/matrix.hpp"
#include "combkit/rng.hpp"
#include "combkit/tensor.hpp"

namespace combkit::testutil {

inline CMat random_cmat(int rows, int cols, CounterRng& rng) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = rng.cgauss();
  return m;
}

inline CMat random_hermitian(int n, CounterRng& rng) {
  CMat g = random_cmat(n, n, rng);
  return (g + g.adjoint()) * cplx(0.5, 0.0);
}

inline CMat random_psd(int n, CounterRng& rng) {
  CMat g = random_cmat(n, n, rng);
  return g * g.adjoint();
}

inline CMat random_rank_deficient_psd(int n, int rank, CounterRng& rng) {
  CMat g = random_cmat(n, rank, rng);
  return g * g.adjoint();
}

inline CMat random_density(int n, CounterRng& rng) {
  CMat p = random_psd(n, rng);
  return p * (1.0 / p.trace());
}

inline std::vector<cplx> random_unit_vector(int n, CounterRng& rng) {
  std::vector<cplx> v(n);
  double s = 0.0;
  for (auto& z : v) {
    z = rng.cgauss();
    s += std::norm(z);
  }
  s = std::sqrt(s);
  for (auto& z : v) z /= s;
  return v;
}

inline double max_abs_diff(const CMat& a, const CMat& b) { return (a - b).max_abs(); }

}  // namespace combkit::testutil
