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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace combkit {

using cplx = std::complex<double>;

// Fixed numerical tolerances used across the toolkit.
namespace tol {
inline constexpr double herm = 1e-9;    // max |A - A^dag| entry
inline constexpr double psd = 1e-9;     // eigenvalue floor
inline constexpr double recon = 1e-10;  // eigendecomposition reconstruction
inline constexpr double pinv_rel = 1e-9;  // pseudo-inverse cutoff, relative to lambda_max
}  // namespace tol

// Dense complex matrix, row-major. Constructors reject non-finite entries.
class CMat {
 public:
  CMat() : rows_(0), cols_(0) {}
  CMat(int rows, int cols);
  CMat(int rows, int cols, std::vector<cplx> entries);

  static CMat identity(int n);
  static CMat zero(int rows, int cols) { return CMat(rows, cols); }
  static CMat diag(const std::vector<double>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  cplx& operator()(int r, int c) { return at(r, c); }
  const cplx& operator()(int r, int c) const { return at(r, c); }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  CMat operator+(const CMat& o) const;
  CMat operator-(const CMat& o) const;
  CMat operator*(const CMat& o) const;
  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat operator*(cplx s) const;
  friend CMat operator*(cplx s, const CMat& m) { return m * s; }

  CMat adjoint() const;
  CMat transpose() const;
  CMat conj() const;

  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  // Multiplies this matrix with a vector (length cols()).
  std::vector<cplx> apply(const std::vector<cplx>& v) const;

  bool same_shape(const CMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  double herm_defect() const;  // max entry of |A - A^dag|; requires square

 private:
  int rows_, cols_;
  std::vector<cplx> a_;
  void check_finite() const;
};

struct EigResult {
  std::vector<double> values;  // descending
  CMat vectors;                // columns are eigenvectors, same order
};

// Eigendecomposition of a Hermitian matrix: Householder tridiagonalization
// followed by implicit QL iteration. Throws if the input fails the
// Hermiticity tolerance or the iteration does not converge.
EigResult herm_eig(const CMat& m, double herm_tol = tol::herm);

// Principal square root of a PSD matrix; eigenvalues in [-psd_tol, 0) are
// clipped to zero, anything below -psd_tol is an error.
CMat mat_sqrt_psd(const CMat& m, double psd_tol = tol::psd);

// Moore-Penrose inverse of a Hermitian PSD matrix (inverse on support).
CMat pinv_on_support(const CMat& m, double psd_tol = tol::psd);

// Inverse square root on support.
CMat pinv_sqrt_on_support(const CMat& m, double psd_tol = tol::psd);

bool is_psd(const CMat& m, double eig_tol = tol::psd, double herm_tol = tol::herm);

// Largest |eigenvalue| of a Hermitian matrix (operator norm).
double herm_op_norm(const CMat& m);

// Numerical rank of a Hermitian PSD matrix with relative cutoff.
int psd_rank(const CMat& m, double rel_cutoff = tol::pinv_rel);

inline CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

struct dim_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace combkit
