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

#include "combkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace combkit {

namespace {
bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
double hypot2(double a, double b) { return std::hypot(a, b); }
}  // namespace

CMat::CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw dim_mismatch("negative matrix dimension");
}

CMat::CMat(int rows, int cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw dim_mismatch("negative matrix dimension");
  if (a_.size() != static_cast<size_t>(rows) * cols)
    throw dim_mismatch("entry count does not match rows*cols");
  check_finite();
}

void CMat::check_finite() const {
  for (const cplx& z : a_)
    if (!finite(z)) throw std::invalid_argument("non-finite matrix entry");
}

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMat CMat::diag(const std::vector<double>& d) {
  CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

CMat CMat::operator+(const CMat& o) const {
  if (!same_shape(o)) throw dim_mismatch("matrix add: shape mismatch");
  CMat r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

CMat CMat::operator-(const CMat& o) const {
  if (!same_shape(o)) throw dim_mismatch("matrix sub: shape mismatch");
  CMat r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

CMat& CMat::operator+=(const CMat& o) {
  if (!same_shape(o)) throw dim_mismatch("matrix add: shape mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  if (!same_shape(o)) throw dim_mismatch("matrix sub: shape mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMat CMat::operator*(const CMat& o) const {
  if (cols_ != o.rows_) throw dim_mismatch("matrix mul: inner dimension mismatch");
  CMat r(rows_, o.cols_);
  // ikj order keeps the inner loop contiguous in both operands.
  for (int i = 0; i < rows_; ++i) {
    const cplx* ai = &a_[static_cast<size_t>(i) * cols_];
    cplx* ri = &r.a_[static_cast<size_t>(i) * o.cols_];
    for (int k = 0; k < cols_; ++k) {
      const cplx s = ai[k];
      if (s == cplx(0.0, 0.0)) continue;
      const cplx* bk = &o.a_[static_cast<size_t>(k) * o.cols_];
      for (int j = 0; j < o.cols_; ++j) ri[j] += s * bk[j];
    }
  }
  return r;
}

CMat CMat::operator*(cplx s) const {
  CMat r = *this;
  for (cplx& z : r.a_) z *= s;
  return r;
}

CMat CMat::adjoint() const {
  CMat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
  return r;
}

CMat CMat::transpose() const {
  CMat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

CMat CMat::conj() const {
  CMat r = *this;
  for (cplx& z : r.a_) z = std::conj(z);
  return r;
}

cplx CMat::trace() const {
  if (!square()) throw dim_mismatch("trace of non-square matrix");
  cplx t = 0.0;
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

double CMat::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double CMat::max_abs() const {
  double m = 0.0;
  for (const cplx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

std::vector<cplx> CMat::apply(const std::vector<cplx>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw dim_mismatch("matvec: length mismatch");
  std::vector<cplx> r(rows_, cplx(0.0, 0.0));
  for (int i = 0; i < rows_; ++i) {
    const cplx* ai = &a_[static_cast<size_t>(i) * cols_];
    cplx acc = 0.0;
    for (int j = 0; j < cols_; ++j) acc += ai[j] * v[j];
    r[i] = acc;
  }
  return r;
}

double CMat::herm_defect() const {
  if (!square()) throw dim_mismatch("herm_defect of non-square matrix");
  double m = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j) m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
  return m;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver.
//
// Phase 1 reduces A to a real symmetric tridiagonal matrix with complex
// Householder reflections plus a diagonal phase transform; phase 2 is the
// implicit QL iteration with Wilkinson shifts, rotations accumulated into the
// complex transform.
// ---------------------------------------------------------------------------

namespace {

void householder_tridiag(CMat& w, CMat& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = w.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  v = CMat::identity(n);

  std::vector<cplx> u(n), p(n);
  for (int k = 0; k < n - 2; ++k) {
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(w.at(i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm < 1e-300) continue;
    cplx x0 = w.at(k + 1, k);
    cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    cplx alpha = -phase * xnorm;

    double unorm2 = 0.0;
    for (int i = 0; i < n; ++i) u[i] = 0.0;
    for (int i = k + 1; i < n; ++i) u[i] = w.at(i, k);
    u[k + 1] -= alpha;
    for (int i = k + 1; i < n; ++i) unorm2 += std::norm(u[i]);
    if (unorm2 < 1e-300) continue;
    const double beta = 2.0 / unorm2;

    // w <- H w H with H = I - beta u u^dag.
    // Right application: columns; left application: rows.
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int j = k + 1; j < n; ++j) s += w.at(i, j) * u[j];
      p[i] = s * beta;
    }
    for (int i = 0; i < n; ++i)
      for (int j = k + 1; j < n; ++j) w.at(i, j) -= p[i] * std::conj(u[j]);
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int i = k + 1; i < n; ++i) s += std::conj(u[i]) * w.at(i, j);
      p[j] = s * beta;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = 0; j < n; ++j) w.at(i, j) -= u[i] * p[j];
    // Accumulate v <- v H.
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int j = k + 1; j < n; ++j) s += v.at(i, j) * u[j];
      s *= beta;
      for (int j = k + 1; j < n; ++j) v.at(i, j) -= s * std::conj(u[j]);
    }
  }

  // Phase transform making the subdiagonal real nonnegative.
  std::vector<cplx> ph(n, cplx(1.0, 0.0));
  for (int i = 0; i + 1 < n; ++i) {
    cplx c = w.at(i + 1, i) * ph[i];
    double m = std::abs(c);
    ph[i + 1] = (m > 1e-300) ? c / m : ph[i];
    e[i] = m;
  }
  for (int i = 0; i < n; ++i) d[i] = w.at(i, i).real();
  for (int j = 0; j < n; ++j) {
    const cplx f = ph[j];
    for (int i = 0; i < n; ++i) v.at(i, j) *= f;
  }
}

// Implicit QL with Wilkinson shifts on (d, e); rotations accumulated into v.
void tql_implicit(std::vector<double>& d, std::vector<double>& e, CMat& v) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 64) throw numeric_error("herm_eig: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < v.rows(); ++k) {
            cplx fk = v.at(k, i + 1);
            v.at(k, i + 1) = s * v.at(k, i) + c * fk;
            v.at(k, i) = c * v.at(k, i) - s * fk;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigResult herm_eig(const CMat& m, double herm_tol) {
  if (!m.square()) throw dim_mismatch("herm_eig: matrix not square");
  const double scale = std::max(1.0, m.max_abs());
  if (m.herm_defect() > herm_tol * std::max(1.0, scale))
    throw numeric_error("herm_eig: input is not Hermitian within tolerance");

  const int n = m.rows();
  EigResult res;
  if (n == 0) {
    res.vectors = CMat(0, 0);
    return res;
  }
  // Symmetrize to kill roundoff-level asymmetry.
  CMat w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));

  CMat v;
  std::vector<double> d, e;
  householder_tridiag(w, v, d, e);
  tql_implicit(d, e, v);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });

  res.values.resize(n);
  res.vectors = CMat(n, n);
  for (int j = 0; j < n; ++j) {
    res.values[j] = d[order[j]];
    for (int i = 0; i < n; ++i) res.vectors.at(i, j) = v.at(i, order[j]);
  }
  return res;
}

namespace {

CMat rebuild(const EigResult& eig, const std::vector<double>& f) {
  const int n = eig.vectors.rows();
  CMat r(n, n);
  for (size_t k = 0; k < f.size(); ++k) {
    if (f[k] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx vik = eig.vectors.at(i, static_cast<int>(k));
      if (vik == cplx(0.0, 0.0)) continue;
      const cplx w = f[k] * vik;
      for (int j = 0; j < n; ++j) r.at(i, j) += w * std::conj(eig.vectors.at(j, static_cast<int>(k)));
    }
  }
  return r;
}

}  // namespace

CMat mat_sqrt_psd(const CMat& m, double psd_tol) {
  EigResult eig = herm_eig(m);
  double lmax = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.front());
  const double cutoff = tol::pinv_rel * lmax;
  std::vector<double> f(eig.values.size());
  for (size_t k = 0; k < f.size(); ++k) {
    double lam = eig.values[k];
    if (lam < -psd_tol) throw numeric_error("mat_sqrt_psd: matrix is not PSD");
    f[k] = lam > cutoff ? std::sqrt(lam) : 0.0;
  }
  return rebuild(eig, f);
}

CMat pinv_on_support(const CMat& m, double psd_tol) {
  EigResult eig = herm_eig(m);
  double lmax = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.front());
  const double cutoff = tol::pinv_rel * std::max(lmax, 1e-300);
  std::vector<double> f(eig.values.size(), 0.0);
  for (size_t k = 0; k < f.size(); ++k) {
    double lam = eig.values[k];
    if (lam < -psd_tol) throw numeric_error("pinv_on_support: matrix is not PSD");
    if (lam > cutoff) f[k] = 1.0 / lam;
  }
  return rebuild(eig, f);
}

CMat pinv_sqrt_on_support(const CMat& m, double psd_tol) {
  EigResult eig = herm_eig(m);
  double lmax = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.front());
  const double cutoff = tol::pinv_rel * std::max(lmax, 1e-300);
  std::vector<double> f(eig.values.size(), 0.0);
  for (size_t k = 0; k < f.size(); ++k) {
    double lam = eig.values[k];
    if (lam < -psd_tol) throw numeric_error("pinv_sqrt_on_support: matrix is not PSD");
    if (lam > cutoff) f[k] = 1.0 / std::sqrt(lam);
  }
  return rebuild(eig, f);
}

bool is_psd(const CMat& m, double eig_tol, double herm_tol) {
  EigResult eig = herm_eig(m, herm_tol);
  return eig.values.empty() || eig.values.back() >= -eig_tol;
}

double herm_op_norm(const CMat& m) {
  EigResult eig = herm_eig(m, 1e-6);
  double r = 0.0;
  for (double lam : eig.values) r = std::max(r, std::abs(lam));
  return r;
}

int psd_rank(const CMat& m, double rel_cutoff) {
  EigResult eig = herm_eig(m);
  if (eig.values.empty()) return 0;
  const double cutoff = rel_cutoff * std::max(eig.values.front(), 1e-300);
  int r = 0;
  for (double lam : eig.values)
    if (lam > cutoff) ++r;
  return r;
}

}  // namespace combkit
