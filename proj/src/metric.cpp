// Copyright 2026 The pdids Authors
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

#include "pdids/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdids/errors.hpp"

namespace pdids {

namespace {
constexpr int kDenseCap = 2000;
constexpr double kRankCut = 1e-10;
// Power iteration under-estimates ||A||; pad before deriving spectral bounds
// so beta and kappa stay on the safe side.
constexpr double kNormPad = 1.0 + 1e-9;
}  // namespace

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::kPdhg:
      return "pdhg";
    case MetricKind::kPpm:
      return "ppm";
    case MetricKind::kLadmm:
      return "ladmm";
    case MetricKind::kAdmm:
      return "admm";
  }
  return "?";
}

MetricMatrix::MetricMatrix(const MetricMatrix& other)
    : kind_(other.kind_),
      n_(other.n_),
      m_(other.m_),
      s_(other.s_),
      tau_(other.tau_),
      lambda_(other.lambda_),
      a_(other.a_),
      a_norm_(other.a_norm_),
      eig_lo_(other.eig_lo_),
      eig_hi_(other.eig_hi_),
      allow_dense_(other.allow_dense_) {}

MetricMatrix MetricMatrix::pdhg(double s, std::shared_ptr<const SparseMatrix> a) {
  if (s <= 0) throw InvalidInputError("pdhg metric: step size must be positive");
  MetricMatrix p;
  p.kind_ = MetricKind::kPdhg;
  p.n_ = a->cols();
  p.m_ = a->rows();
  p.s_ = s;
  p.a_ = std::move(a);
  p.a_norm_ = operator_norm(*p.a_);
  double padded = p.a_norm_ * kNormPad;
  // spectrum of [[I/s, -A'], [-A, I/s]] is 1/s +- sigma_i and 1/s
  p.eig_lo_ = 1.0 / s - padded;
  p.eig_hi_ = 1.0 / s + padded;
  return p;
}

MetricMatrix MetricMatrix::ppm(double s, int n, int m) {
  if (s <= 0) throw InvalidInputError("ppm metric: step size must be positive");
  MetricMatrix p;
  p.kind_ = MetricKind::kPpm;
  p.n_ = n;
  p.m_ = m;
  p.s_ = s;
  p.eig_lo_ = 1.0 / s;
  p.eig_hi_ = 1.0 / s;
  return p;
}

MetricMatrix MetricMatrix::ladmm(double tau, double lambda,
                                 std::shared_ptr<const SparseMatrix> a) {
  if (tau <= 0 || lambda <= 0) {
    throw InvalidInputError("ladmm metric: step sizes must be positive");
  }
  MetricMatrix p;
  p.kind_ = MetricKind::kLadmm;
  p.n_ = a->cols();
  p.m_ = a->rows();
  p.tau_ = tau;
  p.lambda_ = lambda;
  p.a_ = std::move(a);
  p.a_norm_ = operator_norm(*p.a_);
  double padded = p.a_norm_ * kNormPad;
  // eigenvalues of [[aI, -A'], [-A, bI]] lie in
  // (a+b)/2 -+ sqrt(((a-b)/2)^2 + sigma_max^2)
  double mid = (1.0 / tau + lambda) / 2.0;
  double half = (1.0 / tau - lambda) / 2.0;
  double spread = std::sqrt(half * half + padded * padded);
  p.eig_lo_ = mid - spread;
  p.eig_hi_ = mid + spread;
  return p;
}

MetricMatrix MetricMatrix::admm(double tau, std::shared_ptr<const SparseMatrix> a) {
  if (tau <= 0) throw InvalidInputError("admm metric: tau must be positive");
  MetricMatrix p;
  p.kind_ = MetricKind::kAdmm;
  p.n_ = a->cols();
  p.m_ = a->rows();
  p.tau_ = tau;
  p.a_ = std::move(a);
  p.a_norm_ = operator_norm(*p.a_);
  double padded = p.a_norm_ * kNormPad;
  // nonzero spectrum equals that of I/tau + tau A'A
  p.eig_lo_ = 1.0 / tau;
  p.eig_hi_ = 1.0 / tau + tau * padded * padded;
  p.allow_dense_ = true;
  return p;
}

bool MetricMatrix::positive_definite() const {
  switch (kind_) {
    case MetricKind::kPdhg:
      return s_ * a_norm_ < 1.0;
    case MetricKind::kPpm:
      return true;
    case MetricKind::kLadmm:
      return lambda_ > tau_ * a_norm_ * a_norm_;
    case MetricKind::kAdmm:
      return false;
  }
  return false;
}

void MetricMatrix::check_dim(std::size_t zdim) const {
  if (static_cast<int>(zdim) != dim()) {
    throw InvalidInputError(std::string("metric ") + metric_kind_name(kind_) +
                            ": vector dimension " + std::to_string(zdim) +
                            " does not match " + std::to_string(dim()));
  }
}

Vector MetricMatrix::apply(std::span<const double> z) const {
  check_dim(z.size());
  Vector out(dim());
  auto x = z.subspan(0, n_);
  auto y = z.subspan(n_, m_);
  std::span<double> ox(out.data(), n_);
  std::span<double> oy(out.data() + n_, m_);
  switch (kind_) {
    case MetricKind::kPdhg: {
      a_->multiply_transpose(y, ox);
      for (int i = 0; i < n_; ++i) ox[i] = x[i] / s_ - ox[i];
      a_->multiply(x, oy);
      for (int j = 0; j < m_; ++j) oy[j] = y[j] / s_ - oy[j];
      break;
    }
    case MetricKind::kPpm: {
      for (int i = 0; i < dim(); ++i) out[i] = z[i] / s_;
      break;
    }
    case MetricKind::kLadmm: {
      a_->multiply_transpose(y, ox);
      for (int i = 0; i < n_; ++i) ox[i] = x[i] / tau_ - ox[i];
      a_->multiply(x, oy);
      for (int j = 0; j < m_; ++j) oy[j] = lambda_ * y[j] - oy[j];
      break;
    }
    case MetricKind::kAdmm: {
      Vector aty(n_);
      a_->multiply_transpose(y, aty);
      for (int i = 0; i < n_; ++i) ox[i] = x[i] / tau_ - aty[i];
      Vector ax(m_);
      a_->multiply(x, ax);
      Vector aaty(m_);
      a_->multiply(aty, aaty);
      for (int j = 0; j < m_; ++j) oy[j] = tau_ * aaty[j] - ax[j];
      break;
    }
  }
  return out;
}

Vector MetricMatrix::solve(std::span<const double> w, double tol,
                           int max_iters) const {
  check_dim(w.size());
  if (kind_ == MetricKind::kAdmm) {
    throw InvalidInputError(
        "metric admm: semi-definite, use pseudo_inverse_apply");
  }
  if (!positive_definite()) {
    throw InvalidInputError(std::string("metric ") + metric_kind_name(kind_) +
                            ": not positive definite with these step sizes");
  }
  double nw = norm2(w);
  Vector v(dim(), 0.0);
  if (nw == 0.0) return v;

  Vector r(w.begin(), w.end());  // residual w - P v with v = 0
  Vector p(r);
  Vector pp(dim());
  double rr = dot(r, r);
  const double stop = tol * nw;
  for (int it = 0; it < max_iters; ++it) {
    if (std::sqrt(rr) <= stop) return v;
    pp = apply(p);
    double alpha = rr / dot(p, pp);
    axpy(alpha, p, v);
    axpy(-alpha, pp, r);
    double rr_next = dot(r, r);
    double beta = rr_next / rr;
    rr = rr_next;
    for (int i = 0; i < dim(); ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= stop) return v;
  throw NumericalError("metric solve: conjugate gradients hit iteration cap",
                       std::sqrt(rr));
}

const SymmetricEig& MetricMatrix::dense_eig() const {
  if (!allow_dense_) {
    throw InvalidInputError(
        std::string("metric ") + metric_kind_name(kind_) +
        ": dense pseudo-inverse path not enabled for this kind");
  }
  if (dim() > kDenseCap) {
    throw InvalidInputError(
        "metric: dense pseudo-inverse capped at dimension 2000");
  }
  std::call_once(dense_once_, [this]() {
    int d = dim();
    DenseMatrix p(d, d);
    Vector e(d, 0.0);
    for (int j = 0; j < d; ++j) {
      e[j] = 1.0;
      Vector col = apply(e);
      for (int i = 0; i < d; ++i) p(i, j) = col[i];
      e[j] = 0.0;
    }
    // symmetrize away rounding before Jacobi
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        double v = 0.5 * (p(i, j) + p(j, i));
        p(i, j) = v;
        p(j, i) = v;
      }
    }
    dense_ = symmetric_eig(std::move(p));
  });
  return *dense_;
}

Vector MetricMatrix::pseudo_inverse_apply(std::span<const double> w) const {
  check_dim(w.size());
  const SymmetricEig& eig = dense_eig();
  int d = dim();
  double lmax = eig.values.empty() ? 0.0 : std::abs(eig.values.back());
  double cut = kRankCut * std::max(lmax, 0.0);
  Vector out(d, 0.0);
  for (int j = 0; j < d; ++j) {
    if (eig.values[j] <= cut) continue;
    double proj = 0.0;
    for (int i = 0; i < d; ++i) proj += eig.vectors(i, j) * w[i];
    proj /= eig.values[j];
    for (int i = 0; i < d; ++i) out[i] += eig.vectors(i, j) * proj;
  }
  return out;
}

Vector MetricMatrix::project_onto_range(std::span<const double> w) const {
  check_dim(w.size());
  const SymmetricEig& eig = dense_eig();
  int d = dim();
  double lmax = eig.values.empty() ? 0.0 : std::abs(eig.values.back());
  double cut = kRankCut * std::max(lmax, 0.0);
  Vector out(d, 0.0);
  for (int j = 0; j < d; ++j) {
    if (eig.values[j] <= cut) continue;
    double proj = 0.0;
    for (int i = 0; i < d; ++i) proj += eig.vectors(i, j) * w[i];
    for (int i = 0; i < d; ++i) out[i] += eig.vectors(i, j) * proj;
  }
  return out;
}

double MetricMatrix::quad_form(std::span<const double> z) const {
  Vector pz = apply(z);
  return dot(z, pz);
}

double MetricMatrix::inv_quad_form(std::span<const double> w) const {
  Vector v = solve(w);
  return dot(w, v);
}

double MetricMatrix::pinv_quad_form(std::span<const double> w) const {
  Vector v = pseudo_inverse_apply(w);
  return dot(w, v);
}

}  // namespace pdids
