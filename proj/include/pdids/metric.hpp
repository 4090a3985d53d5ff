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

#ifndef PDIDS_METRIC_HPP_
#define PDIDS_METRIC_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <span>

#include "pdids/linalg.hpp"

namespace pdids {

enum class MetricKind { kPdhg, kPpm, kLadmm, kAdmm };

const char* metric_kind_name(MetricKind kind);

// The algorithm metric P, as a block operator over z = (x, y):
//
//   pdhg:   [[ I/s, -A'], [-A,  I/s  ]]      positive definite iff s||A|| < 1
//   ppm:    (1/s) I                          positive definite
//   ladmm:  [[ I/tau, -A'], [-A, lambda I]]  positive definite iff
//                                            lambda > tau ||A||^2
//   admm:   [[ I/tau, -A'], [-A, tau AA']]   positive semi-definite; kernel
//                                            is {(tau A'y, y)}
//
// Applications are block products; nothing materializes the full matrix
// except the dense eigensystem behind pseudo_inverse_apply, which is capped
// at dimension 2000 and built once on first use.
class MetricMatrix {
 public:
  static MetricMatrix pdhg(double s, std::shared_ptr<const SparseMatrix> a);
  static MetricMatrix ppm(double s, int n, int m);
  static MetricMatrix ladmm(double tau, double lambda,
                            std::shared_ptr<const SparseMatrix> a);
  static MetricMatrix admm(double tau, std::shared_ptr<const SparseMatrix> a);

  MetricKind kind() const { return kind_; }
  int dim() const { return n_ + m_; }
  int primal_dim() const { return n_; }
  int dual_dim() const { return m_; }
  double step_s() const { return s_; }
  double step_tau() const { return tau_; }
  double step_lambda() const { return lambda_; }
  double coupling_norm() const { return a_norm_; }

  bool positive_definite() const;
  // Bounds on the spectrum of P (for the admm kind, of its nonzero part).
  double eigen_lower() const { return eig_lo_; }
  double eigen_upper() const { return eig_hi_; }

  // P z, exact blockwise product.
  Vector apply(std::span<const double> z) const;
  // Solves P v = w by conjugate gradients to ||Pv - w|| <= tol ||w||.
  // Positive definite kinds only; the admm kind is directed to
  // pseudo_inverse_apply.
  Vector solve(std::span<const double> w, double tol = 1e-12,
               int max_iters = 10000) const;
  // Moore-Penrose P^- w through a dense eigensystem; eigenvalues below
  // 1e-10 * lambda_max count as zero.
  Vector pseudo_inverse_apply(std::span<const double> w) const;
  // Orthogonal projection of w onto range(P) (dense path).
  Vector project_onto_range(std::span<const double> w) const;

  double quad_form(std::span<const double> z) const;       // z' P z
  double inv_quad_form(std::span<const double> w) const;   // w' P^{-1} w
  double pinv_quad_form(std::span<const double> w) const;  // w' P^- w

  // Positive definite kinds reject the dense path by default; tests force it
  // to cross-check the conjugate-gradient solve.
  void force_dense() { allow_dense_ = true; }

 private:
  MetricMatrix() = default;
  void check_dim(std::size_t zdim) const;
  const SymmetricEig& dense_eig() const;

  MetricKind kind_ = MetricKind::kPpm;
  int n_ = 0;
  int m_ = 0;
  double s_ = 0.0;       // pdhg/ppm
  double tau_ = 0.0;     // ladmm/admm
  double lambda_ = 0.0;  // ladmm
  std::shared_ptr<const SparseMatrix> a_;
  double a_norm_ = 0.0;
  double eig_lo_ = 0.0;
  double eig_hi_ = 0.0;
  bool allow_dense_ = false;

  mutable std::once_flag dense_once_;
  mutable std::optional<SymmetricEig> dense_;

 public:
  MetricMatrix(const MetricMatrix& other);
  MetricMatrix& operator=(const MetricMatrix&) = delete;
};

}  // namespace pdids

#endif  // PDIDS_METRIC_HPP_
