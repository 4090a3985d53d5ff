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

#include "pdids/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "pdids/errors.hpp"
#include "pdids/metric.hpp"

namespace pdids {

void LpInstance::validate() const {
  if (!a) throw InvalidInputError("LpInstance: missing matrix");
  if (n() == 0 || m() == 0) {
    throw InvalidInputError("LpInstance: degenerate dimensions");
  }
  if (a->rows() != m() || a->cols() != n()) {
    throw InvalidInputError("LpInstance: dimension mismatch");
  }
  require_finite(c, "LpInstance c");
  require_finite(b, "LpInstance b");
}

double kkt_residual(const LpInstance& lp, std::span<const double> x,
                    std::span<const double> y) {
  if (static_cast<int>(x.size()) != lp.n() ||
      static_cast<int>(y.size()) != lp.m()) {
    throw InvalidInputError("kkt_residual: dimension mismatch");
  }
  Vector xc(x.begin(), x.end());
  for (double& xi : xc) xi = std::max(xi, 0.0);

  double sq = 0.0;
  Vector ax = lp.a->apply(xc);
  for (int i = 0; i < lp.m(); ++i) {
    double r = ax[i] - lp.b[i];
    sq += r * r;
  }
  Vector aty = lp.a->apply_transpose(y);
  for (int j = 0; j < lp.n(); ++j) {
    double r = std::max(aty[j] - lp.c[j], 0.0);
    sq += r * r;
  }
  double gap = std::max(dot(lp.c, xc) - dot(lp.b, y), 0.0);
  sq += gap * gap;
  return std::sqrt(sq);
}

double OptimalSet::dist_p(const MetricMatrix& p, std::span<const double> z) const {
  // minimize ||u - z||_P^2 subject to C u = e via the KKT system
  //   [2P  C'] [u     ]   [2 P z]
  //   [C   0 ] [lambda] = [e    ]
  int d = p.dim();
  int k = constraint.rows();
  DenseMatrix kkt(d + k, d + k);
  Vector e(d, 0.0);
  for (int j = 0; j < d; ++j) {
    e[j] = 1.0;
    Vector col = p.apply(e);
    for (int i = 0; i < d; ++i) kkt(i, j) = 2.0 * col[i];
    e[j] = 0.0;
  }
  for (const Triplet& t : constraint.to_triplets()) {
    kkt(d + t.row, t.col) = t.value;
    kkt(t.col, d + t.row) = t.value;
  }
  Vector rhs_full(d + k, 0.0);
  Vector pz = p.apply(z);
  for (int i = 0; i < d; ++i) rhs_full[i] = 2.0 * pz[i];
  for (int i = 0; i < k; ++i) rhs_full[d + i] = rhs[i];
  Vector sol = lu_solve(lu_factor(std::move(kkt)), rhs_full);
  Vector diff(d);
  for (int i = 0; i < d; ++i) diff[i] = sol[i] - z[i];
  return std::sqrt(std::max(p.quad_form(diff), 0.0));
}

SaddleProblem::SaddleProblem(ProxFunction f, ProxFunction g,
                             std::shared_ptr<const SparseMatrix> a)
    : f_(std::move(f)), g_(std::move(g)), a_(std::move(a)) {
  if (!a_) throw InvalidInputError("SaddleProblem: missing coupling matrix");
  if (a_->rows() != g_.dim() || a_->cols() != f_.dim()) {
    throw InvalidInputError("SaddleProblem: coupling dimensions do not match f, g");
  }
  a_norm_ = operator_norm(*a_);
}

SaddleProblem::OperatorParts SaddleProblem::operator_parts(
    std::span<const double> z) const {
  if (static_cast<int>(z.size()) != dim()) {
    throw InvalidInputError("operator_parts: dimension mismatch");
  }
  auto x = z.subspan(0, n());
  auto y = z.subspan(n(), m());
  OperatorParts parts;
  parts.d.resize(dim());
  std::span<double> dx(parts.d.data(), n());
  std::span<double> dy(parts.d.data() + n(), m());
  a_->multiply_transpose(y, dx);
  a_->multiply(x, dy);
  for (int j = 0; j < m(); ++j) dy[j] = -dy[j];
  parts.g = SubdiffSet::concat(f_.subdiff_at(x), g_.subdiff_at(y));
  return parts;
}

double SaddleProblem::membership_residual(std::span<const double> z,
                                          std::span<const double> w) const {
  if (w.size() != z.size()) {
    throw InvalidInputError("membership_residual: dimension mismatch");
  }
  OperatorParts parts = operator_parts(z);
  Vector shifted = subtract(w, parts.d);
  return parts.g.membership_residual(shifted);
}

double SaddleProblem::lagrangian(std::span<const double> x,
                                 std::span<const double> y) const {
  double fx = f_.value(x);
  double gy = g_.value(y);
  if (std::isinf(fx)) return fx;
  if (std::isinf(gy)) return -gy;
  Vector ax = a_->apply(x);
  return fx + dot(y, ax) - gy;
}

void SaddleProblem::set_optimum(Vector z_star) {
  if (static_cast<int>(z_star.size()) != dim()) {
    throw InvalidInputError("set_optimum: dimension mismatch");
  }
  require_finite(z_star, "z_star");
  Vector zero(dim(), 0.0);
  double res = membership_residual(z_star, zero);
  if (res > 1e-8) {
    throw InvalidInputError(
        "set_optimum: 0 is not in F(z_star), residual " + std::to_string(res));
  }
  z_star_ = std::move(z_star);
}

SaddleProblem lp_to_saddle(const LpInstance& lp) {
  lp.validate();
  SaddleProblem p(ProxFunction::linear_plus_nonneg(lp.c),
                  ProxFunction::linear(lp.b), lp.a);
  p.set_lp(lp);
  return p;
}

double kkt_residual_saddle(const LpInstance& lp, std::span<const double> z) {
  if (static_cast<int>(z.size()) != lp.n() + lp.m()) {
    throw InvalidInputError("kkt_residual_saddle: dimension mismatch");
  }
  Vector y_std(lp.m());
  for (int j = 0; j < lp.m(); ++j) y_std[j] = -z[lp.n() + j];
  return kkt_residual(lp, z.subspan(0, lp.n()), y_std);
}

namespace {

bool is_affine_kind(ProxKind k) {
  return k == ProxKind::kZero || k == ProxKind::kLinear;
}

}  // namespace

SubregularityCert subregularity_alpha(
    const SaddleProblem& p, double s,
    std::optional<std::span<const double>> z0) {
  if (s <= 0) throw InvalidInputError("subregularity_alpha: s must be positive");
  SubregularityCert cert;
  ProxKind fk = p.f().kind();
  ProxKind gk = p.g().kind();

  if (is_affine_kind(fk) && is_affine_kind(gk)) {
    cert.alpha = 0.5 * s * sigma_min_positive(p.coupling());
    cert.whole_space = true;
    cert.source = SubregularitySource::kBilinear;
    return cert;
  }
  if (fk == ProxKind::kHalfSqNorm && gk == ProxKind::kHalfSqNorm) {
    double mu = std::min(p.f().weight(), p.g().weight());
    cert.alpha = 0.25 * s * mu;
    cert.whole_space = true;
    cert.source = SubregularitySource::kStronglyConvex;
    return cert;
  }
  if (fk == ProxKind::kLinearPlusNonneg && gk == ProxKind::kLinear) {
    // The constant exists on the P-ball reached from z0 but involves a
    // Hoffman bound that is not computed here; report the region only.
    cert.source = SubregularitySource::kLpHoffman;
    if (z0.has_value() && p.optimum().has_value()) {
      const Vector& zs = *p.optimum();
      Vector diff = subtract(*z0, zs);
      MetricMatrix ps = MetricMatrix::pdhg(s, p.coupling_ptr());
      cert.region_radius = std::sqrt(std::max(ps.quad_form(diff), 0.0));
      cert.iterate_bound = 2.0 * norm2(diff) + norm2(zs);
    }
    return cert;
  }
  cert.source = SubregularitySource::kUnknown;
  return cert;
}

}  // namespace pdids
