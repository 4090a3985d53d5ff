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

#ifndef PDIDS_PROBLEM_HPP_
#define PDIDS_PROBLEM_HPP_

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pdids/linalg.hpp"
#include "pdids/prox.hpp"

namespace pdids {

// min_x c'x  s.t.  A x = b, x >= 0.
struct LpInstance {
  Vector c;
  std::shared_ptr<const SparseMatrix> a;
  Vector b;

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(b.size()); }
  void validate() const;
};

// Stacked KKT residual || (Ax - b; [A'y - c]+; [c'x - b'y]+) ||_2 for the
// standard-form LP, with y in the convention where A'y <= c at optimality.
// Slightly negative x entries are clamped to zero before evaluation.
double kkt_residual(const LpInstance& lp, std::span<const double> x,
                    std::span<const double> y);

// Affine description { z : C z = e } of an optimal solution set, available
// for bilinear instances. dist_p is an equality-constrained least-squares
// solve, so dimensions are expected to stay at desk scale.
struct OptimalSet {
  SparseMatrix constraint;  // C, over the stacked z
  Vector rhs;               // e

  double dist_p(const class MetricMatrix& p, std::span<const double> z) const;
};

// min_x max_y f(x) + <Ax, y> - g(y). The combined operator splits as
// F(z) = d(z) + G(z) with affine part d(z) = (A'y, -Ax) and set part
// G(z) = subdiff f(x) x subdiff g(y).
class SaddleProblem {
 public:
  SaddleProblem(ProxFunction f, ProxFunction g,
                std::shared_ptr<const SparseMatrix> a);

  int n() const { return f_.dim(); }
  int m() const { return g_.dim(); }
  int dim() const { return n() + m(); }

  const ProxFunction& f() const { return f_; }
  const ProxFunction& g() const { return g_; }
  const SparseMatrix& coupling() const { return *a_; }
  std::shared_ptr<const SparseMatrix> coupling_ptr() const { return a_; }
  // Power-iteration estimate of ||A||, computed once at construction.
  double coupling_norm() const { return a_norm_; }

  struct OperatorParts {
    Vector d;      // affine part, stacked (n + m)
    SubdiffSet g;  // set part, stacked (n + m)
  };
  // Throws InvalidInputError when x or y violates its domain beyond 1e-12.
  OperatorParts operator_parts(std::span<const double> z) const;

  // dist_2(w, F(z)); zero iff w is a member.
  double membership_residual(std::span<const double> z,
                             std::span<const double> w) const;

  // L(x, y); +-inf when an indicator is violated.
  double lagrangian(std::span<const double> x, std::span<const double> y) const;

  void set_optimum(Vector z_star);
  const std::optional<Vector>& optimum() const { return z_star_; }
  void set_optimal_set(OptimalSet set) { optimal_set_ = std::move(set); }
  const std::optional<OptimalSet>& optimal_set() const { return optimal_set_; }
  void set_lp(LpInstance lp) { lp_ = std::move(lp); }
  const std::optional<LpInstance>& lp() const { return lp_; }

 private:
  ProxFunction f_;
  ProxFunction g_;
  std::shared_ptr<const SparseMatrix> a_;
  double a_norm_ = 0.0;
  std::optional<Vector> z_star_;
  std::optional<OptimalSet> optimal_set_;
  std::optional<LpInstance> lp_;
};

// Saddle form of the LP: f = linear_plus_nonneg(c), g = linear(b). The
// saddle dual runs with the opposite sign, so a standard-convention
// optimal pair (x*, y*) plants z* = (x*, -y*).
SaddleProblem lp_to_saddle(const LpInstance& lp);

// KKT residual evaluated at a saddle iterate z = (x, y); maps the model dual
// back to the standard convention before evaluating.
double kkt_residual_saddle(const LpInstance& lp, std::span<const double> z);

enum class SubregularitySource {
  kBilinear,        // alpha = (s/2) sigma_min^+(A), global
  kStronglyConvex,  // alpha = s mu / 4, global
  kLpHoffman,       // constant depends on a Hoffman bound; not computed
  kUnknown
};

// Error-bound certificate alpha * dist_P(z, Z*) <= dist_{P^{-1}}(0, F(z)).
struct SubregularityCert {
  std::optional<double> alpha;
  bool whole_space = false;
  // P-ball radius around z_star when the certificate is regional.
  std::optional<double> region_radius;
  SubregularitySource source = SubregularitySource::kUnknown;
  // Iterate-norm bound 2||z0 - z*|| + ||z*||, recorded when derivable; the
  // Hoffman constant itself stays unavailable.
  std::optional<double> iterate_bound;
};

// Structural certificate for step size s. z0 (when given, together with a
// known optimum) fills in the regional radius and iterate bound for the LP
// case. Unknown structure yields an unavailable certificate, not an error.
SubregularityCert subregularity_alpha(
    const SaddleProblem& p, double s,
    std::optional<std::span<const double>> z0 = std::nullopt);

}  // namespace pdids

#endif  // PDIDS_PROBLEM_HPP_
