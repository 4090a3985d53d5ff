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

#ifndef PDIDS_PROX_HPP_
#define PDIDS_PROX_HPP_

#include <span>
#include <string>
#include <vector>

#include "pdids/linalg.hpp"

namespace pdids {

// Componentwise product of intervals [lower_i, upper_i]; a singleton is
// lower_i == upper_i and bounds may be +-inf. Every subdifferential in the
// catalogue is separable, which keeps the Euclidean projection exact and
// linear-time.
struct SubdiffSet {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  void append(double lo, double hi);
  void append_singleton(double v) { append(v, v); }

  Vector project(std::span<const double> v) const;  // componentwise clamp
  double membership_residual(std::span<const double> v) const;
  bool is_singleton() const;

  static SubdiffSet concat(const SubdiffSet& a, const SubdiffSet& b);
};

enum class ProxKind {
  kZero,
  kLinear,            // c'x
  kIndicatorNonneg,   // indicator of x >= 0
  kIndicatorBox,      // indicator of lo <= x <= hi
  kL1,                // weight * ||x||_1
  kHalfSqNorm,        // (mu/2)||x||^2 + shift'x
  kLinearPlusNonneg,  // c'x + indicator of x >= 0
  kIndicatorLinfBall  // indicator of ||x||_inf <= radius
};

const char* prox_kind_name(ProxKind kind);

// A proper closed convex function with a closed-form proximal map and an
// exact componentwise subdifferential description.
class ProxFunction {
 public:
  static ProxFunction zero(int dim);
  static ProxFunction linear(Vector c);
  static ProxFunction indicator_nonneg(int dim);
  static ProxFunction indicator_box(Vector lo, Vector hi);
  static ProxFunction l1(int dim, double weight);
  static ProxFunction half_sq_norm(int dim, double mu, Vector shift = {});
  static ProxFunction linear_plus_nonneg(Vector c);
  static ProxFunction linf_ball(int dim, double radius);

  ProxKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double weight() const { return weight_; }
  const Vector& coeff() const { return coeff_; }
  const Vector& box_lower() const { return lo_; }
  const Vector& box_upper() const { return hi_; }

  // +inf outside the domain (indicator violated beyond tolerance).
  double value(std::span<const double> x) const;
  bool in_domain(std::span<const double> x, double tol = 1e-12) const;

  // argmin_y { h(y) + (1/2 tau) ||y - v||^2 }
  Vector prox(double tau, std::span<const double> v) const;

  // Exact componentwise description of the subdifferential at x; throws
  // InvalidInputError when x violates an indicator domain beyond 1e-12.
  // Boundary classification compares against exact values: prox outputs land
  // on bounds exactly, so no epsilon thresholding of small components.
  SubdiffSet subdiff_at(std::span<const double> x) const;

  // Fenchel conjugate for the catalogued pairs:
  //   l1(w)            <-> linf_ball(w)
  //   half_sq_norm(mu, b) <-> half_sq_norm(1/mu, -b/mu)   (additive constant
  //                                                        |b|^2/(2 mu) dropped)
  //   linear(c)        <-> indicator_box(c, c)
  // Throws InvalidInputError naming the kind otherwise.
  ProxFunction conjugate() const;

 private:
  ProxFunction(ProxKind kind, int dim) : kind_(kind), dim_(dim) {}
  void check_dim(std::size_t n, const char* op) const;

  ProxKind kind_;
  int dim_;
  double weight_ = 0.0;
  Vector coeff_;
  Vector lo_;
  Vector hi_;
};

// Euclidean projection of v onto the subdifferential of h at x.
Vector project_subdiff(const ProxFunction& h, std::span<const double> x,
                       std::span<const double> v);

// ||v - project_subdiff(h, x, v)||_2; zero iff v is a subgradient of h at x.
double subdiff_membership_residual(const ProxFunction& h,
                                   std::span<const double> x,
                                   std::span<const double> v);

}  // namespace pdids

#endif  // PDIDS_PROX_HPP_
