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

#ifndef PDIDS_IDS_HPP_
#define PDIDS_IDS_HPP_

#include <optional>
#include <span>
#include <utility>

#include "pdids/metric.hpp"
#include "pdids/problem.hpp"

namespace pdids {

// Infimal sub-differential size: the squared P^{-1}-distance from 0 to the
// combined operator F(z) = d(z) + G(z),
//
//   ids(z) = min_{w in G(z)} || w + d(z) ||^2_{P^{-1}} .
//
// The minimization is a convex QP over a product of intervals, solved by
// accelerated projected gradient with momentum fixed from the condition
// number of P^{-1}. With the default step-size rule kappa <= 4, so the inner
// iteration count is independent of the problem dimension.

struct AgdConfig {
  double tolerance = 1e-10;  // projected-gradient first-order residual
  int max_iters = 500;
  // Overrides for the smoothness constant beta = 2 lambda_max(P^{-1}) and the
  // condition number kappa; derived from the metric's spectral bounds when
  // absent.
  std::optional<double> beta;
  std::optional<double> kappa;
};

struct IdsResult {
  double value = 0.0;  // squared P^{-1} (or P^-) distance
  // the minimizing member of F(z) itself (subgradient selection plus the
  // affine part), so value == || witness ||^2 in the inverse metric
  Vector witness;
  int agd_iters = 0;
  double optimality_residual = 0.0;
  bool converged = true;
  // Range-restricted evaluations may only certify an upper bound.
  bool upper_bound_only = false;
  // Set when F(z) does not meet range(P): the restricted distance is empty.
  bool empty_intersection = false;
};

// Exact IDS at z for a positive definite metric. Starts from the projection
// of -d(z) onto G(z), which finishes singleton sets in zero iterations.
// A hit on the iteration cap returns a flagged (converged = false) result.
IdsResult ids_evaluate(const SaddleProblem& p, const MetricMatrix& metric,
                       std::span<const double> z, const AgdConfig& cfg = {});

// ||z_k - z_next||_P^2, the decay certificate: it equals the squared
// P^{-1}-norm of P(z_k - z_next), a member of F(z_next) for every solver in
// this library, so it upper-bounds ids(z_next).
double ids_certificate(const MetricMatrix& metric, std::span<const double> z_k,
                       std::span<const double> z_next);

struct GapCertificate {
  double bound = 0.0;                // sqrt(ids) * ||z_k - z_ref||_P
  std::optional<double> actual_gap;  // L(x_k, y_ref) - L(x_ref, y_k) if finite
};

// Certified bound on the primal-dual gap against a reference point.
GapCertificate gap_certificate(const SaddleProblem& p, const MetricMatrix& metric,
                               std::span<const double> z_k,
                               std::span<const double> z_ref, double ids_value);

// IDS for the semi-definite admm metric, restricted to range(P):
//   dist^2_{P^-}(0, F(z) intersect range(P)).
// Singleton G: membership of d + g in range(P) is checked (projection residual
// <= 1e-8) and the distance is exact, or the intersection is flagged empty.
// Non-singleton G: requires a step witness (z_prev, z_cur); the returned value
// ||z_prev - z_cur||_P^2 is an upper bound and flagged as such.
IdsResult ids_range_restricted(
    const SaddleProblem& p, const MetricMatrix& metric, std::span<const double> z,
    std::optional<std::pair<std::span<const double>, std::span<const double>>>
        step_witness = std::nullopt);

}  // namespace pdids

#endif  // PDIDS_IDS_HPP_
