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

#ifndef PDIDS_INSTANCES_HPP_
#define PDIDS_INSTANCES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "pdids/problem.hpp"

namespace pdids {

enum class InstanceKind {
  kBilinear,
  kTightnessLinear,
  kTightnessSublinear,
  kRandomLp,
  kStronglyConvex,
  kLoaded  // read from a file, origin unknown
};

const char* instance_kind_name(InstanceKind kind);
InstanceKind instance_kind_from_name(const std::string& name);

// A generated problem plus the side information the audits need: the start
// point, the planted optimum (inside the problem), and the parameters behind
// the worst-case envelopes.
struct InstanceSpec {
  InstanceKind kind = InstanceKind::kLoaded;
  SaddleProblem problem;
  Vector z0;
  // extra generator parameters, serialized into the instance file's meta
  // section (sigma_min, c_factor, k_target, mu, seed, ...)
  std::map<std::string, double> meta;

  explicit InstanceSpec(SaddleProblem p) : problem(std::move(p)) {}

  SubregularityCert cert_for(double s) const;

  // Worst-case decay floor for the linear-tightness construction:
  // (1/12) (1 - 4 alpha_s^2)^k ids0 with alpha_s = (s/2) sigma_min.
  double linear_lower_envelope(long k, double s, double ids0) const;
  // Floor at the targeted iteration for the sublinear-tightness
  // construction: ||z0 - z*||_P^2 / (48 c^2 e^{4/c^2} k).
  double sublinear_lower_envelope(long k, double z0_dist_p_sq) const;
};

// f = linear(c), g = linear(b); the planted optimum is the minimum-norm
// solution of A'y = -c, A x = b. Inconsistent systems (no saddle) throw.
InstanceSpec gen_bilinear(Vector c, Vector b, SparseMatrix a);

// f = g = 0, A = diag(sigma) with ascending positive sigma, z0 = e1.
// Requires s <= 1/(2 sigma_max).
InstanceSpec gen_tightness_linear(int m, Vector sigma, double s);

// Diagonal construction with sigma_1 = L_A / sqrt(k_target), the remaining
// m - 1 entries L_A, and the step s = 1/(c_factor L_A) recorded in meta.
// Needs m >= 2 and c_factor >= 2.
InstanceSpec gen_tightness_sublinear(long k_target, double c_factor, double l_a,
                                     int m);

// Standard-form LP with a planted strictly complementary primal-dual pair:
// at most m positive x* entries (each >= 0.1), b = A x*, c = A'y* + r with
// the slack r >= 0.1 exactly off the support. Deterministic per seed.
InstanceSpec gen_random_lp(int n, int m, double density, std::uint64_t seed);

// f = g = half_sq_norm(mu); z* = 0.
InstanceSpec gen_strongly_convex(double mu, SparseMatrix a);

}  // namespace pdids

#endif  // PDIDS_INSTANCES_HPP_
