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

#include "pdids/instances.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "pdids/errors.hpp"

namespace pdids {

const char* instance_kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kBilinear:
      return "bilinear";
    case InstanceKind::kTightnessLinear:
      return "tightness_linear";
    case InstanceKind::kTightnessSublinear:
      return "tightness_sublinear";
    case InstanceKind::kRandomLp:
      return "random_lp";
    case InstanceKind::kStronglyConvex:
      return "strongly_convex";
    case InstanceKind::kLoaded:
      return "loaded";
  }
  return "?";
}

InstanceKind instance_kind_from_name(const std::string& name) {
  if (name == "bilinear") return InstanceKind::kBilinear;
  if (name == "tightness_linear") return InstanceKind::kTightnessLinear;
  if (name == "tightness_sublinear") return InstanceKind::kTightnessSublinear;
  if (name == "random_lp") return InstanceKind::kRandomLp;
  if (name == "strongly_convex") return InstanceKind::kStronglyConvex;
  if (name == "loaded") return InstanceKind::kLoaded;
  throw InvalidInputError("unknown instance kind: " + name);
}

SubregularityCert InstanceSpec::cert_for(double s) const {
  return subregularity_alpha(problem, s, std::span<const double>(z0));
}

double InstanceSpec::linear_lower_envelope(long k, double s, double ids0) const {
  auto it = meta.find("sigma_min");
  if (it == meta.end()) {
    throw InvalidInputError(
        "linear_lower_envelope: instance has no sigma_min metadata");
  }
  double alpha = 0.5 * s * it->second;
  return (1.0 / 12.0) * std::pow(1.0 - 4.0 * alpha * alpha, static_cast<double>(k)) *
         ids0;
}

double InstanceSpec::sublinear_lower_envelope(long k,
                                              double z0_dist_p_sq) const {
  auto it = meta.find("c_factor");
  if (it == meta.end()) {
    throw InvalidInputError(
        "sublinear_lower_envelope: instance has no c_factor metadata");
  }
  double c = it->second;
  return z0_dist_p_sq /
         (48.0 * c * c * std::exp(4.0 / (c * c)) * static_cast<double>(k));
}

InstanceSpec gen_bilinear(Vector c, Vector b, SparseMatrix a) {
  require_finite(c, "gen_bilinear c");
  require_finite(b, "gen_bilinear b");
  int n = a.cols(), m = a.rows();
  if (static_cast<int>(c.size()) != n || static_cast<int>(b.size()) != m) {
    throw InvalidInputError("gen_bilinear: dimension mismatch");
  }
  auto a_ptr = std::make_shared<const SparseMatrix>(std::move(a));

  // saddle points solve A x = b and A'y = -c; take minimum-norm solutions
  Vector x_star = least_squares_min_norm(*a_ptr, b);
  Vector neg_c(n);
  for (int i = 0; i < n; ++i) neg_c[i] = -c[i];
  // A'y = -c is a least-squares problem in A'
  SparseMatrix at;
  {
    std::vector<Triplet> ts;
    for (const Triplet& t : a_ptr->to_triplets()) {
      ts.push_back({t.col, t.row, t.value});
    }
    at = SparseMatrix::from_triplets(n, m, std::move(ts));
  }
  Vector y_star = least_squares_min_norm(at, neg_c);

  double res_primal = norm2(subtract(a_ptr->apply(x_star), b));
  double res_dual = norm2(subtract(at.apply(y_star), neg_c));
  double scale = 1.0 + norm2(c) + norm2(b);
  if (res_primal > 1e-8 * scale || res_dual > 1e-8 * scale) {
    throw InvalidInputError(
        "gen_bilinear: no saddle point (c not in range(A') or b not in "
        "range(A))");
  }

  SaddleProblem p(ProxFunction::linear(c), ProxFunction::linear(b), a_ptr);
  p.set_optimum(concat(x_star, y_star));

  // the whole optimal set is affine: { (x, y) : A x = b, A'y = -c }
  {
    std::vector<Triplet> ts;
    for (const Triplet& t : a_ptr->to_triplets()) {
      ts.push_back({t.row, t.col, t.value});         // A x = b rows
      ts.push_back({m + t.col, n + t.row, t.value});  // A'y = -c rows
    }
    OptimalSet set;
    set.constraint = SparseMatrix::from_triplets(m + n, n + m, std::move(ts));
    set.rhs = concat(b, neg_c);
    p.set_optimal_set(std::move(set));
  }

  InstanceSpec spec(std::move(p));
  spec.kind = InstanceKind::kBilinear;
  spec.z0.assign(n + m, 1.0);
  spec.meta["sigma_min"] = sigma_min_positive(*a_ptr);
  return spec;
}

InstanceSpec gen_tightness_linear(int m, Vector sigma, double s) {
  if (m < 1 || static_cast<int>(sigma.size()) != m) {
    throw InvalidInputError("gen_tightness_linear: need m >= 1 sigma values");
  }
  for (int i = 0; i < m; ++i) {
    if (sigma[i] <= 0 || (i > 0 && sigma[i] < sigma[i - 1])) {
      throw InvalidInputError(
          "gen_tightness_linear: sigma must be positive and ascending");
    }
  }
  if (s <= 0 || s > 1.0 / (2.0 * sigma.back())) {
    throw InvalidInputError(
        "gen_tightness_linear: requires 0 < s <= 1/(2 sigma_max)");
  }
  auto a_ptr =
      std::make_shared<const SparseMatrix>(SparseMatrix::diagonal(sigma));
  SaddleProblem p(ProxFunction::zero(m), ProxFunction::zero(m), a_ptr);
  p.set_optimum(Vector(2 * m, 0.0));

  InstanceSpec spec(std::move(p));
  spec.kind = InstanceKind::kTightnessLinear;
  spec.z0.assign(2 * m, 0.0);
  spec.z0[0] = 1.0;  // first basis vector
  spec.meta["sigma_min"] = sigma.front();
  spec.meta["sigma_max"] = sigma.back();
  spec.meta["s"] = s;
  return spec;
}

InstanceSpec gen_tightness_sublinear(long k_target, double c_factor, double l_a,
                                     int m) {
  if (k_target < 1) {
    throw InvalidInputError("gen_tightness_sublinear: k_target must be >= 1");
  }
  if (c_factor < 2.0) {
    throw InvalidInputError("gen_tightness_sublinear: c_factor must be >= 2");
  }
  if (l_a <= 0) {
    throw InvalidInputError("gen_tightness_sublinear: L_A must be positive");
  }
  if (m < 2) {
    throw InvalidInputError(
        "gen_tightness_sublinear: needs m >= 2 (one slow mode plus the block "
        "at sigma = L_A)");
  }
  Vector sigma(m, l_a);
  sigma[0] = l_a / std::sqrt(static_cast<double>(k_target));
  double s = 1.0 / (c_factor * l_a);
  InstanceSpec spec = gen_tightness_linear(m, std::move(sigma), s);
  spec.kind = InstanceKind::kTightnessSublinear;
  spec.meta["k_target"] = static_cast<double>(k_target);
  spec.meta["c_factor"] = c_factor;
  spec.meta["l_a"] = l_a;
  return spec;
}

InstanceSpec gen_random_lp(int n, int m, double density, std::uint64_t seed) {
  if (!(n > m && m >= 1)) {
    throw InvalidInputError("gen_random_lp: requires n > m >= 1");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw InvalidInputError("gen_random_lp: density must be in (0, 1]");
  }
  SplitMix64 rng(seed);

  SparseMatrix a;
  const int kRetries = 64;
  bool ok = false;
  for (int attempt = 0; attempt < kRetries && !ok; ++attempt) {
    std::vector<Triplet> ts;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        if (rng.next_double() < density) {
          ts.push_back({i, j, rng.uniform(-1.0, 1.0)});
        }
      }
    }
    a = SparseMatrix::from_triplets(m, n, std::move(ts));
    ok = true;
    for (int i = 0; i < m && ok; ++i) {
      if (a.row_offsets()[i + 1] == a.row_offsets()[i]) ok = false;
    }
    std::vector<bool> col_hit(n, false);
    for (int c : a.col_indices()) col_hit[c] = true;
    for (int j = 0; j < n && ok; ++j) {
      if (!col_hit[j]) ok = false;
    }
  }
  if (!ok) {
    throw NumericalError(
        "gen_random_lp: could not sample a matrix without empty rows or "
        "columns");
  }

  // support of size m with margins, for strict complementarity
  std::vector<int> perm(n);
  for (int j = 0; j < n; ++j) perm[j] = j;
  for (int j = n - 1; j > 0; --j) {
    std::swap(perm[j], perm[rng.next_below(j + 1)]);
  }
  std::vector<bool> support(n, false);
  for (int j = 0; j < m; ++j) support[perm[j]] = true;

  Vector x_star(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (support[j]) x_star[j] = 0.1 + 0.9 * rng.next_double();
  }
  Vector y_star(m);
  for (int i = 0; i < m; ++i) y_star[i] = rng.uniform(-1.0, 1.0);

  LpInstance lp;
  lp.a = std::make_shared<const SparseMatrix>(std::move(a));
  lp.b = lp.a->apply(x_star);
  lp.c = lp.a->apply_transpose(y_star);
  for (int j = 0; j < n; ++j) {
    if (!support[j]) lp.c[j] += 0.1 + 0.9 * rng.next_double();
  }

  SaddleProblem p = lp_to_saddle(lp);
  // the saddle dual is the negated standard dual
  Vector y_saddle(m);
  for (int i = 0; i < m; ++i) y_saddle[i] = -y_star[i];
  p.set_optimum(concat(x_star, y_saddle));

  InstanceSpec spec(std::move(p));
  spec.kind = InstanceKind::kRandomLp;
  spec.z0.assign(n + m, 1.0);
  spec.meta["seed"] = static_cast<double>(seed);
  spec.meta["density"] = density;
  return spec;
}

InstanceSpec gen_strongly_convex(double mu, SparseMatrix a) {
  if (mu <= 0) throw InvalidInputError("gen_strongly_convex: mu must be positive");
  int n = a.cols(), m = a.rows();
  auto a_ptr = std::make_shared<const SparseMatrix>(std::move(a));
  SaddleProblem p(ProxFunction::half_sq_norm(n, mu),
                  ProxFunction::half_sq_norm(m, mu), a_ptr);
  p.set_optimum(Vector(n + m, 0.0));
  InstanceSpec spec(std::move(p));
  spec.kind = InstanceKind::kStronglyConvex;
  spec.z0.assign(n + m, 1.0);
  spec.meta["mu"] = mu;
  return spec;
}

}  // namespace pdids
