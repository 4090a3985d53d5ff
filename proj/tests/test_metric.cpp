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

#include <algorithm>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "pdids/errors.hpp"
#include "pdids/metric.hpp"
#include "test_util.hpp"

using namespace pdids;

namespace {

std::shared_ptr<const SparseMatrix> scalar_a(double v) {
  return std::make_shared<const SparseMatrix>(
      SparseMatrix::from_triplets(1, 1, {{0, 0, v}}));
}

std::shared_ptr<const SparseMatrix> random_a(int m, int n, SplitMix64& rng,
                                             double density = 0.5) {
  std::vector<Triplet> ts;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (rng.next_double() < density) ts.push_back({i, j, rng.uniform(-1, 1)});
    }
  }
  if (ts.empty()) ts.push_back({0, 0, 1.0});
  return std::make_shared<const SparseMatrix>(
      SparseMatrix::from_triplets(m, n, std::move(ts)));
}

Vector random_vec(int d, SplitMix64& rng) {
  Vector v(d);
  for (double& x : v) x = rng.uniform(-1, 1);
  return v;
}

}  // namespace

TEST_CASE("metric apply matches the blockwise formulas") {
  MetricMatrix pdhg = MetricMatrix::pdhg(0.5, scalar_a(1.0));
  Vector z = {1.0, 0.0};
  Vector pz = pdhg.apply(z);
  CHECK(pz[0] == doctest::Approx(2.0));
  CHECK(pz[1] == doctest::Approx(-1.0));

  MetricMatrix ppm = MetricMatrix::ppm(0.5, 1, 1);
  Vector pz2 = ppm.apply(z);
  CHECK(pz2[0] == doctest::Approx(2.0));
  CHECK(pz2[1] == doctest::Approx(0.0));

  // admm metric [[1, -1], [-1, 1]] has (1, 1) in its kernel
  MetricMatrix admm = MetricMatrix::admm(1.0, scalar_a(1.0));
  Vector kernel = {1.0, 1.0};
  Vector pk = admm.apply(kernel);
  CHECK(pk[0] == doctest::Approx(0.0));
  CHECK(pk[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(pdhg.apply(Vector{1.0}), InvalidInputError);
}

TEST_CASE("metric solve inverts apply for every definite kind") {
  SplitMix64 rng(23);
  auto a = random_a(3, 4, rng);
  double norm = operator_norm(*a);
  double s = 1.0 / (2.0 * norm);
  double tau = s;
  double lambda = 1.05 * tau * norm * norm + 1e-12;

  MetricMatrix metrics[] = {MetricMatrix::pdhg(s, a),
                            MetricMatrix::ppm(0.7, 4, 3),
                            MetricMatrix::ladmm(tau, lambda, a)};
  for (const MetricMatrix& p : metrics) {
    CHECK(p.positive_definite());
    for (int t = 0; t < 100; ++t) {
      Vector z = random_vec(p.dim(), rng);
      Vector back = p.solve(p.apply(z));
      double err = norm2(subtract(back, z)) / (1.0 + norm2(z));
      CHECK(err <= 1e-10);
    }
  }
}

TEST_CASE("metric solve on fixed data") {
  MetricMatrix p = MetricMatrix::pdhg(0.5, scalar_a(1.0));
  // P = [[2, -1], [-1, 2]], inverse (1/3)[[2, 1], [1, 2]]
  Vector w = {0.0, -1.0};
  Vector v = p.solve(w);
  CHECK(v[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-11));
  CHECK(v[1] == doctest::Approx(-2.0 / 3.0).epsilon(1e-11));

  MetricMatrix q = MetricMatrix::ppm(0.3, 2, 1);
  Vector w2 = {1.0, -2.0, 0.5};
  Vector v2 = q.solve(w2);
  for (int i = 0; i < 3; ++i) {
    CHECK(v2[i] == doctest::Approx(0.3 * w2[i]).epsilon(1e-12));
  }
}

TEST_CASE("semi-definite kinds are rejected by solve") {
  MetricMatrix admm = MetricMatrix::admm(1.0, scalar_a(1.0));
  CHECK_THROWS_WITH_AS(admm.solve(Vector{1.0, 0.0}),
                       doctest::Contains("pseudo_inverse_apply"),
                       InvalidInputError);
  // pdhg with s ||A|| >= 1 is not definite either
  MetricMatrix bad = MetricMatrix::pdhg(2.0, scalar_a(1.0));
  CHECK(!bad.positive_definite());
  CHECK_THROWS_AS(bad.solve(Vector{1.0, 0.0}), InvalidInputError);
}

TEST_CASE("pseudo-inverse on the scalar admm metric") {
  MetricMatrix p = MetricMatrix::admm(1.0, scalar_a(1.0));
  // P = [[1, -1], [-1, 1]]; P^- = (1/4) P
  Vector w = {1.0, -1.0};
  Vector pw = p.pseudo_inverse_apply(w);
  CHECK(pw[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pw[1] == doctest::Approx(-0.5).epsilon(1e-12));

  Vector kernel = {2.0, 2.0};
  Vector pk = p.pseudo_inverse_apply(kernel);
  CHECK(std::abs(pk[0]) <= 1e-12);
  CHECK(std::abs(pk[1]) <= 1e-12);

  Vector proj = p.project_onto_range(Vector{1.0, 0.0});
  CHECK(proj[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(proj[1] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("forced dense pseudo-inverse matches conjugate gradients") {
  SplitMix64 rng(31);
  auto a = random_a(2, 3, rng);
  double s = 1.0 / (2.0 * operator_norm(*a));
  MetricMatrix p = MetricMatrix::pdhg(s, a);
  p.force_dense();
  for (int t = 0; t < 20; ++t) {
    Vector w = random_vec(5, rng);
    Vector via_cg = p.solve(w);
    Vector via_dense = p.pseudo_inverse_apply(w);
    CHECK(norm2(subtract(via_cg, via_dense)) <= 1e-8 * (1.0 + norm2(via_cg)));
  }
}

TEST_CASE("pseudo-inverse satisfies the Penrose identity") {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(4));
    int m = 2 + static_cast<int>(rng.next_below(4));
    auto a = random_a(m, n, rng, 0.7);
    MetricMatrix p = MetricMatrix::admm(0.5 + rng.next_double(), a);
    int d = p.dim();
    // P P^- P = P checked column by column
    Vector e(d, 0.0);
    for (int j = 0; j < d; ++j) {
      e[j] = 1.0;
      Vector col = p.apply(e);
      Vector recon = p.apply(p.pseudo_inverse_apply(col));
      CHECK(norm2(subtract(recon, col)) <= 1e-8 * (1.0 + norm2(col)));
      e[j] = 0.0;
    }
  }
}

TEST_CASE("pdhg metric spectrum stays inside the step-size band") {
  SplitMix64 rng(41);
  auto a = random_a(4, 6, rng);
  double norm = operator_norm(*a);
  double s = 1.0 / (2.0 * norm);
  MetricMatrix p = MetricMatrix::pdhg(s, a);
  // (s/2) I <= P^{-1} <= 2s I on random vectors
  for (int t = 0; t < 100; ++t) {
    Vector w = random_vec(p.dim(), rng);
    double wtw = dot(w, w);
    double quad = p.inv_quad_form(w);
    CHECK(quad >= 0.5 * s * wtw * (1.0 - 1e-9));
    CHECK(quad <= 2.0 * s * wtw * (1.0 + 1e-9));
  }
  CHECK(p.eigen_lower() >= 0.5 / s * (1.0 - 1e-8));
  CHECK(p.eigen_upper() <= 2.0 / s * (1.0 + 1e-8));
}

TEST_CASE("admm nonzero spectrum matches I/tau + tau A'A") {
  SplitMix64 rng(43);
  auto a = random_a(3, 2, rng, 0.9);
  double tau = 0.8;
  MetricMatrix p = MetricMatrix::admm(tau, a);
  Vector sv = singular_values(*a);
  pdids_test::Dense dense(p.dim(), p.dim());
  Vector e(p.dim(), 0.0);
  for (int j = 0; j < p.dim(); ++j) {
    e[j] = 1.0;
    Vector col = p.apply(e);
    for (int i = 0; i < p.dim(); ++i) dense.at(i, j) = col[i];
    e[j] = 0.0;
  }
  Vector vals;
  pdids_test::Dense vecs;
  pdids_test::jacobi_eig_oracle(std::move(dense), &vals, &vecs);
  std::sort(vals.begin(), vals.end());
  // kernel has dimension m; the n nonzero eigenvalues are 1/tau + tau sigma^2
  for (int j = 0; j < p.dual_dim(); ++j) CHECK(std::abs(vals[j]) <= 1e-10);
  for (int j = 0; j < p.primal_dim(); ++j) {
    double expected = 1.0 / tau + tau * sv[j] * sv[j];
    CHECK(vals[p.dual_dim() + j] == doctest::Approx(expected).epsilon(1e-9));
  }
}
