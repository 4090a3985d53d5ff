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

#include <cmath>
#include <memory>

#include "doctest.h"
#include "pdids/errors.hpp"
#include "pdids/instances.hpp"
#include "pdids/solvers.hpp"
#include "test_util.hpp"

using namespace pdids;

namespace {

std::shared_ptr<const SparseMatrix> scalar_a(double v) {
  return std::make_shared<const SparseMatrix>(
      SparseMatrix::from_triplets(1, 1, {{0, 0, v}}));
}

std::shared_ptr<const SparseMatrix> random_a(int m, int n, SplitMix64& rng,
                                             double density = 0.8) {
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

SaddleProblem bilinear_xy() {
  return SaddleProblem(ProxFunction::zero(1), ProxFunction::zero(1),
                       scalar_a(1.0));
}

// min_v ||v||_1 + (1/2)||A v - b||^2 in its minimax form (f, g*) with
// g*(y) = (1/2)||y||^2 + b'y
SaddleProblem lasso_problem(std::shared_ptr<const SparseMatrix> a, Vector b,
                            double weight) {
  int n = a->cols();
  int m = a->rows();
  REQUIRE(static_cast<int>(b.size()) == m);
  return SaddleProblem(ProxFunction::l1(n, weight),
                       ProxFunction::half_sq_norm(m, 1.0, std::move(b)),
                       std::move(a));
}

double inclusion_residual(const SaddleProblem& p, const MetricMatrix& metric,
                          const Vector& z_prev, const Vector& z_next) {
  Vector omega = metric.apply(subtract(z_prev, z_next));
  return p.membership_residual(z_next, omega);
}

}  // namespace

TEST_CASE("pdhg hand trace on min max xy") {
  SaddleProblem p = bilinear_xy();
  Vector z0 = {1.0, 0.0};
  Vector z1 = pdhg_step(p, 0.5, z0);
  CHECK(z1[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z1[1] == doctest::Approx(0.5).epsilon(1e-15));
  Vector z2 = pdhg_step(p, 0.5, z1);
  CHECK(z2[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(z2[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("pdhg fixes the optimum and rejects bad steps") {
  InstanceSpec spec =
      gen_bilinear({1.0}, {1.0}, SparseMatrix::diagonal(Vector{1.0}));
  const Vector& z_star = *spec.problem.optimum();
  CHECK(z_star[0] == doctest::Approx(1.0));
  CHECK(z_star[1] == doctest::Approx(-1.0));
  Vector next = pdhg_step(spec.problem, 0.4, z_star);
  CHECK(norm2(subtract(next, z_star)) <= 1e-12);

  CHECK_THROWS_AS(pdhg_step(spec.problem, 1.5, z_star), InvalidInputError);
}

TEST_CASE("ppm resolvent on the bilinear instance") {
  SaddleProblem p = bilinear_xy();
  Vector z1 = ppm_step(p, 0.5, Vector{1.0, 0.0});
  CHECK(z1[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(z1[1] == doctest::Approx(0.4).epsilon(1e-12));

  // defining property: (1/s)(z_k - z_{k+1}) in F(z_{k+1})
  MetricMatrix metric = MetricMatrix::ppm(0.5, 1, 1);
  CHECK(inclusion_residual(p, metric, {1.0, 0.0}, z1) <= 1e-8);

  InstanceSpec spec =
      gen_strongly_convex(2.0, SparseMatrix::diagonal(Vector{1.0, 2.0}));
  Vector fixed = ppm_step(spec.problem, 0.7, *spec.problem.optimum());
  CHECK(norm2(fixed) <= 1e-12);
}

TEST_CASE("ppm inner path handles indicator kinds") {
  InstanceSpec spec = gen_random_lp(3, 2, 0.9, 5);
  const SaddleProblem& p = spec.problem;
  MetricMatrix metric = MetricMatrix::ppm(0.3, p.n(), p.m());
  Vector z = spec.z0;
  for (int k = 0; k < 5; ++k) {
    Vector z_next = ppm_step(p, 0.3, z);
    CHECK(inclusion_residual(p, metric, z, z_next) <= 1e-8);
    z = z_next;
  }
}

TEST_CASE("ladmm raw updates agree with the closed forms on random data") {
  SplitMix64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_a(3, 2, rng);
    Vector b = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double weight = 0.5 + rng.next_double();
    double norm = operator_norm(*a);
    double tau = 1.0 / (2.0 * norm);
    double lambda = 1.05 * tau * norm * norm + 1e-12;

    ProxFunction f_conj = ProxFunction::l1(2, weight).conjugate();
    ProxFunction g_conj = ProxFunction::half_sq_norm(3, 1.0, b);
    AdmmState state;
    state.v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    state.y = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    // the step itself throws if the two routes disagree beyond 1e-10
    ladmm_step(f_conj, g_conj, *a, tau, lambda, state);
    ladmm_step(f_conj, g_conj, *a, tau, lambda, state);
  }
}

TEST_CASE("ladmm certifies the inclusion and fixes saddle points") {
  SplitMix64 rng(67);
  auto a = random_a(3, 2, rng);
  SaddleProblem p = lasso_problem(a, {0.2, -0.4, 0.1}, 1.0);
  double norm = p.coupling_norm();
  double tau = 1.0 / (2.0 * norm);
  double lambda = 1.05 * tau * norm * norm + 1e-12;
  MetricMatrix metric = MetricMatrix::ladmm(tau, lambda, a);

  ProxFunction f_conj = p.f().conjugate();
  AdmmState state;
  state.v = {0.5, -0.5};
  state.y = {0.1, 0.2, -0.3};
  for (int k = 0; k < 25; ++k) {
    Vector z_prev = concat(state.v, state.y);
    ladmm_step(f_conj, p.g(), *a, tau, lambda, state);
    Vector z_next = concat(state.v, state.y);
    CHECK(inclusion_residual(p, metric, z_prev, z_next) <= 1e-8);
  }

  // with b = 0 the saddle point of the lasso form is the origin
  SaddleProblem p0 = lasso_problem(a, {0.0, 0.0, 0.0}, 1.0);
  AdmmState at_saddle;
  at_saddle.v = {0.0, 0.0};
  at_saddle.y = {0.0, 0.0, 0.0};
  ladmm_step(p0.f().conjugate(), p0.g(), *a, tau, lambda, at_saddle);
  CHECK(norm2(at_saddle.v) <= 1e-12);
  CHECK(norm2(at_saddle.y) <= 1e-12);

  CHECK_THROWS_AS(ladmm_step(f_conj, p.g(), *a, tau, tau * norm * norm, state),
                  InvalidInputError);
}

TEST_CASE("admm y-subproblem matches a dense solve for quadratic g*") {
  // A = [1], tau = 1, g*(y) = (1/2)||y||^2 + b y: the update solves
  // (mu + tau A A') y = tau A r - b exactly
  auto a = scalar_a(1.0);
  Vector b = {0.3};
  ProxFunction f_conj = ProxFunction::l1(1, 1.0).conjugate();
  ProxFunction g_conj = ProxFunction::half_sq_norm(1, 1.0, b);
  AdmmState state;
  state.v = {0.8};
  state.y = {-0.2};
  double v_k = state.v[0], y_k = state.y[0];
  admm_step(f_conj, g_conj, *a, 1.0, state);

  // dense reference computed with scalar arithmetic
  double w_next = std::min(std::max(v_k / 1.0 - y_k, -1.0), 1.0);
  double v_next = v_k - (y_k + w_next);
  double r = y_k + (2.0 * v_next - v_k);
  double y_next = (r - b[0]) / 2.0;
  CHECK(state.v[0] == doctest::Approx(v_next).epsilon(1e-9));
  CHECK(state.y[0] == doctest::Approx(y_next).epsilon(1e-9));
}

TEST_CASE("admm certificate lies in range(P) and in F(z)") {
  SplitMix64 rng(71);
  auto a = random_a(3, 2, rng);
  SaddleProblem p = lasso_problem(a, {0.2, -0.1, 0.4}, 1.0);
  double tau = 1.0;
  MetricMatrix metric = MetricMatrix::admm(tau, a);
  ProxFunction f_conj = p.f().conjugate();
  AdmmState state;
  state.v = {0.7, -0.3};
  state.y = {0.0, 0.1, -0.2};
  for (int k = 0; k < 25; ++k) {
    Vector z_prev = concat(state.v, state.y);
    admm_step(f_conj, p.g(), *a, tau, state);
    Vector z_next = concat(state.v, state.y);
    CHECK(inclusion_residual(p, metric, z_prev, z_next) <= 1e-8);
    Vector omega = metric.apply(subtract(z_prev, z_next));
    Vector proj = metric.project_onto_range(omega);
    CHECK(norm2(subtract(proj, omega)) <= 1e-10 * (1.0 + norm2(omega)));
  }
}

TEST_CASE("admm rests at a saddle point") {
  SplitMix64 rng(79);
  auto a = random_a(3, 2, rng);
  // b = 0 makes the origin the saddle point of the lasso form
  SaddleProblem p0 = lasso_problem(a, {0.0, 0.0, 0.0}, 1.0);
  AdmmState state;
  state.v = {0.0, 0.0};
  state.y = {0.0, 0.0, 0.0};
  admm_step(p0.f().conjugate(), p0.g(), *a, 1.0, state);
  CHECK(norm2(state.v) <= 1e-12);
  CHECK(norm2(state.y) <= 1e-12);
}

TEST_CASE("pdhg on diagonal bilinear follows the linear recursion") {
  Vector sigma = {1.0, 2.0};
  InstanceSpec spec = gen_bilinear(Vector(2, 0.0), Vector(2, 0.0),
                                   SparseMatrix::diagonal(sigma));
  double s = 0.25;
  pdids_test::Dense mat =
      pdids_test::pdhg_recursion_matrix(spec.problem.coupling(), s);
  Vector z = {1.0, -0.5, 0.25, 1.0};
  Vector z_ref = z;
  for (int k = 0; k < 50; ++k) {
    z = pdhg_step(spec.problem, s, z);
    z_ref = mat.apply(z_ref);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(z[i] - z_ref[i]) <= 1e-12 * (1.0 + std::abs(z_ref[i])));
    }
  }
}

TEST_CASE("iterates contract toward the optimum in the algorithm metric") {
  for (auto algorithm : {Algorithm::kPdhg, Algorithm::kPpm}) {
    InstanceSpec spec =
        gen_bilinear({1.0, 0.0}, {0.5, -0.5},
                     SparseMatrix::diagonal(Vector{1.0, 2.0}));
    SolverConfig cfg;
    cfg.algorithm = algorithm;
    cfg.max_iters = 200;
    cfg.ids_every = 1;
    MetricMatrix metric = metric_for(spec.problem, cfg);
    RunResult rr = run(spec.problem, cfg, spec.z0);
    const Vector& z_star = *spec.problem.optimum();
    double prev = std::numeric_limits<double>::infinity();
    for (const Vector& z : rr.iterates) {
      double d = std::sqrt(metric.quad_form(subtract(z, z_star)));
      if (std::isfinite(prev)) CHECK(d <= prev + 1e-9);
      prev = d;
    }
  }
}

TEST_CASE("run instruments the expected rows") {
  SaddleProblem p = bilinear_xy();
  SolverConfig cfg;
  cfg.max_iters = 100;
  cfg.ids_every = 10;
  RunResult rr = run(p, cfg, Vector{1.0, 0.0});
  CHECK(rr.trace.rows.size() == 11);
  CHECK(rr.trace.rows.front().k == 0);
  CHECK(rr.trace.rows.back().k == 100);

  SolverConfig none;
  none.max_iters = 0;
  RunResult rr0 = run(p, none, Vector{1.0, 0.0});
  CHECK(rr0.trace.rows.size() == 1);

  // ids column reproduces the worked example from z0 = (1, 0), s = 1/2
  SolverConfig demo;
  demo.max_iters = 2;
  demo.step_size = 0.5;
  RunResult rr2 = run(p, demo, Vector{1.0, 0.0});
  REQUIRE(rr2.trace.rows.size() == 3);
  CHECK(*rr2.trace.rows[0].ids == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(*rr2.trace.rows[1].ids == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(*rr2.trace.rows[2].ids == doctest::Approx(0.375).epsilon(1e-10));
  // every audited row certifies the inclusion
  for (std::size_t i = 1; i < rr2.trace.rows.size(); ++i) {
    REQUIRE(rr2.trace.rows[i].inclusion_residual.has_value());
    CHECK(*rr2.trace.rows[i].inclusion_residual <= 1e-8);
  }
}

TEST_CASE("run drives the admm family end to end") {
  SplitMix64 rng(73);
  auto a = random_a(3, 2, rng);
  SaddleProblem lasso = lasso_problem(a, {0.2, -0.4, 0.1}, 1.0);

  for (auto algorithm : {Algorithm::kLadmm, Algorithm::kAdmm}) {
    SolverConfig cfg;
    cfg.algorithm = algorithm;
    cfg.max_iters = 30;
    cfg.ids_every = 5;
    RunResult rr = run(lasso, cfg, Vector{0.5, -0.5, 0.1, 0.2, -0.3});
    CHECK(rr.trace.rows.size() == 7);
    for (std::size_t i = 1; i < rr.trace.rows.size(); ++i) {
      const TraceRow& row = rr.trace.rows[i];
      REQUIRE(row.inclusion_residual.has_value());
      CHECK(*row.inclusion_residual <= 1e-8);
      REQUIRE(row.ids.has_value());
      REQUIRE(row.ids_certificate.has_value());
      CHECK(*row.ids <= *row.ids_certificate + 1e-9);
    }
  }
}

TEST_CASE("step-size defaults follow the coupling norm") {
  SaddleProblem p = bilinear_xy();
  SolverConfig cfg;
  auto [s, unused] = resolve_steps(p, cfg);
  (void)unused;
  CHECK(s == doctest::Approx(0.5).epsilon(1e-9));

  cfg.algorithm = Algorithm::kLadmm;
  auto [tau, lambda] = resolve_steps(p, cfg);
  CHECK(tau == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lambda > tau * p.coupling_norm() * p.coupling_norm());
}
