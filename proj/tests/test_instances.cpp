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

#include "doctest.h"
#include "pdids/errors.hpp"
#include "pdids/harness.hpp"
#include "pdids/ids.hpp"
#include "pdids/instances.hpp"
#include "pdids/solvers.hpp"

using namespace pdids;

TEST_CASE("bilinear generator plants the minimum-norm saddle point") {
  InstanceSpec fig = gen_bilinear({0.0}, {0.0},
                                  SparseMatrix::diagonal(Vector{1.0}));
  REQUIRE(fig.problem.optimum().has_value());
  CHECK(norm2(*fig.problem.optimum()) <= 1e-12);
  CHECK(fig.z0 == Vector{1.0, 1.0});

  InstanceSpec diag = gen_bilinear(Vector(2, 0.0), Vector(2, 0.0),
                                   SparseMatrix::diagonal(Vector{1.0, 2.0}));
  CHECK(norm2(*diag.problem.optimum()) <= 1e-12);
  CHECK(diag.meta.at("sigma_min") == doctest::Approx(1.0));

  InstanceSpec shifted = gen_bilinear({1.0}, {1.0},
                                      SparseMatrix::diagonal(Vector{1.0}));
  const Vector& z_star = *shifted.problem.optimum();
  CHECK(z_star[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z_star[1] == doctest::Approx(-1.0).epsilon(1e-12));

  // b outside range(A) leaves no saddle point
  SparseMatrix tall = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  CHECK_THROWS_WITH_AS(gen_bilinear({0.0}, {1.0, 2.0}, tall),
                       doctest::Contains("no saddle"), InvalidInputError);
}

TEST_CASE("tightness construction records its recursion data") {
  InstanceSpec spec = gen_tightness_linear(1, {1.0}, 0.25);
  CHECK(spec.z0 == Vector{1.0, 0.0});
  CHECK(spec.meta.at("s") == 0.25);
  CHECK(spec.meta.at("sigma_min") == 1.0);

  // the two-dimensional recursion matrix [[1-2s^2 sigma^2, -s sigma],
  // [s sigma, 1]] for s = 0.25, sigma = 1
  double s = 0.25, sigma = 1.0;
  double m00 = 1.0 - 2.0 * s * s * sigma * sigma;
  CHECK(m00 == doctest::Approx(0.875));
  Vector a1 = {m00 * 1.0, s * sigma * 1.0};
  CHECK(a1[0] == doctest::Approx(0.875));
  CHECK(a1[1] == doctest::Approx(0.25));
  double norm_sq = a1[0] * a1[0] + a1[1] * a1[1];
  CHECK(norm_sq == doctest::Approx(0.828125));
  CHECK(norm_sq >= (1.0 / 3.0) * (1.0 - s * s * sigma * sigma) * 1.0);

  // ids at the start point is strictly positive
  SolverConfig cfg;
  cfg.step_size = 0.25;
  MetricMatrix metric = metric_for(spec.problem, cfg);
  IdsResult r = ids_evaluate(spec.problem, metric, spec.z0);
  CHECK(r.value > 0.0);

  CHECK_THROWS_AS(gen_tightness_linear(1, {1.0}, 0.6), InvalidInputError);
  CHECK_THROWS_AS(gen_tightness_linear(2, {2.0, 1.0}, 0.1), InvalidInputError);
}

TEST_CASE("sublinear tightness construction pins sigma and s") {
  InstanceSpec spec = gen_tightness_sublinear(100, 2.0, 1.0, 2);
  CHECK(spec.meta.at("sigma_min") == doctest::Approx(0.1));
  CHECK(spec.meta.at("sigma_max") == doctest::Approx(1.0));
  CHECK(spec.meta.at("s") == doctest::Approx(0.5));
  CHECK(spec.meta.at("k_target") == 100.0);
  // envelope constant at c = 2 is 1/(192 e)
  double envelope = spec.sublinear_lower_envelope(100, 1.0);
  CHECK(envelope == doctest::Approx(1.0 / (192.0 * std::exp(1.0) * 100.0)));

  CHECK_THROWS_AS(gen_tightness_sublinear(100, 2.0, 1.0, 1), InvalidInputError);
  CHECK_THROWS_AS(gen_tightness_sublinear(100, 1.5, 1.0, 2), InvalidInputError);
}

TEST_CASE("random lp plants a strictly complementary optimum") {
  InstanceSpec spec = gen_random_lp(2, 1, 1.0, 12);
  const LpInstance& lp = *spec.problem.lp();
  const Vector& z_star = *spec.problem.optimum();
  Vector y_std(lp.m());
  for (int j = 0; j < lp.m(); ++j) y_std[j] = -z_star[lp.n() + j];
  CHECK(kkt_residual(lp, Vector(z_star.begin(), z_star.begin() + lp.n()), y_std) <=
        1e-10);
  Vector zero(spec.problem.dim(), 0.0);
  CHECK(spec.problem.membership_residual(z_star, zero) <= 1e-8);

  // strict margins on the support and the slack
  int positives = 0;
  for (int j = 0; j < lp.n(); ++j) {
    double xj = z_star[j];
    if (xj > 0) {
      CHECK(xj >= 0.1);
      ++positives;
    }
  }
  CHECK(positives <= lp.m());

  CHECK_THROWS_AS(gen_random_lp(2, 2, 0.5, 1), InvalidInputError);
  CHECK_THROWS_AS(gen_random_lp(4, 2, 0.0, 1), InvalidInputError);
}

TEST_CASE("random lp generation is bit-identical per seed") {
  InstanceSpec a = gen_random_lp(8, 4, 0.4, 77);
  InstanceSpec b = gen_random_lp(8, 4, 0.4, 77);
  CHECK(a.problem.coupling().values() == b.problem.coupling().values());
  CHECK(a.problem.coupling().col_indices() == b.problem.coupling().col_indices());
  CHECK(a.problem.lp()->c == b.problem.lp()->c);
  CHECK(a.problem.lp()->b == b.problem.lp()->b);
  CHECK(*a.problem.optimum() == *b.problem.optimum());

  InstanceSpec c = gen_random_lp(8, 4, 0.4, 78);
  CHECK(a.problem.lp()->c != c.problem.lp()->c);
}

TEST_CASE("strongly convex generator and its rate constant") {
  InstanceSpec spec = gen_strongly_convex(2.0, SparseMatrix::diagonal(Vector{1.0}));
  CHECK(norm2(*spec.problem.optimum()) == 0.0);
  SubregularityCert cert = spec.cert_for(0.1);
  REQUIRE(cert.alpha.has_value());
  CHECK(*cert.alpha == doctest::Approx(0.05));

  // F is single-valued, so the inner solver finishes at its start point
  SolverConfig cfg;
  cfg.max_iters = 400;
  cfg.ids_every = 1;
  RunResult rr = run(spec.problem, cfg, Vector{1.0, 1.0});
  for (const TraceRow& row : rr.trace.rows) {
    CHECK(*row.agd_iters == 0);
  }
  // measured decay at least as fast as the certified linear rate; the fit
  // window sits early because the iteration contracts to the noise floor
  // within a few dozen steps
  auto [s_used, unused] = resolve_steps(spec.problem, cfg);
  (void)unused;
  double alpha_used = *spec.cert_for(s_used).alpha;
  long threshold =
      static_cast<long>(std::ceil(std::exp(1.0) / (alpha_used * alpha_used)));
  RateFit fit = fit_rate(rr.trace, 1, 20);
  CHECK(fit.slope <= -1.0 / static_cast<double>(threshold) + 1e-12);
}

TEST_CASE("tightness runs respect the worst-case floors") {
  // linear floor: ids_k >= (1/12)(1 - 4 alpha^2)^k ids_0 for k <= 500
  InstanceSpec spec = gen_tightness_linear(1, {1.0}, 0.25);
  SolverConfig cfg;
  cfg.step_size = 0.25;
  cfg.max_iters = 500;
  cfg.ids_every = 1;
  RunResult rr = run(spec.problem, cfg, spec.z0);
  double ids0 = *rr.trace.rows[0].ids;
  for (const TraceRow& row : rr.trace.rows) {
    double env = spec.linear_lower_envelope(row.k, 0.25, ids0);
    CHECK(*row.ids >= env - 1e-12);
  }

  // sublinear floor at the targeted iteration
  InstanceSpec sub = gen_tightness_sublinear(100, 2.0, 1.0, 2);
  SolverConfig sub_cfg;
  sub_cfg.step_size = sub.meta.at("s");
  sub_cfg.max_iters = 100;
  sub_cfg.ids_every = 1;
  MetricMatrix metric = metric_for(sub.problem, sub_cfg);
  RunResult sub_rr = run(sub.problem, sub_cfg, sub.z0);
  double d0 = metric.quad_form(subtract(sub.z0, *sub.problem.optimum()));
  double floor = sub.sublinear_lower_envelope(100, d0);
  CHECK(*sub_rr.trace.rows.back().ids >= floor - 1e-12);
}

TEST_CASE("two-dimensional recursion keeps a third of its energy") {
  for (double s_sigma : {0.1, 0.25, 0.49}) {
    double m00 = 1.0 - 2.0 * s_sigma * s_sigma;
    Vector a_vec = {1.0, 0.0};
    double a0_sq = 1.0;
    for (int k = 1; k <= 200; ++k) {
      Vector next = {m00 * a_vec[0] - s_sigma * a_vec[1],
                     s_sigma * a_vec[0] + a_vec[1]};
      a_vec = next;
      double floor =
          (1.0 / 3.0) * std::pow(1.0 - s_sigma * s_sigma, k) * a0_sq;
      CHECK(dot(a_vec, a_vec) >= floor - 1e-12);
    }
  }
}
