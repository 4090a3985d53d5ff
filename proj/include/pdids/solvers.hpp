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

#ifndef PDIDS_SOLVERS_HPP_
#define PDIDS_SOLVERS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "pdids/ids.hpp"
#include "pdids/metric.hpp"
#include "pdids/problem.hpp"

namespace pdids {

// Every engine here takes one step z_k -> z_{k+1} whose optimality conditions
// rearrange into the shared inclusion form
//
//   P (z_k - z_{k+1})  in  F(z_{k+1})
//
// for its metric P. run() audits that membership each step and instruments
// the trace with IDS, certificates and residuals.

enum class Algorithm { kPdhg, kPpm, kLadmm, kAdmm };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kPdhg;
  // pdhg/ppm step s; defaults to 1/(2||A||) when unset.
  std::optional<double> step_size;
  // ladmm/admm steps; tau defaults to 1/(2||A||) for ladmm and 1 for admm,
  // lambda to 1.05 tau ||A||^2 + 1e-12.
  std::optional<double> tau;
  std::optional<double> lambda;
  long max_iters = 0;
  long ids_every = 1;
  bool inclusion_audit = true;
  std::uint64_t seed = 0;  // recorded in the trace header
  AgdConfig agd;
};

// x_{k+1} = prox_f^s(x_k - s A'y_k)
// y_{k+1} = prox_g^s(y_k + s A (2 x_{k+1} - x_k))
// Requires s ||A|| < 1 (checked against the problem's norm estimate).
Vector pdhg_step(const SaddleProblem& p, double s, std::span<const double> z);

// Exact resolvent (I + s F)^{-1} z. Affine operators (f, g drawn from
// {zero, linear, half_sq_norm}) go through a cached dense factorization;
// catalogue kinds with indicators are solved by an inner PDHG on the
// proximally regularized saddle down to inclusion residual 1e-10.
Vector ppm_step(const SaddleProblem& p, double s, std::span<const double> z);

// State for the ADMM-family engines over z = (v, y). w is the auxiliary
// conjugate-block iterate of the raw updates; it does not enter the metric.
struct AdmmState {
  Vector w;
  Vector v;
  Vector y;
};

// One linearized-ADMM sweep (f_conj, g_conj are the conjugates appearing in
// the raw updates; lambda > tau ||A||^2 required). Each call cross-checks the
// raw argmin updates against the derived proximal closed forms
//   v_{k+1} = prox_f^tau(v_k - tau A'y_k)
//   y_{k+1} = prox_{g*}^{1/lambda}(y_k + (1/lambda) A (2 v_{k+1} - v_k))
// and throws NumericalError if the two routes disagree beyond 1e-10.
void ladmm_step(const ProxFunction& f_conj, const ProxFunction& g_conj,
                const SparseMatrix& a, double tau, double lambda,
                AdmmState& state);

// One ADMM sweep. The y-subproblem argmin g*(y) + (tau/2)||A'y - r||^2 is
// solved exactly for quadratic g*, and by proximal gradient (tolerance 1e-10)
// for separable g* when AA' is nonsingular; other shapes are rejected.
void admm_step(const ProxFunction& f_conj, const ProxFunction& g_conj,
               const SparseMatrix& a, double tau, AdmmState& state);

struct TraceRow {
  long k = 0;
  std::optional<double> ids;
  std::optional<double> ids_certificate;
  std::optional<double> kkt_residual_sq;
  std::optional<double> gap_bound;
  std::optional<double> inclusion_residual;
  std::optional<long> agd_iters;
  long elapsed_ns = 0;
};

struct SolverTrace {
  // free-form key -> value metadata, serialized as '#'-prefixed lines
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<TraceRow> rows;

  std::optional<std::string> header_value(const std::string& key) const;
  void set_header(const std::string& key, const std::string& value);
};

struct RunResult {
  SolverTrace trace;
  Vector z_final;
  // iterates recorded at instrumented rows (z at each row's k)
  std::vector<Vector> iterates;
};

// Drives max_iters steps of the configured algorithm from z0; every
// ids_every-th iterate (plus iterate 0) gets an instrumented row. For the
// ADMM-family, p must hold the minimax form (f, g*) matching z = (v, y); the
// conjugate of p.f() must be catalogued. Deterministic.
RunResult run(const SaddleProblem& p, const SolverConfig& cfg,
              std::span<const double> z0);

// The metric an algorithm contracts in, with steps resolved as run() would.
MetricMatrix metric_for(const SaddleProblem& p, const SolverConfig& cfg);

// Step sizes after defaults are applied: {s_or_tau, lambda}.
std::pair<double, double> resolve_steps(const SaddleProblem& p,
                                        const SolverConfig& cfg);

}  // namespace pdids

#endif  // PDIDS_SOLVERS_HPP_
