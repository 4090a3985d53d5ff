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

#ifndef PDIDS_HARNESS_HPP_
#define PDIDS_HARNESS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdids/instances.hpp"
#include "pdids/solvers.hpp"

namespace pdids {

// ---- trace persistence ----
//
// CSV layout: '#'-prefixed "key value" header lines, one unprefixed column
// header, then one row per instrumented iteration in the fixed order
//   k,ids,ids_certificate,kkt_residual_sq,gap_bound,inclusion_residual,
//   agd_iters,elapsed_ns
// Absent values are empty cells; doubles carry 17 significant digits, so a
// write/read round trip is bit-exact.

void write_trace_csv(const SolverTrace& trace, const std::string& path);
SolverTrace read_trace_csv(const std::string& path);

// ---- experiment configuration ----
//
// Flat "key = value" file with [instance], [solver] and [output] sections;
// '#' comments. Unknown sections or keys are errors.

struct ExperimentConfig {
  // [instance]
  std::string instance_kind;  // bilinear | tightness_linear |
                              // tightness_sublinear | random_lp |
                              // strongly_convex | file
  Vector a_diag;
  Vector c_vec;
  Vector b_vec;
  Vector sigma;
  std::optional<double> construction_s;  // tightness_linear
  std::optional<long> n, m, k_target;
  std::optional<double> density, c_factor, l_a, mu;
  std::optional<std::uint64_t> instance_seed;
  std::string instance_path;

  // [solver]
  SolverConfig solver;

  // [output]
  std::string output_path;
  std::string iterates_path;  // optional raw-iterate CSV
  std::string instance_out;   // optional: dump the resolved instance
};

ExperimentConfig parse_config_file(const std::string& path);
// Same grammar, from memory (used by tests).
ExperimentConfig parse_config_text(const std::string& text);

InstanceSpec resolve_instance(const ExperimentConfig& cfg);

struct ExperimentResult {
  InstanceSpec instance;
  SolverTrace trace;
  std::vector<Vector> iterates;
};

// Runs the configured experiment, streams the trace to output_path (and the
// raw iterates when requested), and returns everything in memory as well.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// ---- guarantee audits ----

enum class CheckStatus { kPassed, kFailed, kSkipped };

struct AuditCheck {
  std::string name;
  CheckStatus status = CheckStatus::kSkipped;
  double worst_margin = 0.0;  // positive means violation before slack
  long worst_row_k = -1;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool all_passed() const;
  std::string to_string() const;
};

// Row-by-row verification of the decay/rate guarantees against a finished
// trace. Checks without their prerequisites (no optimum, no rate constant,
// wrong instance shape) are reported as skipped, not failed.
AuditReport audit_theorems(const SolverTrace& trace, const InstanceSpec& spec);

// ---- rate diagnostics ----

struct RateFit {
  long k_lo = 0;
  long k_hi = 0;
  double slope = 0.0;      // least-squares slope of ln ids vs k
  double intercept = 0.0;
  double r_squared = 0.0;
  long rows_used = 0;
};

// Ordinary least squares over rows with k in [k_lo, k_hi] and ids > 1e-14.
// Requires at least 10 usable rows.
RateFit fit_rate(const SolverTrace& trace, long k_lo, long k_hi);

struct AgdStats {
  double mean = 0.0;
  double median = 0.0;
  long max = 0;
  long count = 0;
};

AgdStats agd_stats(const SolverTrace& trace);

}  // namespace pdids

#endif  // PDIDS_HARNESS_HPP_
