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

#include "pdids/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pdids/errors.hpp"
#include "pdids/harness.hpp"
#include "pdids/problem_io.hpp"

namespace pdids {

namespace {

struct SolveOverrides {
  std::optional<std::string> algorithm;
  std::optional<double> step_size;
  std::optional<double> tau;
  std::optional<double> lambda;
  std::optional<long> max_iters;
  std::optional<long> ids_every;
  std::optional<double> tol;
  std::optional<long> seed;
  std::optional<std::string> output;
};

void apply_overrides(ExperimentConfig* cfg, const SolveOverrides& ov) {
  if (ov.algorithm) cfg->solver.algorithm = algorithm_from_name(*ov.algorithm);
  if (ov.step_size) cfg->solver.step_size = *ov.step_size;
  if (ov.tau) cfg->solver.tau = *ov.tau;
  if (ov.lambda) cfg->solver.lambda = *ov.lambda;
  if (ov.max_iters) cfg->solver.max_iters = *ov.max_iters;
  if (ov.ids_every) cfg->solver.ids_every = *ov.ids_every;
  if (ov.tol) cfg->solver.agd.tolerance = *ov.tol;
  if (ov.seed) cfg->solver.seed = static_cast<std::uint64_t>(*ov.seed);
  if (ov.output) cfg->output_path = *ov.output;
}

int do_solve(const std::vector<std::string>& configs, const SolveOverrides& ov,
             long jobs) {
  if (configs.size() > 1 && ov.output.has_value()) {
    throw InvalidInputError("--output cannot be shared by multiple configs");
  }
  std::vector<ExperimentConfig> parsed;
  parsed.reserve(configs.size());
  for (const std::string& path : configs) {
    ExperimentConfig cfg = parse_config_file(path);
    apply_overrides(&cfg, ov);
    parsed.push_back(std::move(cfg));
  }

  std::vector<std::string> errors(parsed.size());
  std::vector<int> error_codes(parsed.size(), 0);
  auto work = [&](std::size_t i) {
    try {
      ExperimentResult result = run_experiment(parsed[i]);
      std::ostringstream msg;
      msg << configs[i] << ": " << result.trace.rows.size() << " rows";
      if (!parsed[i].output_path.empty()) {
        msg << " -> " << parsed[i].output_path;
      }
      std::cout << msg.str() << '\n';
    } catch (const NumericalError& e) {
      errors[i] = e.what();
      error_codes[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
      error_codes[i] = 2;
    }
  };

  if (jobs <= 1 || parsed.size() <= 1) {
    for (std::size_t i = 0; i < parsed.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (long t = 0; t < jobs && t < static_cast<long>(parsed.size()); ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < parsed.size();
             i += static_cast<std::size_t>(jobs)) {
          work(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  int code = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i].empty()) continue;
    std::cerr << "error: " << configs[i] << ": " << errors[i] << '\n';
    code = std::max(code, error_codes[i]);
  }
  return code;
}

int do_gen_lp(int n, int m, double density, long seed, const std::string& out) {
  InstanceSpec spec = gen_random_lp(n, m, density, static_cast<std::uint64_t>(seed));
  std::string native = out + ".prob";
  std::string mps = out + ".mps";
  write_native(spec, native);
  write_mps(*spec.problem.lp(), mps);
  std::cout << "wrote " << native << " and " << mps << '\n';
  return 0;
}

Vector parse_csv_doubles(const std::string& text) {
  Vector out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    try {
      out.push_back(std::stod(cur));
    } catch (const std::exception&) {
      throw InvalidInputError("bad number in list: '" + cur + "'");
    }
  }
  if (out.empty()) throw InvalidInputError("empty number list");
  return out;
}

int do_tightness(const std::string& variant,
                 const std::vector<std::string>& params,
                 const std::string& out) {
  InstanceSpec spec = [&]() {
    if (variant == "linear") {
      if (params.size() != 3) {
        throw InvalidInputError(
            "tightness linear expects <m> <sigma_csv> <s> <out>");
      }
      int m = std::stoi(params[0]);
      Vector sigma = parse_csv_doubles(params[1]);
      double s = std::stod(params[2]);
      return gen_tightness_linear(m, std::move(sigma), s);
    }
    if (variant == "sublinear") {
      if (params.size() != 4) {
        throw InvalidInputError(
            "tightness sublinear expects <k_target> <c_factor> <L_A> <m> <out>");
      }
      return gen_tightness_sublinear(std::stol(params[0]), std::stod(params[1]),
                                     std::stod(params[2]), std::stoi(params[3]));
    }
    throw InvalidInputError("tightness variant must be linear or sublinear");
  }();
  write_native(spec, out);
  std::cout << "wrote " << out << '\n';
  return 0;
}

int do_audit(const std::string& trace_path, const std::string& instance_path) {
  SolverTrace trace = read_trace_csv(trace_path);
  InstanceSpec spec = load_instance(instance_path);
  AuditReport report = audit_theorems(trace, spec);
  std::cout << report.to_string();
  return report.all_passed() ? 0 : 1;
}

int do_rate(const std::string& trace_path, const std::string& window) {
  SolverTrace trace = read_trace_csv(trace_path);
  long k_lo = 1;
  long k_hi = trace.rows.empty() ? 1 : trace.rows.back().k;
  if (!window.empty()) {
    auto colon = window.find(':');
    if (colon == std::string::npos) {
      throw InvalidInputError("--window expects a:b");
    }
    k_lo = std::stol(window.substr(0, colon));
    k_hi = std::stol(window.substr(colon + 1));
  }
  RateFit fit = fit_rate(trace, k_lo, k_hi);
  std::cout << "window [" << fit.k_lo << ", " << fit.k_hi << "]  rows "
            << fit.rows_used << '\n';
  std::cout << "slope " << format_g17(fit.slope) << "  intercept "
            << format_g17(fit.intercept) << "  r2 " << format_g17(fit.r_squared)
            << '\n';
  auto alpha = trace.header_value("alpha");
  if (alpha.has_value()) {
    double a = std::stod(*alpha);
    double threshold = std::ceil(std::exp(1.0) / (a * a));
    std::cout << "rate-constant slope bound " << format_g17(-1.0 / threshold)
              << '\n';
  }
  auto sigma_min = trace.header_value("meta_sigma_min");
  auto s = trace.header_value("s");
  if (sigma_min.has_value() && s.has_value()) {
    double sig = std::stod(*sigma_min);
    double sv = std::stod(*s);
    double spectral = std::log(1.0 - sv * sv * sig * sig);
    std::cout << "spectral slope " << format_g17(spectral) << "  ratio "
              << format_g17(fit.slope / spectral) << '\n';
  }
  return 0;
}

int do_agd_stats(const std::string& trace_path) {
  SolverTrace trace = read_trace_csv(trace_path);
  AgdStats stats = agd_stats(trace);
  std::cout << "evaluations " << stats.count << "  mean " << stats.mean
            << "  median " << stats.median << "  max " << stats.max << '\n';
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"primal-dual solvers instrumented with the IDS progress metric"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run an experiment config");
  std::vector<std::string> configs;
  solve->add_option("config", configs, "config file(s)")->required();
  SolveOverrides ov;
  long jobs = 1;
  solve->add_option("--algorithm", ov.algorithm)
      ->check(CLI::IsMember({"pdhg", "ppm", "ladmm", "admm"}));
  solve->add_option("--step-size", ov.step_size);
  solve->add_option("--tau", ov.tau);
  solve->add_option("--lambda", ov.lambda);
  solve->add_option("--max-iters", ov.max_iters);
  solve->add_option("--ids-every", ov.ids_every);
  solve->add_option("--tol", ov.tol);
  solve->add_option("--seed", ov.seed);
  solve->add_option("--output", ov.output);
  solve->add_option("--jobs", jobs, "run configs concurrently");

  // gen-lp
  auto* gen = app.add_subcommand("gen-lp", "generate a random LP with a planted optimum");
  int gn = 0, gm = 0;
  double gdensity = 0;
  long gseed = 0;
  std::string gout;
  gen->add_option("n", gn)->required();
  gen->add_option("m", gm)->required();
  gen->add_option("density", gdensity)->required();
  gen->add_option("seed", gseed)->required();
  gen->add_option("out", gout, "output stem; writes <out>.prob and <out>.mps")
      ->required();

  // tightness
  auto* tight = app.add_subcommand("tightness", "generate a worst-case instance");
  std::string tvariant;
  std::vector<std::string> tparams;
  tight->add_option("variant", tvariant)->required()
      ->check(CLI::IsMember({"linear", "sublinear"}));
  tight->add_option("params", tparams, "variant parameters then output path")
      ->required();

  // audit
  auto* audit = app.add_subcommand("audit", "check a trace against the guarantees");
  std::string audit_trace, audit_instance;
  audit->add_option("trace", audit_trace)->required();
  audit->add_option("instance", audit_instance)->required();

  // rate
  auto* rate = app.add_subcommand("rate", "fit the log-ids decay slope");
  std::string rate_trace, rate_window;
  rate->add_option("trace", rate_trace)->required();
  rate->add_option("--window", rate_window, "fit window a:b");

  // agd-stats
  auto* stats = app.add_subcommand("agd-stats", "inner-iteration statistics");
  std::string stats_trace;
  stats->add_option("trace", stats_trace)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return do_solve(configs, ov, jobs);
    if (gen->parsed()) return do_gen_lp(gn, gm, gdensity, gseed, gout);
    if (tight->parsed()) {
      if (tparams.empty()) {
        throw InvalidInputError("tightness: missing output path");
      }
      std::string out = tparams.back();
      tparams.pop_back();
      return do_tightness(tvariant, tparams, out);
    }
    if (audit->parsed()) return do_audit(audit_trace, audit_instance);
    if (rate->parsed()) return do_rate(rate_trace, rate_window);
    if (stats->parsed()) return do_agd_stats(stats_trace);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pdids
