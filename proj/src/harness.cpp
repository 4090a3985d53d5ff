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

#include "pdids/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pdids/errors.hpp"
#include "pdids/problem_io.hpp"

namespace pdids {

namespace {

const char kColumnHeader[] =
    "k,ids,ids_certificate,kkt_residual_sq,gap_bound,inclusion_residual,"
    "agd_iters,elapsed_ns";

std::string cell(const std::optional<double>& v) {
  return v.has_value() ? format_g17(*v) : std::string();
}

std::optional<double> parse_cell(const std::string& s, int line) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad numeric cell '" + s + "'", line);
  }
}

long parse_long_cell(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer cell '" + s + "'", line);
  }
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_trace_csv(const SolverTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
  for (const auto& [key, value] : trace.header) {
    out << "# " << key << ' ' << value << '\n';
  }
  out << kColumnHeader << '\n';
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << cell(r.ids) << ',' << cell(r.ids_certificate) << ','
        << cell(r.kkt_residual_sq) << ',' << cell(r.gap_bound) << ','
        << cell(r.inclusion_residual) << ','
        << (r.agd_iters.has_value() ? std::to_string(*r.agd_iters)
                                    : std::string())
        << ',' << r.elapsed_ns << '\n';
  }
  if (!out) throw ParseError("write failed for '" + path + "'", 0);
}

SolverTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  SolverTrace trace;
  std::string line;
  int lineno = 0;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::istringstream hs(body);
      std::string key;
      hs >> key;
      std::string value;
      std::getline(hs, value);
      if (!value.empty() && value[0] == ' ') value.erase(0, 1);
      if (!key.empty()) trace.header.emplace_back(key, value);
      continue;
    }
    if (!saw_columns) {
      if (line != kColumnHeader) {
        throw ParseError("unexpected column header '" + line + "'", lineno);
      }
      saw_columns = true;
      continue;
    }
    std::vector<std::string> cells = split_char(line, ',');
    if (cells.size() != 8) {
      throw ParseError("expected 8 cells per row", lineno);
    }
    TraceRow r;
    r.k = parse_long_cell(cells[0], lineno);
    r.ids = parse_cell(cells[1], lineno);
    r.ids_certificate = parse_cell(cells[2], lineno);
    r.kkt_residual_sq = parse_cell(cells[3], lineno);
    r.gap_bound = parse_cell(cells[4], lineno);
    r.inclusion_residual = parse_cell(cells[5], lineno);
    if (!cells[6].empty()) r.agd_iters = parse_long_cell(cells[6], lineno);
    r.elapsed_ns = parse_long_cell(cells[7], lineno);
    trace.rows.push_back(std::move(r));
  }
  if (!saw_columns) throw ParseError("trace has no column header", lineno);
  return trace;
}

// ---- configuration ----

namespace {

struct RawConfig {
  // section -> ordered (key, value, line)
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::map<std::string, std::vector<Entry>> sections;
};

RawConfig parse_raw(std::istream& in) {
  RawConfig raw;
  std::string line;
  int lineno = 0;
  std::string section;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = line;
    auto hash = t.find('#');
    if (hash != std::string::npos) t.erase(hash);
    // trim
    auto b = t.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = t.find_last_not_of(" \t\r");
    t = t.substr(b, e - b + 1);
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("unterminated section header", lineno);
      section = t.substr(1, t.size() - 2);
      if (section != "instance" && section != "solver" && section != "output") {
        throw ParseError("unknown section [" + section + "]", lineno);
      }
      raw.sections[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", lineno);
    }
    if (section.empty()) {
      throw ParseError("key outside any [section]", lineno);
    }
    std::string key = t.substr(0, eq);
    std::string value = t.substr(eq + 1);
    auto kb = key.find_first_not_of(" \t");
    auto ke = key.find_last_not_of(" \t");
    key = key.substr(kb, ke - kb + 1);
    auto vb = value.find_first_not_of(" \t");
    if (vb == std::string::npos) {
      value.clear();
    } else {
      auto ve = value.find_last_not_of(" \t");
      value = value.substr(vb, ve - vb + 1);
    }
    raw.sections[section].push_back({key, value, lineno});
  }
  return raw;
}

double to_double(const RawConfig::Entry& e) {
  try {
    std::size_t pos = 0;
    double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument(e.value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("key '" + e.key + "': bad number '" + e.value + "'", e.line);
  }
}

long to_long(const RawConfig::Entry& e) {
  try {
    std::size_t pos = 0;
    long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument(e.value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("key '" + e.key + "': bad integer '" + e.value + "'",
                     e.line);
  }
}

bool to_bool(const RawConfig::Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ParseError("key '" + e.key + "': bad boolean '" + e.value + "'", e.line);
}

Vector to_vector(const RawConfig::Entry& e) {
  Vector v;
  std::istringstream in(e.value);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("key '" + e.key + "': bad number '" + tok + "'", e.line);
    }
  }
  if (v.empty()) throw ParseError("key '" + e.key + "': empty list", e.line);
  return v;
}

ExperimentConfig build_config(const RawConfig& raw) {
  ExperimentConfig cfg;
  auto it = raw.sections.find("instance");
  if (it != raw.sections.end()) {
    for (const auto& e : it->second) {
      if (e.key == "kind") cfg.instance_kind = e.value;
      else if (e.key == "a_diag") cfg.a_diag = to_vector(e);
      else if (e.key == "c") cfg.c_vec = to_vector(e);
      else if (e.key == "b") cfg.b_vec = to_vector(e);
      else if (e.key == "sigma") cfg.sigma = to_vector(e);
      else if (e.key == "s") cfg.construction_s = to_double(e);
      else if (e.key == "n") cfg.n = to_long(e);
      else if (e.key == "m") cfg.m = to_long(e);
      else if (e.key == "k_target") cfg.k_target = to_long(e);
      else if (e.key == "density") cfg.density = to_double(e);
      else if (e.key == "c_factor") cfg.c_factor = to_double(e);
      else if (e.key == "l_a") cfg.l_a = to_double(e);
      else if (e.key == "mu") cfg.mu = to_double(e);
      else if (e.key == "seed") cfg.instance_seed = static_cast<std::uint64_t>(to_long(e));
      else if (e.key == "path") cfg.instance_path = e.value;
      else throw ParseError("unknown key '" + e.key + "' in [instance]", e.line);
    }
  }
  it = raw.sections.find("solver");
  if (it != raw.sections.end()) {
    for (const auto& e : it->second) {
      if (e.key == "algorithm") cfg.solver.algorithm = algorithm_from_name(e.value);
      else if (e.key == "step_size") cfg.solver.step_size = to_double(e);
      else if (e.key == "tau") cfg.solver.tau = to_double(e);
      else if (e.key == "lambda") cfg.solver.lambda = to_double(e);
      else if (e.key == "max_iters") cfg.solver.max_iters = to_long(e);
      else if (e.key == "ids_every") cfg.solver.ids_every = to_long(e);
      else if (e.key == "inclusion_audit") cfg.solver.inclusion_audit = to_bool(e);
      else if (e.key == "seed") cfg.solver.seed = static_cast<std::uint64_t>(to_long(e));
      else if (e.key == "agd_tol") cfg.solver.agd.tolerance = to_double(e);
      else if (e.key == "agd_max_iters") cfg.solver.agd.max_iters = static_cast<int>(to_long(e));
      else throw ParseError("unknown key '" + e.key + "' in [solver]", e.line);
    }
  }
  it = raw.sections.find("output");
  if (it != raw.sections.end()) {
    for (const auto& e : it->second) {
      if (e.key == "path") cfg.output_path = e.value;
      else if (e.key == "iterates_path") cfg.iterates_path = e.value;
      else if (e.key == "instance_path") cfg.instance_out = e.value;
      else throw ParseError("unknown key '" + e.key + "' in [output]", e.line);
    }
  }
  if (cfg.instance_kind.empty()) {
    throw ParseError("[instance] kind is required", 0);
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  RawConfig raw = parse_raw(in);
  return build_config(raw);
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  RawConfig raw = parse_raw(in);
  return build_config(raw);
}

InstanceSpec resolve_instance(const ExperimentConfig& cfg) {
  const std::string& kind = cfg.instance_kind;
  auto need = [&](bool ok, const char* what) {
    if (!ok) {
      throw InvalidInputError("instance kind '" + kind + "' requires " + what);
    }
  };
  if (kind == "bilinear") {
    need(!cfg.a_diag.empty(), "a_diag");
    SparseMatrix a = SparseMatrix::diagonal(cfg.a_diag);
    Vector c = cfg.c_vec.empty() ? Vector(a.cols(), 0.0) : cfg.c_vec;
    Vector b = cfg.b_vec.empty() ? Vector(a.rows(), 0.0) : cfg.b_vec;
    return gen_bilinear(std::move(c), std::move(b), std::move(a));
  }
  if (kind == "tightness_linear") {
    need(!cfg.sigma.empty(), "sigma");
    need(cfg.construction_s.has_value(), "s");
    return gen_tightness_linear(static_cast<int>(cfg.sigma.size()), cfg.sigma,
                                *cfg.construction_s);
  }
  if (kind == "tightness_sublinear") {
    need(cfg.k_target.has_value(), "k_target");
    need(cfg.c_factor.has_value(), "c_factor");
    need(cfg.l_a.has_value(), "l_a");
    need(cfg.m.has_value(), "m");
    return gen_tightness_sublinear(*cfg.k_target, *cfg.c_factor, *cfg.l_a,
                                   static_cast<int>(*cfg.m));
  }
  if (kind == "random_lp") {
    need(cfg.n.has_value(), "n");
    need(cfg.m.has_value(), "m");
    need(cfg.density.has_value(), "density");
    need(cfg.instance_seed.has_value(), "seed");
    return gen_random_lp(static_cast<int>(*cfg.n), static_cast<int>(*cfg.m),
                         *cfg.density, *cfg.instance_seed);
  }
  if (kind == "strongly_convex") {
    need(cfg.mu.has_value(), "mu");
    need(!cfg.a_diag.empty(), "a_diag");
    return gen_strongly_convex(*cfg.mu, SparseMatrix::diagonal(cfg.a_diag));
  }
  if (kind == "file") {
    need(!cfg.instance_path.empty(), "path");
    return load_instance(cfg.instance_path);
  }
  throw InvalidInputError("unknown instance kind '" + kind + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  InstanceSpec spec = resolve_instance(cfg);
  // tightness constructions fix their own step size unless overridden
  SolverConfig solver = cfg.solver;
  auto s_meta = spec.meta.find("s");
  if (!solver.step_size.has_value() && s_meta != spec.meta.end() &&
      (solver.algorithm == Algorithm::kPdhg ||
       solver.algorithm == Algorithm::kPpm)) {
    solver.step_size = s_meta->second;
  }

  RunResult rr = run(spec.problem, solver, spec.z0);
  SolverTrace& trace = rr.trace;
  trace.set_header("instance", instance_kind_name(spec.kind));
  for (const auto& [key, value] : spec.meta) {
    trace.set_header("meta_" + key, format_g17(value));
  }
  MetricMatrix metric = metric_for(spec.problem, solver);
  if (spec.problem.optimum().has_value()) {
    Vector diff = subtract(spec.z0, *spec.problem.optimum());
    trace.set_header("z0_dist_p_sq", format_g17(metric.quad_form(diff)));
  }
  if (solver.algorithm == Algorithm::kPdhg) {
    SubregularityCert cert = spec.cert_for(metric.step_s());
    if (cert.alpha.has_value()) {
      trace.set_header("alpha", format_g17(*cert.alpha));
    }
  }

  if (!cfg.output_path.empty()) write_trace_csv(trace, cfg.output_path);
  if (!cfg.instance_out.empty()) write_native(spec, cfg.instance_out);
  if (!cfg.iterates_path.empty()) {
    std::ofstream out(cfg.iterates_path);
    if (!out) {
      throw ParseError("cannot open '" + cfg.iterates_path + "' for writing", 0);
    }
    out << "k";
    for (int i = 0; i < spec.problem.dim(); ++i) out << ",z" << i;
    out << '\n';
    for (std::size_t r = 0; r < rr.iterates.size(); ++r) {
      out << trace.rows[r].k;
      for (double v : rr.iterates[r]) out << ',' << format_g17(v);
      out << '\n';
    }
  }

  ExperimentResult result{std::move(spec), std::move(trace),
                          std::move(rr.iterates)};
  return result;
}

// ---- audits ----

bool AuditReport::all_passed() const {
  for (const AuditCheck& c : checks) {
    if (c.status == CheckStatus::kFailed) return false;
  }
  return true;
}

std::string AuditReport::to_string() const {
  std::ostringstream out;
  for (const AuditCheck& c : checks) {
    switch (c.status) {
      case CheckStatus::kPassed:
        out << "PASS " << c.name << "  worst_margin=" << format_g17(c.worst_margin);
        if (c.worst_row_k >= 0) out << " at k=" << c.worst_row_k;
        break;
      case CheckStatus::kFailed:
        out << "FAIL " << c.name << "  violation=" << format_g17(c.worst_margin);
        if (c.worst_row_k >= 0) out << " at k=" << c.worst_row_k;
        break;
      case CheckStatus::kSkipped:
        out << "SKIP " << c.name;
        break;
    }
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
  return out.str();
}

namespace {

double header_double(const SolverTrace& trace, const std::string& key) {
  auto v = trace.header_value(key);
  if (!v.has_value()) {
    throw InvalidInputError("trace header missing '" + key + "'");
  }
  return std::stod(*v);
}

}  // namespace

AuditReport audit_theorems(const SolverTrace& trace, const InstanceSpec& spec) {
  if (trace.rows.empty()) {
    throw InvalidInputError("audit_theorems: trace has no rows");
  }
  auto alg_name = trace.header_value("algorithm");
  if (!alg_name.has_value()) {
    throw InvalidInputError("audit_theorems: trace header missing 'algorithm'");
  }
  SolverConfig solver;
  solver.algorithm = algorithm_from_name(*alg_name);
  switch (solver.algorithm) {
    case Algorithm::kPdhg:
    case Algorithm::kPpm:
      solver.step_size = header_double(trace, "s");
      break;
    case Algorithm::kLadmm:
      solver.tau = header_double(trace, "tau");
      solver.lambda = header_double(trace, "lambda");
      break;
    case Algorithm::kAdmm:
      solver.tau = header_double(trace, "tau");
      break;
  }
  MetricMatrix metric = metric_for(spec.problem, solver);

  std::optional<double> ids0;
  if (trace.rows.front().k == 0) ids0 = trace.rows.front().ids;

  std::optional<double> d0_sq;
  if (spec.problem.optimum().has_value() && !spec.z0.empty()) {
    Vector diff = subtract(spec.z0, *spec.problem.optimum());
    d0_sq = metric.quad_form(diff);
  }

  AuditReport report;

  // nonincreasing ids along the instrumented rows
  {
    AuditCheck c;
    c.name = "monotone-decay";
    if (!ids0.has_value()) {
      c.status = CheckStatus::kSkipped;
      c.detail = "no ids at k=0";
    } else {
      double slack = 1e-9 * (1.0 + *ids0);
      double worst = -std::numeric_limits<double>::infinity();
      const TraceRow* prev = nullptr;
      for (const TraceRow& r : trace.rows) {
        if (!r.ids.has_value()) continue;
        if (prev != nullptr) {
          double rise = *r.ids - *prev->ids;
          if (rise > worst) {
            worst = rise;
            c.worst_row_k = r.k;
          }
        }
        prev = &r;
      }
      c.worst_margin = worst;
      c.status = worst <= slack ? CheckStatus::kPassed : CheckStatus::kFailed;
      c.detail = "slack " + format_g17(slack);
    }
    report.checks.push_back(std::move(c));
  }

  // ids_k <= ||z0 - z*||_P^2 / k
  {
    AuditCheck c;
    c.name = "sublinear-bound";
    if (!d0_sq.has_value()) {
      c.status = CheckStatus::kSkipped;
      c.detail = "no known optimum";
    } else {
      double worst = -std::numeric_limits<double>::infinity();
      for (const TraceRow& r : trace.rows) {
        if (r.k < 1 || !r.ids.has_value()) continue;
        double bound = *d0_sq / static_cast<double>(r.k);
        double gap = *r.ids - bound;
        if (gap > worst) {
          worst = gap;
          c.worst_row_k = r.k;
        }
      }
      c.worst_margin = worst;
      c.status = worst <= 1e-9 ? CheckStatus::kPassed : CheckStatus::kFailed;
    }
    report.checks.push_back(std::move(c));
  }

  // ids_k <= exp(1 - k/K) ids0 for k >= K = ceil(e / alpha^2)
  {
    AuditCheck c;
    c.name = "linear-rate";
    SubregularityCert cert;
    bool have_alpha = false;
    if (solver.algorithm == Algorithm::kPdhg) {
      cert = spec.cert_for(metric.step_s());
      have_alpha = cert.alpha.has_value() && *cert.alpha > 0;
    }
    if (!have_alpha) {
      c.status = CheckStatus::kSkipped;
      c.detail = "no rate constant for this instance/algorithm";
    } else if (!ids0.has_value()) {
      c.status = CheckStatus::kSkipped;
      c.detail = "no ids at k=0";
    } else {
      double alpha = *cert.alpha;
      double kk = std::ceil(std::exp(1.0) / (alpha * alpha));
      double worst = -std::numeric_limits<double>::infinity();
      long checked = 0;
      for (const TraceRow& r : trace.rows) {
        if (!r.ids.has_value() || static_cast<double>(r.k) < kk) continue;
        ++checked;
        double bound = std::exp(1.0 - static_cast<double>(r.k) / kk) * *ids0;
        double gap = (*r.ids - bound) / std::max(*ids0, 1e-300);
        if (gap > worst) {
          worst = gap;
          c.worst_row_k = r.k;
        }
      }
      c.detail = "threshold k=" + std::to_string(static_cast<long>(kk)) + ", " +
                 std::to_string(checked) + " rows";
      c.worst_margin = checked > 0 ? worst : 0.0;
      c.status = (checked == 0 || worst <= 1e-12) ? CheckStatus::kPassed
                                                  : CheckStatus::kFailed;
    }
    report.checks.push_back(std::move(c));
  }

  // worst-case floor of the tightness construction
  {
    AuditCheck c;
    c.name = "linear-lower-bound";
    bool applicable = (spec.kind == InstanceKind::kTightnessLinear ||
                       spec.kind == InstanceKind::kTightnessSublinear) &&
                      solver.algorithm == Algorithm::kPdhg &&
                      ids0.has_value();
    if (!applicable) {
      c.status = CheckStatus::kSkipped;
      c.detail = "needs a tightness instance under pdhg";
    } else {
      double worst = -std::numeric_limits<double>::infinity();
      for (const TraceRow& r : trace.rows) {
        if (!r.ids.has_value() || r.k > 500) continue;
        double env =
            spec.linear_lower_envelope(r.k, metric.step_s(), *ids0);
        double gap = env - *r.ids;  // positive means below the floor
        if (gap > worst) {
          worst = gap;
          c.worst_row_k = r.k;
        }
      }
      c.worst_margin = worst;
      c.status = worst <= 1e-12 ? CheckStatus::kPassed : CheckStatus::kFailed;
    }
    report.checks.push_back(std::move(c));
  }

  // floor at the targeted iteration of the sublinear construction
  {
    AuditCheck c;
    c.name = "sublinear-lower-bound";
    auto kt = spec.meta.find("k_target");
    bool applicable = spec.kind == InstanceKind::kTightnessSublinear &&
                      solver.algorithm == Algorithm::kPdhg &&
                      kt != spec.meta.end() && d0_sq.has_value();
    const TraceRow* target = nullptr;
    if (applicable) {
      long k_target = static_cast<long>(kt->second);
      for (const TraceRow& r : trace.rows) {
        if (r.k == k_target && r.ids.has_value()) target = &r;
      }
    }
    if (!applicable || target == nullptr) {
      c.status = CheckStatus::kSkipped;
      c.detail = "needs the targeted row of a sublinear-tightness run";
    } else {
      double env = spec.sublinear_lower_envelope(target->k, *d0_sq);
      c.worst_margin = env - *target->ids;
      c.worst_row_k = target->k;
      c.status =
          c.worst_margin <= 1e-12 ? CheckStatus::kPassed : CheckStatus::kFailed;
    }
    report.checks.push_back(std::move(c));
  }

  // gap_bound column stays below sqrt(ids) * ||z0 - z*||_P
  {
    AuditCheck c;
    c.name = "gap-bound-chain";
    bool any = false;
    if (d0_sq.has_value()) {
      double d0 = std::sqrt(std::max(*d0_sq, 0.0));
      double worst = -std::numeric_limits<double>::infinity();
      for (const TraceRow& r : trace.rows) {
        if (!r.gap_bound.has_value() || !r.ids.has_value()) continue;
        any = true;
        double bound = std::sqrt(std::max(*r.ids, 0.0)) * d0;
        double gap = *r.gap_bound - bound;
        if (gap > worst) {
          worst = gap;
          c.worst_row_k = r.k;
        }
      }
      if (any) {
        c.worst_margin = worst;
        c.status = worst <= 1e-9 ? CheckStatus::kPassed : CheckStatus::kFailed;
      }
    }
    if (!any) {
      c.status = CheckStatus::kSkipped;
      c.detail = "no gap_bound column";
    }
    report.checks.push_back(std::move(c));
  }

  return report;
}

RateFit fit_rate(const SolverTrace& trace, long k_lo, long k_hi) {
  if (k_hi <= k_lo || k_lo < 1) {
    throw InvalidInputError("fit_rate: window must satisfy 1 <= k_lo < k_hi");
  }
  std::vector<std::pair<double, double>> pts;
  for (const TraceRow& r : trace.rows) {
    if (r.k < k_lo || r.k > k_hi) continue;
    if (!r.ids.has_value() || *r.ids <= 1e-14) continue;
    pts.emplace_back(static_cast<double>(r.k), std::log(*r.ids));
  }
  if (pts.size() < 10) {
    throw InvalidInputError("fit_rate: fewer than 10 usable rows in window");
  }
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
  }
  double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  RateFit fit;
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (auto [x, y] : pts) {
    double e = y - (fit.intercept + fit.slope * x);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  fit.rows_used = static_cast<long>(pts.size());
  return fit;
}

AgdStats agd_stats(const SolverTrace& trace) {
  std::vector<long> iters;
  for (const TraceRow& r : trace.rows) {
    if (r.agd_iters.has_value()) iters.push_back(*r.agd_iters);
  }
  if (iters.empty()) {
    throw InvalidInputError("agd_stats: trace has no agd_iters data");
  }
  AgdStats stats;
  stats.count = static_cast<long>(iters.size());
  long sum = 0;
  for (long v : iters) {
    sum += v;
    stats.max = std::max(stats.max, v);
  }
  stats.mean = static_cast<double>(sum) / iters.size();
  std::sort(iters.begin(), iters.end());
  std::size_t h = iters.size() / 2;
  stats.median = iters.size() % 2 == 1
                     ? static_cast<double>(iters[h])
                     : 0.5 * (iters[h - 1] + iters[h]);
  return stats;
}

}  // namespace pdids
