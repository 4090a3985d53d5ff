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

#include "pdids/problem_io.hpp"

#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "pdids/errors.hpp"

namespace pdids {

namespace {

double parse_double(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
}

long parse_long(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + tok + "'", line);
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

void write_vector_inline(std::ostream& out, const Vector& v) {
  for (double x : v) out << ' ' << format_g17(x);
}

Vector parse_vector(const std::vector<std::string>& toks, std::size_t from,
                    std::size_t count, int line) {
  if (toks.size() != from + count) {
    throw ParseError("expected " + std::to_string(count) + " values, got " +
                         std::to_string(toks.size() - from),
                     line);
  }
  Vector v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = parse_double(toks[from + i], line);
  }
  return v;
}

void write_prox(std::ostream& out, char label, const ProxFunction& h) {
  out << label << ' ' << prox_kind_name(h.kind());
  switch (h.kind()) {
    case ProxKind::kZero:
    case ProxKind::kIndicatorNonneg:
      break;
    case ProxKind::kLinear:
    case ProxKind::kLinearPlusNonneg:
      write_vector_inline(out, h.coeff());
      break;
    case ProxKind::kIndicatorBox:
      write_vector_inline(out, h.box_lower());
      write_vector_inline(out, h.box_upper());
      break;
    case ProxKind::kL1:
    case ProxKind::kIndicatorLinfBall:
      out << ' ' << format_g17(h.weight());
      break;
    case ProxKind::kHalfSqNorm:
      out << ' ' << format_g17(h.weight());
      write_vector_inline(out, h.coeff());
      break;
  }
  out << '\n';
}

ProxFunction parse_prox(const std::vector<std::string>& toks, int dim,
                        int line) {
  if (toks.size() < 2) throw ParseError("missing function kind", line);
  const std::string& kind = toks[1];
  std::size_t count = static_cast<std::size_t>(dim);
  if (kind == "zero") {
    return ProxFunction::zero(dim);
  } else if (kind == "linear") {
    return ProxFunction::linear(parse_vector(toks, 2, count, line));
  } else if (kind == "indicator_nonneg") {
    return ProxFunction::indicator_nonneg(dim);
  } else if (kind == "indicator_box") {
    if (toks.size() != 2 + 2 * count) {
      throw ParseError("indicator_box expects lo and hi vectors", line);
    }
    Vector lo(count), hi(count);
    for (std::size_t i = 0; i < count; ++i) {
      lo[i] = parse_double(toks[2 + i], line);
      hi[i] = parse_double(toks[2 + count + i], line);
    }
    return ProxFunction::indicator_box(std::move(lo), std::move(hi));
  } else if (kind == "l1") {
    if (toks.size() != 3) throw ParseError("l1 expects one weight", line);
    return ProxFunction::l1(dim, parse_double(toks[2], line));
  } else if (kind == "half_sq_norm") {
    if (toks.size() == 3) {
      return ProxFunction::half_sq_norm(dim, parse_double(toks[2], line));
    }
    if (toks.size() != 3 + count) {
      throw ParseError("half_sq_norm expects mu and optional shift", line);
    }
    double mu = parse_double(toks[2], line);
    return ProxFunction::half_sq_norm(dim, mu, parse_vector(toks, 3, count, line));
  } else if (kind == "linear_plus_nonneg") {
    return ProxFunction::linear_plus_nonneg(parse_vector(toks, 2, count, line));
  } else if (kind == "linf_ball") {
    if (toks.size() != 3) throw ParseError("linf_ball expects one radius", line);
    return ProxFunction::linf_ball(dim, parse_double(toks[2], line));
  }
  throw ParseError("unknown function kind '" + kind + "'", line);
}

}  // namespace

void write_native(const InstanceSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
  const SaddleProblem& p = spec.problem;
  out << "pdids-problem-v1\n";
  out << "kind " << instance_kind_name(spec.kind) << '\n';
  out << "dims " << p.n() << ' ' << p.m() << '\n';
  write_prox(out, 'f', p.f());
  write_prox(out, 'g', p.g());
  out << "A " << p.coupling().nnz() << '\n';
  for (const Triplet& t : p.coupling().to_triplets()) {
    out << t.row << ' ' << t.col << ' ' << format_g17(t.value) << '\n';
  }
  if (p.optimum().has_value()) {
    out << "optimum";
    write_vector_inline(out, *p.optimum());
    out << '\n';
  }
  if (!spec.z0.empty()) {
    out << "start";
    write_vector_inline(out, spec.z0);
    out << '\n';
  }
  for (const auto& [key, value] : spec.meta) {
    out << "meta " << key << ' ' << format_g17(value) << '\n';
  }
  if (!out) throw ParseError("write failed for '" + path + "'", 0);
}

InstanceSpec read_native(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);

  std::string line;
  int lineno = 0;
  auto next_line = [&](std::vector<std::string>* toks) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      *toks = split_ws(line);
      if (!toks->empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_line(&toks) || toks[0] != "pdids-problem-v1") {
    throw ParseError("missing pdids-problem-v1 header", lineno);
  }
  if (!next_line(&toks) || toks[0] != "kind" || toks.size() != 2) {
    throw ParseError("expected 'kind <name>'", lineno);
  }
  InstanceKind kind = instance_kind_from_name(toks[1]);
  if (!next_line(&toks) || toks[0] != "dims" || toks.size() != 3) {
    throw ParseError("expected 'dims <n> <m>'", lineno);
  }
  int n = static_cast<int>(parse_long(toks[1], lineno));
  int m = static_cast<int>(parse_long(toks[2], lineno));
  if (n < 1 || m < 1) throw ParseError("dims must be positive", lineno);

  if (!next_line(&toks) || toks[0] != "f") {
    throw ParseError("expected 'f <kind> ...'", lineno);
  }
  ProxFunction f = parse_prox(toks, n, lineno);
  if (!next_line(&toks) || toks[0] != "g") {
    throw ParseError("expected 'g <kind> ...'", lineno);
  }
  ProxFunction g = parse_prox(toks, m, lineno);

  if (!next_line(&toks) || toks[0] != "A" || toks.size() != 2) {
    throw ParseError("expected 'A <nnz>'", lineno);
  }
  long nnz = parse_long(toks[1], lineno);
  std::vector<Triplet> ts;
  ts.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    if (!next_line(&toks)) throw ParseError("truncated triplet list", lineno);
    if (toks.size() != 3) {
      throw ParseError("expected '<row> <col> <value>'", lineno);
    }
    Triplet t;
    t.row = static_cast<int>(parse_long(toks[0], lineno));
    t.col = static_cast<int>(parse_long(toks[1], lineno));
    t.value = parse_double(toks[2], lineno);
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n) {
      throw ParseError("triplet index out of range", lineno);
    }
    ts.push_back(t);
  }
  auto a = std::make_shared<const SparseMatrix>(
      SparseMatrix::from_triplets(m, n, std::move(ts)));

  SaddleProblem p(std::move(f), std::move(g), a);
  if (p.f().kind() == ProxKind::kLinearPlusNonneg &&
      p.g().kind() == ProxKind::kLinear) {
    LpInstance lp;
    lp.c = p.f().coeff();
    lp.b = p.g().coeff();
    lp.a = a;
    p.set_lp(std::move(lp));
  }

  InstanceSpec spec(std::move(p));
  spec.kind = kind;
  while (next_line(&toks)) {
    if (toks[0] == "optimum") {
      spec.problem.set_optimum(
          parse_vector(toks, 1, static_cast<std::size_t>(n + m), lineno));
    } else if (toks[0] == "start") {
      spec.z0 = parse_vector(toks, 1, static_cast<std::size_t>(n + m), lineno);
      require_finite(spec.z0, "start");
    } else if (toks[0] == "meta") {
      if (toks.size() != 3) throw ParseError("expected 'meta <key> <value>'", lineno);
      spec.meta[toks[1]] = parse_double(toks[2], lineno);
    } else {
      throw ParseError("unknown section '" + toks[0] + "'", lineno);
    }
  }
  if (spec.z0.empty()) spec.z0.assign(n + m, 1.0);
  return spec;
}

void write_mps(const LpInstance& lp, const std::string& path,
               const std::string& name) {
  lp.validate();
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
  out << "NAME          " << name << '\n';
  out << "ROWS\n";
  out << " N  COST\n";
  for (int i = 0; i < lp.m(); ++i) out << " E  R" << i << '\n';
  out << "COLUMNS\n";
  std::vector<Triplet> ts = lp.a->to_triplets();
  // column-major grouping, objective entry first
  for (int j = 0; j < lp.n(); ++j) {
    if (lp.c[j] != 0.0) {
      out << "    X" << j << "  COST  " << format_g17(lp.c[j]) << '\n';
    }
    for (const Triplet& t : ts) {
      if (t.col != j) continue;
      out << "    X" << j << "  R" << t.row << "  " << format_g17(t.value)
          << '\n';
    }
  }
  out << "RHS\n";
  for (int i = 0; i < lp.m(); ++i) {
    if (lp.b[i] != 0.0) {
      out << "    RHS  R" << i << "  " << format_g17(lp.b[i]) << '\n';
    }
  }
  out << "ENDATA\n";
  if (!out) throw ParseError("write failed for '" + path + "'", 0);
}

LpInstance read_mps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);

  enum class Section { kNone, kRows, kColumns, kRhs, kDone };
  Section section = Section::kNone;
  bool saw_endata = false;

  std::unordered_map<std::string, int> row_index;  // constraint rows only
  std::string objective_row;
  std::unordered_map<std::string, int> col_index;
  std::vector<std::string> col_names;
  std::vector<Triplet> entries;
  std::vector<std::pair<int, double>> objective;  // (col, coeff)
  std::vector<std::pair<int, double>> rhs;        // (row, value)

  auto col_id = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    int id = static_cast<int>(col_names.size());
    col_index.emplace(name, id);
    col_names.push_back(name);
    return id;
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;

    bool header = !std::isspace(static_cast<unsigned char>(line[0]));
    if (header) {
      const std::string& key = toks[0];
      if (key == "NAME") {
        continue;
      } else if (key == "ROWS") {
        section = Section::kRows;
      } else if (key == "COLUMNS") {
        section = Section::kColumns;
      } else if (key == "RHS") {
        section = Section::kRhs;
      } else if (key == "ENDATA") {
        saw_endata = true;
        section = Section::kDone;
        break;
      } else if (key == "RANGES" || key == "BOUNDS" || key == "OBJSENSE" ||
                 key == "OBJSGN" || key == "SOS") {
        throw ParseError("unsupported MPS section '" + key + "'", lineno);
      } else {
        throw ParseError("unknown MPS section '" + key + "'", lineno);
      }
      continue;
    }

    switch (section) {
      case Section::kRows: {
        if (toks.size() != 2) {
          throw ParseError("ROWS entries need '<type> <name>'", lineno);
        }
        const std::string& type = toks[0];
        const std::string& rname = toks[1];
        if (type == "N") {
          if (!objective_row.empty()) {
            throw ParseError("unsupported feature: multiple objective rows",
                             lineno);
          }
          objective_row = rname;
        } else if (type == "E") {
          if (row_index.count(rname) != 0) {
            throw ParseError("duplicate row '" + rname + "'", lineno);
          }
          int id = static_cast<int>(row_index.size());
          row_index.emplace(rname, id);
        } else {
          throw ParseError("unsupported row type '" + type +
                               "' (only N and E rows are handled)",
                           lineno);
        }
        break;
      }
      case Section::kColumns: {
        for (const std::string& t : toks) {
          if (t.find("MARKER") != std::string::npos) {
            throw ParseError("unsupported feature: COLUMNS markers", lineno);
          }
        }
        if (toks.size() < 3 || toks.size() % 2 == 0) {
          throw ParseError("COLUMNS entries need '<col> (<row> <value>)+'",
                           lineno);
        }
        int col = col_id(toks[0]);
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          const std::string& rname = toks[i];
          double value = parse_double(toks[i + 1], lineno);
          if (rname == objective_row) {
            objective.emplace_back(col, value);
          } else {
            auto it = row_index.find(rname);
            if (it == row_index.end()) {
              throw ParseError("unknown row '" + rname + "'", lineno);
            }
            entries.push_back({it->second, col, value});
          }
        }
        break;
      }
      case Section::kRhs: {
        if (toks.size() < 3 || toks.size() % 2 == 0) {
          throw ParseError("RHS entries need '<set> (<row> <value>)+'", lineno);
        }
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          const std::string& rname = toks[i];
          double value = parse_double(toks[i + 1], lineno);
          if (rname == objective_row) {
            throw ParseError("unsupported feature: RHS entry on the objective "
                             "row",
                             lineno);
          }
          auto it = row_index.find(rname);
          if (it == row_index.end()) {
            throw ParseError("unknown row '" + rname + "'", lineno);
          }
          rhs.emplace_back(it->second, value);
        }
        break;
      }
      case Section::kNone:
        throw ParseError("data before any section header", lineno);
      case Section::kDone:
        break;
    }
  }
  if (!saw_endata) throw ParseError("missing ENDATA", lineno);
  if (objective_row.empty()) {
    throw ParseError("missing objective (N) row", lineno);
  }
  int m = static_cast<int>(row_index.size());
  int n = static_cast<int>(col_names.size());
  if (m == 0 || n == 0) throw ParseError("empty constraint system", lineno);

  LpInstance lp;
  lp.c.assign(n, 0.0);
  for (auto [col, coeff] : objective) lp.c[col] += coeff;
  lp.b.assign(m, 0.0);
  for (auto [row, value] : rhs) lp.b[row] = value;
  lp.a = std::make_shared<const SparseMatrix>(
      SparseMatrix::from_triplets(m, n, std::move(entries)));
  lp.validate();
  return lp;
}

InstanceSpec load_instance(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".mps") {
    LpInstance lp = read_mps(path);
    InstanceSpec spec(lp_to_saddle(lp));
    spec.kind = InstanceKind::kLoaded;
    spec.z0.assign(lp.n() + lp.m(), 1.0);
    return spec;
  }
  return read_native(path);
}

}  // namespace pdids
