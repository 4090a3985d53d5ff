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

#include "pdids/solvers.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "pdids/errors.hpp"

namespace pdids {

namespace {
constexpr double kInnerTol = 1e-10;
constexpr double kRouteTol = 1e-10;
}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kPdhg:
      return "pdhg";
    case Algorithm::kPpm:
      return "ppm";
    case Algorithm::kLadmm:
      return "ladmm";
    case Algorithm::kAdmm:
      return "admm";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "pdhg") return Algorithm::kPdhg;
  if (name == "ppm") return Algorithm::kPpm;
  if (name == "ladmm") return Algorithm::kLadmm;
  if (name == "admm") return Algorithm::kAdmm;
  throw InvalidInputError("unknown algorithm: " + name);
}

Vector pdhg_step(const SaddleProblem& p, double s, std::span<const double> z) {
  if (static_cast<int>(z.size()) != p.dim()) {
    throw InvalidInputError("pdhg_step: dimension mismatch");
  }
  if (s <= 0 || s * p.coupling_norm() >= 1.0) {
    throw InvalidInputError("pdhg_step: requires s ||A|| < 1");
  }
  auto x = z.subspan(0, p.n());
  auto y = z.subspan(p.n(), p.m());

  Vector aty = p.coupling().apply_transpose(y);
  Vector xv(p.n());
  for (int i = 0; i < p.n(); ++i) xv[i] = x[i] - s * aty[i];
  Vector x_next = p.f().prox(s, xv);

  Vector extra(p.n());
  for (int i = 0; i < p.n(); ++i) extra[i] = 2.0 * x_next[i] - x[i];
  Vector ax = p.coupling().apply(extra);
  Vector yv(p.m());
  for (int j = 0; j < p.m(); ++j) yv[j] = y[j] + s * ax[j];
  Vector y_next = p.g().prox(s, yv);

  return concat(x_next, y_next);
}

namespace {

bool ppm_affine_kind(ProxKind k) {
  return k == ProxKind::kZero || k == ProxKind::kLinear ||
         k == ProxKind::kHalfSqNorm;
}

// gradient contribution of an affine-subdifferential function: mu x + b
void affine_terms(const ProxFunction& h, double* mu, Vector* b) {
  *mu = h.kind() == ProxKind::kHalfSqNorm ? h.weight() : 0.0;
  if (h.kind() == ProxKind::kLinear || h.kind() == ProxKind::kHalfSqNorm) {
    *b = h.coeff();
    if (b->empty()) b->assign(h.dim(), 0.0);
  } else {
    b->assign(h.dim(), 0.0);
  }
}

// Exact resolvent for affine F(z) = M z + q: solves (I + sM) z_next = z - s q.
Vector ppm_affine_step(const SaddleProblem& p, double s,
                       std::span<const double> z) {
  int n = p.n(), m = p.m(), d = n + m;
  double mu_f = 0.0, mu_g = 0.0;
  Vector bf, bg;
  affine_terms(p.f(), &mu_f, &bf);
  affine_terms(p.g(), &mu_g, &bg);

  DenseMatrix mat(d, d);
  for (int i = 0; i < n; ++i) mat(i, i) = 1.0 + s * mu_f;
  for (int j = 0; j < m; ++j) mat(n + j, n + j) = 1.0 + s * mu_g;
  for (const Triplet& t : p.coupling().to_triplets()) {
    mat(t.col, n + t.row) += s * t.value;   // +A'
    mat(n + t.row, t.col) -= s * t.value;   // -A
  }
  Vector rhs(d);
  for (int i = 0; i < n; ++i) rhs[i] = z[i] - s * bf[i];
  for (int j = 0; j < m; ++j) rhs[n + j] = z[n + j] - s * bg[j];
  return lu_solve(lu_factor(std::move(mat)), rhs);
}

// Inner PDHG on the proximally regularized saddle
//   min_x max_y L(x, y) + (1/2s)||x - x_k||^2 - (1/2s)||y - y_k||^2,
// whose unique saddle point is the PPM iterate. The regularized prox maps
// reduce to catalogue proxes with a blended parameter.
Vector ppm_inner_step(const SaddleProblem& p, double s,
                      std::span<const double> z) {
  int n = p.n(), m = p.m();
  double a_norm = p.coupling_norm();
  double s_in = a_norm > 0 ? 1.0 / (2.0 * a_norm) : 1.0;

  auto blended_prox = [&](const ProxFunction& h, std::span<const double> anchor,
                          std::span<const double> v) {
    double tp = 1.0 / (1.0 / s_in + 1.0 / s);
    Vector arg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      arg[i] = tp * (anchor[i] / s + v[i] / s_in);
    }
    return h.prox(tp, arg);
  };

  auto xk = z.subspan(0, n);
  auto yk = z.subspan(n, m);
  Vector cur(z.begin(), z.end());
  Vector omega(z.size());

  const long kCap = 200000;
  for (long it = 0; it < kCap; ++it) {
    // certificate of the outer resolvent: (1/s)(z_k - cur) in F(cur)
    for (std::size_t i = 0; i < cur.size(); ++i) {
      omega[i] = (z[i] - cur[i]) / s;
    }
    if (p.membership_residual(cur, omega) <= kInnerTol) return cur;

    std::span<const double> x(cur.data(), n);
    std::span<const double> y(cur.data() + n, m);
    Vector aty = p.coupling().apply_transpose(y);
    Vector xv(n);
    for (int i = 0; i < n; ++i) xv[i] = x[i] - s_in * aty[i];
    Vector x_next = blended_prox(p.f(), xk, xv);

    Vector extra(n);
    for (int i = 0; i < n; ++i) extra[i] = 2.0 * x_next[i] - x[i];
    Vector ax = p.coupling().apply(extra);
    Vector yv(m);
    for (int j = 0; j < m; ++j) yv[j] = y[j] + s_in * ax[j];
    Vector y_next = blended_prox(p.g(), yk, yv);

    std::copy(x_next.begin(), x_next.end(), cur.begin());
    std::copy(y_next.begin(), y_next.end(), cur.begin() + n);
  }
  throw NumericalError("ppm_step: inner solve did not reach tolerance 1e-10");
}

}  // namespace

Vector ppm_step(const SaddleProblem& p, double s, std::span<const double> z) {
  if (static_cast<int>(z.size()) != p.dim()) {
    throw InvalidInputError("ppm_step: dimension mismatch");
  }
  if (s <= 0) throw InvalidInputError("ppm_step: s must be positive");
  if (ppm_affine_kind(p.f().kind()) && ppm_affine_kind(p.g().kind())) {
    return ppm_affine_step(p, s, z);
  }
  return ppm_inner_step(p, s, z);
}

namespace {

// prox of the conjugate pair: uses the catalogued conjugate when available,
// otherwise falls back to the Moreau decomposition
// prox_f^t(x) = x - t prox_{f*}^{1/t}(x / t).
Vector prox_of_biconjugate(const ProxFunction& h_conj, double t,
                           std::span<const double> x) {
  Vector scaled(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = x[i] / t;
  Vector inner = h_conj.prox(1.0 / t, scaled);
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - t * inner[i];
  return out;
}

void check_route_agreement(const Vector& raw, const Vector& closed,
                           const char* what) {
  double scale = 1.0 + norm2(raw);
  if (norm2(subtract(raw, closed)) > kRouteTol * scale) {
    throw NumericalError(std::string(what) +
                         ": raw update and proximal closed form disagree");
  }
}

void ladmm_step_impl(const ProxFunction& f_conj, const ProxFunction& g_conj,
                     const SparseMatrix& a, double tau, double lambda,
                     double a_norm, AdmmState& state) {
  if (lambda <= tau * a_norm * a_norm) {
    throw InvalidInputError("ladmm_step: requires lambda > tau ||A||^2");
  }
  int n = a.cols(), m = a.rows();
  if (static_cast<int>(state.v.size()) != n ||
      static_cast<int>(state.y.size()) != m) {
    throw InvalidInputError("ladmm_step: state dimension mismatch");
  }
  if (state.w.empty()) state.w.assign(n, 0.0);

  Vector aty = a.apply_transpose(state.y);

  // raw sweep, kept in the algorithm's own arithmetic
  Vector q(n);
  for (int i = 0; i < n; ++i) {
    q[i] = state.v[i] - tau * (aty[i] + state.w[i]);
  }
  Vector warg(n);
  for (int i = 0; i < n; ++i) warg[i] = state.w[i] + q[i] / tau;
  Vector w_next = f_conj.prox(1.0 / tau, warg);
  Vector v_raw(n);
  for (int i = 0; i < n; ++i) {
    v_raw[i] = state.v[i] - tau * (aty[i] + w_next[i]);
  }
  Vector t(n);
  for (int i = 0; i < n; ++i) {
    t[i] = v_raw[i] - tau * (aty[i] + w_next[i]);
  }
  Vector at = a.apply(t);
  Vector yarg(m);
  for (int j = 0; j < m; ++j) yarg[j] = state.y[j] + at[j] / lambda;
  Vector y_raw = g_conj.prox(1.0 / lambda, yarg);

  // Derived closed forms v = prox_f^tau(v - tau A'y) and
  // y = prox_{g*}^{1/lambda}(y + (1/lambda) A (2v' - v)). The committed
  // iterate is the proximal form: it lands on subdifferential boundaries
  // exactly, where the raw linear update leaves rounding residue that the
  // exact active-set classification would misread.
  Vector varg(n);
  for (int i = 0; i < n; ++i) varg[i] = state.v[i] - tau * aty[i];
  Vector v_next;
  bool have_f = true;
  try {
    ProxFunction f = f_conj.conjugate();
    v_next = f.prox(tau, varg);
  } catch (const InvalidInputError&) {
    have_f = false;
  }
  if (!have_f) v_next = prox_of_biconjugate(f_conj, tau, varg);
  check_route_agreement(v_raw, v_next, "ladmm_step v");

  Vector two_v(n);
  for (int i = 0; i < n; ++i) two_v[i] = 2.0 * v_next[i] - state.v[i];
  Vector a2v = a.apply(two_v);
  Vector yarg_closed(m);
  for (int j = 0; j < m; ++j) {
    yarg_closed[j] = state.y[j] + a2v[j] / lambda;
  }
  Vector y_next = g_conj.prox(1.0 / lambda, yarg_closed);
  check_route_agreement(y_raw, y_next, "ladmm_step y");

  state.w = std::move(w_next);
  state.v = std::move(v_next);
  state.y = std::move(y_next);
}

// argmin_y g*(y) + (tau/2) ||A'y - r||^2
Vector admm_y_subproblem(const ProxFunction& g_conj, const SparseMatrix& a,
                         double tau, double a_norm,
                         std::span<const double> r,
                         std::span<const double> y_start) {
  int m = a.rows();
  if (g_conj.kind() == ProxKind::kHalfSqNorm) {
    // (mu I + tau A A') y = tau A r - b, solved by conjugate gradients
    double mu = g_conj.weight();
    const Vector& b = g_conj.coeff();
    Vector rhs = a.apply(r);
    for (int j = 0; j < m; ++j) rhs[j] = tau * rhs[j] - b[j];

    auto op = [&](std::span<const double> y) {
      Vector aty = a.apply_transpose(y);
      Vector out = a.apply(aty);
      for (int j = 0; j < m; ++j) out[j] = mu * y[j] + tau * out[j];
      return out;
    };
    Vector y(y_start.begin(), y_start.end());
    Vector res = subtract(rhs, op(y));
    Vector p(res);
    double rr = dot(res, res);
    double stop = 1e-13 * std::max(norm2(rhs), 1e-300);
    for (int it = 0; it < 100 * m + 200; ++it) {
      if (std::sqrt(rr) <= stop) return y;
      Vector op_p = op(p);
      double alpha = rr / dot(p, op_p);
      axpy(alpha, p, y);
      axpy(-alpha, op_p, res);
      double rr_next = dot(res, res);
      double beta = rr_next / rr;
      rr = rr_next;
      for (int j = 0; j < m; ++j) p[j] = res[j] + beta * p[j];
    }
    throw NumericalError("admm_step: y-subproblem CG did not converge");
  }

  // proximal gradient on g*(y) + q(y); linear convergence needs AA'
  // nonsingular, which also makes q strongly convex
  if (sigma_min_positive(a) <= 0.0 || a.rows() > a.cols()) {
    throw InvalidInputError(
        std::string("admm_step: y-subproblem unsupported for g* kind ") +
        prox_kind_name(g_conj.kind()) + " without full-row-rank A");
  }
  double lip = tau * a_norm * a_norm;
  if (lip <= 0) {
    throw InvalidInputError("admm_step: zero coupling, y-subproblem degenerate");
  }
  Vector y(y_start.begin(), y_start.end());
  const long kCap = 200000;
  for (long it = 0; it < kCap; ++it) {
    Vector aty = a.apply_transpose(y);
    Vector diff(aty.size());
    for (std::size_t i = 0; i < aty.size(); ++i) diff[i] = aty[i] - r[i];
    Vector grad = a.apply(diff);
    Vector step(m);
    for (int j = 0; j < m; ++j) step[j] = y[j] - (tau / lip) * grad[j];
    Vector y_next = g_conj.prox(1.0 / lip, step);
    double move = norm2(subtract(y_next, y));
    y = std::move(y_next);
    if (move * lip <= kInnerTol) return y;
  }
  throw NumericalError("admm_step: y-subproblem did not reach tolerance 1e-10");
}

void admm_step_impl(const ProxFunction& f_conj, const ProxFunction& g_conj,
                    const SparseMatrix& a, double tau, double a_norm,
                    AdmmState& state) {
  int n = a.cols(), m = a.rows();
  if (static_cast<int>(state.v.size()) != n ||
      static_cast<int>(state.y.size()) != m) {
    throw InvalidInputError("admm_step: state dimension mismatch");
  }
  if (state.w.empty()) state.w.assign(n, 0.0);

  Vector aty = a.apply_transpose(state.y);
  Vector warg(n);
  for (int i = 0; i < n; ++i) warg[i] = state.v[i] / tau - aty[i];
  Vector w_next = f_conj.prox(1.0 / tau, warg);
  Vector v_raw(n);
  for (int i = 0; i < n; ++i) {
    v_raw[i] = state.v[i] - tau * (aty[i] + w_next[i]);
  }

  // commit the proximal form (exact on boundaries), cross-checked against
  // the raw linear update
  Vector varg(n);
  for (int i = 0; i < n; ++i) varg[i] = state.v[i] - tau * aty[i];
  Vector v_next;
  try {
    ProxFunction f = f_conj.conjugate();
    v_next = f.prox(tau, varg);
  } catch (const InvalidInputError&) {
    v_next = prox_of_biconjugate(f_conj, tau, varg);
  }
  check_route_agreement(v_raw, v_next, "admm_step v");

  Vector r(n);
  for (int i = 0; i < n; ++i) {
    r[i] = aty[i] + (2.0 * v_next[i] - state.v[i]) / tau;
  }
  Vector y_next = admm_y_subproblem(g_conj, a, tau, a_norm, r, state.y);

  state.w = std::move(w_next);
  state.v = std::move(v_next);
  state.y = std::move(y_next);
}

}  // namespace

void ladmm_step(const ProxFunction& f_conj, const ProxFunction& g_conj,
                const SparseMatrix& a, double tau, double lambda,
                AdmmState& state) {
  if (tau <= 0 || lambda <= 0) {
    throw InvalidInputError("ladmm_step: step sizes must be positive");
  }
  ladmm_step_impl(f_conj, g_conj, a, tau, lambda, operator_norm(a), state);
}

void admm_step(const ProxFunction& f_conj, const ProxFunction& g_conj,
               const SparseMatrix& a, double tau, AdmmState& state) {
  if (tau <= 0) throw InvalidInputError("admm_step: tau must be positive");
  admm_step_impl(f_conj, g_conj, a, tau, operator_norm(a), state);
}

std::optional<std::string> SolverTrace::header_value(
    const std::string& key) const {
  for (const auto& [k, v] : header) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void SolverTrace::set_header(const std::string& key, const std::string& value) {
  for (auto& [k, v] : header) {
    if (k == key) {
      v = value;
      return;
    }
  }
  header.emplace_back(key, value);
}

std::pair<double, double> resolve_steps(const SaddleProblem& p,
                                        const SolverConfig& cfg) {
  double norm = p.coupling_norm();
  switch (cfg.algorithm) {
    case Algorithm::kPdhg:
    case Algorithm::kPpm: {
      double s;
      if (cfg.step_size.has_value()) {
        s = *cfg.step_size;
      } else {
        if (norm <= 0) {
          throw InvalidInputError(
              "resolve_steps: default step rule 1/(2||A||) needs a nonzero "
              "coupling matrix");
        }
        s = 1.0 / (2.0 * norm);
      }
      if (s <= 0) throw InvalidInputError("resolve_steps: step must be positive");
      return {s, 0.0};
    }
    case Algorithm::kLadmm: {
      double tau = cfg.tau.value_or(cfg.step_size.value_or(
          norm > 0 ? 1.0 / (2.0 * norm) : 1.0));
      double lambda =
          cfg.lambda.value_or(1.05 * tau * norm * norm + 1e-12);
      if (tau <= 0 || lambda <= 0) {
        throw InvalidInputError("resolve_steps: step sizes must be positive");
      }
      return {tau, lambda};
    }
    case Algorithm::kAdmm: {
      double tau = cfg.tau.value_or(cfg.step_size.value_or(1.0));
      if (tau <= 0) throw InvalidInputError("resolve_steps: tau must be positive");
      return {tau, 0.0};
    }
  }
  throw InvalidInputError("resolve_steps: unknown algorithm");
}

MetricMatrix metric_for(const SaddleProblem& p, const SolverConfig& cfg) {
  auto [primary, lambda] = resolve_steps(p, cfg);
  switch (cfg.algorithm) {
    case Algorithm::kPdhg:
      return MetricMatrix::pdhg(primary, p.coupling_ptr());
    case Algorithm::kPpm:
      return MetricMatrix::ppm(primary, p.n(), p.m());
    case Algorithm::kLadmm:
      return MetricMatrix::ladmm(primary, lambda, p.coupling_ptr());
    case Algorithm::kAdmm:
      return MetricMatrix::admm(primary, p.coupling_ptr());
  }
  throw InvalidInputError("metric_for: unknown algorithm");
}

RunResult run(const SaddleProblem& p, const SolverConfig& cfg,
              std::span<const double> z0) {
  if (static_cast<int>(z0.size()) != p.dim()) {
    throw InvalidInputError("run: z0 dimension mismatch");
  }
  if (cfg.max_iters < 0) throw InvalidInputError("run: max_iters negative");
  if (cfg.ids_every < 1) throw InvalidInputError("run: ids_every must be >= 1");

  auto [primary, lambda] = resolve_steps(p, cfg);
  MetricMatrix metric = metric_for(p, cfg);
  if (cfg.algorithm == Algorithm::kPdhg && !metric.positive_definite()) {
    throw InvalidInputError("run: pdhg requires s ||A|| < 1");
  }
  if (cfg.algorithm == Algorithm::kLadmm && !metric.positive_definite()) {
    throw InvalidInputError("run: ladmm requires lambda > tau ||A||^2");
  }

  const bool admm_family = cfg.algorithm == Algorithm::kLadmm ||
                           cfg.algorithm == Algorithm::kAdmm;
  std::optional<ProxFunction> f_conj;
  if (admm_family) f_conj = p.f().conjugate();

  RunResult out;
  SolverTrace& trace = out.trace;
  trace.set_header("version", "pdids-0.1.0");
  trace.set_header("algorithm", algorithm_name(cfg.algorithm));
  trace.set_header("n", std::to_string(p.n()));
  trace.set_header("m", std::to_string(p.m()));
  if (cfg.algorithm == Algorithm::kPdhg || cfg.algorithm == Algorithm::kPpm) {
    trace.set_header("s", format_g17(primary));
  } else {
    trace.set_header("tau", format_g17(primary));
    if (cfg.algorithm == Algorithm::kLadmm) {
      trace.set_header("lambda", format_g17(lambda));
    }
  }
  trace.set_header("seed", std::to_string(cfg.seed));
  trace.set_header("ids_every", std::to_string(cfg.ids_every));
  trace.set_header("max_iters", std::to_string(cfg.max_iters));

  AdmmState state;
  Vector z(z0.begin(), z0.end());
  if (admm_family) {
    state.w.assign(p.n(), 0.0);
    state.v.assign(z.begin(), z.begin() + p.n());
    state.y.assign(z.begin() + p.n(), z.end());
  }

  Vector z_prev;
  std::optional<double> last_inclusion;
  auto start = std::chrono::steady_clock::now();

  for (long k = 0; k <= cfg.max_iters; ++k) {
    if (k % cfg.ids_every == 0) {
      TraceRow row;
      row.k = k;
      if (cfg.algorithm == Algorithm::kAdmm) {
        std::optional<std::pair<std::span<const double>, std::span<const double>>>
            witness;
        if (k > 0) witness.emplace(z_prev, z);
        bool singleton = p.operator_parts(z).g.is_singleton();
        if (singleton || witness.has_value()) {
          IdsResult r = ids_range_restricted(p, metric, z, witness);
          if (!r.empty_intersection) row.ids = r.value;
          row.agd_iters = r.agd_iters;
        }
      } else {
        IdsResult r = ids_evaluate(p, metric, z, cfg.agd);
        if (!r.converged) {
          throw NumericalError("run: IDS evaluation hit the AGD iteration cap",
                               r.value);
        }
        row.ids = r.value;
        row.agd_iters = r.agd_iters;
        if (p.optimum().has_value()) {
          row.gap_bound =
              gap_certificate(p, metric, z, *p.optimum(), r.value).bound;
        }
      }
      if (k > 0) row.ids_certificate = ids_certificate(metric, z_prev, z);
      if (p.lp().has_value()) {
        double kkt = kkt_residual_saddle(*p.lp(), z);
        row.kkt_residual_sq = kkt * kkt;
      }
      row.inclusion_residual = last_inclusion;
      row.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      trace.rows.push_back(std::move(row));
      out.iterates.push_back(z);
    }
    if (k == cfg.max_iters) break;

    Vector z_next;
    switch (cfg.algorithm) {
      case Algorithm::kPdhg:
        z_next = pdhg_step(p, primary, z);
        break;
      case Algorithm::kPpm:
        z_next = ppm_step(p, primary, z);
        break;
      case Algorithm::kLadmm:
        ladmm_step_impl(*f_conj, p.g(), p.coupling(), primary, lambda,
                        p.coupling_norm(), state);
        z_next = concat(state.v, state.y);
        break;
      case Algorithm::kAdmm:
        admm_step_impl(*f_conj, p.g(), p.coupling(), primary,
                       p.coupling_norm(), state);
        z_next = concat(state.v, state.y);
        break;
    }
    if (cfg.inclusion_audit) {
      Vector omega = metric.apply(subtract(z, z_next));
      last_inclusion = p.membership_residual(z_next, omega);
    } else {
      last_inclusion.reset();
    }
    z_prev = std::move(z);
    z = std::move(z_next);
  }

  out.z_final = std::move(z);
  return out;
}

}  // namespace pdids
