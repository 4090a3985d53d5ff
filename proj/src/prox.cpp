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

#include "pdids/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdids/errors.hpp"

namespace pdids {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDomainTol = 1e-12;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}
}  // namespace

void SubdiffSet::append(double lo, double hi) {
  if (lo > hi) throw InvalidInputError("SubdiffSet: interval with lo > hi");
  lower.push_back(lo);
  upper.push_back(hi);
}

Vector SubdiffSet::project(std::span<const double> v) const {
  if (v.size() != lower.size()) {
    throw InvalidInputError("SubdiffSet::project: dimension mismatch");
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::min(std::max(v[i], lower[i]), upper[i]);
  }
  return out;
}

double SubdiffSet::membership_residual(std::span<const double> v) const {
  Vector p = project(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double d = v[i] - p[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool SubdiffSet::is_singleton() const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] != upper[i]) return false;
  }
  return true;
}

SubdiffSet SubdiffSet::concat(const SubdiffSet& a, const SubdiffSet& b) {
  SubdiffSet out;
  out.lower.reserve(a.lower.size() + b.lower.size());
  out.upper.reserve(a.upper.size() + b.upper.size());
  out.lower.insert(out.lower.end(), a.lower.begin(), a.lower.end());
  out.lower.insert(out.lower.end(), b.lower.begin(), b.lower.end());
  out.upper.insert(out.upper.end(), a.upper.begin(), a.upper.end());
  out.upper.insert(out.upper.end(), b.upper.begin(), b.upper.end());
  return out;
}

const char* prox_kind_name(ProxKind kind) {
  switch (kind) {
    case ProxKind::kZero:
      return "zero";
    case ProxKind::kLinear:
      return "linear";
    case ProxKind::kIndicatorNonneg:
      return "indicator_nonneg";
    case ProxKind::kIndicatorBox:
      return "indicator_box";
    case ProxKind::kL1:
      return "l1";
    case ProxKind::kHalfSqNorm:
      return "half_sq_norm";
    case ProxKind::kLinearPlusNonneg:
      return "linear_plus_nonneg";
    case ProxKind::kIndicatorLinfBall:
      return "linf_ball";
  }
  return "?";
}

ProxFunction ProxFunction::zero(int dim) {
  return ProxFunction(ProxKind::kZero, dim);
}

ProxFunction ProxFunction::linear(Vector c) {
  require_finite(c, "linear");
  ProxFunction h(ProxKind::kLinear, static_cast<int>(c.size()));
  h.coeff_ = std::move(c);
  return h;
}

ProxFunction ProxFunction::indicator_nonneg(int dim) {
  return ProxFunction(ProxKind::kIndicatorNonneg, dim);
}

ProxFunction ProxFunction::indicator_box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) {
    throw InvalidInputError("indicator_box: bound dimension mismatch");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i]) {
      throw InvalidInputError("indicator_box: requires lo <= hi");
    }
  }
  ProxFunction h(ProxKind::kIndicatorBox, static_cast<int>(lo.size()));
  h.lo_ = std::move(lo);
  h.hi_ = std::move(hi);
  return h;
}

ProxFunction ProxFunction::l1(int dim, double weight) {
  if (weight < 0) throw InvalidInputError("l1: weight must be nonnegative");
  ProxFunction h(ProxKind::kL1, dim);
  h.weight_ = weight;
  return h;
}

ProxFunction ProxFunction::half_sq_norm(int dim, double mu, Vector shift) {
  if (mu <= 0) throw InvalidInputError("half_sq_norm: mu must be positive");
  if (shift.empty()) shift.assign(dim, 0.0);
  if (static_cast<int>(shift.size()) != dim) {
    throw InvalidInputError("half_sq_norm: shift dimension mismatch");
  }
  require_finite(shift, "half_sq_norm");
  ProxFunction h(ProxKind::kHalfSqNorm, dim);
  h.weight_ = mu;
  h.coeff_ = std::move(shift);
  return h;
}

ProxFunction ProxFunction::linear_plus_nonneg(Vector c) {
  require_finite(c, "linear_plus_nonneg");
  ProxFunction h(ProxKind::kLinearPlusNonneg, static_cast<int>(c.size()));
  h.coeff_ = std::move(c);
  return h;
}

ProxFunction ProxFunction::linf_ball(int dim, double radius) {
  if (radius < 0) throw InvalidInputError("linf_ball: radius must be nonnegative");
  ProxFunction h(ProxKind::kIndicatorLinfBall, dim);
  h.weight_ = radius;
  return h;
}

void ProxFunction::check_dim(std::size_t n, const char* op) const {
  if (static_cast<int>(n) != dim_) {
    throw InvalidInputError(std::string(prox_kind_name(kind_)) + "::" + op +
                            ": dimension mismatch");
  }
}

bool ProxFunction::in_domain(std::span<const double> x, double tol) const {
  check_dim(x.size(), "in_domain");
  switch (kind_) {
    case ProxKind::kIndicatorNonneg:
    case ProxKind::kLinearPlusNonneg:
      for (double xi : x) {
        if (xi < -tol) return false;
      }
      return true;
    case ProxKind::kIndicatorBox:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
      }
      return true;
    case ProxKind::kIndicatorLinfBall:
      for (double xi : x) {
        if (std::abs(xi) > weight_ + tol) return false;
      }
      return true;
    default:
      return true;
  }
}

double ProxFunction::value(std::span<const double> x) const {
  check_dim(x.size(), "value");
  if (!in_domain(x, kDomainTol)) return kInf;
  switch (kind_) {
    case ProxKind::kZero:
    case ProxKind::kIndicatorNonneg:
    case ProxKind::kIndicatorBox:
    case ProxKind::kIndicatorLinfBall:
      return 0.0;
    case ProxKind::kLinear:
    case ProxKind::kLinearPlusNonneg:
      return dot(coeff_, x);
    case ProxKind::kL1: {
      double s = 0.0;
      for (double xi : x) s += std::abs(xi);
      return weight_ * s;
    }
    case ProxKind::kHalfSqNorm:
      return 0.5 * weight_ * dot(x, x) + dot(coeff_, x);
  }
  return 0.0;
}

Vector ProxFunction::prox(double tau, std::span<const double> v) const {
  check_dim(v.size(), "prox");
  if (tau <= 0) throw InvalidInputError("prox: tau must be positive");
  Vector out(v.begin(), v.end());
  switch (kind_) {
    case ProxKind::kZero:
      break;
    case ProxKind::kLinear:
      for (int i = 0; i < dim_; ++i) out[i] -= tau * coeff_[i];
      break;
    case ProxKind::kIndicatorNonneg:
      for (double& o : out) o = std::max(o, 0.0);
      break;
    case ProxKind::kIndicatorBox:
      for (int i = 0; i < dim_; ++i) {
        out[i] = std::min(std::max(out[i], lo_[i]), hi_[i]);
      }
      break;
    case ProxKind::kL1:
      for (double& o : out) o = soft_threshold(o, tau * weight_);
      break;
    case ProxKind::kHalfSqNorm:
      for (int i = 0; i < dim_; ++i) {
        out[i] = (out[i] - tau * coeff_[i]) / (1.0 + tau * weight_);
      }
      break;
    case ProxKind::kLinearPlusNonneg:
      for (int i = 0; i < dim_; ++i) {
        out[i] = std::max(out[i] - tau * coeff_[i], 0.0);
      }
      break;
    case ProxKind::kIndicatorLinfBall:
      for (double& o : out) o = std::min(std::max(o, -weight_), weight_);
      break;
  }
  return out;
}

SubdiffSet ProxFunction::subdiff_at(std::span<const double> x) const {
  check_dim(x.size(), "subdiff_at");
  if (!in_domain(x, kDomainTol)) {
    throw InvalidInputError(std::string(prox_kind_name(kind_)) +
                            "::subdiff_at: point outside the domain");
  }
  SubdiffSet g;
  g.lower.reserve(dim_);
  g.upper.reserve(dim_);
  switch (kind_) {
    case ProxKind::kZero:
      for (int i = 0; i < dim_; ++i) g.append_singleton(0.0);
      break;
    case ProxKind::kLinear:
      for (int i = 0; i < dim_; ++i) g.append_singleton(coeff_[i]);
      break;
    case ProxKind::kIndicatorNonneg:
      for (int i = 0; i < dim_; ++i) {
        if (x[i] > 0.0) {
          g.append_singleton(0.0);
        } else {
          g.append(-kInf, 0.0);  // normal cone at the boundary
        }
      }
      break;
    case ProxKind::kIndicatorBox:
      for (int i = 0; i < dim_; ++i) {
        bool at_lo = x[i] <= lo_[i];
        bool at_hi = x[i] >= hi_[i];
        if (at_lo && at_hi) {
          g.append(-kInf, kInf);  // pinned coordinate, lo == hi
        } else if (at_lo) {
          g.append(-kInf, 0.0);
        } else if (at_hi) {
          g.append(0.0, kInf);
        } else {
          g.append_singleton(0.0);
        }
      }
      break;
    case ProxKind::kL1:
      for (int i = 0; i < dim_; ++i) {
        if (x[i] > 0.0) {
          g.append_singleton(weight_);
        } else if (x[i] < 0.0) {
          g.append_singleton(-weight_);
        } else {
          g.append(-weight_, weight_);
        }
      }
      break;
    case ProxKind::kHalfSqNorm:
      for (int i = 0; i < dim_; ++i) {
        g.append_singleton(weight_ * x[i] + coeff_[i]);
      }
      break;
    case ProxKind::kLinearPlusNonneg:
      for (int i = 0; i < dim_; ++i) {
        if (x[i] > 0.0) {
          g.append_singleton(coeff_[i]);
        } else {
          g.append(-kInf, coeff_[i]);
        }
      }
      break;
    case ProxKind::kIndicatorLinfBall:
      for (int i = 0; i < dim_; ++i) {
        bool at_hi = x[i] >= weight_;
        bool at_lo = x[i] <= -weight_;
        if (at_hi && at_lo) {
          g.append(-kInf, kInf);  // radius 0
        } else if (at_hi) {
          g.append(0.0, kInf);
        } else if (at_lo) {
          g.append(-kInf, 0.0);
        } else {
          g.append_singleton(0.0);
        }
      }
      break;
  }
  return g;
}

ProxFunction ProxFunction::conjugate() const {
  switch (kind_) {
    case ProxKind::kL1:
      return linf_ball(dim_, weight_);
    case ProxKind::kIndicatorLinfBall:
      return l1(dim_, weight_);
    case ProxKind::kHalfSqNorm: {
      Vector shift(dim_);
      for (int i = 0; i < dim_; ++i) shift[i] = -coeff_[i] / weight_;
      return half_sq_norm(dim_, 1.0 / weight_, std::move(shift));
    }
    case ProxKind::kLinear:
      return indicator_box(coeff_, coeff_);
    case ProxKind::kIndicatorBox: {
      for (int i = 0; i < dim_; ++i) {
        if (lo_[i] != hi_[i]) {
          throw InvalidInputError(
              "conjugate: only degenerate boxes (lo == hi) are catalogued");
        }
      }
      return linear(lo_);
    }
    default:
      throw InvalidInputError(std::string("conjugate: kind ") +
                              prox_kind_name(kind_) + " is not catalogued");
  }
}

Vector project_subdiff(const ProxFunction& h, std::span<const double> x,
                       std::span<const double> v) {
  return h.subdiff_at(x).project(v);
}

double subdiff_membership_residual(const ProxFunction& h,
                                   std::span<const double> x,
                                   std::span<const double> v) {
  return h.subdiff_at(x).membership_residual(v);
}

}  // namespace pdids
