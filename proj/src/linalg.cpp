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

#include "pdids/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "pdids/errors.hpp"

namespace pdids {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidInputError(std::string(what) + ": non-finite entry");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<double> v, double alpha) {
  for (double& x : v) x *= alpha;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector concat(std::span<const double> a, std::span<const double> b) {
  Vector out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> entries) {
  if (rows < 0 || cols < 0) {
    throw InvalidInputError("SparseMatrix: negative dimension");
  }
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidInputError("SparseMatrix: entry index out of bounds");
    }
    if (!std::isfinite(t.value)) {
      throw InvalidInputError("SparseMatrix: non-finite entry");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(rows + 1, 0);
  m.col_indices_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      double v = entries[i].value;
      int c = entries[i].col;
      ++i;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;  // merge duplicates
        ++i;
      }
      if (v != 0.0) {
        m.col_indices_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_offsets_[r + 1] = static_cast<int>(m.values_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
  std::vector<Triplet> ts;
  ts.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    ts.push_back({static_cast<int>(i), static_cast<int>(i), diag[i]});
  }
  int n = static_cast<int>(diag.size());
  return from_triplets(n, n, std::move(ts));
}

SparseMatrix SparseMatrix::from_dense(int rows, int cols,
                                      std::span<const double> data) {
  std::vector<Triplet> ts;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double v = data[static_cast<std::size_t>(i) * cols + j];
      if (v != 0.0) ts.push_back({i, j, v});
    }
  }
  return from_triplets(rows, cols, std::move(ts));
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> out) const {
  if (static_cast<int>(x.size()) != cols_ ||
      static_cast<int>(out.size()) != rows_) {
    throw InvalidInputError("SparseMatrix::multiply: dimension mismatch");
  }
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      s += values_[k] * x[col_indices_[k]];
    }
    out[r] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> y,
                                      std::span<double> out) const {
  if (static_cast<int>(y.size()) != rows_ ||
      static_cast<int>(out.size()) != cols_) {
    throw InvalidInputError(
        "SparseMatrix::multiply_transpose: dimension mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (int r = 0; r < rows_; ++r) {
    double yr = y[r];
    if (yr == 0.0) continue;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      out[col_indices_[k]] += values_[k] * yr;
    }
  }
}

Vector SparseMatrix::apply(std::span<const double> x) const {
  Vector out(rows_);
  multiply(x, out);
  return out;
}

Vector SparseMatrix::apply_transpose(std::span<const double> y) const {
  Vector out(cols_);
  multiply_transpose(y, out);
  return out;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> ts;
  ts.reserve(values_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      ts.push_back({r, col_indices_[k], values_[k]});
    }
  }
  return ts;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      d[static_cast<std::size_t>(r) * cols_ + col_indices_[k]] = values_[k];
    }
  }
  return d;
}

namespace {

// Deterministic fallbacks if a start vector lands in the kernel of A'A.
// After one productive multiply the iterate stays in range(A') and cannot
// collapse again.
Vector power_start(const SparseMatrix& a, int attempt) {
  int n = a.cols();
  Vector v(n);
  if (attempt == 0) {
    std::fill(v.begin(), v.end(), 1.0);
  } else if (attempt == 1) {
    for (int i = 0; i < n; ++i) v[i] = 1.0 + i;
  } else {
    // basis vector on the first structurally nonzero column
    int col = a.nnz() > 0 ? a.col_indices()[0] : 0;
    v[col] = 1.0;
  }
  double nv = norm2(v);
  if (nv > 0) scale(v, 1.0 / nv);
  return v;
}

}  // namespace

double operator_norm(const SparseMatrix& a, double tol, int max_iters) {
  if (tol <= 0) throw InvalidInputError("operator_norm: tol must be positive");
  if (a.nnz() == 0) return 0.0;

  Vector v = power_start(a, 0);
  Vector av(a.rows());
  Vector w(a.cols());
  double lam = 0.0;
  double prev = -1.0;
  int settled = 0;
  int attempt = 0;
  for (int iter = 0; iter < max_iters; ++iter) {
    a.multiply(v, av);
    a.multiply_transpose(av, w);
    lam = dot(v, w);  // Rayleigh quotient for A'A
    double nw = norm2(w);
    if (nw == 0.0) {
      if (++attempt > 2) {
        throw NumericalError("operator_norm: start vectors exhausted", 0.0);
      }
      v = power_start(a, attempt);
      prev = -1.0;
      settled = 0;
      continue;
    }
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    if (prev >= 0.0 && std::abs(lam - prev) <= tol * std::max(lam, 1e-300)) {
      // require the change criterion twice in a row
      if (++settled >= 2) return std::sqrt(std::max(lam, 0.0));
    } else {
      settled = 0;
    }
    prev = lam;
  }
  throw NumericalError("operator_norm: iteration cap reached",
                       std::sqrt(std::max(lam, 0.0)));
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector DenseMatrix::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) {
    throw InvalidInputError("DenseMatrix::apply: dimension mismatch");
  }
  Vector out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += a_[i * cols_ + j] * x[j];
    out[i] = s;
  }
  return out;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
  if (cols_ != other.rows_) {
    throw InvalidInputError("DenseMatrix::multiply: dimension mismatch");
  }
  DenseMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      double v = a_[i * cols_ + k];
      if (v == 0.0) continue;
      for (int j = 0; j < other.cols_; ++j) {
        out(i, j) += v * other(k, j);
      }
    }
  }
  return out;
}

SymmetricEig symmetric_eig(DenseMatrix a, int max_sweeps) {
  if (a.rows() != a.cols()) {
    throw InvalidInputError("symmetric_eig: matrix not square");
  }
  int n = a.rows();
  DenseMatrix v = DenseMatrix::identity(n);
  double fro = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) fro += a(i, j) * a(i, j);
  }
  fro = std::sqrt(fro);
  const double stop = 1e-15 * std::max(fro, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (std::sqrt(2.0 * off) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEig out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return out.values[x] < out.values[y]; });
  Vector sorted(n);
  DenseMatrix vecs(n, n);
  for (int j = 0; j < n; ++j) {
    sorted[j] = out.values[order[j]];
    for (int i = 0; i < n; ++i) vecs(i, j) = v(i, order[j]);
  }
  out.values = std::move(sorted);
  out.vectors = std::move(vecs);
  return out;
}

Vector singular_values(const SparseMatrix& a) {
  int n = a.cols();
  DenseMatrix ata(n, n);
  std::vector<double> dense = a.to_dense();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int r = 0; r < a.rows(); ++r) {
        s += dense[static_cast<std::size_t>(r) * n + i] *
             dense[static_cast<std::size_t>(r) * n + j];
      }
      ata(i, j) = s;
      ata(j, i) = s;
    }
  }
  SymmetricEig eig = symmetric_eig(std::move(ata));
  Vector sv(n);
  for (int i = 0; i < n; ++i) sv[i] = std::sqrt(std::max(eig.values[i], 0.0));
  return sv;
}

double sigma_min_positive(const SparseMatrix& a, double rel_cut) {
  const int kDenseCap = 500;
  if (a.rows() > kDenseCap || a.cols() > kDenseCap) {
    throw InvalidInputError(
        "sigma_min_positive: dense path capped at dimension 500");
  }
  Vector sv = singular_values(a);
  double smax = sv.empty() ? 0.0 : sv.back();
  double cut = rel_cut * smax;
  for (double s : sv) {
    if (s > cut) return s;
  }
  return 0.0;
}

LuFactors lu_factor(DenseMatrix a) {
  if (a.rows() != a.cols()) {
    throw InvalidInputError("lu_factor: matrix not square");
  }
  int n = a.rows();
  LuFactors f;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) throw NumericalError("lu_factor: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

Vector lu_solve(const LuFactors& f, std::span<const double> b) {
  int n = f.lu.rows();
  if (static_cast<int>(b.size()) != n) {
    throw InvalidInputError("lu_solve: dimension mismatch");
  }
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

Vector least_squares_min_norm(const SparseMatrix& a, std::span<const double> b,
                              double rel_cut) {
  // x = V diag(1/sigma^2)^+ V' A' b with A'A = V diag(sigma^2) V'.
  int n = a.cols();
  std::vector<double> dense = a.to_dense();
  DenseMatrix ata(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int r = 0; r < a.rows(); ++r) {
        s += dense[static_cast<std::size_t>(r) * n + i] *
             dense[static_cast<std::size_t>(r) * n + j];
      }
      ata(i, j) = s;
      ata(j, i) = s;
    }
  }
  SymmetricEig eig = symmetric_eig(std::move(ata));
  double lmax = eig.values.empty() ? 0.0 : eig.values.back();
  double cut = rel_cut * std::max(lmax, 0.0);
  Vector atb = a.apply_transpose(b);
  Vector x(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (eig.values[j] <= cut) continue;
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += eig.vectors(i, j) * atb[i];
    proj /= eig.values[j];
    for (int i = 0; i < n; ++i) x[i] += eig.vectors(i, j) * proj;
  }
  return x;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97f4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

std::uint64_t SplitMix64::next_below(std::uint64_t n) {
  // modulo bias is irrelevant at the sizes used here
  return n == 0 ? 0 : next() % n;
}

}  // namespace pdids
