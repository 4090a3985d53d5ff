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

#ifndef PDIDS_LINALG_HPP_
#define PDIDS_LINALG_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pdids {

// Vectors are plain double arrays. Problem and file-format boundaries call
// require_finite() so that NaN/Inf never enter the solvers.
using Vector = std::vector<double>;

void require_finite(std::span<const double> v, const char* what);

// Shortest decimal form that round-trips a double exactly (printf %.17g).
std::string format_g17(double v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(std::span<double> v, double alpha);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector concat(std::span<const double> a, std::span<const double> b);

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed row storage. Construction sorts the triplets, merges duplicates
// (summing values), drops exact zeros, and validates index bounds, so column
// indices are strictly increasing within each row afterwards.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<Triplet> entries);
  static SparseMatrix diagonal(std::span<const double> diag);
  // Row-major dense data, zeros dropped.
  static SparseMatrix from_dense(int rows, int cols,
                                 std::span<const double> data);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  // out = A x
  void multiply(std::span<const double> x, std::span<double> out) const;
  // out = A' y
  void multiply_transpose(std::span<const double> y, std::span<double> out) const;
  Vector apply(std::span<const double> x) const;
  Vector apply_transpose(std::span<const double> y) const;

  std::vector<Triplet> to_triplets() const;
  std::vector<double> to_dense() const;  // row-major, rows*cols

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

// Largest singular value by power iteration on A'A, started from the
// normalized all-ones vector. Deterministic. Returns 0 for a zero matrix;
// throws NumericalError (carrying the last estimate) if the iteration cap
// is hit before the estimate settles to the requested relative tolerance.
double operator_norm(const SparseMatrix& a, double tol = 1e-12,
                     int max_iters = 10000);

// Small dense matrices back the pseudo-inverse, the proximal-point resolvent
// and the test oracles; everything iterative stays matrix-free.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[i * cols_ + j]; }
  double operator()(int i, int j) const { return a_[i * cols_ + j]; }

  Vector apply(std::span<const double> x) const;
  DenseMatrix multiply(const DenseMatrix& other) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

struct SymmetricEig {
  Vector values;        // ascending
  DenseMatrix vectors;  // column j is the eigenvector for values[j]
};

// Cyclic Jacobi rotations; fine for the desk-scale symmetric matrices used
// by the pseudo-inverse and the instance generators.
SymmetricEig symmetric_eig(DenseMatrix a, int max_sweeps = 100);

// Singular values of a general matrix via eigenvalues of A'A (ascending).
Vector singular_values(const SparseMatrix& a);
// Smallest nonzero singular value; zero cutoff is rel_cut * sigma_max.
double sigma_min_positive(const SparseMatrix& a, double rel_cut = 1e-10);

struct LuFactors {
  DenseMatrix lu;
  std::vector<int> perm;
};

LuFactors lu_factor(DenseMatrix a);  // partial pivoting; throws if singular
Vector lu_solve(const LuFactors& f, std::span<const double> b);

// Minimum-norm least-squares solution of A x = b through the eigensystem of
// A'A; used when planting optima for generated instances.
Vector least_squares_min_norm(const SparseMatrix& a, std::span<const double> b,
                              double rel_cut = 1e-10);

// Deterministic 64-bit generator used by every sampler in the project, so
// that instances are bit-identical across platforms for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // uniform in [0, 1)
  double next_double();
  // uniform in [lo, hi)
  double uniform(double lo, double hi);
  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

}  // namespace pdids

#endif  // PDIDS_LINALG_HPP_
