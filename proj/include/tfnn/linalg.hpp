#pragma once

#include <cstddef>
#include <vector>

namespace tfnn {

// Dense row-major matrix, the only shape the numeric kernels need.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  double* row(std::size_t i) { return a.data() + i * cols; }
  const double* row(std::size_t i) const { return a.data() + i * cols; }
};

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);

struct LstsqOptions {
  double ridge = 1e-12;    // added to the normal-equation diagonal, scaled by max(1, max diag)
  int refine = 1;          // iterative refinement passes against the damped system
  double rank_tol = 1e-10; // relative eigenvalue cutoff for the min-norm fallback
};

struct LstsqResult {
  Matrix coef;  // cols x nrhs
  bool fallback_min_norm = false;
};

// Minimum-norm-flavoured least squares for D c = Y via damped normal
// equations; falls back to a Jacobi-eigendecomposition pseudo-inverse when
// the Cholesky pivots collapse. Deterministic for fixed inputs.
LstsqResult solve_least_squares(const Matrix& d, const Matrix& y, LstsqOptions opts = {});

// In-place Cholesky of an SPD matrix; false when a pivot is not positive.
bool cholesky_factor(Matrix& g);
void cholesky_solve_factored(const Matrix& l, std::vector<double>& b);

// Cyclic Jacobi eigendecomposition of a symmetric matrix (deterministic sweep
// order). Eigenvalues unsorted, paired with columns of v.
void jacobi_eigh(Matrix g, std::vector<double>& evals, Matrix& v);

}  // namespace tfnn
