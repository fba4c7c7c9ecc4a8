#pragma once

#include <cstddef>
#include <functional>

namespace tfnn {

// Global execution policy for the data-parallel kernels. Both paths produce
// bit-identical results: parallel variants split work only across independent
// outputs (or use exact max/min reductions), never across one accumulation.
enum class Execution { serial, parallel };
Execution execution();
void set_execution(Execution e);

namespace kernels {

// Runs fn(i) for i in [0, n). Each call must touch only its own outputs.
void for_rows(std::size_t n, const std::function<void(std::size_t)>& fn);
void for_rows_serial(std::size_t n, const std::function<void(std::size_t)>& fn);

// G = D^T D for row-major D (rows x cols); G is cols x cols, row-major.
// Each entry is one fixed-order sum over rows.
void gram(const double* d, std::size_t rows, std::size_t cols, double* g);
void gram_serial(const double* d, std::size_t rows, std::size_t cols, double* g);

// out = D^T y, one fixed-order sum per column.
void mat_tvec(const double* d, std::size_t rows, std::size_t cols, const double* y, double* out);
void mat_tvec_serial(const double* d, std::size_t rows, std::size_t cols, const double* y,
                     double* out);

// max over rows of the Euclidean norm of (A_i - B_i); B may be null (zeros).
double sup_row_norm_diff(const double* a, const double* b, std::size_t rows, std::size_t cols);
double sup_row_norm_diff_serial(const double* a, const double* b, std::size_t rows,
                                std::size_t cols);

// Pairwise scan over the rows of F (n x dim): smallest Euclidean separation,
// plus the lexicographically first pair (i,j), i<j, with separation <= tol.
struct PairScan {
  double min_sep;
  std::size_t min_i, min_j;
  bool violation;
  std::size_t vio_i, vio_j;
};
PairScan pair_scan(const double* f, std::size_t n, std::size_t dim, double tol);
PairScan pair_scan_serial(const double* f, std::size_t n, std::size_t dim, double tol);

}  // namespace kernels
}  // namespace tfnn
