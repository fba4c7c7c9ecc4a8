#include "tfnn/kernels.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tfnn {

namespace {
std::atomic<Execution> g_exec{Execution::parallel};

bool parallel_on() {
#ifdef _OPENMP
  return g_exec.load(std::memory_order_relaxed) == Execution::parallel;
#else
  return false;
#endif
}
}  // namespace

Execution execution() { return g_exec.load(std::memory_order_relaxed); }
void set_execution(Execution e) { g_exec.store(e, std::memory_order_relaxed); }

namespace kernels {

void for_rows_serial(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

void for_rows(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (!parallel_on() || n < 2) {
    for_rows_serial(n, fn);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) fn(static_cast<std::size_t>(i));
#else
  for_rows_serial(n, fn);
#endif
}

void gram_serial(const double* d, std::size_t rows, std::size_t cols, double* g) {
  for (std::size_t a = 0; a < cols; ++a) {
    for (std::size_t b = a; b < cols; ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += d[r * cols + a] * d[r * cols + b];
      g[a * cols + b] = s;
      g[b * cols + a] = s;
    }
  }
}

void gram(const double* d, std::size_t rows, std::size_t cols, double* g) {
  if (!parallel_on() || cols < 2) {
    gram_serial(d, rows, cols, g);
    return;
  }
#ifdef _OPENMP
  // One entry per task; the sum over rows stays in serial row order.
#pragma omp parallel for schedule(static)
  for (long long a = 0; a < static_cast<long long>(cols); ++a) {
    for (std::size_t b = static_cast<std::size_t>(a); b < cols; ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r)
        s += d[r * cols + static_cast<std::size_t>(a)] * d[r * cols + b];
      g[static_cast<std::size_t>(a) * cols + b] = s;
      g[b * cols + static_cast<std::size_t>(a)] = s;
    }
  }
#else
  gram_serial(d, rows, cols, g);
#endif
}

void mat_tvec_serial(const double* d, std::size_t rows, std::size_t cols, const double* y,
                     double* out) {
  for (std::size_t c = 0; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += d[r * cols + c] * y[r];
    out[c] = s;
  }
}

void mat_tvec(const double* d, std::size_t rows, std::size_t cols, const double* y, double* out) {
  if (!parallel_on() || cols < 2) {
    mat_tvec_serial(d, rows, cols, y, out);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(cols); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += d[r * cols + static_cast<std::size_t>(c)] * y[r];
    out[c] = s;
  }
#else
  mat_tvec_serial(d, rows, cols, y, out);
#endif
}

namespace {
double row_norm_diff(const double* a, const double* b, std::size_t cols, std::size_t r) {
  double s = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    double v = a[r * cols + c] - (b ? b[r * cols + c] : 0.0);
    s += v * v;
  }
  return std::sqrt(s);
}
}  // namespace

double sup_row_norm_diff_serial(const double* a, const double* b, std::size_t rows,
                                std::size_t cols) {
  double m = 0.0;
  for (std::size_t r = 0; r < rows; ++r) m = std::max(m, row_norm_diff(a, b, cols, r));
  return m;
}

double sup_row_norm_diff(const double* a, const double* b, std::size_t rows, std::size_t cols) {
  if (!parallel_on() || rows < 2) return sup_row_norm_diff_serial(a, b, rows, cols);
#ifdef _OPENMP
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long long r = 0; r < static_cast<long long>(rows); ++r)
    m = std::max(m, row_norm_diff(a, b, cols, static_cast<std::size_t>(r)));
  return m;
#else
  return sup_row_norm_diff_serial(a, b, rows, cols);
#endif
}

namespace {
double pair_dist(const double* f, std::size_t dim, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    double v = f[i * dim + c] - f[j * dim + c];
    s += v * v;
  }
  return std::sqrt(s);
}

void merge_scan(PairScan& into, const PairScan& part) {
  bool closer = part.min_sep < into.min_sep;
  bool tie_lex = part.min_sep == into.min_sep &&
                 (part.min_i < into.min_i ||
                  (part.min_i == into.min_i && part.min_j < into.min_j));
  if (closer || tie_lex) {
    into.min_sep = part.min_sep;
    into.min_i = part.min_i;
    into.min_j = part.min_j;
  }
  if (part.violation &&
      (!into.violation || part.vio_i < into.vio_i ||
       (part.vio_i == into.vio_i && part.vio_j < into.vio_j))) {
    into.violation = true;
    into.vio_i = part.vio_i;
    into.vio_j = part.vio_j;
  }
}

PairScan scan_range(const double* f, std::size_t n, std::size_t dim, double tol, std::size_t lo,
                    std::size_t hi) {
  PairScan s{std::numeric_limits<double>::infinity(), 0, 0, false, 0, 0};
  for (std::size_t i = lo; i < hi; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = pair_dist(f, dim, i, j);
      if (d < s.min_sep) {
        s.min_sep = d;
        s.min_i = i;
        s.min_j = j;
      }
      if (!s.violation && d <= tol) {
        s.violation = true;
        s.vio_i = i;
        s.vio_j = j;
      }
    }
  }
  return s;
}
}  // namespace

PairScan pair_scan_serial(const double* f, std::size_t n, std::size_t dim, double tol) {
  return scan_range(f, n, dim, tol, 0, n);
}

PairScan pair_scan(const double* f, std::size_t n, std::size_t dim, double tol) {
  if (!parallel_on() || n < 64) return pair_scan_serial(f, n, dim, tol);
#ifdef _OPENMP
  PairScan total{std::numeric_limits<double>::infinity(), 0, 0, false, 0, 0};
#pragma omp parallel
  {
    int nt = omp_get_num_threads();
    int id = omp_get_thread_num();
    std::size_t chunk = (n + static_cast<std::size_t>(nt) - 1) / static_cast<std::size_t>(nt);
    std::size_t lo = std::min(n, chunk * static_cast<std::size_t>(id));
    std::size_t hi = std::min(n, lo + chunk);
    PairScan part = scan_range(f, n, dim, tol, lo, hi);
#pragma omp critical
    merge_scan(total, part);
  }
  return total;
#else
  return pair_scan_serial(f, n, dim, tol);
#endif
}

}  // namespace kernels
}  // namespace tfnn
