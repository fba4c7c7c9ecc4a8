#include "tfnn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "tfnn/kernels.hpp"

namespace tfnn {

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  std::vector<double> out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m.at(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

bool cholesky_factor(Matrix& g) {
  std::size_t n = g.rows;
  for (std::size_t k = 0; k < n; ++k) {
    double d = g.at(k, k);
    for (std::size_t p = 0; p < k; ++p) d -= g.at(k, p) * g.at(k, p);
    if (!(d > 0.0)) return false;
    double lkk = std::sqrt(d);
    g.at(k, k) = lkk;
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = g.at(i, k);
      for (std::size_t p = 0; p < k; ++p) s -= g.at(i, p) * g.at(k, p);
      g.at(i, k) = s / lkk;
    }
  }
  return true;
}

void cholesky_solve_factored(const Matrix& l, std::vector<double>& b) {
  std::size_t n = l.rows;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t p = 0; p < i; ++p) s -= l.at(i, p) * b[p];
    b[i] = s / l.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t p = ii + 1; p < n; ++p) s -= l.at(p, ii) * b[p];
    b[ii] = s / l.at(ii, ii);
  }
}

void jacobi_eigh(Matrix g, std::vector<double>& evals, Matrix& v) {
  std::size_t n = g.rows;
  v = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += g.at(p, q) * g.at(p, q);
    double scale = 0.0;
    for (std::size_t p = 0; p < n; ++p) scale += std::abs(g.at(p, p));
    if (off <= 1e-28 * std::max(1.0, scale * scale)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = g.at(p, q);
        if (apq == 0.0) continue;
        double app = g.at(p, p), aqq = g.at(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double gkp = g.at(k, p), gkq = g.at(k, q);
          g.at(k, p) = c * gkp - s * gkq;
          g.at(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double gpk = g.at(p, k), gqk = g.at(q, k);
          g.at(p, k) = c * gpk - s * gqk;
          g.at(q, k) = s * gpk + c * gqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  evals.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) evals[i] = g.at(i, i);
}

LstsqResult solve_least_squares(const Matrix& d, const Matrix& y, LstsqOptions opts) {
  std::size_t rows = d.rows, cols = d.cols, nrhs = y.cols;
  LstsqResult res;
  res.coef = Matrix(cols, nrhs);
  if (cols == 0) return res;

  Matrix g(cols, cols);
  kernels::gram(d.a.data(), rows, cols, g.a.data());
  double maxdiag = 0.0;
  for (std::size_t j = 0; j < cols; ++j) maxdiag = std::max(maxdiag, g.at(j, j));
  double lam = opts.ridge * std::max(1.0, maxdiag);
  Matrix gd = g;
  for (std::size_t j = 0; j < cols; ++j) gd.at(j, j) += lam;

  std::vector<double> rhs(rows), aty(cols), c(cols), resid(rows);

  Matrix l = gd;
  bool ok = cholesky_factor(l);

  std::vector<double> evals;
  Matrix v;
  if (!ok) {
    res.fallback_min_norm = true;
    jacobi_eigh(g, evals, v);
    double emax = 0.0;
    for (double e : evals) emax = std::max(emax, std::abs(e));
    double cut = opts.rank_tol * std::max(emax, 1e-300);
    for (double& e : evals) e = (std::abs(e) > cut) ? 1.0 / e : 0.0;
  }

  auto apply_inverse = [&](std::vector<double>& b) {
    if (ok) {
      cholesky_solve_factored(l, b);
      return;
    }
    std::vector<double> tmp(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < cols; ++i) s += v.at(i, j) * b[i];
      tmp[j] = s * evals[j];
    }
    for (std::size_t i = 0; i < cols; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += v.at(i, j) * tmp[j];
      b[i] = s;
    }
  };

  for (std::size_t k = 0; k < nrhs; ++k) {
    for (std::size_t r = 0; r < rows; ++r) rhs[r] = y.at(r, k);
    kernels::mat_tvec(d.a.data(), rows, cols, rhs.data(), aty.data());
    c = aty;
    apply_inverse(c);
    for (int it = 0; it < opts.refine; ++it) {
      kernels::for_rows(rows, [&](std::size_t r) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += d.at(r, j) * c[j];
        resid[r] = rhs[r] - s;
      });
      std::vector<double> corr(cols);
      kernels::mat_tvec(d.a.data(), rows, cols, resid.data(), corr.data());
      apply_inverse(corr);
      for (std::size_t j = 0; j < cols; ++j) c[j] += corr[j];
    }
    for (std::size_t j = 0; j < cols; ++j) res.coef.at(j, k) = c[j];
  }
  return res;
}

}  // namespace tfnn
