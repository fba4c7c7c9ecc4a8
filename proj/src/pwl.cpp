#include "tfnn/pwl.hpp"

#include <algorithm>
#include <cmath>

#include "tfnn/kernels.hpp"
#include "tfnn/linalg.hpp"

namespace tfnn {

double PwlTable::eval(double t) const {
  if (values.empty()) return 0.0;
  if (degenerate()) return values.front();
  double tt = std::clamp(t, lo, hi);
  std::size_t n = values.size();
  double u = (tt - lo) / (hi - lo) * static_cast<double>(n - 1);
  auto j = std::min(static_cast<std::size_t>(u), n - 2);
  double fr = u - static_cast<double>(j);
  return values[j] * (1.0 - fr) + values[j + 1] * fr;
}

double PwlTable::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

struct FeatureBasis {
  double lo = 0.0, hi = 0.0, center = 0.0;
  int nknots = 0;
  bool degen = false;
  std::size_t col0 = 0;  // first design column of this feature
  std::size_t ncols = 0;
  // hat values at the interval center (at most two nonzero entries)
  std::vector<double> center_hats;
};

// nodal hat values of t on equispaced knots; t clamps to [lo, hi]
void hat_row(double t, const FeatureBasis& fb, double* out) {
  for (int j = 0; j < fb.nknots; ++j) out[j] = 0.0;
  double tt = std::clamp(t, fb.lo, fb.hi);
  double u = (tt - fb.lo) / (fb.hi - fb.lo) * static_cast<double>(fb.nknots - 1);
  int j = std::min(static_cast<int>(u), fb.nknots - 2);
  double fr = u - static_cast<double>(j);
  out[j] = 1.0 - fr;
  out[j + 1] = fr;
}

}  // namespace

AdditiveFit fit_additive(const std::vector<FeatureMap>& family, const SampledCompactSet& k,
                         const std::vector<double>& g, int knots, bool quadratic) {
  if (family.empty()) fail("ConfigParse", "fit_additive needs a nonempty family");
  if (g.size() != k.points.size()) fail("LengthMismatch", "target length != sample size");
  if (knots < 2) fail("ConfigParse", "fit_additive needs >= 2 knots");

  std::size_t nf = family.size(), npts = k.points.size();
  std::vector<double> fvals = eval_features_over(family, k);  // npts x nf

  std::vector<FeatureBasis> bases(nf);
  std::size_t ncols = 1;  // constant channel first
  for (std::size_t i = 0; i < nf; ++i) {
    double lo = fvals[i], hi = fvals[i];
    for (std::size_t r = 1; r < npts; ++r) {
      lo = std::min(lo, fvals[r * nf + i]);
      hi = std::max(hi, fvals[r * nf + i]);
    }
    FeatureBasis fb;
    fb.lo = lo;
    fb.hi = hi;
    fb.center = 0.5 * (lo + hi);
    fb.degen = hi - lo < 1e-15;
    fb.nknots = fb.degen ? 1 : knots;
    fb.col0 = ncols;
    fb.ncols = fb.degen ? 0 : static_cast<std::size_t>(knots) + (quadratic ? 1 : 0);
    if (!fb.degen) {
      fb.center_hats.assign(static_cast<std::size_t>(knots), 0.0);
      hat_row(fb.center, fb, fb.center_hats.data());
    }
    ncols += fb.ncols;
    bases[i] = fb;
  }

  Matrix d(npts, ncols);
  kernels::for_rows(npts, [&](std::size_t r) {
    double* row = d.row(r);
    row[0] = 1.0;
    std::vector<double> hats(static_cast<std::size_t>(knots));
    for (std::size_t i = 0; i < nf; ++i) {
      const auto& fb = bases[i];
      if (fb.degen) continue;
      double t = fvals[r * nf + i];
      hat_row(t, fb, hats.data());
      for (int j = 0; j < fb.nknots; ++j)
        row[fb.col0 + static_cast<std::size_t>(j)] = hats[static_cast<std::size_t>(j)] - fb.center_hats[static_cast<std::size_t>(j)];
      if (quadratic) {
        double c = std::clamp(t, fb.lo, fb.hi) - fb.center;
        row[fb.col0 + static_cast<std::size_t>(fb.nknots)] = c * c;
      }
    }
  });

  Matrix y(npts, 1);
  for (std::size_t r = 0; r < npts; ++r) y.at(r, 0) = g[r];
  auto sol = solve_least_squares(d, y);

  AdditiveFit fit;
  fit.constant = sol.coef.at(0, 0);
  fit.terms.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const auto& fb = bases[i];
    AdditiveTerm term;
    term.feature = family[i];
    term.table.lo = fb.lo;
    term.table.hi = fb.degen ? fb.lo : fb.hi;
    if (fb.degen) {
      term.table.values = {0.0};
    } else {
      // value at knot j of sum_j c_j (phi_j - phi_j(center)); quadratic term
      // (when enabled) is folded into the knot values so tables stay pwl.
      double anchor = 0.0;
      for (int j = 0; j < fb.nknots; ++j)
        anchor += sol.coef.at(fb.col0 + static_cast<std::size_t>(j), 0) * fb.center_hats[static_cast<std::size_t>(j)];
      term.table.values.resize(static_cast<std::size_t>(fb.nknots));
      for (int j = 0; j < fb.nknots; ++j) {
        double kj = fb.lo + j * (fb.hi - fb.lo) / (fb.nknots - 1);
        double v = sol.coef.at(fb.col0 + static_cast<std::size_t>(j), 0) - anchor;
        if (quadratic) {
          double c = kj - fb.center;
          v += sol.coef.at(fb.col0 + static_cast<std::size_t>(fb.nknots), 0) * c * c;
        }
        term.table.values[static_cast<std::size_t>(j)] = v;
      }
    }
    fit.terms.push_back(std::move(term));
  }

  fit.fitted.resize(npts);
  kernels::for_rows(npts, [&](std::size_t r) {
    const double* row = d.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < ncols; ++c) s += row[c] * sol.coef.at(c, 0);
    fit.fitted[r] = s;
  });
  double resid = 0.0;
  for (std::size_t r = 0; r < npts; ++r) resid = std::max(resid, std::abs(g[r] - fit.fitted[r]));
  fit.residual = resid;
  return fit;
}

}  // namespace tfnn
