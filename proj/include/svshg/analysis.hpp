#pragma once

// Weighted least squares for the three origin-anchored laws used on SHG
// data (y = a x, y = a x + b x^2, y = b x^2), efficiency extraction, and
// location of unit crossings of an enhancement curve.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "svshg/errors.hpp"

namespace svshg {

enum class FitModel { Linear, LinearPlusQuadratic, PureQuadratic };

inline const char* to_string(FitModel model) {
  switch (model) {
    case FitModel::Linear: return "linear";
    case FitModel::LinearPlusQuadratic: return "linear-quadratic";
    case FitModel::PureQuadratic: return "quadratic";
  }
  return "?";
}

/// Coefficients are always reported as (a, b); a parameter absent from the
/// model is zero with zero uncertainty. Covariance is (A^T W A)^{-1}, i.e.
/// it trusts the supplied sigmas and is not rescaled by chi^2.
struct FitResult {
  FitModel model = FitModel::Linear;
  double a = 0.0;
  double b = 0.0;
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  std::array<std::array<double, 2>, 2> covariance{};
  double chi_square = 0.0;
  double reduced_chi_square = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;  // y - model(x)
};

inline double evaluate(const FitResult& fit, double x) { return fit.a * x + fit.b * x * x; }

inline FitResult fit(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> sigmas, FitModel model) {
  if (xs.size() != ys.size() || xs.size() != sigmas.size()) {
    throw ShapeError("fit: xs, ys, sigmas must have equal length");
  }
  const bool two = model == FitModel::LinearPlusQuadratic;
  const std::size_t need = two ? 3 : 2;
  if (xs.size() < need) {
    throw ShapeError("fit: need at least " + std::to_string(need) + " points");
  }
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("fit: sigmas must be positive");
  }

  // Basis functions: column 0 multiplies a, column 1 multiplies b.
  const auto basis = [model](double x) -> std::array<double, 2> {
    switch (model) {
      case FitModel::Linear: return {x, 0.0};
      case FitModel::PureQuadratic: return {0.0, x * x};
      case FitModel::LinearPlusQuadratic: return {x, x * x};
    }
    return {0.0, 0.0};
  };

  double s00 = 0.0, s01 = 0.0, s11 = 0.0, r0 = 0.0, r1 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = 1.0 / (sigmas[i] * sigmas[i]);
    const auto phi = basis(xs[i]);
    s00 += w * phi[0] * phi[0];
    s01 += w * phi[0] * phi[1];
    s11 += w * phi[1] * phi[1];
    r0 += w * phi[0] * ys[i];
    r1 += w * phi[1] * ys[i];
  }

  FitResult out;
  out.model = model;
  if (model == FitModel::Linear) {
    if (!(s00 > 0.0)) throw RankError("fit: design matrix is singular (all x zero)");
    out.a = r0 / s00;
    out.covariance[0][0] = 1.0 / s00;
  } else if (model == FitModel::PureQuadratic) {
    if (!(s11 > 0.0)) throw RankError("fit: design matrix is singular (all x zero)");
    out.b = r1 / s11;
    out.covariance[1][1] = 1.0 / s11;
  } else {
    const double det = s00 * s11 - s01 * s01;
    if (!(det > 1e-12 * s00 * s11)) {
      throw RankError("fit: design matrix is rank deficient (x and x^2 collinear)");
    }
    out.covariance = {{{s11 / det, -s01 / det}, {-s01 / det, s00 / det}}};
    out.a = (s11 * r0 - s01 * r1) / det;
    out.b = (s00 * r1 - s01 * r0) / det;
  }
  out.sigma_a = std::sqrt(out.covariance[0][0]);
  out.sigma_b = std::sqrt(out.covariance[1][1]);

  double mean_y = 0.0;
  for (double y : ys) mean_y += y;
  mean_y /= static_cast<double>(ys.size());
  double ss_res = 0.0, ss_tot = 0.0;
  out.residuals.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - evaluate(out, xs[i]);
    out.residuals.push_back(r);
    out.chi_square += (r / sigmas[i]) * (r / sigmas[i]);
    ss_res += r * r;
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  const double dof = static_cast<double>(xs.size()) - (two ? 2.0 : 1.0);
  out.reduced_chi_square = out.chi_square / dof;
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return out;
}

/// Unweighted (unit sigma) fit for model-only data.
inline FitResult fit(std::span<const double> xs, std::span<const double> ys, FitModel model) {
  const std::vector<double> ones(xs.size(), 1.0);
  return fit(xs, ys, ones, model);
}

struct Efficiency {
  double value = 0.0;
  double sigma = 0.0;
};

/// From N_SHG = (eta / 2) N: eta = 2a.
inline Efficiency efficiency_from_fit(const FitResult& result) {
  if (result.model == FitModel::PureQuadratic) {
    throw ModelMismatchError("efficiency_from_fit: pure quadratic fit has no linear term");
  }
  return {2.0 * result.a, 2.0 * result.sigma_a};
}

/// Every x where the ratio curve crosses 1, by linear interpolation between
/// bracketing grid points. With a model callback, each bracket is refined by
/// bisection on model(x) - 1 when the model also changes sign there.
inline std::vector<double> find_crossovers(std::span<const double> xs,
                                           std::span<const double> ratios,
                                           const std::function<double(double)>& model = {},
                                           double x_tolerance = 1e-10) {
  if (xs.size() != ratios.size()) throw ShapeError("find_crossovers: length mismatch");
  std::vector<double> found;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double d0 = ratios[i] - 1.0;
    const double d1 = ratios[i + 1] - 1.0;
    if (d0 == 0.0) {
      found.push_back(xs[i]);
      continue;
    }
    if (d0 * d1 >= 0.0) continue;
    double x = xs[i] + (xs[i + 1] - xs[i]) * d0 / (d0 - d1);
    if (model) {
      double lo = xs[i], hi = xs[i + 1];
      double flo = model(lo) - 1.0;
      const double fhi = model(hi) - 1.0;
      if (flo * fhi < 0.0) {
        while (hi - lo > x_tolerance * std::max(1.0, std::abs(hi))) {
          const double mid = 0.5 * (lo + hi);
          const double fm = model(mid) - 1.0;
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        x = 0.5 * (lo + hi);
      }
    }
    found.push_back(x);
  }
  if (!xs.empty() && ratios.back() == 1.0) found.push_back(xs.back());
  if (found.empty()) throw NotFoundError("find_crossovers: ratio never crosses 1");
  return found;
}

}  // namespace svshg
