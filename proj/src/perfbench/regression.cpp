#include "riskgate/perfbench/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>

#include "riskgate/core/errors.hpp"

namespace riskgate {

double cohen_f(double r_squared) {
  if (!(r_squared >= 0.0 && r_squared <= 1.0)) throw Error(Errc::invalid_argument, "R^2 must lie in [0, 1]");
  if (r_squared == 1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(r_squared / (1.0 - r_squared));
}

RegressionFit linfit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(Errc::insufficient_data, "x and y differ in length");
  if (xs.size() < 3) throw Error(Errc::insufficient_data, "regression needs at least 3 points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(Errc::degenerate_x, "all x values are equal");

  RegressionFit fit;
  fit.n = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) return fit;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  // Rounding can leave a tiny residual on exactly affine data.
  if (ss_res <= syy * 1e-24) fit.r_squared = 1.0;
  fit.cohen_f = cohen_f(fit.r_squared);
  const double df = n - 2.0;
  if (fit.r_squared == 1.0) {
    fit.p_value = 0.0;
  } else if (df > 0) {
    const double f = fit.r_squared / (1.0 - fit.r_squared) * df;
    const boost::math::fisher_f dist(1.0, df);
    fit.p_value = boost::math::cdf(boost::math::complement(dist, f));
  }
  return fit;
}

}  // namespace riskgate
