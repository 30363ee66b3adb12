#include "bethelab/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace bethelab {

LogComplex LogComplex::from(cplx z) {
  if (z == cplx(0.0, 0.0)) throw NumericError("LogComplex::from: zero has no logarithm");
  return {std::log(std::abs(z)), std::arg(z)};
}

namespace {
using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  double error = 0.0;
  double v = gk::integrate(f, a, b, max_depth, tol, &error);
  if (!std::isfinite(v)) throw NumericError("integrate: non-finite result");
  return v;
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double tol, int max_depth) {
  double re = gk::integrate([&](double t) { return f(t).real(); }, a, b, max_depth, tol);
  double im = gk::integrate([&](double t) { return f(t).imag(); }, a, b, max_depth, tol);
  if (!std::isfinite(re) || !std::isfinite(im))
    throw NumericError("integrate_c: non-finite result");
  return {re, im};
}

double integrate_half_line(const std::function<double(double)>& f, double a, double tol) {
  double v = gk::integrate(f, a, std::numeric_limits<double>::infinity(), 15, tol);
  if (!std::isfinite(v)) throw NumericError("integrate_half_line: non-finite result");
  return v;
}

cplx integrate_half_line_c(const std::function<cplx(double)>& f, double a, double tol) {
  double inf = std::numeric_limits<double>::infinity();
  double re = gk::integrate([&](double t) { return f(t).real(); }, a, inf, 15, tol);
  double im = gk::integrate([&](double t) { return f(t).imag(); }, a, inf, 15, tol);
  if (!std::isfinite(re) || !std::isfinite(im))
    throw NumericError("integrate_half_line_c: non-finite result");
  return {re, im};
}

double cosine_integral(double x) {
  if (x <= 0.0) throw NumericError("cosine_integral: requires x > 0");
  // (cos t - 1)/t is smooth and bounded on (0, x]; the adaptive rule resolves
  // the oscillations for the moderate arguments used here (x up to ~1e3).
  auto f = [](double t) { return t < 1e-8 ? -t / 2.0 : (std::cos(t) - 1.0) / t; };
  return euler_gamma + std::log(x) + integrate(f, 0.0, x, 1e-13);
}

}  // namespace bethelab
