// Numeric building blocks shared across the library: log-domain complex
// scalars, adaptive quadrature wrappers and small special-purpose helpers.
#ifndef BETHELAB_NUMERIC_HPP
#define BETHELAB_NUMERIC_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bethelab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338328;
inline constexpr double euler_gamma = 0.57721566490153286060651209008;

// A nonzero complex number kept as log|z| plus phase so that products of
// thousands of factors spanning hundreds of orders of magnitude stay exact
// in the exponent. Multiplication adds logs; conversion back to a plain
// complex may overflow, which callers opt into via value().
struct LogComplex {
  double log_mag = 0.0;  // log |z|
  double phase = 0.0;    // arg z, not reduced

  LogComplex() = default;
  LogComplex(double lm, double ph) : log_mag(lm), phase(ph) {}

  static LogComplex one() { return {0.0, 0.0}; }
  static LogComplex from(cplx z);

  LogComplex& operator*=(const LogComplex& o) {
    log_mag += o.log_mag;
    phase += o.phase;
    return *this;
  }
  LogComplex& operator/=(const LogComplex& o) {
    log_mag -= o.log_mag;
    phase -= o.phase;
    return *this;
  }
  LogComplex& operator*=(cplx z) { return (*this) *= from(z); }
  LogComplex& operator/=(cplx z) { return (*this) /= from(z); }

  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

  LogComplex pow(double e) const { return {e * log_mag, e * phase}; }
  cplx value() const { return std::exp(log_mag) * cplx(std::cos(phase), std::sin(phase)); }
  cplx unit() const { return {std::cos(phase), std::sin(phase)}; }
};

// Adaptive Gauss-Kronrod on a finite interval; complex-valued integrands are
// integrated componentwise by the same rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 15);
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 15);

// Semi-infinite [a, inf) with exponentially decaying integrand.
double integrate_half_line(const std::function<double(double)>& f, double a,
                           double tol = 1e-12);
cplx integrate_half_line_c(const std::function<cplx(double)>& f, double a,
                           double tol = 1e-12);

// Cosine integral Ci(x) = gamma + log x + int_0^x (cos t - 1)/t dt, x > 0.
double cosine_integral(double x);

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bethelab

#endif
