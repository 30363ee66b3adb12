#include "bethelab/specfun.hpp"

#include <array>
#include <cmath>

namespace bethelab {

namespace {

bool near_nonpositive_integer(cplx z, double tol = 1e-13) {
  if (std::abs(z.imag()) > tol) return false;
  double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol * std::max(1.0, std::abs(z.real()));
}

// log sin(pi z) without overflow for large |Im z|:
// sin(pi z) = -e^{-i pi z}(1 - e^{2 i pi z})/(2i) with the dominant
// exponential factored out according to the sign of Im z.
cplx log_sin_pi(cplx z) {
  const cplx ipz = cplx(0, 1) * pi * z;
  if (z.imag() > 0)  // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    return -ipz + cplx(-std::log(2.0), 0.5 * pi) + std::log(cplx(1, 0) - std::exp(2.0 * ipz));
  // sin(pi z) = (-i/2) e^{i pi z} (1 - e^{-2 i pi z})
  return ipz + cplx(-std::log(2.0), -0.5 * pi) + std::log(cplx(1, 0) - std::exp(-2.0 * ipz));
}

// Lanczos, g = 607/128, 15 terms (Godfrey's coefficients).
constexpr double lanczos_g = 4.7421875;
constexpr std::array<double, 15> lanczos_c = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

cplx log_gamma_lanczos(cplx z) {
  // valid for Re z > 0; z shifted internally so the series sees z-1
  const cplx zm1 = z - 1.0;
  cplx s = lanczos_c[0];
  for (std::size_t k = 1; k < lanczos_c.size(); ++k) s += lanczos_c[k] / (zm1 + double(k));
  const cplx base = zm1 + lanczos_g + 0.5;
  return (zm1 + 0.5) * std::log(base) - base + 0.5 * std::log(2.0 * pi) + std::log(s);
}

}  // namespace

cplx log_gamma(cplx z) {
  if (near_nonpositive_integer(z)) throw PoleError("log_gamma: pole at non-positive integer");
  if (z.real() >= 0.5) return log_gamma_lanczos(z);
  // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
  return std::log(pi) - log_sin_pi(z) - log_gamma_lanczos(1.0 - z);
}

cplx digamma(cplx z) {
  if (near_nonpositive_integer(z)) throw PoleError("digamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    // psi(z) = psi(1-z) - pi cot(pi z); cot evaluated from the stable log-sin slopes
    const cplx w = 1.0 - z;
    cplx cot;
    if (std::abs(z.imag()) > 20.0) {
      cot = cplx(0, z.imag() > 0 ? -1.0 : 1.0);  // cot(pi z) -> -i sign(Im z)
    } else {
      cot = std::cos(pi * z) / std::sin(pi * z);
    }
    return digamma(w) - pi * cot;
  }
  cplx shift = 0.0;
  while (std::abs(z) < 12.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  // asymptotic: log z - 1/(2z) - sum B_{2n} / (2n z^{2n})
  static constexpr std::array<double, 7> b2n = {1.0 / 6,  -1.0 / 30, 1.0 / 42, -1.0 / 30,
                                                5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const cplx z2 = 1.0 / (z * z);
  cplx p = z2, s = std::log(z) - 0.5 / z;
  for (std::size_t n = 0; n < b2n.size(); ++n) {
    s -= b2n[n] / (2.0 * double(n + 1)) * p;
    p *= z2;
  }
  return s + shift;
}

cplx trigamma(cplx z) {
  if (near_nonpositive_integer(z)) throw PoleError("trigamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    const cplx s = std::sin(pi * z);
    return -trigamma(1.0 - z) + pi * pi / (s * s);
  }
  cplx shift = 0.0;
  while (std::abs(z) < 12.0) {
    shift += 1.0 / (z * z);
    z += 1.0;
  }
  static constexpr std::array<double, 7> b2n = {1.0 / 6,  -1.0 / 30, 1.0 / 42, -1.0 / 30,
                                                5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const cplx z2 = 1.0 / (z * z);
  cplx p = z2 / z, s = 1.0 / z + 0.5 * z2;
  for (std::size_t n = 0; n < b2n.size(); ++n) {
    s += b2n[n] * p;
    p *= z2;
  }
  return s + shift;
}

namespace {

// Integrand of the Barnes representation after the small-t cancellations are
// removed by series: N(t) = (1 - e^{-zt})/t - z + (z^2/2)(1 - e^{-t}),
// integrand = e^{-t} N(t) / (1 - e^{-t})^2; N = O(t^2) at the origin.
cplx barnes_integrand(cplx z, double t) {
  const double emt = std::exp(-t);
  const double den = -std::expm1(-t);
  if (t < 0.5) {
    cplx num = 0.0;
    // sum_{k>=3} (-1)^{k+1} z^k t^{k-1}/k!  +  (z^2/2) sum_{k>=2} (-1)^{k+1} t^k/k!
    cplx zt_pow = z * z * z * t * t;  // z^k t^{k-1} at k = 3
    double t_pow = t * t;             // t^k at k = 2
    double fact = 6.0;                // k!
    double sign = 1.0;                // (-1)^{k+1} at k = 3
    const cplx z2h = 0.5 * z * z;
    // the k = 2 term of the second sum has sign -1
    num -= z2h * t_pow / 2.0;
    for (int k = 3; k < 32; ++k) {
      num += sign * (zt_pow + z2h * t_pow * t) / fact;
      zt_pow *= z * t;
      t_pow *= t;
      fact *= double(k + 1);
      sign = -sign;
    }
    return emt * num / (den * den);
  }
  // exponentials combined so e^{-z t} never overflows for Re z > -1
  const cplx num = (emt - std::exp(-(1.0 + z) * t)) / t - z * emt +
                   0.5 * z * z * (emt - std::exp(-2.0 * t));
  return num / (den * den);
}

// log G(1+z) on the strip Re z in (-1, 1].
cplx log_barnes_g_1p(cplx z) {
  const cplx q = integrate_c([&](double t) { return barnes_integrand(z, t); }, 0.0, 0.5, 1e-13) +
                 integrate_half_line_c([&](double t) { return barnes_integrand(z, t); }, 0.5, 1e-13);
  return 0.5 * z * std::log(2.0 * pi) - 0.5 * z - 0.5 * euler_gamma * z * z + q;
}

}  // namespace

cplx log_barnes_g(cplx z) {
  if (near_nonpositive_integer(z))
    return {-std::numeric_limits<double>::infinity(), 0.0};  // G vanishes there
  // step into Re z in (0, 2], where log G(z) = log G(1 + (z-1)) is quadrature-ready
  cplx acc = 0.0;
  while (z.real() > 2.0) {
    z -= 1.0;
    acc += log_gamma(z);
  }
  while (z.real() <= 0.0) {
    acc -= log_gamma(z);
    z += 1.0;
  }
  return acc + log_barnes_g_1p(z - 1.0);
}

double glaisher_constant() {
  static const double a = [] {
    const double igl = integrate(
        [](double t) { return log_gamma(cplx(t + 1.0, 0.0)).real(); }, 0.0, 0.5, 1e-14);
    return std::pow(2.0, 7.0 / 36.0) * std::pow(pi, -1.0 / 6.0) *
           std::exp(1.0 / 3.0 + 2.0 / 3.0 * igl);
  }();
  return a;
}

double barnes_g_half() {
  static const double g = std::pow(2.0, 1.0 / 24.0) * std::pow(pi, -0.25) * std::exp(0.125) *
                          std::pow(glaisher_constant(), -1.5);
  return g;
}

GammaProductResult gamma_infinite_product(const GammaRatioSpec& spec) {
  std::vector<cplx> a = spec.alphas, b = spec.betas;
  while (a.size() < b.size()) a.emplace_back(0.0, 0.0);
  while (b.size() < a.size()) b.emplace_back(0.0, 0.0);

  cplx s1 = 0.0, s2 = 0.0;
  for (const cplx& x : a) s1 += x, s2 += x * x;
  for (const cplx& y : b) s1 -= y, s2 -= y * y;

  GammaProductResult out;
  const double tol = 1e-12;
  if (std::abs(s1) > tol) {
    out.violation = "sum(alpha) != sum(beta)";
    return out;
  }
  if (std::abs(s2) > tol) {
    out.violation = "sum(alpha^2) != sum(beta^2)";
    return out;
  }
  cplx lg = 0.0;
  for (const cplx& y : b) lg += log_barnes_g(1.0 - y);
  for (const cplx& x : a) lg -= log_barnes_g(1.0 - x);
  out.convergent = true;
  out.value = std::exp(lg);
  return out;
}

double two_spinon_I(double nu) {
  nu = std::abs(nu);
  if (nu < 1e-8) throw NumericError("two_spinon_I: diverges at nu = 0");
  auto g = [nu](double t) {
    if (t < 1e-4) return (1.0 - nu * nu) * (1.0 + t);
    const double e2 = std::exp(-2.0 * t), e4 = e2 * e2;
    return (2.0 * std::cos(2.0 * nu * t) * (1.0 + e4) - 4.0 * e2) /
           (t * (1.0 + e2) * (1.0 - e4));
  };
  const double T = 30.0;
  // the tail integrand is 2cos(2 nu t)/t + O(e^{-2t}); at T = 30 the
  // exponential remainder is ~1e-26 and only the cosine tail survives
  return integrate(g, 0.0, T, 5e-12) - 2.0 * cosine_integral(2.0 * nu * T);
}

}  // namespace bethelab
