#include <cmath>
#include <random>

#include "bethelab/specfun.hpp"
#include "doctest.h"

using namespace bethelab;

namespace {
double wrap_mod_2pi(double x) {
  x = std::fmod(x, 2.0 * pi);
  if (x > pi) x -= 2.0 * pi;
  if (x < -pi) x += 2.0 * pi;
  return x;
}
}  // namespace

TEST_CASE("log_gamma particular values") {
  CHECK(std::abs(log_gamma(cplx(1, 0))) < 1e-14);
  CHECK(std::abs(log_gamma(cplx(0.5, 0)) - 0.5 * std::log(pi)) < 1e-14);
  CHECK(std::abs(log_gamma(cplx(5, 0)) - std::log(24.0)) < 1e-13);
  CHECK_THROWS_AS((void)log_gamma(cplx(0, 0)), PoleError);
  CHECK_THROWS_AS((void)log_gamma(cplx(-3, 0)), PoleError);
}

TEST_CASE("log_gamma recurrence and reflection on a random strip sample") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(0.1, 5.0), im(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(re(rng), im(rng));
    const cplx rec = log_gamma(z + 1.0) - std::log(z) - log_gamma(z);
    CHECK(std::abs(rec) < 1e-12);
    // reflection built from Gamma(1+z)Gamma(1-z) = pi z / sin(pi z),
    // tested modulo 2 pi i branch crossings
    const cplx refl = log_gamma(z) + log_gamma(1.0 - z) -
                      (std::log(pi) - std::log(std::sin(pi * z)));
    CHECK(std::abs(refl.real()) < 1e-10);
    CHECK(std::abs(wrap_mod_2pi(refl.imag())) < 1e-10);
  }
}

TEST_CASE("digamma particular values and recurrence") {
  CHECK(std::abs(digamma(cplx(1, 0)) + euler_gamma) < 1e-13);
  CHECK(std::abs(digamma(cplx(0.5, 0)) - (-euler_gamma - 2.0 * std::log(2.0))) < 1e-13);
  CHECK(std::abs(digamma(cplx(2, 0)) - (1.0 - euler_gamma)) < 1e-13);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(0.1, 5.0), im(-5.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    const cplx z(re(rng), im(rng));
    CHECK(std::abs(digamma(z + 1.0) - 1.0 / z - digamma(z)) < 1e-12);
    CHECK(std::abs(trigamma(z + 1.0) + 1.0 / (z * z) - trigamma(z)) < 1e-11);
  }
  CHECK_THROWS_AS((void)digamma(cplx(-2, 0)), PoleError);
}

TEST_CASE("Barnes G special points") {
  CHECK(std::abs(log_barnes_g(cplx(1, 0))) < 1e-12);
  CHECK(std::abs(log_barnes_g(cplx(2, 0))) < 1e-12);
  CHECK(std::abs(log_barnes_g(cplx(3, 0))) < 1e-12);  // G(3) = Gamma(2) G(2) = 1
  // G(1/2) from the quadrature route against the Glaisher-constant route
  CHECK(barnes_g_half() == doctest::Approx(0.6032442812094465).epsilon(1e-12));
  CHECK(std::abs(std::exp(log_barnes_g(cplx(0.5, 0)).real()) - barnes_g_half()) < 1e-10);
  CHECK(glaisher_constant() == doctest::Approx(1.2824271291006226).epsilon(1e-13));
  // zeros of G: signed-infinity sentinel
  CHECK(log_barnes_g(cplx(0, 0)).real() == -std::numeric_limits<double>::infinity());
  CHECK(log_barnes_g(cplx(-2, 0)).real() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("Barnes recurrence log G(z+1) = log Gamma(z) + log G(z)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(0.1, 5.0), im(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(re(rng), im(rng));
    const cplx gap = log_barnes_g(z + 1.0) - log_barnes_g(z) - log_gamma(z);
    CHECK(std::abs(gap.real()) < 1e-8);
    CHECK(std::abs(wrap_mod_2pi(gap.imag())) < 1e-8);
  }
}

TEST_CASE("Barnes G against the Weierstrass product oracle") {
  // slowly convergent product, accelerated by one Richardson step in 1/N
  auto weierstrass = [](cplx z, int n_terms) {
    cplx acc = 0.5 * z * std::log(2.0 * pi) - 0.5 * z * (z + 1.0) -
               0.5 * euler_gamma * z * z;
    for (int n = 1; n <= n_terms; ++n) {
      const cplx nn(n, 0);
      acc += log_gamma(nn) - log_gamma(z + nn) + z * digamma(nn) +
             0.5 * z * z * trigamma(nn);
    }
    return acc;
  };
  for (cplx z : {cplx(0.5, 0), cplx(0.3, 0.4), cplx(-0.2, 0.1)}) {
    const cplx p1 = weierstrass(z, 4000), p2 = weierstrass(z, 8000);
    const cplx extrap = 2.0 * p2 - p1;
    CHECK(std::abs(extrap - log_barnes_g(z + 1.0)) < 1e-6);
  }
}

TEST_CASE("gamma_infinite_product: convergent spec against partial products") {
  GammaRatioSpec spec;
  spec.alphas = {cplx(0.5, 0), cplx(-0.5, 0), cplx(0.5, 0), cplx(-0.5, 0)};
  spec.betas = {cplx(0.1, 0), cplx(-0.1, 0), cplx(0.7, 0), cplx(-0.7, 0)};
  const auto res = gamma_infinite_product(spec);
  REQUIRE(res.convergent);
  cplx acc = 0.0;
  for (int n = 1; n <= 10000; ++n) {
    for (const cplx& a : spec.alphas) acc += log_gamma(double(n) - a);
    for (const cplx& b : spec.betas) acc -= log_gamma(double(n) - b);
  }
  CHECK(std::abs(std::exp(acc) - res.value) < 1e-8 * std::abs(res.value));
}

TEST_CASE("gamma_infinite_product: random admissible specs vs extrapolated partial products") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(0.1, 0.6), frac(0.1, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = mag(rng), b = mag(rng);
    const double r = a * a + b * b, s = frac(rng);
    const double c = std::sqrt(s * r), d = std::sqrt((1.0 - s) * r);
    GammaRatioSpec spec;
    spec.alphas = {cplx(a, 0), cplx(-a, 0), cplx(b, 0), cplx(-b, 0)};
    spec.betas = {cplx(c, 0), cplx(-c, 0), cplx(d, 0), cplx(-d, 0)};
    const auto res = gamma_infinite_product(spec);
    REQUIRE(res.convergent);
    auto partial = [&](int n_terms) {
      cplx acc = 0.0;
      for (int n = 1; n <= n_terms; ++n) {
        for (const cplx& x : spec.alphas) acc += log_gamma(double(n) - x);
        for (const cplx& y : spec.betas) acc -= log_gamma(double(n) - y);
      }
      return acc;
    };
    // remainder ~ c/N^2: one Richardson step in 1/N^2
    const cplx p1 = partial(800), p2 = partial(1600);
    const cplx extrap = (4.0 * p2 - p1) / 3.0;
    CHECK(std::abs(std::exp(extrap) - res.value) < 1e-6 * std::abs(res.value));
  }
}

TEST_CASE("gamma_infinite_product: divergence reports") {
  GammaRatioSpec same;
  same.alphas = {cplx(0.2, 0.1), cplx(-0.4, 0)};
  same.betas = same.alphas;
  auto r1 = gamma_infinite_product(same);
  REQUIRE(r1.convergent);
  CHECK(std::abs(r1.value - 1.0) < 1e-12);

  GammaRatioSpec bad1;
  bad1.alphas = {cplx(1, 0)};
  bad1.betas = {cplx(0, 0)};
  auto r2 = gamma_infinite_product(bad1);
  CHECK_FALSE(r2.convergent);
  CHECK(r2.violation == "sum(alpha) != sum(beta)");

  // first sum rule holds, second broken (zero-padded)
  GammaRatioSpec bad2;
  bad2.alphas = {cplx(0.3, 0), cplx(-0.3, 0)};
  bad2.betas = {cplx(0, 0), cplx(0, 0)};
  auto r3 = gamma_infinite_product(bad2);
  CHECK_FALSE(r3.convergent);
  CHECK(r3.violation == "sum(alpha^2) != sum(beta^2)");
}

TEST_CASE("two_spinon_I reference values and large-nu growth") {
  // references from 25-digit quadrature of the same integral
  CHECK(two_spinon_I(0.5) == doctest::Approx(-0.0775506299812269).epsilon(1e-10));
  CHECK(two_spinon_I(1.0) == doctest::Approx(-1.46656493053703).epsilon(1e-10));
  CHECK(two_spinon_I(2.0) == doctest::Approx(-3.36426598998602).epsilon(1e-10));
  CHECK_THROWS_AS((void)two_spinon_I(0.0), NumericError);
  // I decreases monotonically at large nu (slope -> -pi/2), consistent with
  // the Barnes-G closed form on the same grid
  double prev = two_spinon_I(5.0);
  for (double nu : {6.0, 8.0, 11.0, 15.0, 20.0}) {
    const double cur = two_spinon_I(nu);
    CHECK(cur < prev);
    prev = cur;
  }
}
