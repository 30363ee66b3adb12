// Gamma, digamma, Barnes-G and the two-spinon integral I(nu): the special
// functions behind every closed-form amplitude in this library.
#ifndef BETHELAB_SPECFUN_HPP
#define BETHELAB_SPECFUN_HPP

#include <string>
#include <vector>

#include "bethelab/numeric.hpp"

namespace bethelab {

struct PoleError : NumericError {
  using NumericError::NumericError;
};

// Principal-branch log Gamma(z). Throws PoleError at z = 0, -1, -2, ...
cplx log_gamma(cplx z);

// psi(z) = d/dz log Gamma(z), and its derivative psi'(z).
cplx digamma(cplx z);
cplx trigamma(cplx z);

// log G(z) for the Barnes G-function, G(z+1) = Gamma(z) G(z), G(1) = 1.
// Evaluated by quadrature of the integral representation inside the strip
// Re z in (0, 2] and recurrence stepping outside it. At the zeros of G
// (z = 0, -1, -2, ...) returns -infinity in the real part.
cplx log_barnes_g(cplx z);

// Glaisher-Kinkelin constant A, from 2/3 int_0^{1/2} log Gamma(t+1) dt.
double glaisher_constant();

// G(1/2) = 2^{1/24} pi^{-1/4} e^{1/8} A^{-3/2}; cached.
double barnes_g_half();

// Shift sets (alpha, beta) for the infinite product
// prod_{n>=1} prod_a Gamma(n - alpha_a) / prod_b Gamma(n - beta_b).
struct GammaRatioSpec {
  std::vector<cplx> alphas;
  std::vector<cplx> betas;
};

// Convergence is decided by the sum rules after zero-padding the shorter
// list; a violated rule is reported as a value, not thrown.
struct GammaProductResult {
  bool convergent = false;
  cplx value{};            // prod G(1-beta) / prod G(1-alpha) when convergent
  std::string violation;   // names the broken sum rule otherwise
};

GammaProductResult gamma_infinite_product(const GammaRatioSpec& spec);

// I(nu) with 2 exp(-I(theta2-theta1)) / M^2 equal to the closed-form
// two-spinon amplitude. The integrand decays like 2cos(2 nu t)/t, so the
// range [T, inf) is traded for a cosine-integral term; nu = 0 diverges.
double two_spinon_I(double nu);

}  // namespace bethelab

#endif
