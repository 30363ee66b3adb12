// Thermodynamic-limit objects: density functions across analyticity strips,
// the Lieb-equation Nystrom oracle, spinon dispersion, the eigenvalue-ratio
// limit, the closed-form two-spinon amplitude, the n-spinon prefactor and
// the four-spinon assembly over finite-size proxy root sets.
#ifndef BETHELAB_THERMO_HPP
#define BETHELAB_THERMO_HPP

#include <array>
#include <vector>

#include "bethelab/bethe.hpp"
#include "bethelab/formfactor.hpp"

namespace bethelab::thermo {

enum class Strip { Central, UpperOuter, LowerOuter };

// rho_kappa(., shift): kappa = 2 is the ground-state density family, kappa = 1
// the hole/resolvent family. The strip follows from |Im shift| against
// 1/kappa; inputs on the boundary are rejected.
struct DensityKind {
  int kappa = 2;
  cplx shift = 0.0;

  Strip strip() const;
};

cplx density(const DensityKind& kind, double lambda);

// common density of the higher-level roots, (1/2pi) / (x^2 + 1/4)
cplx hl_density(cplx x);

// Nystrom discretization of rho + K * rho = K_kappa(. - shift) on [-L, L]
// with composite Gauss-Legendre panels.
struct NystromSolution {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<cplx> values;

  cplx interpolate(double lambda) const;  // Nystrom natural interpolation
};
NystromSolution lieb_nystrom(const DensityKind& kind, double half_width = 60.0,
                             int panels = 60);

// eps = pi / (2 cosh pi theta), p = arctan sinh pi theta - pi/2 (mod pi)
std::pair<double, double> spinon_energy_momentum(double theta);

// prod_a tanh(pi (nu - theta_a) / 2)
double tau_ratio_thermo(double nu, const std::vector<double>& holes);

// closed-form |F^z|^2 for two spinons at rapidities theta1, theta2
FormFactorResult two_spinon_ff_thermo(double theta1, double theta2, int sites);

struct SpinonSet {
  std::vector<double> holes;
  std::vector<cplx> roots;  // higher-level roots chi
};

// full prefactor of the reduced determinant representation (sign, powers of
// 2 and pi, M^{-n_h}, the rational chi/theta factor, the Barnes-G double
// product, over the hole Vandermonde), excluding the residual determinants
double nspinon_prefactor(const SpinonSet& spinons, int sites);

struct FourSpinonResult {
  FormFactorResult ff;
  double center = 0.0;             // cubic root used
  double cubic_residual = 0.0;     // back-substitution defect of the center
  cplx j_g{};                      // residual ground factor
  cplx j_e{};                      // residual excited factor (center-free)
  double denominator = 0.0;        // sum_a hl_density(center - theta_a)
  double prefactor = 0.0;          // center-free constant and G-products
  double je_center_spread = 0.0;   // max |J_e(chi_k) - J_e(chi_0)| over roots
  double proxy_sensitivity = 0.0;  // relative gap between two proxy sizes
};

// Assembles the four-spinon amplitude with the Phi-dependent integrals built
// from solved root sets of the proxy chain (contours Im tau = +-alpha,
// truncated at |Re tau| = 12). The result's diagnostics report proxy-size
// sensitivity rather than a converged-limit claim.
FourSpinonResult four_spinon_ff(const std::array<double, 4>& holes, int center_index,
                                int sites, const ChainSpec& proxy, double alpha = 0.25);

}  // namespace bethelab::thermo

#endif
