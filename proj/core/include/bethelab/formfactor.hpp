// Finite-size scalar products, norms and longitudinal form factors through
// the determinant representations (Slavnov, Gaudin, Foda-Wheeler), with
// close-pair column regularization and the transverse mapping.
#ifndef BETHELAB_FORMFACTOR_HPP
#define BETHELAB_FORMFACTOR_HPP

#include <string>
#include <vector>

#include "bethelab/bethe.hpp"
#include "bethelab/cvlinalg.hpp"

namespace bethelab {

struct FormFactorResult {
  double value = 0.0;  // |F^z|^2
  std::string method;  // finite-determinant | exact-diag | thermo-2spinon | thermo-4spinon
  int sites = 0;
  std::vector<double> holes;
  std::string note;            // selection-rule reason when forced to zero
  double condition = 1.0;      // worst rcond among the determinants
  double min_deviation = 0.0;  // smallest close-pair deviation entering the state
};

// t(nu) = i / (nu (nu + i)), the rational kernel of the Slavnov matrix.
cplx slavnov_t(cplx nu);

// a(nu) against a state's root set with a(i/2) = 0 pinned exactly.
cplx counting_a(cplx nu, const BetheState& state);

// <psi(state)|psi(mu)> for |mu| = N (exact 0 when the cardinalities differ;
// mu equal to the state's roots is rejected in favour of gaudin_norm).
cplx slavnov_scalar_product(const std::vector<cplx>& mu, const BetheState& state);
LogComplex log_slavnov_scalar_product(const std::vector<cplx>& mu, const BetheState& state);

// squared norm of the on-shell vector, Gaudin determinant
double gaudin_norm(const BetheState& state);
LogComplex log_gaudin_norm(const BetheState& state);

// <psi_s^ell(state)|psi(mu)>, |mu| = N + ell, Foda-Wheeler columns
cplx foda_wheeler_scalar_product(const std::vector<cplx>& mu, const BetheState& state, int ell);
LogComplex log_foda_wheeler_scalar_product(const std::vector<cplx>& mu, const BetheState& state,
                                           int ell);

// |F^z|^2 between the ground state and a triplet first descendant, assembled
// from the Slavnov / Foda-Wheeler / Gaudin determinants with the close-pair
// rows recombined analytically before any determinant is evaluated.
FormFactorResult longitudinal_ff_finite(const BetheState& ground, const BetheState& excited);

// tau_e(nu) / tau_g(nu), transfer-matrix eigenvalue ratio.
cplx eigenvalue_ratio_finite(cplx nu, const BetheState& ground, const BetheState& excited);
cplx transfer_eigenvalue(cplx nu, const BetheState& state);

// Double-sum route for |F^z|^2 (the slow combinatorial representation),
// kept as a consistency oracle for M <= 8.
double longitudinal_ff_double_sum(const BetheState& ground, const BetheState& excited);

}  // namespace bethelab

#endif
