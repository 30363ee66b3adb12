// Brute-force ground truth: exact diagonalization of the isotropic chain in
// fixed-S3 sectors, explicit Bethe vectors from B-operator products, and
// direct sigma3 matrix elements.
#ifndef BETHELAB_ORACLE_HPP
#define BETHELAB_ORACLE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bethelab/numeric.hpp"

namespace bethelab::oracle {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// One magnetization sector, momentum-resolved. Eigenvectors are complex
// because degenerate levels are rotated into translation eigenstates.
struct SpectralDecomposition {
  int sites = 0;
  int twice_sz = 0;                     // 2 S^3 of the sector
  std::vector<std::uint64_t> basis;     // bit strings, bit = 1 means spin down
  std::vector<double> eigenvalues;      // ascending
  MatrixXcd eigenvectors;               // columns
  std::vector<int> momentum;            // k with T v = e^{-2 pi i k / M} v
  std::vector<int> twice_total_spin;    // 2s from the Casimir expectation
};

// Sector basis (lexicographic bit strings with fixed down-spin count).
std::vector<std::uint64_t> sector_basis(int sites, int twice_sz);

// Dense periodic XXX Hamiltonian on the sector basis; M <= 16.
Eigen::MatrixXd build_hamiltonian(int sites, int twice_sz);

SpectralDecomposition diagonalize(int sites, int twice_sz);

// Cached variant: consults BETHELAB_CACHE_DIR (or the explicit directory)
// for a previously stored decomposition; see docs/cache_format.md.
SpectralDecomposition diagonalize_cached(int sites, int twice_sz,
                                         std::optional<std::string> cache_dir = std::nullopt);
bool save_decomposition(const SpectralDecomposition& d, const std::string& dir);
std::optional<SpectralDecomposition> load_decomposition(int sites, int twice_sz,
                                                        const std::string& dir);

// |psi(rapidities)> = prod B(lambda) |0> in the full 2^M space; M <= 10.
VectorXcd bethe_vector(int sites, const std::vector<cplx>& rapidities);
// <psi(rapidities)| = <0| prod C(lambda): the bilinear dual, as a row.
VectorXcd dual_bethe_vector(int sites, const std::vector<cplx>& rapidities);

// Monodromy block applications on full-space vectors (aux indices 0 = up).
VectorXcd apply_monodromy_block(int sites, cplx lambda, int out_aux, int in_aux,
                                const VectorXcd& v);

// S^- applied to a full-space vector (and the raising partner).
VectorXcd apply_lowering(int sites, const VectorXcd& v);
VectorXcd apply_raising(int sites, const VectorXcd& v);
// sigma^3 at site m (0-based) on a full-space vector.
VectorXcd apply_sigma3(int sites, int site, const VectorXcd& v);

// Full-space residual || (H - E) v || / || v ||.
double eigen_residual(int sites, const VectorXcd& v, double energy);

// <g| sigma3_m |e>|^2 / (<g|g><e|e>) between two sector eigenvectors given in
// their sector bases (both sectors must carry the same S3).
double direct_form_factor(const SpectralDecomposition& gs, int g_level,
                          const SpectralDecomposition& es, int e_level, int site);

// embed a sector vector into the full 2^M space
VectorXcd embed(const SpectralDecomposition& d, int level);

}  // namespace bethelab::oracle

#endif
