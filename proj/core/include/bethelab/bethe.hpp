// Finite-chain Bethe equations for the isotropic chain: ground state and
// hole excitations on the real line, 2-string / wide-pair states, the
// inhomogeneous higher-level equations, eigenvalues and state counting.
#ifndef BETHELAB_BETHE_HPP
#define BETHELAB_BETHE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bethelab/numeric.hpp"

namespace bethelab {

struct NonConvergenceError : NumericError {
  using NumericError::NumericError;
};
struct DeviationUnderflowError : NumericError {
  using NumericError::NumericError;
};
struct BranchPointError : NumericError {
  using NumericError::NumericError;
};

struct ChainSpec {
  int sites = 0;  // M, even, >= 2; coupling J = 1, isotropic point
  explicit ChainSpec(int m);
};

// Half-integers stored doubled; strictly increasing, common parity
// 2Q = N+1 (mod 2), |Q| <= M/4 + (s-1)/2.
class QuantumNumberSet {
 public:
  QuantumNumberSet() = default;
  QuantumNumberSet(std::vector<int> two_q, const ChainSpec& chain);

  static QuantumNumberSet ground_state(const ChainSpec& chain);
  // the full admissible window for spin s (2s = twice_spin)
  static std::vector<int> admissible_window(const ChainSpec& chain, int twice_spin);

  const std::vector<int>& two_q() const { return two_q_; }
  double q(int a) const { return 0.5 * two_q_[a]; }
  int size() const { return int(two_q_.size()); }

 private:
  std::vector<int> two_q_;
};

struct ClosePair {
  cplx center;       // |Im c| < 1/2; real for a 2-string
  double log_delta;  // roots c +- i (1/2 + delta), delta = exp(log_delta) > 0
};

struct BetheState {
  ChainSpec chain{2};
  int twice_spin = 0;
  std::vector<double> real_roots;
  std::vector<ClosePair> close_pairs;
  std::vector<cplx> wide_pairs;  // anchors w with Im w > 1/2; roots w + i/2 and conj
  std::vector<double> holes;
  QuantumNumberSet quantum_numbers;
  double residual = 0.0;  // max |1 + a(root)| over all roots

  int num_roots() const;               // N_s = M/2 - s
  std::vector<cplx> all_roots() const;  // conjugation-closed expansion
  // number of holes consistency: n_h = 2s + 2(n_c + 2n_w)
  int expected_hole_count() const;
};

// Hole rapidities plus higher-level roots solving the inhomogeneous system.
struct HigherLevelState {
  std::vector<double> holes;
  std::vector<cplx> roots;  // chi, |roots| = n_tilde
  double residual = 0.0;
  bool self_conjugate = true;
};

// --- counting function ---------------------------------------------------

// xi(nu) on the real line, continuous and increasing; M xi(lambda_a) = Q_a.
double counting_function(double nu, const BetheState& state);
double counting_function_derivative(double nu, const BetheState& state);

// a(nu) = r(nu) prod (nu - lambda + i)/(nu - lambda - i), the exponential
// counting function, from stable log products. Throws BranchPointError
// within 1e-8 of nu = +-i/2 or of a root shifted by +-i.
cplx exponential_counting(cplx nu, const BetheState& state);
LogComplex log_exponential_counting(cplx nu, const BetheState& state);
// d/dnu a(nu) (needed on the Gaudin diagonal)
cplx exponential_counting_derivative(cplx nu, const BetheState& state);

// --- solvers --------------------------------------------------------------

BetheState solve_real_roots(const ChainSpec& chain, const QuantumNumberSet& q);

// theta_a with xi(theta_a) = Q_a / M for unoccupied quantum numbers.
std::vector<double> hole_rapidities(const BetheState& state,
                                    const std::vector<int>& missing_two_q);

// All P(n_h, n_tilde) solutions of the higher-level equations. n_tilde = 1
// reduces to a real-coefficient polynomial (linear / cubic for n_h = 2 / 4);
// larger n_tilde uses deduplicated multistart Newton and reports an
// incomplete enumeration through the returned flag.
struct HigherLevelSolutions {
  std::vector<HigherLevelState> states;
  bool complete = false;  // found count == P(n_h, n_tilde)
};
HigherLevelSolutions solve_higher_level(const std::vector<double>& holes, int n_tilde);

// Finite-M state with 2-strings and/or wide pairs seeded from a higher-level
// solution. Quartet centers (complex close-pair centers) are out of scope of
// this solver and rejected.
BetheState solve_complex_state(const ChainSpec& chain, const std::vector<double>& holes,
                               const HigherLevelState& hl);

// Convenience: triplet state with the given missing quantum numbers, real
// roots only (n_h = 2s states with no higher-level roots).
BetheState solve_holes_state(const ChainSpec& chain, const std::vector<int>& missing_two_q);

// --- observables ------------------------------------------------------------

// E = sum eps0(lambda), P = sum p0(lambda) mod 2pi; conjugate pairs combined
// as 2 Re to keep both exactly real.
std::pair<double, double> energy_momentum(const BetheState& state);

// P(n_h, n) = C(n_h, n) - C(n_h, n-1); Z(n_h) = 2^{n_h}.
std::int64_t count_solutions(int n_h, int n_tilde);
std::int64_t spinon_space_dimension(int n_h);

}  // namespace bethelab

#endif
