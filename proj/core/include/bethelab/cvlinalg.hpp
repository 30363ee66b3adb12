// Structured matrices: Cauchy, Vandermonde and mixed Cauchy-Vandermonde in
// rational and hyperbolic parametrisation, their closed-form determinants and
// inverses, the symmetric/supersymmetric polynomial layer, and the generic
// block-reduction / rank-1 determinant lemmas.
#ifndef BETHELAB_CVLINALG_HPP
#define BETHELAB_CVLINALG_HPP

#include <Eigen/Dense>
#include <vector>

#include "bethelab/numeric.hpp"

namespace bethelab {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

struct CoincidentNodeError : NumericError {
  using NumericError::NumericError;
};

// Weakly decreasing list of non-negative integers.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  // delta(n) = {n-1, n-2, ..., 0}: consecutive exponents.
  static Partition delta(int n);
  // gamma(n): the hyperbolic cosh/sinh multipliers {n-1, n-1, n-3, n-3, ...},
  // one pair per positive multiplier and a single 0 when n is odd.
  static Partition gamma_pairs(int n);
  // delta(n+1) with the exponent r removed: {n, ..., r+1, r-1, ..., 0}.
  static Partition jump(int n, int r);

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return int(parts_.size()); }
  bool is_delta() const;
  bool is_gamma_pairs() const;

 private:
  std::vector<int> parts_;
};

enum class MatrixKind { Cauchy, Vandermonde, CauchyVandermonde, DualCauchyVandermonde };
enum class Parametrization { Rational, Hyperbolic };

// Declarative description of one structured matrix. For the mixed kinds the
// x nodes exceed the y nodes by the partition length; rational kinds take
// delta (or a jump) partitions, hyperbolic kinds take gamma_pairs.
struct StructuredMatrixSpec {
  MatrixKind kind = MatrixKind::Cauchy;
  Parametrization param = Parametrization::Rational;
  std::vector<cplx> x_nodes;
  std::vector<cplx> y_nodes;
  Partition partition;

  void validate() const;  // throws CoincidentNodeError / invalid_argument
};

// --- symmetric function layer ------------------------------------------------

cplx elementary_symmetric(const std::vector<cplx>& x, int r);
cplx complete_symmetric(const std::vector<cplx>& x, int r);
// e_r(x || y) = sum_a (-1)^a e_{r-a}(x) h_a(y)
cplx super_elementary(const std::vector<cplx>& x, const std::vector<cplx>& y, int r);

// --- matrices ----------------------------------------------------------------

MatrixXc build_matrix(const StructuredMatrixSpec& spec);

// Superalternant closed form; requires delta (rational) or gamma (hyperbolic)
// partitions. Computed in log-magnitude form internally.
cplx closed_form_det(const StructuredMatrixSpec& spec);
LogComplex closed_form_log_det(const StructuredMatrixSpec& spec);

enum class InverseRoute { Direct, DualDressing };
MatrixXc closed_form_inverse(const StructuredMatrixSpec& spec,
                             InverseRoute route = InverseRoute::Direct);

// lhs = det C_{lambda_r} / det C_{delta} by pivoted determinants of the jump
// matrix, rhs = e_r(x || y); the two must agree.
std::pair<cplx, cplx> schur_quotient_check(const std::vector<cplx>& x,
                                           const std::vector<cplx>& y, int r);

// --- generic determinant machinery -------------------------------------------

struct DetResult {
  cplx value;
  LogComplex log;
  double rcond = 0.0;  // LU reciprocal condition estimate
};

DetResult generic_det(const MatrixXc& m);

struct BlockMatrix {
  MatrixXc a, b, c, d;  // [[A, C], [B, D]]; A square, invertible for reduction
};

// P = D - B A^{-1} C with det(full) = det(A) det(P).
MatrixXc det_reduce(const BlockMatrix& m);

// det(m + p) for rank-1 p, via column replacements (never forms m + p).
cplx rank1_det(const MatrixXc& m, const MatrixXc& p);

}  // namespace bethelab

#endif
