#include "bethelab/cvlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bethelab {

namespace {

bool weakly_decreasing(const std::vector<int>& p) {
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[i - 1]) return false;
  return true;
}

double mod_i_distance(cplx d) {
  // distance of d from the lattice i Z
  double im = d.imag() - std::round(d.imag());
  return std::hypot(d.real(), im);
}

void check_distinct(const std::vector<cplx>& a, const std::vector<cplx>& b,
                    Parametrization param, bool same_set) {
  const double tol = 1e-10;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = same_set ? j + 1 : 0; k < b.size(); ++k) {
      const cplx d = a[j] - b[k];
      const double dist = param == Parametrization::Rational ? std::abs(d) : mod_i_distance(d);
      if (dist < tol) throw CoincidentNodeError("coincident nodes in structured matrix spec");
    }
  }
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_)
    if (p < 0) throw std::invalid_argument("Partition: negative part");
  if (!weakly_decreasing(parts_)) throw std::invalid_argument("Partition: not weakly decreasing");
}

Partition Partition::delta(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = n - 1 - i;
  return Partition(std::move(p));
}

Partition Partition::gamma_pairs(int n) {
  std::vector<int> p;
  for (int k = n - 1; k > 0; k -= 2) {
    p.push_back(k);
    p.push_back(k);
  }
  if (n % 2 == 1) p.push_back(0);
  return Partition(std::move(p));
}

Partition Partition::jump(int n, int r) {
  if (r < 0 || r >= n + 1) throw std::invalid_argument("Partition::jump: r out of range");
  std::vector<int> p;
  for (int e = n; e >= 0; --e)
    if (e != r) p.push_back(e);
  return Partition(std::move(p));
}

bool Partition::is_delta() const {
  for (int i = 0; i < length(); ++i)
    if (parts_[i] != length() - 1 - i) return false;
  return true;
}

bool Partition::is_gamma_pairs() const {
  return parts_ == gamma_pairs(length()).parts();
}

void StructuredMatrixSpec::validate() const {
  const int nx = int(x_nodes.size()), ny = int(y_nodes.size());
  switch (kind) {
    case MatrixKind::Cauchy:
      if (nx != ny || nx == 0) throw std::invalid_argument("Cauchy spec: |x| != |y|");
      break;
    case MatrixKind::Vandermonde:
      if (ny != 0) throw std::invalid_argument("Vandermonde spec: y must be empty");
      if (partition.length() != nx)
        throw std::invalid_argument("Vandermonde spec: partition length != |x|");
      break;
    case MatrixKind::CauchyVandermonde:
    case MatrixKind::DualCauchyVandermonde:
      if (nx != ny + partition.length())
        throw std::invalid_argument("CV spec: |x| != |y| + partition length");
      break;
  }
  check_distinct(x_nodes, x_nodes, param, true);
  check_distinct(y_nodes, y_nodes, param, true);
  check_distinct(x_nodes, y_nodes, param, false);
}

cplx elementary_symmetric(const std::vector<cplx>& x, int r) {
  if (r < 0) throw std::invalid_argument("elementary_symmetric: negative degree");
  if (r > int(x.size())) return 0.0;
  std::vector<cplx> e(r + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int k = std::min<int>(r, int(i) + 1); k >= 1; --k) e[k] += x[i] * e[k - 1];
  return e[r];
}

cplx complete_symmetric(const std::vector<cplx>& x, int r) {
  if (r < 0) throw std::invalid_argument("complete_symmetric: negative degree");
  // h_r over k variables: h_r(x_1..x_k) = h_r(x_1..x_{k-1}) + x_k h_{r-1}(x_1..x_k)
  std::vector<cplx> h(r + 1, 0.0);
  h[0] = 1.0;
  for (const cplx& v : x)
    for (int k = 1; k <= r; ++k) h[k] += v * h[k - 1];
  return h[r];
}

cplx super_elementary(const std::vector<cplx>& x, const std::vector<cplx>& y, int r) {
  cplx s = 0.0;
  double sign = 1.0;
  for (int a = 0; a <= r; ++a) {
    s += sign * elementary_symmetric(x, r - a) * complete_symmetric(y, a);
    sign = -sign;
  }
  return s;
}

namespace {

// hyperbolic Vandermonde entries: first ceil(n/2) columns carry cosh of the
// decreasing odd/even multipliers, the trailing floor(n/2) carry sinh of the
// increasing ones
cplx xi_entry(int n, int a, cplx lam) {
  const int half = (n + 1) / 2;
  const int k = a <= half ? n + 1 - 2 * a : n + 1 - 2 * (n + 1 - a);
  const cplx arg = pi * double(k) * lam;
  return a <= half ? std::cosh(arg) : std::sinh(arg);
}

// dual block: index reversal evaluated at -lambda (cosh rows unchanged, sinh
// rows negated), which makes det(dual CV) = det(CV) exactly
cplx xi_star_entry(int n, int a, cplx lam) { return xi_entry(n, n + 1 - a, -lam); }

std::vector<cplx> omit(const std::vector<cplx>& v, std::size_t idx) {
  std::vector<cplx> out;
  out.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != idx) out.push_back(v[i]);
  return out;
}

// prod_k (v - a_k) / prod_{k != skip} (v - b_k)
cplx phi_prime(cplx v, const std::vector<cplx>& num, const std::vector<cplx>& den,
               std::size_t skip) {
  cplx r = 1.0;
  for (const cplx& a : num) r *= v - a;
  for (std::size_t k = 0; k < den.size(); ++k)
    if (k != skip) r /= v - den[k];
  return r;
}

}  // namespace

MatrixXc build_matrix(const StructuredMatrixSpec& spec) {
  spec.validate();
  const auto& x = spec.x_nodes;
  const auto& y = spec.y_nodes;
  const int nx = int(x.size()), m = int(y.size()), n = nx - m;
  MatrixXc out(nx, nx);

  const bool rational = spec.param == Parametrization::Rational;
  const bool dual = spec.kind == MatrixKind::DualCauchyVandermonde;

  if (rational) {
    for (int j = 0; j < nx; ++j)
      for (int k = 0; k < m; ++k) out(j, k) = 1.0 / (x[j] - y[k]);
    if (spec.kind == MatrixKind::Cauchy) return out;

    if (!dual) {
      // ascending exponents from the (descending) partition
      std::vector<int> expo(spec.partition.parts().rbegin(), spec.partition.parts().rend());
      for (int j = 0; j < nx; ++j)
        for (int a = 0; a < n; ++a) out(j, m + a) = std::pow(x[j], expo[a]);
    } else {
      if (!spec.partition.is_delta())
        throw std::invalid_argument("dual CV: only delta partitions");
      for (int j = 0; j < nx; ++j) {
        const auto xh = omit(x, j);
        for (int a = 1; a <= n; ++a) out(j, m + a - 1) = super_elementary(xh, y, n - a);
      }
    }
    return out;
  }

  // hyperbolic
  if (spec.kind == MatrixKind::Cauchy) {
    for (int j = 0; j < nx; ++j)
      for (int k = 0; k < m; ++k) out(j, k) = 1.0 / std::sinh(pi * (x[j] - y[k]));
    return out;
  }
  if (!spec.partition.is_gamma_pairs())
    throw std::invalid_argument("hyperbolic CV: only gamma partitions");
  for (int j = 0; j < nx; ++j) {
    for (int k = 0; k < m; ++k)
      out(j, k) = std::exp(pi * double(n) * (y[k] - x[j])) / std::sinh(pi * (x[j] - y[k]));
    for (int a = 1; a <= n; ++a)
      out(j, m + a - 1) = dual ? xi_star_entry(n, a, x[j]) : xi_entry(n, a, x[j]);
  }
  return out;
}

LogComplex closed_form_log_det(const StructuredMatrixSpec& spec) {
  spec.validate();
  const auto& x = spec.x_nodes;
  const auto& y = spec.y_nodes;
  const int nx = int(x.size()), m = int(y.size()), n = nx - m;
  const bool rational = spec.param == Parametrization::Rational;

  if (rational && spec.kind != MatrixKind::Cauchy && !spec.partition.is_delta())
    throw std::invalid_argument("closed_form_det: rational closed form needs delta partition");
  if (!rational && spec.kind != MatrixKind::Cauchy && !spec.partition.is_gamma_pairs())
    throw std::invalid_argument("closed_form_det: hyperbolic closed form needs gamma partition");

  auto factor = [&](cplx d) { return rational ? d : std::sinh(pi * d); };

  LogComplex det = LogComplex::one();
  for (int j = 0; j < nx; ++j)
    for (int k = 0; k < j; ++k) det *= factor(x[j] - x[k]);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < j; ++k) det *= factor(y[k] - y[j]);
  for (int j = 0; j < nx; ++j)
    for (int k = 0; k < m; ++k) det /= factor(x[j] - y[k]);

  if (!rational && n > 0) {
    // Xi recombination constant: 2^{n(n-1)/2 - floor(n/2)}
    det.log_mag += (double(n) * double(n - 1) / 2.0 - double(n / 2)) * std::log(2.0);
  }
  return det;
}

cplx closed_form_det(const StructuredMatrixSpec& spec) {
  return closed_form_log_det(spec).value();
}

namespace {

// Rational direct inverse (Cauchy block plus supersymmetric Vandermonde
// block); rows: m from y, then n from the partition; columns from x.
MatrixXc rational_inverse_direct(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  const int nx = int(x.size()), m = int(y.size()), n = nx - m;
  MatrixXc inv(nx, nx);
  std::vector<cplx> colfac(nx);
  for (int k = 0; k < nx; ++k) colfac[k] = phi_prime(x[k], y, x, k);
  for (int j = 0; j < m; ++j) {
    const cplx rowfac = phi_prime(y[j], x, y, j);
    for (int k = 0; k < nx; ++k) inv(j, k) = colfac[k] * rowfac / (y[j] - x[k]);
  }
  for (int a = 1; a <= n; ++a) {
    const double sign = ((n - a) % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k < nx; ++k)
      inv(m + a - 1, k) = sign * colfac[k] * super_elementary(omit(x, k), y, n - a);
  }
  return inv;
}

std::vector<cplx> negate(const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

// Rational inverse via the duality: C^{-1}[y||x] (resp. dual^{-1}) is a
// diagonal dressing of the transposed partner matrix at negated nodes.
MatrixXc rational_inverse_dressing(const std::vector<cplx>& x, const std::vector<cplx>& y,
                                   bool invert_dual) {
  const int nx = int(x.size()), m = int(y.size()), n = nx - m;
  StructuredMatrixSpec partner;
  partner.kind = invert_dual ? MatrixKind::CauchyVandermonde : MatrixKind::DualCauchyVandermonde;
  if (n == 0) partner.kind = MatrixKind::Cauchy;
  partner.param = Parametrization::Rational;
  partner.x_nodes = negate(x);
  partner.y_nodes = negate(y);
  partner.partition = Partition::delta(n);
  MatrixXc core = build_matrix(partner).transpose();
  for (int j = 0; j < m; ++j) core.row(j) *= phi_prime(y[j], x, y, j);
  for (int k = 0; k < nx; ++k) core.col(k) *= phi_prime(x[k], y, x, k);
  if (invert_dual && n % 2 == 0) {
    // dressing at negated nodes: the phi' factors each pick up (-1)^{n+1},
    // which cancels on the Cauchy rows but not on the identity block
    core.bottomRows(n) *= -1.0;
  }
  return core;
}

}  // namespace

MatrixXc closed_form_inverse(const StructuredMatrixSpec& spec, InverseRoute route) {
  spec.validate();
  const auto& x = spec.x_nodes;
  const auto& y = spec.y_nodes;
  const int nx = int(x.size()), m = int(y.size()), n = nx - m;

  if (spec.param == Parametrization::Rational) {
    switch (spec.kind) {
      case MatrixKind::Cauchy:
      case MatrixKind::Vandermonde:
      case MatrixKind::CauchyVandermonde:
        if (spec.kind != MatrixKind::Cauchy && !spec.partition.is_delta())
          throw std::invalid_argument("closed_form_inverse: needs delta partition");
        return route == InverseRoute::Direct ? rational_inverse_direct(x, y)
                                             : rational_inverse_dressing(x, y, false);
      case MatrixKind::DualCauchyVandermonde:
        // the only closed form is the dressing of the CV at negated nodes
        return rational_inverse_dressing(x, y, true);
    }
  }

  // Hyperbolic: undress to the rational picture via x -> e^{2 pi alpha}.
  // M_hyp = D_L M_rat blockdiag(D_y, T) with D_L = e^{(1-n) pi alpha},
  // D_y = 2 e^{(n+1) pi beta} and T the cosh/sinh column mixing.
  if (spec.kind == MatrixKind::DualCauchyVandermonde) {
    // dual = CV * blockdiag(Id, W), W a signed permutation: undo it first
    StructuredMatrixSpec cv = spec;
    cv.kind = n == 0 ? MatrixKind::Cauchy : MatrixKind::CauchyVandermonde;
    MatrixXc inv = closed_form_inverse(cv, route);
    MatrixXc winv = MatrixXc::Zero(nx, nx);
    for (int j = 0; j < m; ++j) winv(j, j) = 1.0;
    const int half = (n + 1) / 2;
    for (int a = 1; a <= n; ++a) {
      // Xi*_a = sign * Xi_{n+1-a}: sign -1 exactly on the sinh entries
      const int src = n + 1 - a;
      const double sign = src <= half ? 1.0 : -1.0;
      winv(m + a - 1, m + src - 1) = sign;  // (W^{-1})_{a, src(a)} = s_a
    }
    return winv * inv;
  }

  std::vector<cplx> xr(nx), yr(m);
  for (int j = 0; j < nx; ++j) xr[j] = std::exp(2.0 * pi * x[j]);
  for (int k = 0; k < m; ++k) yr[k] = std::exp(2.0 * pi * y[k]);
  MatrixXc rat_inv = route == InverseRoute::Direct ? rational_inverse_direct(xr, yr)
                                                   : rational_inverse_dressing(xr, yr, false);
  // right undressing: rows of the inverse
  MatrixXc inv(nx, nx);
  inv.setZero();
  // first m rows: divide by D_y
  for (int j = 0; j < m; ++j)
    inv.row(j) = rat_inv.row(j) * (0.5 * std::exp(-pi * double(n + 1) * y[j]));
  if (n > 0) {
    // T^{-1}: x^{a-1} = cosh_a - sinh_{n+1-a}, x^{n-a} = cosh_a + sinh_{n+1-a}
    MatrixXc tinv = MatrixXc::Zero(n, n);
    const int half = (n + 1) / 2;
    for (int a = 1; a <= half; ++a) {
      const int r_lo = a - 1, r_hi = n - a;
      tinv(a - 1, r_lo) = 1.0;
      if (r_hi != r_lo) {
        tinv(a - 1, r_hi) = 1.0;
        tinv(n + 1 - a - 1, r_lo) = -1.0;
        tinv(n + 1 - a - 1, r_hi) = 1.0;
      }
    }
    inv.bottomRows(n) = tinv * rat_inv.bottomRows(n);
  }
  // left undressing: columns pick up e^{(n-1) pi alpha}
  for (int k = 0; k < nx; ++k) inv.col(k) *= std::exp(pi * double(n - 1) * x[k]);
  return inv;
}

std::pair<cplx, cplx> schur_quotient_check(const std::vector<cplx>& x,
                                           const std::vector<cplx>& y, int r) {
  const int n = int(x.size()) - int(y.size());
  if (n <= 0 || r < 0 || r > n)
    throw std::invalid_argument("schur_quotient_check: need |x| = |y| + n, 0 <= r <= n");
  StructuredMatrixSpec jump;
  jump.kind = MatrixKind::CauchyVandermonde;
  jump.param = Parametrization::Rational;
  jump.x_nodes = x;
  jump.y_nodes = y;
  // lambda_r = delta + 1^r skips the exponent n - r out of {0, ..., n}
  jump.partition = Partition::jump(n, n - r);
  StructuredMatrixSpec base = jump;
  base.partition = Partition::delta(n);
  const LogComplex num = generic_det(build_matrix(jump)).log;
  const LogComplex den = generic_det(build_matrix(base)).log;
  return {(num / den).value(), super_elementary(x, y, r)};
}

DetResult generic_det(const MatrixXc& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("generic_det: non-square matrix");
  DetResult out;
  if (m.rows() == 0) {
    out.value = 1.0;
    out.log = LogComplex::one();
    out.rcond = 1.0;
    return out;
  }
  Eigen::PartialPivLU<MatrixXc> lu(m);
  LogComplex det = LogComplex::from(cplx(double(lu.permutationP().determinant()), 0.0));
  bool singular = false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const cplx u = lu.matrixLU()(i, i);
    if (u == cplx(0.0, 0.0)) {
      singular = true;
      break;
    }
    det *= u;
  }
  if (singular) {
    out.value = 0.0;
    out.log = LogComplex{-std::numeric_limits<double>::infinity(), 0.0};
    out.rcond = 0.0;
    return out;
  }
  out.log = det;
  out.value = det.value();
  out.rcond = lu.rcond();
  return out;
}

MatrixXc det_reduce(const BlockMatrix& m) {
  if (m.a.rows() != m.a.cols()) throw std::invalid_argument("det_reduce: A must be square");
  Eigen::PartialPivLU<MatrixXc> lu(m.a);
  if (lu.rcond() < 1e-14) throw NumericError("det_reduce: A numerically singular");
  return m.d - m.b * lu.solve(m.c);
}

cplx rank1_det(const MatrixXc& m, const MatrixXc& p) {
  if (m.rows() != m.cols() || p.rows() != m.rows() || p.cols() != m.cols())
    throw std::invalid_argument("rank1_det: shape mismatch");
  Eigen::JacobiSVD<MatrixXc> svd(p);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv(1) > 1e-10 * std::max(sv(0), 1.0))
    throw std::invalid_argument("rank1_det: perturbation has rank > 1");
  cplx det = generic_det(m).value;
  for (Eigen::Index a = 0; a < m.cols(); ++a) {
    MatrixXc ma = m;
    ma.col(a) = p.col(a);
    det += generic_det(ma).value;
  }
  return det;
}

}  // namespace bethelab
