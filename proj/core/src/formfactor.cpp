#include "bethelab/formfactor.hpp"

#include <algorithm>
#include <cmath>

namespace bethelab {

namespace {

const cplx iu(0.0, 1.0);

double lieb_kernel_real(double nu) { return 1.0 / (pi * (1.0 + nu * nu)); }

// Exact pair-aware root bookkeeping: differences against a close-pair
// partner are formed from the stored deviation, never by subtraction.
struct Roots {
  std::vector<cplx> v;
  std::vector<int> partner;       // index of the pair partner, -1 otherwise
  std::vector<double> delta;      // deviation of the pair the root belongs to
  int sites = 0;

  static Roots from(const BetheState& s) {
    Roots r;
    r.sites = s.chain.sites;
    for (double x : s.real_roots) {
      r.v.emplace_back(x, 0.0);
      r.partner.push_back(-1);
      r.delta.push_back(0.0);
    }
    for (const auto& cp : s.close_pairs) {
      const double d = std::exp(cp.log_delta);
      const int up = int(r.v.size());
      r.v.push_back(cp.center + cplx(0, 0.5 + d));
      r.v.push_back(cp.center - cplx(0, 0.5 + d));
      r.partner.push_back(up + 1);
      r.partner.push_back(up);
      r.delta.insert(r.delta.end(), {d, d});
    }
    for (const cplx& w : s.wide_pairs) {
      r.v.push_back(w + cplx(0, 0.5));
      r.v.push_back(std::conj(w) - cplx(0, 0.5));
      r.partner.insert(r.partner.end(), {-1, -1});
      r.delta.insert(r.delta.end(), {0.0, 0.0});
    }
    return r;
  }

  int size() const { return int(v.size()); }

  cplx diff(int j, int k) const {
    if (partner[j] == k) {
      const double sgn = v[j].imag() > v[k].imag() ? 1.0 : -1.0;
      return cplx(0.0, sgn * (1.0 + 2.0 * delta[j]));
    }
    return v[j] - v[k];
  }
};

// d log a / d nu evaluated on root j of its own set; the partner difference
// v_j - v_k -+ i = +- 2 i delta is taken from the stored deviation
cplx dlog_a_on_root(const Roots& r, int j) {
  const cplx nu = r.v[j];
  cplx d = double(r.sites) * (1.0 / (nu - 0.5 * iu) - 1.0 / (nu + 0.5 * iu));
  for (int k = 0; k < r.size(); ++k) {
    cplx up, dn;
    if (r.partner[j] == k) {
      const double dd = r.delta[j];
      if (r.v[j].imag() > r.v[k].imag()) {
        up = iu * (2.0 + 2.0 * dd);   // v_j - v_k + i
        dn = iu * (2.0 * dd);         // v_j - v_k - i
      } else {
        up = -iu * (2.0 * dd);
        dn = -iu * (2.0 + 2.0 * dd);
      }
    } else {
      up = r.v[j] - r.v[k] + iu;
      dn = r.v[j] - r.v[k] - iu;
    }
    d += 1.0 / up - 1.0 / dn;
  }
  return d;
}

// N_jk = a'(v_j) delta_jk - 2 pi i K(v_j - v_k); on-shell a' = -dlog a,
// and within a pair K(i(1+2d)) = -1/(4 pi d (1+d)).
MatrixXc gaudin_matrix(const Roots& r) {
  const int n = r.size();
  MatrixXc g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      cplx kern;
      if (j == k) {
        kern = cplx(lieb_kernel_real(0.0), 0.0);
      } else if (r.partner[j] == k) {
        const double d = r.delta[j];
        kern = cplx(-1.0 / (4.0 * pi * d * (1.0 + d)), 0.0);
      } else {
        const cplx x = r.v[j] - r.v[k];
        kern = 1.0 / (pi * (1.0 + x * x));
      }
      g(j, k) = -2.0 * pi * iu * kern;
    }
    g(j, j) += -dlog_a_on_root(r, j);
  }
  return g;
}

LogComplex log_norm_prefactor(const Roots& r) {
  // (-1)^N prod_{j,k} (v_j - v_k - i) / prod_{j != k} (v_j - v_k)
  const int n = r.size();
  LogComplex p(0.0, n % 2 == 0 ? 0.0 : pi);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      cplx num;
      if (j == k) {
        num = -iu;
      } else if (r.partner[j] == k && r.v[j].imag() > r.v[k].imag()) {
        num = cplx(0.0, 2.0 * r.delta[j]);  // exactly 2 i delta
      } else {
        num = r.diff(j, k) - iu;
      }
      p *= LogComplex::from(num);
      if (j != k) p /= LogComplex::from(r.diff(j, k));
    }
  return p;
}

void check_nodes(const std::vector<cplx>& mu, const Roots& r) {
  for (const cplx& m : mu)
    for (const cplx& rho : r.v)
      if (std::abs(m - rho) < 1e-12)
        throw CoincidentNodeError("slavnov: off-shell node collides with a root");
}

bool same_multiset(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return false;
  auto lex = [](const cplx& u, const cplx& w) {
    return u.real() != w.real() ? u.real() < w.real() : u.imag() < w.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

}  // namespace

cplx slavnov_t(cplx nu) { return iu / (nu * (nu + iu)); }

cplx counting_a(cplx nu, const BetheState& state) {
  if (std::abs(nu - 0.5 * iu) < 1e-12) return 0.0;  // zero of r, pinned
  return exponential_counting(nu, state);
}

LogComplex log_slavnov_scalar_product(const std::vector<cplx>& mu, const BetheState& state) {
  const Roots r = Roots::from(state);
  const int n = r.size();
  if (int(mu.size()) != n)
    throw std::invalid_argument("slavnov: cardinality mismatch is an exact zero");
  if (same_multiset(mu, r.v))
    throw std::invalid_argument("slavnov: coincident sets; use gaudin_norm");
  check_nodes(mu, r);

  LogComplex pref = LogComplex::one();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) pref *= LogComplex::from(mu[j] - r.v[k] - iu);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      pref /= LogComplex::from(r.v[j] - r.v[k]);
      pref /= LogComplex::from(mu[k] - mu[j]);
    }

  MatrixXc m(n, n);
  for (int j = 0; j < n; ++j) {
    const cplx a = counting_a(mu[j], state);
    for (int k = 0; k < n; ++k)
      m(j, k) = a * slavnov_t(mu[j] - r.v[k]) - slavnov_t(r.v[k] - mu[j]);
  }
  return pref * generic_det(m).log;
}

cplx slavnov_scalar_product(const std::vector<cplx>& mu, const BetheState& state) {
  if (int(mu.size()) != Roots::from(state).size()) return 0.0;  // cardinality rule
  return log_slavnov_scalar_product(mu, state).value();
}

LogComplex log_gaudin_norm(const BetheState& state) {
  const Roots r = Roots::from(state);
  return log_norm_prefactor(r) * generic_det(gaudin_matrix(r)).log;
}

double gaudin_norm(const BetheState& state) {
  const LogComplex n = log_gaudin_norm(state);
  const double im = std::remainder(n.phase, 2.0 * pi);
  if (std::abs(im) > 1e-6) throw NumericError("gaudin_norm: non-real norm");
  return std::exp(n.log_mag) * std::cos(im);
}

LogComplex log_foda_wheeler_scalar_product(const std::vector<cplx>& mu, const BetheState& state,
                                           int ell) {
  if (ell == 0) return log_slavnov_scalar_product(mu, state);
  const Roots r = Roots::from(state);
  const int n = r.size();
  const int big = n + ell;
  if (int(mu.size()) != big) throw std::invalid_argument("foda_wheeler: |mu| must be N + ell");
  check_nodes(mu, r);

  LogComplex pref = LogComplex::one();
  for (int k = 2; k <= ell; ++k) pref *= LogComplex::from(cplx(double(k), 0.0));
  // (-1)^{N ell} times the descendant phase, pinned against the explicit
  // lowering-operator construction: exp(i pi ell^2)
  pref *= LogComplex(0.0, pi * double(n) * double(ell) + pi * double(ell) * double(ell));
  for (int j = 0; j < big; ++j)
    for (int k = 0; k < n; ++k) pref *= LogComplex::from(mu[j] - r.v[k] - iu);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) pref /= LogComplex::from(r.v[j] - r.v[k]);
  for (int j = 0; j < big; ++j)
    for (int k = j + 1; k < big; ++k) pref /= LogComplex::from(mu[k] - mu[j]);

  MatrixXc m(big, big);
  for (int j = 0; j < big; ++j) {
    const cplx a = counting_a(mu[j], state);
    for (int k = 0; k < n; ++k)
      m(j, k) = a * slavnov_t(mu[j] - r.v[k]) - slavnov_t(r.v[k] - mu[j]);
    cplx up = 1.0, dn = 1.0;  // (mu + i)^{b}, mu^{b}
    for (int b = 0; b < ell; ++b) {
      m(j, n + b) = a * up - dn;
      up *= mu[j] + iu;
      dn *= mu[j];
    }
  }
  return pref * generic_det(m).log;
}

cplx foda_wheeler_scalar_product(const std::vector<cplx>& mu, const BetheState& state, int ell) {
  return log_foda_wheeler_scalar_product(mu, state, ell).value();
}

cplx transfer_eigenvalue(cplx nu, const BetheState& state) {
  const Roots r = Roots::from(state);
  for (const cplx& rho : r.v)
    if (std::abs(nu - rho) < 1e-8) throw NumericError("transfer_eigenvalue: nu at a pole");
  LogComplex t1 = LogComplex::one();
  LogComplex t2 = LogComplex::from((nu - 0.5 * iu) / (nu + 0.5 * iu)).pow(state.chain.sites);
  for (const cplx& rho : r.v) {
    t1 *= LogComplex::from((nu - rho - iu) / (nu - rho));
    t2 *= LogComplex::from((nu - rho + iu) / (nu - rho));
  }
  return t1.value() + t2.value();
}

cplx eigenvalue_ratio_finite(cplx nu, const BetheState& ground, const BetheState& excited) {
  return transfer_eigenvalue(nu, excited) / transfer_eigenvalue(nu, ground);
}

FormFactorResult longitudinal_ff_finite(const BetheState& ground, const BetheState& excited) {
  FormFactorResult out;
  out.method = "finite-determinant";
  out.sites = ground.chain.sites;
  out.holes = excited.holes;
  if (ground.twice_spin != 0)
    throw std::invalid_argument("longitudinal_ff_finite: ground state must be a singlet");
  if (excited.chain.sites != ground.chain.sites)
    throw std::invalid_argument("longitudinal_ff_finite: chain sizes differ");
  if (excited.twice_spin != 2) {
    out.note = excited.twice_spin == 0 ? "selection rule: singlet excitation"
                                       : "selection rule: only triplet first descendants couple";
    return out;
  }

  const int n0 = ground.chain.sites / 2;
  const Roots lam = Roots::from(ground);  // N0 real roots
  const Roots mu = Roots::from(excited);  // N0 - 1 roots, possibly with pairs
  const int n1 = mu.size();
  if (n1 != n0 - 1) throw std::invalid_argument("longitudinal_ff_finite: root count mismatch");

  double min_dev = 0.0;
  for (const auto& cp : excited.close_pairs) {
    const double d = std::exp(cp.log_delta);
    min_dev = min_dev == 0.0 ? d : std::min(min_dev, d);
  }
  out.min_deviation = min_dev;

  // --- SP1 = <psi_g | psi(mu u {i/2})>, Slavnov against the ground state,
  // with each close-pair row pair recombined before the determinant: the
  // lower row gains a_g(mu-) times the upper row (determinant unchanged),
  // and the near-cancelling t-difference is expanded analytically.
  std::vector<cplx> mu_check = mu.v;
  mu_check.emplace_back(0.0, 0.5);
  LogComplex pref1 = LogComplex::one();
  for (int j = 0; j < n0; ++j)
    for (int k = 0; k < n0; ++k) pref1 *= LogComplex::from(mu_check[j] - lam.v[k] - iu);
  for (int j = 0; j < n0; ++j)
    for (int k = j + 1; k < n0; ++k) {
      pref1 /= LogComplex::from(lam.v[j] - lam.v[k]);
      // alt(-mu_check): pair differences taken from the stored deviation
      cplx d;
      if (j < n1 && mu.partner[j] == k)
        d = mu.v[j].imag() > mu.v[k].imag() ? -iu * (1.0 + 2.0 * mu.delta[j])
                                            : iu * (1.0 + 2.0 * mu.delta[j]);
      else
        d = mu_check[k] - mu_check[j];
      pref1 /= LogComplex::from(d);
    }

  MatrixXc mg(n0, n0);
  for (int j = 0; j < n0; ++j) {
    const bool in_pair = j < n1 && mu.partner[j] >= 0;
    const bool is_lower = in_pair && mu.v[j].imag() < mu.v[mu.partner[j]].imag();
    if (is_lower) continue;  // filled by the partner branch
    const cplx aj = counting_a(mu_check[j], ground);
    for (int k = 0; k < n0; ++k)
      mg(j, k) = aj * slavnov_t(mu_check[j] - lam.v[k]) - slavnov_t(lam.v[k] - mu_check[j]);
    if (in_pair) {
      const int jl = mu.partner[j];
      const double d = mu.delta[j];
      const double y = 0.5 + d;
      const cplx c = mu.v[j] - cplx(0, y);
      const cplx a_dn = counting_a(mu.v[jl], ground);
      for (int k = 0; k < n0; ++k) {
        const double u = (c - lam.v[k]).real();
        // t(mu- - lam) - t(lam - mu+) = -4 u d / ((u^2+y^2)(u^2+(1-y)^2))
        const double tdiff =
            -4.0 * u * d / ((u * u + y * y) * (u * u + (1.0 - y) * (1.0 - y)));
        mg(jl, k) = a_dn * tdiff + a_dn * aj * slavnov_t(mu.v[j] - lam.v[k]) -
                    slavnov_t(lam.v[k] - mu.v[jl]);
      }
    }
  }
  const DetResult det_mg = generic_det(mg);
  const LogComplex sp1 = pref1 * det_mg.log;

  // --- SP2 = <psi_1^2(mu) | psi(lam u {i/2})>, Foda-Wheeler with ell = 2
  std::vector<cplx> lam_check = lam.v;
  lam_check.emplace_back(0.0, 0.5);
  const LogComplex sp2 = log_foda_wheeler_scalar_product(lam_check, excited, 2);

  // --- norms and the shift-operator phases tau(i/2) = prod (rho+i/2)/(rho-i/2)
  const LogComplex norm_g = log_gaudin_norm(ground);
  const LogComplex norm_e = log_gaudin_norm(excited);
  LogComplex shift = LogComplex::one();
  for (const cplx& rho : lam.v)
    shift *= LogComplex::from((rho + 0.5 * iu) / (rho - 0.5 * iu));
  for (const cplx& rho : mu.v)
    shift *= LogComplex::from((rho + 0.5 * iu) / (rho - 0.5 * iu));

  // |F|^2 = SP1 SP2 / (tau_g tau_e norm_g norm_e); sign and scale pinned by
  // the exact-diagonalization oracle (positive Gaudin norms absorb the -1 of
  // the transverse mapping, the sigma/block factors of two cancel in full)
  LogComplex total = sp1 * sp2 / shift / norm_g / norm_e;
  const cplx value = total.value();
  out.condition = det_mg.rcond;
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value.real())))
    throw NumericError("longitudinal_ff_finite: non-real amplitude");
  if (value.real() < -1e-10) throw NumericError("longitudinal_ff_finite: negative amplitude");
  out.value = std::max(0.0, value.real());
  return out;
}

double longitudinal_ff_double_sum(const BetheState& ground, const BetheState& excited) {
  if (ground.chain.sites > 8)
    throw std::invalid_argument("longitudinal_ff_double_sum: M <= 8 only");
  if (excited.twice_spin != 2) return 0.0;
  const Roots big = Roots::from(ground);    // N0 on-shell roots, C acts on them
  const Roots small = Roots::from(excited);  // N0 - 1 on-shell roots
  const int nb = big.size();

  std::vector<cplx> checked = big.v;
  checked.emplace_back(0.0, 0.5);
  cplx total = 0.0;
  for (int j = 0; j < nb; ++j) {
    for (int k = 0; k <= nb; ++k) {
      if (k == j) continue;
      std::vector<cplx> rest;
      for (int t = 0; t <= nb; ++t)
        if (t != j && t != k) rest.push_back(checked[t]);
      MatrixXc m(int(rest.size()), int(rest.size()));
      for (int rr = 0; rr < int(rest.size()); ++rr) {
        const cplx a = counting_a(rest[rr], excited);
        for (int c = 0; c < small.size(); ++c)
          m(rr, c) = a * slavnov_t(rest[rr] - small.v[c]) - slavnov_t(small.v[c] - rest[rr]);
      }
      cplx term = generic_det(m).value;
      const double sgn = ((j + k + (j > k ? 1 : 0)) % 2 == 0) ? 1.0 : -1.0;
      term *= sgn / (big.v[j] - checked[k] + iu);
      for (int t = 0; t < nb; ++t) term *= big.v[j] - big.v[t] - iu;
      for (int t = 0; t < small.size(); ++t) term /= big.v[j] - small.v[t] - iu;
      for (int t = 0; t < nb; ++t) term *= checked[k] - big.v[t] - iu;
      for (int t = 0; t < small.size(); ++t) term /= checked[k] - small.v[t] - iu;
      total += term;
    }
  }
  LogComplex pref = LogComplex::one();
  for (int j = 0; j <= nb; ++j)
    for (int k = 0; k < small.size(); ++k)
      pref *= LogComplex::from(checked[j] - small.v[k] - iu);
  for (int j = 0; j < small.size(); ++j)
    for (int k = j + 1; k < small.size(); ++k) pref /= LogComplex::from(small.v[j] - small.v[k]);
  for (int j = 0; j <= nb; ++j)
    for (int k = j + 1; k <= nb; ++k) pref /= LogComplex::from(checked[k] - checked[j]);
  const cplx sp = pref.value() * total;

  // 2 <g|s-|e><e|s+|g>/(norms): the dressed transfer-matrix phases are
  // unimodular and the two matrix elements agree in modulus; the remaining
  // constant is pinned against the determinant route
  return 2.0 * std::norm(sp) / (gaudin_norm(ground) * gaudin_norm(excited));
}

}  // namespace bethelab
