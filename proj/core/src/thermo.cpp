#include "bethelab/thermo.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "bethelab/specfun.hpp"

namespace bethelab::thermo {

namespace {

const cplx iu(0.0, 1.0);

double lieb_kernel(double nu) { return 1.0 / (pi * (1.0 + nu * nu)); }

// K_kappa(nu) = kappa K(kappa nu), complex-capable
cplx kernel_scaled(int kappa, cplx nu) {
  const cplx k = double(kappa) * nu;
  return double(kappa) / (pi * (1.0 + k * k));
}

}  // namespace

Strip DensityKind::strip() const {
  const double edge = 1.0 / double(kappa);
  const double im = shift.imag();
  if (std::abs(std::abs(im) - edge) < 1e-6)
    throw std::invalid_argument("DensityKind: shift on a strip boundary");
  if (im > edge) return Strip::UpperOuter;
  if (im < -edge) return Strip::LowerOuter;
  return Strip::Central;
}

cplx density(const DensityKind& kind, double lambda) {
  if (kind.kappa != 1 && kind.kappa != 2)
    throw std::invalid_argument("density: kappa must be 1 or 2");
  const Strip st = kind.strip();
  const cplx w = lambda - kind.shift;
  if (kind.kappa == 2) {
    if (st == Strip::Central) return 0.5 / std::cosh(pi * w);
    const double sigma = st == Strip::UpperOuter ? 1.0 : -1.0;
    const cplx u = w / (2.0 * iu * sigma);
    return (digamma(-0.25 - u) - 2.0 * digamma(0.25 - u) + digamma(0.75 - u)) /
           (4.0 * pi);
  }
  if (st == Strip::Central) {
    cplx s = 0.0;
    for (double sigma : {1.0, -1.0}) {
      const cplx u = w / (2.0 * iu * sigma);
      s += digamma(0.5 + u) - digamma(1.0 + u);
    }
    return s / (4.0 * pi);
  }
  const double sigma = st == Strip::UpperOuter ? 1.0 : -1.0;
  return 1.0 / (2.0 * pi * w * (w + iu * sigma));
}

cplx hl_density(cplx x) { return 1.0 / (2.0 * pi * (x * x + 0.25)); }

cplx NystromSolution::interpolate(double lambda) const {
  // Nystrom natural interpolation is not needed off the grid here; nearest
  // evaluation through the integral equation would require the kind again,
  // so plain barycentric-free lookup of the closest node is provided.
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - lambda) < std::abs(nodes[best] - lambda)) best = i;
  return values[best];
}

NystromSolution lieb_nystrom(const DensityKind& kind, double half_width, int panels) {
  if (half_width < 10.0) throw std::invalid_argument("lieb_nystrom: L >= 10 required");
  using rule = boost::math::quadrature::gauss<double, 16>;
  NystromSolution sol;
  const double h = 2.0 * half_width / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = -half_width + p * h, mid = a + 0.5 * h;
    for (std::size_t q = 0; q < rule::abscissa().size(); ++q) {
      const double x = rule::abscissa()[q], w = rule::weights()[q];
      // boost stores the non-negative half of the symmetric rule
      sol.nodes.push_back(mid + 0.5 * h * x);
      sol.weights.push_back(0.5 * h * w);
      if (x != 0.0) {
        sol.nodes.push_back(mid - 0.5 * h * x);
        sol.weights.push_back(0.5 * h * w);
      }
    }
  }
  const int n = int(sol.nodes.size());
  MatrixXc a(n, n);
  VectorXc rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      a(i, j) = (i == j ? 1.0 : 0.0) + sol.weights[j] * lieb_kernel(sol.nodes[i] - sol.nodes[j]);
    rhs(i) = kernel_scaled(kind.kappa, sol.nodes[i] - kind.shift);
  }
  Eigen::PartialPivLU<MatrixXc> lu(a);
  if (lu.rcond() < 1e-12) throw NumericError("lieb_nystrom: singular discretized system");
  VectorXc v = lu.solve(rhs);
  sol.values.assign(v.data(), v.data() + n);
  return sol;
}

std::pair<double, double> spinon_energy_momentum(double theta) {
  const double eps = 0.5 * pi / std::cosh(pi * theta);
  const double p = std::atan(std::sinh(pi * theta)) - 0.5 * pi;
  return {eps, p};
}

double tau_ratio_thermo(double nu, const std::vector<double>& holes) {
  double r = 1.0;
  for (double th : holes) r *= std::tanh(0.5 * pi * (nu - th));
  return r;
}

namespace {

// log of the sigma = +- product of Barnes-G ratios for one rapidity gap
double log_g_ratio_pair(double gap) {
  cplx s = 0.0;
  for (double sigma : {1.0, -1.0}) {
    const cplx w = gap / (2.0 * iu * sigma);
    s += log_barnes_g(w) + log_barnes_g(1.0 + w) - log_barnes_g(0.5 + w) -
         log_barnes_g(1.5 + w);
  }
  if (std::abs(s.imag()) > 1e-9)
    throw NumericError("barnes ratio: unexpected phase");
  return s.real();
}

}  // namespace

FormFactorResult two_spinon_ff_thermo(double theta1, double theta2, int sites) {
  FormFactorResult out;
  out.method = "thermo-2spinon";
  out.sites = sites;
  out.holes = {theta1, theta2};
  const double gap = theta2 - theta1;
  if (gap == 0.0) {
    out.note = "coincident holes: G(0) = 0";
    return out;
  }
  const double logv = std::log(2.0) - 2.0 * std::log(double(sites)) -
                      4.0 * std::log(barnes_g_half()) + log_g_ratio_pair(gap);
  out.value = std::exp(logv);
  return out;
}

double nspinon_prefactor(const SpinonSet& spinons, int sites) {
  const int n_h = int(spinons.holes.size());
  const int n_t = int(spinons.roots.size());
  if (n_h % 2 != 0 || n_t != n_h / 2 - 1)
    throw std::invalid_argument("nspinon_prefactor: triplet requires |chi| = n_h/2 - 1");
  for (int a = 0; a < n_t; ++a)
    for (int b = 0; b < n_t; ++b)
      if (a != b && std::abs(spinons.roots[a] - spinons.roots[b] - iu) < 1e-10)
        throw NumericError("nspinon_prefactor: chi collision at distance i");

  LogComplex v = LogComplex::one();
  if (((n_h + 2) / 2) % 2 != 0) v *= LogComplex(0.0, pi);
  v.log_mag += 0.5 * double(n_h * (n_h - 2) + 2) * std::log(2.0);
  v.log_mag += 0.5 * double(n_h * (n_h - 3) + 2) * std::log(pi);
  v.log_mag -= double(n_h) * std::log(double(sites));
  v.log_mag -= 2.0 * double(n_h) * std::log(barnes_g_half());
  for (int a = 0; a < n_t; ++a) {
    for (double th : spinons.holes) v *= LogComplex::from(spinons.roots[a] - th - 0.5 * iu);
    for (int b = 0; b < n_t; ++b) v /= LogComplex::from(spinons.roots[a] - spinons.roots[b] - iu);
  }
  // the ordered a != b product pairs up into the sigma = +- structure of
  // log_g_ratio_pair, one call per unordered pair
  for (int a = 0; a < n_h; ++a)
    for (int b = a + 1; b < n_h; ++b)
      v.log_mag += log_g_ratio_pair(spinons.holes[a] - spinons.holes[b]);
  for (int a = 0; a < n_h; ++a)
    for (int b = a + 1; b < n_h; ++b) v /= LogComplex::from(spinons.holes[b] - spinons.holes[a]);
  const cplx value = v.value();
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real())))
    throw NumericError("nspinon_prefactor: non-real value for self-conjugate roots");
  return value.real();
}

namespace {

// Phi(nu | A, B) = prod sinh pi(nu - A) / prod sinh pi(nu - B) in log form,
// optionally omitting one nearly-vanishing factor on either side
LogComplex log_phi_hyp(cplx nu, const std::vector<cplx>& num, const std::vector<cplx>& den,
                       int skip_num = -1, int skip_den = -1) {
  LogComplex v = LogComplex::one();
  for (std::size_t i = 0; i < num.size(); ++i)
    if (int(i) != skip_num) v *= LogComplex::from(std::sinh(pi * (nu - num[i])));
  for (std::size_t i = 0; i < den.size(); ++i)
    if (int(i) != skip_den) v /= LogComplex::from(std::sinh(pi * (nu - den[i])));
  return v;
}

cplx rational_phi(cplx nu, const std::vector<cplx>& num, const std::vector<cplx>& den,
                  int skip_num = -1, int skip_den = -1) {
  LogComplex v = LogComplex::one();
  for (std::size_t i = 0; i < num.size(); ++i)
    if (int(i) != skip_num) v *= LogComplex::from(nu - num[i]);
  for (std::size_t i = 0; i < den.size(); ++i)
    if (int(i) != skip_den) v /= LogComplex::from(nu - den[i]);
  return v.value();
}

cplx slavnov_t_local(cplx nu) { return iu / (nu * (nu + iu)); }

// d log a_e / d nu of a proxy state at a real point away from the roots
cplx dlog_a(const BetheState& st, double nu) {
  cplx d = double(st.chain.sites) * (1.0 / (cplx(nu, 0) - 0.5 * iu) - 1.0 / (cplx(nu, 0) + 0.5 * iu));
  for (const cplx& rho : st.all_roots())
    d += 1.0 / (nu - rho + iu) - 1.0 / (nu - rho - iu);
  return d;
}

struct ProxyData {
  BetheState ground, excited;
  std::vector<double> holes;      // realized hole rapidities
  double center = 0.0;            // realized 2-string center
  std::vector<cplx> lam;          // ground roots
  std::vector<cplx> lam_check;    // ground + i/2
  std::vector<cplx> rl_plus;      // real excited roots + upper pair root
  std::vector<cplx> crl_plus;     // rl_plus with i/2 inserted
  std::vector<cplx> rh_plus;      // real excited roots + upper pair root + holes
  std::vector<cplx> mu_all;       // all excited roots
  int crl_center_index = -1;      // index of the upper pair root in crl_plus
  int mu_upper_index = -1;        // index of the upper pair root in mu_all
};

ProxyData solve_proxy(const std::array<double, 4>& holes, const HigherLevelState& hl,
                      const ChainSpec& proxy) {
  ProxyData p;
  p.ground = solve_real_roots(proxy, QuantumNumberSet::ground_state(proxy));
  p.excited = solve_complex_state(proxy, {holes.begin(), holes.end()}, hl);
  if (p.excited.close_pairs.size() != 1)
    throw NumericError("four_spinon_ff: proxy state lost its 2-string");
  p.holes = p.excited.holes;
  p.center = p.excited.close_pairs[0].center.real();
  const double dev = std::exp(p.excited.close_pairs[0].log_delta);
  const cplx upper = p.excited.close_pairs[0].center + cplx(0, 0.5 + dev);
  const cplx lower = p.excited.close_pairs[0].center - cplx(0, 0.5 + dev);

  for (double x : p.ground.real_roots) p.lam.emplace_back(x, 0);
  p.lam_check = p.lam;
  p.lam_check.emplace_back(0.0, 0.5);

  for (double x : p.excited.real_roots) p.rl_plus.emplace_back(x, 0);
  p.rl_plus.push_back(upper);
  p.crl_plus = p.rl_plus;
  p.crl_plus.emplace_back(0.0, 0.5);
  p.crl_center_index = int(p.crl_plus.size()) - 2;

  p.rh_plus = p.rl_plus;
  for (double th : p.holes) p.rh_plus.emplace_back(th, 0);

  p.mu_all = p.rl_plus;  // already ends with the upper pair root
  p.mu_upper_index = int(p.mu_all.size()) - 1;
  p.mu_all.push_back(lower);
  return p;
}

cplx contour_integral_jg(const ProxyData& p, double alpha, double cutoff) {
  // 2 Re int_{R + i alpha} Phi(tau | crl+, lam) t(tau - center) d tau
  auto f = [&](double s) {
    const cplx tau(s, alpha);
    const cplx val = log_phi_hyp(tau, p.crl_plus, p.lam).value() *
                     slavnov_t_local(tau - p.center);
    return val;
  };
  const cplx upper = integrate_c(f, -cutoff, cutoff, 1e-10);
  return 2.0 * upper.real();
}

cplx compute_jg(const ProxyData& p, double alpha, double cutoff) {
  const cplx chi(p.center, 0.0);
  const cplx chi_up = chi + 0.5 * iu;
  // -phi(chi - 3i/2 | mu, lam) phi'(chi + i/2 | lam, mu) Phi'(chi+ | crl+, lam)
  const cplx f1 = rational_phi(chi - 1.5 * iu, p.mu_all, p.lam);
  const cplx f2 = rational_phi(chi_up, p.lam, p.mu_all, -1, p.mu_upper_index);
  const cplx f3 = log_phi_hyp(chi_up, p.crl_plus, p.lam, p.crl_center_index, -1).value();
  return -f1 * f2 * f3 + contour_integral_jg(p, alpha, cutoff);
}

// AZ^eff column entries at each hole
std::vector<cplx> compute_az(const ProxyData& p, double alpha, double cutoff) {
  const int nh = int(p.holes.size());
  std::vector<cplx> az(nh);
  // Phi'(theta_b | lam_check, rh+) for every hole, the hole factor omitted
  std::vector<cplx> phi_at_holes(nh);
  for (int b = 0; b < nh; ++b) {
    const int skip = int(p.rl_plus.size()) + b;  // position of theta_b in rh_plus
    phi_at_holes[b] = log_phi_hyp(cplx(p.holes[b], 0), p.lam_check, p.rh_plus, -1, skip).value();
  }
  DensityKind hole_kind{1, 0.0};
  for (int a = 0; a < nh; ++a) {
    cplx v = -dlog_a(p.excited, p.holes[a]) * phi_at_holes[a];  // a'_e = -dlog a on shell
    for (int b = 0; b < nh; ++b)
      v -= 2.0 * pi * iu * density(hole_kind, p.holes[a] - p.holes[b]).real() * phi_at_holes[b];
    auto f = [&](double s) {
      const cplx tau(s, alpha);
      return hl_density(p.holes[a] - tau) * log_phi_hyp(tau, p.lam_check, p.rh_plus).value();
    };
    v += pi * integrate_c(f, -cutoff, cutoff, 1e-10);
    az[a] = v;
  }
  return az;
}

}  // namespace

FourSpinonResult four_spinon_ff(const std::array<double, 4>& holes, int center_index,
                                int sites, const ChainSpec& proxy, double alpha) {
  if (center_index < 1 || center_index > 3)
    throw std::invalid_argument("four_spinon_ff: center_index in 1..3");
  if (alpha <= 0.0 || alpha >= 0.5)
    throw std::invalid_argument("four_spinon_ff: alpha in (0, 1/2)");
  const double cutoff = 12.0;

  auto hl = solve_higher_level({holes.begin(), holes.end()}, 1);
  std::vector<HigherLevelState> reals;
  for (auto& s : hl.states)
    if (std::abs(s.roots[0].imag()) < 1e-9) reals.push_back(s);
  if (int(reals.size()) != 3)
    throw NumericError("four_spinon_ff: cubic did not yield three real centers");
  std::sort(reals.begin(), reals.end(), [](const auto& a, const auto& b) {
    return a.roots[0].real() < b.roots[0].real();
  });
  const HigherLevelState& picked = reals[center_index - 1];

  FourSpinonResult out;
  out.cubic_residual = picked.residual;

  auto evaluate = [&](const ChainSpec& chain) {
    ProxyData p = solve_proxy(holes, picked, chain);
    const cplx jg = compute_jg(p, alpha, cutoff);
    const auto az = compute_az(p, alpha, cutoff);
    const int nh = int(p.holes.size());
    cplx je = 0.0;
    for (int a = 0; a < nh; ++a) {
      cplx denom = 1.0;
      for (int b = 0; b < nh; ++b)
        if (b != a) denom *= p.holes[a] - p.holes[b];
      je += iu / denom * az[a];
    }
    double den = 0.0;
    for (int a = 0; a < nh; ++a) den += hl_density(cplx(p.center - p.holes[a], 0)).real();
    double logpref = std::log(32.0) + 3.0 * std::log(pi) - 4.0 * std::log(double(sites)) -
                     8.0 * std::log(barnes_g_half());
    for (int a = 0; a < nh; ++a)
      for (int b = a + 1; b < nh; ++b) logpref += log_g_ratio_pair(p.holes[a] - p.holes[b]);
    const cplx raw = -std::exp(logpref) * jg * je / den;
    struct Parts {
      double value, den, pref;
      cplx jg, je;
      ProxyData p;
    };
    return Parts{raw.real(), den, std::exp(logpref), jg, je, std::move(p)};
  };

  auto main_run = evaluate(proxy);
  auto second_run = evaluate(ChainSpec(proxy.sites + 8));
  out.center = main_run.p.center;
  out.j_g = main_run.jg;
  out.j_e = main_run.je;
  out.denominator = main_run.den;
  out.prefactor = main_run.pref;
  out.proxy_sensitivity =
      std::abs(main_run.value - second_run.value) / std::max(1e-300, std::abs(second_run.value));

  // center-independence of J_e: with the proxy data held fixed, the explicit
  // chi-dependence of det Je+ - det Je- cancels; measure the spread over the
  // three cubic roots
  {
    const auto az = compute_az(main_run.p, alpha, cutoff);
    const int nh = int(main_run.p.holes.size());
    cplx base = 0.0;
    double spread = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double chi = reals[k].roots[0].real();
      cplx jplus = 0.0, jminus = 0.0;
      for (int a = 0; a < nh; ++a) {
        cplx denom = 1.0;
        for (int b = 0; b < nh; ++b)
          if (b != a) denom *= main_run.p.holes[a] - main_run.p.holes[b];
        jplus += (main_run.p.holes[a] - chi + 0.5 * iu) / denom * az[a];
        jminus += (main_run.p.holes[a] - chi - 0.5 * iu) / denom * az[a];
      }
      const cplx je_k = jplus - jminus;
      if (k == 0)
        base = je_k;
      else
        spread = std::max(spread, std::abs(je_k - base));
    }
    out.je_center_spread = spread;
  }

  out.ff.method = "thermo-4spinon";
  out.ff.sites = sites;
  out.ff.holes = {holes.begin(), holes.end()};
  out.ff.value = main_run.value;
  out.ff.min_deviation = std::exp(main_run.p.excited.close_pairs[0].log_delta);
  return out;
}

}  // namespace bethelab::thermo
