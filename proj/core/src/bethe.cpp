#include "bethelab/bethe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bethelab {

namespace {

double theta1(double nu) { return 2.0 * std::atan(2.0 * nu); }
double theta2(double nu) { return 2.0 * std::atan(nu); }
double theta1p(double nu) { return 4.0 / (1.0 + 4.0 * nu * nu); }
double theta2p(double nu) { return 2.0 / (1.0 + nu * nu); }

// Theta2(x - iy) + Theta2(x + iy) = 4 Re arctan(x + iy) for a conjugate pair
// of roots at height y, continuous in x. For y > 1 the principal branch
// jumps at x = 0 and the wide-pair branch is fixed to stay continuous.
double theta2_pair(double x, double y) {
  double v = 2.0 * (std::atan2(x, 1.0 - y) - std::atan2(-x, 1.0 + y));
  if (y > 1.0 && x >= 0.0) v -= 4.0 * pi;
  return v;
}

double theta2_pair_dx(double x, double y) {
  const double a = 1.0 - y, b = 1.0 + y;
  return 2.0 * (a / (a * a + x * x) + b / (b * b + x * x));
}

cplx bare_energy(cplx lam) { return -2.0 / (lam * lam + 0.25); }

struct PairGeom {
  double x;  // nu - Re(center/anchor)
  double y;  // root height above the axis
};

std::vector<PairGeom> pair_geometry(const BetheState& s, double nu) {
  std::vector<PairGeom> out;
  for (const auto& cp : s.close_pairs) {
    if (std::abs(cp.center.imag()) > 1e-12)
      throw NumericError("counting_function: complex close-pair centers unsupported");
    out.push_back({nu - cp.center.real(), 0.5 + std::exp(cp.log_delta)});
  }
  for (const cplx& w : s.wide_pairs) out.push_back({nu - w.real(), w.imag() + 0.5});
  return out;
}

}  // namespace

ChainSpec::ChainSpec(int m) : sites(m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("ChainSpec: M must be even and >= 2");
}

QuantumNumberSet::QuantumNumberSet(std::vector<int> two_q, const ChainSpec& chain)
    : two_q_(std::move(two_q)) {
  const int n = int(two_q_.size());
  const int m = chain.sites;
  if (n > m / 2) throw std::invalid_argument("QuantumNumberSet: more than M/2 numbers");
  const int s2 = m - 2 * n;  // 2s
  const int parity = ((n + 1) % 2 + 2) % 2;
  const int two_qmax = m / 2 + s2 / 2 - 1;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && two_q_[i] <= two_q_[i - 1])
      throw std::invalid_argument("QuantumNumberSet: not strictly increasing");
    if (((two_q_[i] % 2) + 2) % 2 != parity)
      throw std::invalid_argument("QuantumNumberSet: parity violates 2Q = N+1 (mod 2)");
    if (std::abs(two_q_[i]) > two_qmax)
      throw std::invalid_argument("QuantumNumberSet: |Q| exceeds M/4 + (s-1)/2");
  }
}

QuantumNumberSet QuantumNumberSet::ground_state(const ChainSpec& chain) {
  std::vector<int> q(chain.sites / 2);
  for (int a = 1; a <= chain.sites / 2; ++a) q[a - 1] = 2 * a - chain.sites / 2 - 1;
  return QuantumNumberSet(std::move(q), chain);
}

std::vector<int> QuantumNumberSet::admissible_window(const ChainSpec& chain, int twice_spin) {
  const int n = chain.sites / 2 - twice_spin / 2;
  const int parity = ((n + 1) % 2 + 2) % 2;
  const int two_qmax = chain.sites / 2 + twice_spin / 2 - 1;
  std::vector<int> w;
  for (int v = -two_qmax; v <= two_qmax; ++v)
    if (((v % 2) + 2) % 2 == parity) w.push_back(v);
  return w;
}

int BetheState::num_roots() const {
  return int(real_roots.size()) + 2 * int(close_pairs.size()) + 2 * int(wide_pairs.size());
}

std::vector<cplx> BetheState::all_roots() const {
  std::vector<cplx> r;
  r.reserve(num_roots());
  for (double v : real_roots) r.emplace_back(v, 0.0);
  for (const auto& cp : close_pairs) {
    const cplx shift(0.0, 0.5 + std::exp(cp.log_delta));
    r.push_back(cp.center + shift);
    r.push_back(cp.center - shift);
  }
  for (const cplx& w : wide_pairs) {
    r.push_back(w + cplx(0.0, 0.5));
    r.push_back(std::conj(w) - cplx(0.0, 0.5));
  }
  return r;
}

int BetheState::expected_hole_count() const {
  return twice_spin + 2 * (int(close_pairs.size()) + 2 * int(wide_pairs.size()));
}

double counting_function(double nu, const BetheState& state) {
  const int m = state.chain.sites;
  double s = theta1(nu) / (2.0 * pi);
  double scatter = 0.0;
  for (double lam : state.real_roots) scatter += theta2(nu - lam);
  for (const auto& g : pair_geometry(state, nu)) scatter += theta2_pair(g.x, g.y);
  return s - scatter / (2.0 * pi * m);
}

double counting_function_derivative(double nu, const BetheState& state) {
  const int m = state.chain.sites;
  double s = theta1p(nu) / (2.0 * pi);
  double scatter = 0.0;
  for (double lam : state.real_roots) scatter += theta2p(nu - lam);
  for (const auto& g : pair_geometry(state, nu)) scatter += theta2_pair_dx(g.x, g.y);
  return s - scatter / (2.0 * pi * m);
}

LogComplex log_exponential_counting(cplx nu, const BetheState& state) {
  const double guard = 1e-8;
  if (std::abs(nu - cplx(0, 0.5)) < guard || std::abs(nu + cplx(0, 0.5)) < guard)
    throw BranchPointError("exponential_counting: nu at +-i/2");
  LogComplex a = LogComplex::from((nu - cplx(0, 0.5)) / (nu + cplx(0, 0.5))).pow(state.chain.sites);
  for (const cplx& rho : state.all_roots()) {
    const cplx up = nu - rho + cplx(0, 1), dn = nu - rho - cplx(0, 1);
    if (std::abs(up) < guard || std::abs(dn) < guard)
      throw BranchPointError("exponential_counting: nu within 1e-8 of a root +- i");
    a *= LogComplex::from(up / dn);
  }
  return a;
}

cplx exponential_counting(cplx nu, const BetheState& state) {
  return log_exponential_counting(nu, state).value();
}

cplx exponential_counting_derivative(cplx nu, const BetheState& state) {
  const cplx i(0, 1);
  cplx dlog = double(state.chain.sites) * (1.0 / (nu - 0.5 * i) - 1.0 / (nu + 0.5 * i));
  for (const cplx& rho : state.all_roots())
    dlog += 1.0 / (nu - rho + i) - 1.0 / (nu - rho - i);
  return exponential_counting(nu, state) * dlog;
}

namespace {

double newton_seed(int two_q, int m) {
  const double arg = pi * double(two_q) / double(m);  // 2 pi Q / M with Q = two_q/2
  return std::asinh(std::tan(arg)) / pi;
}

// residual of a solved state from the exponential form, stable for pairs
// log(-a) on a close-pair upper root: the near-singular factor against the
// pair partner is 2 i delta exactly and is supplied from log_delta, the self
// term contributes the -1.
LogComplex log_a_close_pair(const BetheState& s, std::size_t which) {
  const auto& cp = s.close_pairs[which];
  const cplx up = cp.center + cplx(0, 0.5 + std::exp(cp.log_delta));
  LogComplex a = LogComplex::from((up - cplx(0, 0.5)) / (up + cplx(0, 0.5))).pow(s.chain.sites);
  for (double lam : s.real_roots)
    a *= LogComplex::from((up - lam + cplx(0, 1)) / (up - lam - cplx(0, 1)));
  for (std::size_t q = 0; q < s.close_pairs.size(); ++q) {
    const auto& other = s.close_pairs[q];
    const double dq = std::exp(other.log_delta);
    const cplx oup = other.center + cplx(0, 0.5 + dq), odn = other.center - cplx(0, 0.5 + dq);
    if (q == which) {
      a *= LogComplex(0.0, pi);  // self term i / (-i)
      // up - odn - i = 2 i delta exactly
      a *= LogComplex::from(up - odn + cplx(0, 1)) /
           LogComplex(std::log(2.0) + other.log_delta, pi / 2.0);
    } else {
      a *= LogComplex::from(up - oup + cplx(0, 1)) / LogComplex::from(up - oup - cplx(0, 1));
      a *= LogComplex::from(up - odn + cplx(0, 1)) / LogComplex::from(up - odn - cplx(0, 1));
    }
  }
  for (const cplx& w : s.wide_pairs) {
    const cplx w1 = w + cplx(0, 0.5), w2 = std::conj(w) - cplx(0, 0.5);
    a *= LogComplex::from((up - w1 + cplx(0, 1)) / (up - w1 - cplx(0, 1)));
    a *= LogComplex::from((up - w2 + cplx(0, 1)) / (up - w2 - cplx(0, 1)));
  }
  return a;
}

double state_residual(const BetheState& s) {
  double worst = 0.0;
  for (double lam : s.real_roots)
    worst = std::max(worst, std::abs(1.0 + exponential_counting(cplx(lam, 0.0), s)));
  for (const cplx& w : s.wide_pairs)
    worst = std::max(worst, std::abs(1.0 + exponential_counting(w + cplx(0, 0.5), s)));
  for (std::size_t p = 0; p < s.close_pairs.size(); ++p)
    worst = std::max(worst, std::abs(1.0 + log_a_close_pair(s, p).value()));
  return worst;
}

}  // namespace

BetheState solve_real_roots(const ChainSpec& chain, const QuantumNumberSet& q) {
  const int n = q.size();
  const int m = chain.sites;
  BetheState state;
  state.chain = chain;
  state.twice_spin = m - 2 * n;
  state.quantum_numbers = q;
  state.real_roots.resize(n);
  for (int a = 0; a < n; ++a) state.real_roots[a] = newton_seed(q.two_q()[a], m);

  Eigen::VectorXd f(n);
  Eigen::MatrixXd jac(n, n);
  auto eval_f = [&](const std::vector<double>& lam, Eigen::VectorXd& out) {
    for (int a = 0; a < n; ++a) {
      double scatter = 0.0;
      for (int b = 0; b < n; ++b) scatter += theta2(lam[a] - lam[b]);
      out(a) = m * theta1(lam[a]) / (2.0 * pi) - scatter / (2.0 * pi) - q.q(a);
    }
  };

  eval_f(state.real_roots, f);
  double fnorm = f.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < 200; ++iter) {
    if (fnorm < 1e-13) break;
    for (int a = 0; a < n; ++a) {
      double offdiag_sum = 0.0;
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        const double k = theta2p(state.real_roots[a] - state.real_roots[b]) / (2.0 * pi);
        jac(a, b) = k;
        offdiag_sum += k;
      }
      jac(a, a) = m * theta1p(state.real_roots[a]) / (2.0 * pi) - offdiag_sum;
    }
    Eigen::VectorXd step = jac.partialPivLu().solve(-f);
    double t = 1.0;
    std::vector<double> trial(n);
    Eigen::VectorXd ftrial(n);
    for (int h = 0; h <= 8; ++h) {
      for (int a = 0; a < n; ++a) trial[a] = state.real_roots[a] + t * step(a);
      eval_f(trial, ftrial);
      if (ftrial.lpNorm<Eigen::Infinity>() < fnorm || h == 8) break;
      t *= 0.5;
    }
    state.real_roots = trial;
    f = ftrial;
    const double newnorm = f.lpNorm<Eigen::Infinity>();
    if (newnorm < 1e-13 && std::abs(t) * step.lpNorm<Eigen::Infinity>() < 1e-13) {
      fnorm = newnorm;
      break;
    }
    fnorm = newnorm;
  }
  if (fnorm > 1e-12)
    throw NonConvergenceError("solve_real_roots: Newton stalled at residual " +
                              std::to_string(fnorm));
  std::sort(state.real_roots.begin(), state.real_roots.end());
  state.residual = state_residual(state);
  return state;
}

std::vector<double> hole_rapidities(const BetheState& state,
                                    const std::vector<int>& missing_two_q) {
  std::vector<double> out;
  out.reserve(missing_two_q.size());
  const int m = state.chain.sites;
  for (int tq : missing_two_q) {
    const double target = 0.5 * double(tq) / double(m);
    double x = newton_seed(tq, m);
    // Newton with bisection fallback on the monotone counting function
    double lo = x - 2.0, hi = x + 2.0;
    while (counting_function(lo, state) > target) lo -= 2.0;
    while (counting_function(hi, state) < target) hi += 2.0;
    for (int it = 0; it < 100; ++it) {
      const double fx = counting_function(x, state) - target;
      if (std::abs(fx) < 1e-14) break;
      (fx > 0 ? hi : lo) = x;
      const double dx = counting_function_derivative(x, state);
      double xn = x - fx / dx;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      x = xn;
    }
    out.push_back(x);
  }
  return out;
}

std::int64_t count_solutions(int n_h, int n_tilde) {
  if (n_tilde < 0 || 2 * n_tilde > n_h) throw std::invalid_argument("count_solutions: range");
  auto binom = [](int n, int k) -> std::int64_t {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  if (n_tilde == 0) return 1;
  return binom(n_h, n_tilde) - binom(n_h, n_tilde - 1);
}

std::int64_t spinon_space_dimension(int n_h) { return std::int64_t(1) << n_h; }

namespace {

// H_a(chi) = prod_b (chi_a - th_b - i/2) prod_{b!=a} (chi_a - chi_b + i)
//          - prod_b (chi_a - th_b + i/2) prod_{b!=a} (chi_a - chi_b - i)
cplx hl_poly_residual(int a, const std::vector<cplx>& chi, const std::vector<double>& th) {
  const cplx i(0, 1);
  cplx p = 1.0, q = 1.0;
  for (double t : th) {
    p *= chi[a] - t - 0.5 * i;
    q *= chi[a] - t + 0.5 * i;
  }
  for (std::size_t b = 0; b < chi.size(); ++b) {
    if (int(b) == a) continue;
    p *= chi[a] - chi[b] + i;
    q *= chi[a] - chi[b] - i;
  }
  return p - q;
}

double hl_bae_residual(const std::vector<cplx>& chi, const std::vector<double>& th) {
  // |1 + a*(chi_a)| with the self term of the chi product folded in
  const cplx i(0, 1);
  double worst = 0.0;
  for (std::size_t a = 0; a < chi.size(); ++a) {
    cplx prod = 1.0;
    for (double t : th) prod *= (chi[a] - t - 0.5 * i) / (chi[a] - t + 0.5 * i);
    for (std::size_t b = 0; b < chi.size(); ++b) {
      if (b == a) continue;
      prod *= (chi[a] - chi[b] + i) / (chi[a] - chi[b] - i);
    }
    worst = std::max(worst, std::abs(1.0 - prod));
  }
  return worst;
}

bool multiset_close(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  auto lex = [](const cplx& u, const cplx& v) {
    return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

bool is_self_conjugate(const std::vector<cplx>& chi, double tol) {
  std::vector<cplx> conj;
  conj.reserve(chi.size());
  for (const cplx& c : chi) conj.push_back(std::conj(c));
  return multiset_close(chi, conj, tol);
}

// all roots of a real-coefficient polynomial via the companion matrix
std::vector<cplx> real_poly_roots(const std::vector<double>& coeff) {
  // coeff[k] multiplies x^k; leading coefficient nonzero
  const int deg = int(coeff.size()) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int k = 0; k < deg; ++k) comp(0, k) = -coeff[deg - 1 - k] / coeff[deg];
  for (int k = 1; k < deg; ++k) comp(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  std::vector<cplx> out(deg);
  for (int k = 0; k < deg; ++k) out[k] = es.eigenvalues()(k);
  return out;
}

std::vector<cplx> newton_polish_hl(std::vector<cplx> chi, const std::vector<double>& th,
                                   int iters = 60) {
  const int n = int(chi.size());
  Eigen::VectorXcd f(n);
  Eigen::MatrixXcd jac(n, n);
  for (int it = 0; it < iters; ++it) {
    double norm = 0.0;
    for (int a = 0; a < n; ++a) {
      f(a) = hl_poly_residual(a, chi, th);
      norm = std::max(norm, std::abs(f(a)));
    }
    if (norm < 1e-14) break;
    const double h = 1e-7;
    for (int b = 0; b < n; ++b) {
      std::vector<cplx> cp = chi;
      cp[b] += h;
      for (int a = 0; a < n; ++a) jac(a, b) = (hl_poly_residual(a, cp, th) - f(a)) / h;
    }
    Eigen::VectorXcd step = jac.partialPivLu().solve(-f);
    if (!step.allFinite()) break;
    double scale = 1.0;
    if (step.lpNorm<Eigen::Infinity>() > 0.5) scale = 0.5 / step.lpNorm<Eigen::Infinity>();
    for (int a = 0; a < n; ++a) chi[a] += scale * step(a);
  }
  return chi;
}

}  // namespace

HigherLevelSolutions solve_higher_level(const std::vector<double>& holes, int n_tilde) {
  const int n_h = int(holes.size());
  if (n_h % 2 != 0) throw std::invalid_argument("solve_higher_level: odd hole count");
  if (n_tilde < 0 || 2 * n_tilde > n_h)
    throw std::invalid_argument("solve_higher_level: n_tilde out of range");

  HigherLevelSolutions out;
  const std::int64_t expected = count_solutions(n_h, n_tilde);

  if (n_tilde == 0) {
    out.states.push_back({holes, {}, 0.0, true});
    out.complete = true;
    return out;
  }

  if (n_tilde == 1) {
    // prod(chi - th - i/2) - prod(chi - th + i/2): purely imaginary
    // coefficients, degree n_h - 1 after the leading terms cancel
    std::vector<cplx> pm{1.0}, pp{1.0};
    const cplx i(0, 1);
    for (double t : holes) {
      auto mul = [](std::vector<cplx> p, cplx root) {
        std::vector<cplx> q(p.size() + 1, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
          q[k + 1] += p[k];
          q[k] -= root * p[k];
        }
        return q;
      };
      pm = mul(pm, t + 0.5 * i);
      pp = mul(pp, t - 0.5 * i);
    }
    std::vector<double> coeff(n_h, 0.0);
    for (int k = 0; k < n_h; ++k) coeff[k] = (pm[k] - pp[k]).imag();
    auto roots = real_poly_roots(coeff);
    for (cplx chi : roots) {
      auto polished = newton_polish_hl({chi}, holes);
      cplx c = polished[0];
      if (std::abs(c.imag()) < 1e-9) c = cplx(c.real(), 0.0);
      HigherLevelState st;
      st.holes = holes;
      st.roots = {c};
      st.residual = hl_bae_residual(st.roots, holes);
      st.self_conjugate = std::abs(c.imag()) < 1e-9;
      out.states.push_back(std::move(st));
    }
    out.complete = std::int64_t(out.states.size()) == expected;
    return out;
  }

  // multistart Newton for coupled systems
  const double lo = *std::min_element(holes.begin(), holes.end()) - 1.5;
  const double hi = *std::max_element(holes.begin(), holes.end()) + 1.5;
  std::vector<std::vector<cplx>> found;
  auto try_seed = [&](std::vector<cplx> seed) {
    auto sol = newton_polish_hl(std::move(seed), holes);
    if (hl_bae_residual(sol, holes) > 1e-9) return;
    for (cplx& c : sol)
      if (std::abs(c.imag()) < 1e-8) c = cplx(c.real(), 0.0);
    for (const auto& f : found)
      if (multiset_close(f, sol, 1e-6)) return;
    found.push_back(sol);
  };

  const int grid = 7;
  auto gp = [&](int k) { return lo + (hi - lo) * double(k) / double(grid - 1); };
  if (n_tilde == 2) {
    for (int a = 0; a < grid; ++a)
      for (int b = a + 1; b < grid; ++b) try_seed({cplx(gp(a), 0), cplx(gp(b), 0)});
    for (int a = 0; a < grid; ++a)
      for (double v : {0.2, 0.35, 0.49, 0.8, 1.2, 1.8})
        try_seed({cplx(gp(a), v), cplx(gp(a), -v)});
  } else {
    for (int a = 0; a < grid; ++a)
      for (int b = a + 1; b < grid; ++b)
        for (int c = b + 1; c < grid; ++c) {
          if (n_tilde == 3) try_seed({cplx(gp(a), 0), cplx(gp(b), 0), cplx(gp(c), 0)});
        }
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b)
        for (double v : {0.3, 0.8, 1.4})
          if (n_tilde == 3) try_seed({cplx(gp(a), 0), cplx(gp(b), v), cplx(gp(b), -v)});
  }
  for (auto& sol : found) {
    HigherLevelState st;
    st.holes = holes;
    st.roots = sol;
    st.residual = hl_bae_residual(sol, holes);
    st.self_conjugate = is_self_conjugate(sol, 1e-8);
    out.states.push_back(std::move(st));
  }
  out.complete = std::int64_t(out.states.size()) == expected;
  return out;
}

std::pair<double, double> energy_momentum(const BetheState& state) {
  double e = 0.0;
  for (double lam : state.real_roots) e += bare_energy(cplx(lam, 0.0)).real();
  for (const auto& cp : state.close_pairs)
    e += 2.0 * bare_energy(cp.center + cplx(0, 0.5 + std::exp(cp.log_delta))).real();
  for (const cplx& w : state.wide_pairs) e += 2.0 * bare_energy(w + cplx(0, 0.5)).real();

  LogComplex ph = LogComplex::one();
  for (const cplx& rho : state.all_roots())
    ph *= LogComplex::from((rho + cplx(0, 0.5)) / (rho - cplx(0, 0.5)));
  double p = std::fmod(ph.phase, 2.0 * pi);
  if (p < 0) p += 2.0 * pi;
  return {e, p};
}

BetheState solve_holes_state(const ChainSpec& chain, const std::vector<int>& missing_two_q) {
  // real-root state: occupy the spin-s window minus the given numbers
  const int n_h = int(missing_two_q.size());
  if (n_h % 2 != 0) throw std::invalid_argument("solve_holes_state: odd hole count");
  const int twice_spin = n_h;  // no higher-level roots here
  auto window = QuantumNumberSet::admissible_window(chain, twice_spin);
  std::vector<int> occ;
  for (int v : window)
    if (std::find(missing_two_q.begin(), missing_two_q.end(), v) == missing_two_q.end())
      occ.push_back(v);
  if (int(occ.size()) != chain.sites / 2 - twice_spin / 2)
    throw std::invalid_argument("solve_holes_state: missing numbers not inside the window");
  auto st = solve_real_roots(chain, QuantumNumberSet(occ, chain));
  st.holes = hole_rapidities(st, missing_two_q);
  return st;
}

namespace {

// Unknown vector layout for the mixed solver:
//   [ real roots (n_r) | per string: c, log delta | per wide: Re w, Im w ]
struct MixedLayout {
  int n_r = 0, n_str = 0, n_wide = 0;
  int size() const { return n_r + 2 * n_str + 2 * n_wide; }
};

BetheState unpack(const ChainSpec& chain, int twice_spin, const MixedLayout& lay,
                  const Eigen::VectorXd& u, const QuantumNumberSet& q) {
  BetheState s;
  s.chain = chain;
  s.twice_spin = twice_spin;
  s.quantum_numbers = q;
  s.real_roots.assign(u.data(), u.data() + lay.n_r);
  for (int k = 0; k < lay.n_str; ++k)
    s.close_pairs.push_back({cplx(u(lay.n_r + 2 * k), 0.0), u(lay.n_r + 2 * k + 1)});
  for (int k = 0; k < lay.n_wide; ++k)
    s.wide_pairs.emplace_back(u(lay.n_r + 2 * lay.n_str + 2 * k),
                              u(lay.n_r + 2 * lay.n_str + 2 * k + 1));
  return s;
}

LogComplex log_a_on_wide(const BetheState& s, int which) {
  const cplx nu = s.wide_pairs[which] + cplx(0, 0.5);
  LogComplex a =
      LogComplex::from((nu - cplx(0, 0.5)) / (nu + cplx(0, 0.5))).pow(s.chain.sites);
  for (const cplx& rho : s.all_roots()) {
    const cplx d = nu - rho;
    a *= LogComplex::from((d + cplx(0, 1)) / (d - cplx(0, 1)));
  }
  return a;
}

}  // namespace

BetheState solve_complex_state(const ChainSpec& chain, const std::vector<double>& holes,
                               const HigherLevelState& hl) {
  const int m = chain.sites;
  const int n_h = int(holes.size());
  const int n_tilde = int(hl.roots.size());
  if (n_h % 2 != 0) throw std::invalid_argument("solve_complex_state: odd hole count");
  const int twice_spin = n_h - 2 * n_tilde;
  if (twice_spin < 0) throw std::invalid_argument("solve_complex_state: too many hl roots");

  std::vector<double> string_centers;
  std::vector<cplx> wide_anchors;
  for (const cplx& chi : hl.roots) {
    if (std::abs(chi.imag()) < 1e-9)
      string_centers.push_back(chi.real());
    else if (chi.imag() > 0.5)
      wide_anchors.push_back(chi);
    else if (chi.imag() < -0.5)
      ;  // conjugate partner of a wide anchor, represented once
    else
      throw std::invalid_argument("solve_complex_state: quartet centers unsupported");
  }

  MixedLayout lay;
  lay.n_str = int(string_centers.size());
  lay.n_wide = int(wide_anchors.size());
  const int n = m / 2 - twice_spin / 2;  // N_s
  lay.n_r = n - 2 * lay.n_str - 2 * lay.n_wide;
  if (lay.n_r < 0) throw std::invalid_argument("solve_complex_state: chain too small");

  // hole quantum numbers from the asymptotic counting function, then the
  // occupied numbers fill the rest of the window (wide pairs eat the edges)
  auto window = QuantumNumberSet::admissible_window(chain, twice_spin);
  const int parity = ((window.empty() ? 0 : window.front()) % 2 + 2) % 2;
  std::set<int> hole_tq;
  for (double th : holes) {
    double target = double(m) / pi * std::atan(std::sinh(pi * th));
    int tq = int(std::llround((target - parity) / 2.0)) * 2 + parity;
    while (hole_tq.count(tq)) tq += 2;  // keep them distinct
    if (tq < window.front() || tq > window.back())
      throw std::invalid_argument("solve_complex_state: hole outside the window");
    hole_tq.insert(tq);
  }
  std::vector<int> occ;
  for (int v : window)
    if (!hole_tq.count(v)) occ.push_back(v);
  while (int(occ.size()) > lay.n_r) {
    // drop edges pairwise; wide pairs take over the outermost numbers
    if (std::abs(occ.front()) >= std::abs(occ.back()))
      occ.erase(occ.begin());
    else
      occ.pop_back();
  }
  if (int(occ.size()) != lay.n_r)
    throw std::invalid_argument("solve_complex_state: occupancy bookkeeping failed");
  QuantumNumberSet qset(occ, chain);

  Eigen::VectorXd u(lay.size());
  for (int a = 0; a < lay.n_r; ++a) u(a) = newton_seed(occ[a], m);
  for (int k = 0; k < lay.n_str; ++k) {
    u(lay.n_r + 2 * k) = string_centers[k];
    u(lay.n_r + 2 * k + 1) = std::log(0.02);
  }
  for (int k = 0; k < lay.n_wide; ++k) {
    u(lay.n_r + 2 * lay.n_str + 2 * k) = wide_anchors[k].real();
    u(lay.n_r + 2 * lay.n_str + 2 * k + 1) = wide_anchors[k].imag();
  }

  // phase references for the string/wide equations, frozen at the seed
  std::vector<double> phase_ref(lay.n_str + lay.n_wide, 0.0);
  {
    BetheState s0 = unpack(chain, twice_spin, lay, u, qset);
    for (int k = 0; k < lay.n_str; ++k) {
      const double ph = log_a_close_pair(s0, k).phase;
      phase_ref[k] = pi * (2.0 * std::round((ph - pi) / (2.0 * pi)) + 1.0);
    }
    for (int k = 0; k < lay.n_wide; ++k) {
      const double ph = log_a_on_wide(s0, k).phase;
      phase_ref[lay.n_str + k] = pi * (2.0 * std::round((ph - pi) / (2.0 * pi)) + 1.0);
    }
  }

  auto eval = [&](const Eigen::VectorXd& v, Eigen::VectorXd& f) {
    BetheState s = unpack(chain, twice_spin, lay, v, qset);
    for (int a = 0; a < lay.n_r; ++a)
      f(a) = m * counting_function(s.real_roots[a], s) - 0.5 * occ[a];
    for (int k = 0; k < lay.n_str; ++k) {
      const LogComplex la = log_a_close_pair(s, k);
      f(lay.n_r + 2 * k) = la.log_mag;
      f(lay.n_r + 2 * k + 1) = la.phase - phase_ref[k];
    }
    for (int k = 0; k < lay.n_wide; ++k) {
      const LogComplex la = log_a_on_wide(s, k);
      f(lay.n_r + 2 * lay.n_str + 2 * k) = la.log_mag;
      f(lay.n_r + 2 * lay.n_str + 2 * k + 1) = la.phase - phase_ref[lay.n_str + k];
    }
  };

  const int dim = lay.size();
  Eigen::VectorXd f(dim), ftrial(dim);
  Eigen::MatrixXd jac(dim, dim);
  eval(u, f);
  double fnorm = f.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < 200 && fnorm > 1e-12; ++iter) {
    for (int b = 0; b < dim; ++b) {
      const double h = 1e-7 * std::max(1.0, std::abs(u(b)));
      Eigen::VectorXd up = u, dn = u;
      up(b) += h;
      dn(b) -= h;
      Eigen::VectorXd fp(dim), fm(dim);
      eval(up, fp);
      eval(dn, fm);
      jac.col(b) = (fp - fm) / (2.0 * h);
    }
    Eigen::VectorXd step = jac.partialPivLu().solve(-f);
    double t = 1.0;
    for (int h = 0; h <= 8; ++h) {
      Eigen::VectorXd trial = u + t * step;
      eval(trial, ftrial);
      if (ftrial.lpNorm<Eigen::Infinity>() < fnorm || h == 8) {
        u = trial;
        f = ftrial;
        break;
      }
      t *= 0.5;
    }
    fnorm = f.lpNorm<Eigen::Infinity>();
  }
  if (fnorm > 1e-10)
    throw NonConvergenceError("solve_complex_state: residual " + std::to_string(fnorm));

  BetheState s = unpack(chain, twice_spin, lay, u, qset);
  for (const auto& cp : s.close_pairs)
    if (cp.log_delta < std::log(1e-13))
      throw DeviationUnderflowError("solve_complex_state: deviation below 1e-13");
  std::sort(s.real_roots.begin(), s.real_roots.end());
  s.holes = hole_rapidities(s, std::vector<int>(hole_tq.begin(), hole_tq.end()));
  s.residual = state_residual(s);
  return s;
}

}  // namespace bethelab
