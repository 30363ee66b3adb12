#include "bethelab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>

namespace bethelab::oracle {

namespace {

int popcount(std::uint64_t x) { return std::popcount(x); }

std::unordered_map<std::uint64_t, int> index_of(const std::vector<std::uint64_t>& basis) {
  std::unordered_map<std::uint64_t, int> idx;
  idx.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = int(i);
  return idx;
}

std::uint64_t rotate_sites(std::uint64_t s, int m) {
  // site j -> j+1 cyclically (bit j holds site j)
  const std::uint64_t mask = (m == 64) ? ~0ull : ((1ull << m) - 1);
  return ((s << 1) | (s >> (m - 1))) & mask;
}

}  // namespace

std::vector<std::uint64_t> sector_basis(int sites, int twice_sz) {
  if ((sites + twice_sz) % 2 != 0 || std::abs(twice_sz) > sites)
    throw std::invalid_argument("sector_basis: invalid sector");
  const int n_down = (sites - twice_sz) / 2;
  std::vector<std::uint64_t> basis;
  for (std::uint64_t s = 0; s < (1ull << sites); ++s)
    if (popcount(s) == n_down) basis.push_back(s);
  return basis;
}

Eigen::MatrixXd build_hamiltonian(int sites, int twice_sz) {
  if (sites > 16) throw std::invalid_argument("build_hamiltonian: M > 16");
  const auto basis = sector_basis(sites, twice_sz);
  const auto idx = index_of(basis);
  const int dim = int(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::uint64_t s = basis[i];
    for (int m = 0; m < sites; ++m) {
      const int mp = (m + 1) % sites;
      const bool bm = (s >> m) & 1, bmp = (s >> mp) & 1;
      if (bm == bmp) continue;       // sigma^z sigma^z - 1 = 0 on aligned bonds
      h(i, i) += -2.0;               //
      const std::uint64_t flipped = s ^ ((1ull << m) | (1ull << mp));
      h(idx.at(flipped), i) += 2.0;  // sigma^x sigma^x + sigma^y sigma^y
    }
  }
  return h;
}

SpectralDecomposition diagonalize(int sites, int twice_sz) {
  SpectralDecomposition d;
  d.sites = sites;
  d.twice_sz = twice_sz;
  d.basis = sector_basis(sites, twice_sz);
  const int dim = int(d.basis.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(sites, twice_sz));
  d.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
  d.eigenvectors = es.eigenvectors().cast<cplx>();

  // translation operator on the sector
  const auto idx = index_of(d.basis);
  auto apply_t = [&](const VectorXcd& v) {
    VectorXcd out(dim);
    for (int i = 0; i < dim; ++i) out(idx.at(rotate_sites(d.basis[i], sites))) = v(i);
    return out;
  };

  // resolve degenerate eigenspaces into translation eigenstates
  d.momentum.resize(dim);
  const double tol = 1e-9;
  for (int lo = 0; lo < dim;) {
    int hi = lo + 1;
    while (hi < dim && d.eigenvalues[hi] - d.eigenvalues[lo] < tol) ++hi;
    const int g = hi - lo;
    MatrixXcd tsub(g, g);
    std::vector<VectorXcd> tcols(g);
    for (int a = 0; a < g; ++a) tcols[a] = apply_t(d.eigenvectors.col(lo + a));
    for (int a = 0; a < g; ++a)
      for (int b = 0; b < g; ++b) tsub(a, b) = d.eigenvectors.col(lo + a).dot(tcols[b]);
    Eigen::ComplexEigenSolver<MatrixXcd> tes(tsub);
    MatrixXcd block = d.eigenvectors.middleCols(lo, g) * tes.eigenvectors();
    for (int a = 0; a < g; ++a) {
      block.col(a).normalize();
      const double phase = std::arg(tes.eigenvalues()(a));
      int k = int(std::llround(-phase * sites / (2.0 * pi)));
      k = ((k % sites) + sites) % sites;
      d.momentum[lo + a] = k;
    }
    d.eigenvectors.middleCols(lo, g) = block;
    lo = hi;
  }

  // Casimir labels: s(s+1) = |S+ v|^2 + sz(sz+1)
  d.twice_total_spin.resize(dim);
  const double sz = 0.5 * twice_sz;
  if (twice_sz + 2 <= sites) {
    const auto up_basis = sector_basis(sites, twice_sz + 2);
    const auto up_idx = index_of(up_basis);
    for (int c = 0; c < dim; ++c) {
      VectorXcd raised = VectorXcd::Zero(up_basis.size());
      for (int i = 0; i < dim; ++i) {
        const std::uint64_t s = d.basis[i];
        if (d.eigenvectors(i, c) == cplx(0, 0)) continue;
        for (int m = 0; m < sites; ++m)
          if ((s >> m) & 1) raised(up_idx.at(s ^ (1ull << m))) += d.eigenvectors(i, c);
      }
      const double s2 = raised.squaredNorm() + sz * (sz + 1.0);
      d.twice_total_spin[c] = int(std::llround(std::sqrt(4.0 * s2 + 1.0) - 1.0));
    }
  } else {
    for (int c = 0; c < dim; ++c) d.twice_total_spin[c] = sites;  // fully polarized
  }
  return d;
}

// --- monodromy matrix machinery ------------------------------------------------

namespace {

// Apply one site factor of the monodromy (a 2x2 matrix of local operators)
// to the aux pair (u0, u1): L11 = diag(1, f), L22 = diag(f, 1) on (up, down),
// L12 = g sigma^-, L21 = g sigma^+. The factor is symmetric under the full
// (aux + site) transpose, so the transposed monodromy reuses it with the
// site order reversed.
void apply_site_factor(int sites, int site, cplx f, cplx g, VectorXcd& u0, VectorXcd& u1) {
  const std::uint64_t bit = 1ull << site;
  const long dim = 1l << sites;
  VectorXcd v0(dim), v1(dim);
  for (long s = 0; s < dim; ++s) {
    const bool down = s & bit;
    v0(s) = down ? f * u0(s) : u0(s);
    v1(s) = down ? u1(s) : f * u1(s);
  }
  for (long s = 0; s < dim; ++s) {
    if (s & bit)
      v0(s) += g * u1(s ^ bit);  // sigma^- : receives the site-up component
    else
      v1(s) += g * u0(s ^ bit);  // sigma^+ : receives the site-down component
  }
  u0.swap(v0);
  u1.swap(v1);
}

VectorXcd monodromy_flow(int sites, cplx lambda, int out_aux, int in_aux, const VectorXcd& v,
                         bool transpose) {
  if (sites > 16) throw std::invalid_argument("apply_monodromy_block: M too large");
  const cplx nu = lambda - cplx(0, 0.5);
  const cplx f = nu / (nu + cplx(0, 1));
  const cplx g = cplx(0, 1) / (nu + cplx(0, 1));
  const long dim = 1l << sites;
  VectorXcd u0 = VectorXcd::Zero(dim), u1 = VectorXcd::Zero(dim);
  (in_aux == 0 ? u0 : u1) = v;
  if (!transpose) {
    for (int site = 0; site < sites; ++site) apply_site_factor(sites, site, f, g, u0, u1);
  } else {
    for (int site = sites - 1; site >= 0; --site) apply_site_factor(sites, site, f, g, u0, u1);
  }
  return out_aux == 0 ? u0 : u1;
}

}  // namespace

VectorXcd apply_monodromy_block(int sites, cplx lambda, int out_aux, int in_aux,
                                const VectorXcd& v) {
  return monodromy_flow(sites, lambda, out_aux, in_aux, v, false);
}

VectorXcd bethe_vector(int sites, const std::vector<cplx>& rapidities) {
  if (sites > 10) throw std::invalid_argument("bethe_vector: M > 10");
  VectorXcd v = VectorXcd::Zero(1l << sites);
  v(0) = 1.0;  // all spins up
  for (const cplx& lam : rapidities) v = apply_monodromy_block(sites, lam, 0, 1, v);  // B
  return v;
}

VectorXcd dual_bethe_vector(int sites, const std::vector<cplx>& rapidities) {
  if (sites > 10) throw std::invalid_argument("dual_bethe_vector: M > 10");
  // <0| prod C(mu) as a column of coordinates: w <- C(mu)^T w, and
  // C^T = [T^T]_{(0,1)} with the site order reversed
  VectorXcd w = VectorXcd::Zero(1l << sites);
  w(0) = 1.0;
  for (const cplx& lam : rapidities) w = monodromy_flow(sites, lam, 0, 1, w, true);
  return w;
}

VectorXcd apply_lowering(int sites, const VectorXcd& v) {
  const long dim = 1l << sites;
  VectorXcd out = VectorXcd::Zero(dim);
  for (long s = 0; s < dim; ++s) {
    if (v(s) == cplx(0, 0)) continue;
    for (int m = 0; m < sites; ++m)
      if (!((s >> m) & 1)) out(s | (1ull << m)) += v(s);  // sigma^-: up -> down
  }
  return out;
}

VectorXcd apply_raising(int sites, const VectorXcd& v) {
  const long dim = 1l << sites;
  VectorXcd out = VectorXcd::Zero(dim);
  for (long s = 0; s < dim; ++s) {
    if (v(s) == cplx(0, 0)) continue;
    for (int m = 0; m < sites; ++m)
      if ((s >> m) & 1) out(s & ~(1ull << m)) += v(s);
  }
  return out;
}

VectorXcd apply_sigma3(int sites, int site, const VectorXcd& v) {
  VectorXcd out = v;
  const std::uint64_t bit = 1ull << site;
  for (long s = 0; s < (1l << sites); ++s)
    if (s & bit) out(s) = -out(s);  // down carries sigma^3 = -1
  return out;
}

double eigen_residual(int sites, const VectorXcd& v, double energy) {
  const long dim = 1l << sites;
  VectorXcd hv = VectorXcd::Zero(dim);
  for (long s = 0; s < dim; ++s) {
    if (v(s) == cplx(0, 0)) continue;
    for (int m = 0; m < sites; ++m) {
      const int mp = (m + 1) % sites;
      const bool bm = (s >> m) & 1, bmp = (s >> mp) & 1;
      if (bm == bmp) continue;
      hv(s) += -2.0 * v(s);
      hv(s ^ ((1ull << m) | (1ull << mp))) += 2.0 * v(s);
    }
  }
  return (hv - energy * v).norm() / v.norm();
}

VectorXcd embed(const SpectralDecomposition& d, int level) {
  VectorXcd out = VectorXcd::Zero(1l << d.sites);
  for (std::size_t i = 0; i < d.basis.size(); ++i) out(d.basis[i]) = d.eigenvectors(i, level);
  return out;
}

double direct_form_factor(const SpectralDecomposition& gs, int g_level,
                          const SpectralDecomposition& es, int e_level, int site) {
  if (gs.twice_sz != es.twice_sz)
    throw std::invalid_argument("direct_form_factor: sectors differ in S3");
  // both vectors live on the same basis; sigma3 is diagonal
  cplx me = 0.0;
  for (std::size_t i = 0; i < gs.basis.size(); ++i) {
    const double sign = ((gs.basis[i] >> site) & 1) ? -1.0 : 1.0;
    me += std::conj(gs.eigenvectors(i, g_level)) * sign * es.eigenvectors(i, e_level);
  }
  return std::norm(me);  // eigenvectors are normalized
}

// --- cache -------------------------------------------------------------------

namespace {
constexpr char magic[8] = {'B', 'L', 'S', 'D', '0', '0', '0', '1'};

std::string cache_path(int sites, int twice_sz, const std::string& dir) {
  return dir + "/spectral_M" + std::to_string(sites) + "_Sz" + std::to_string(twice_sz) + ".bin";
}
}  // namespace

bool save_decomposition(const SpectralDecomposition& d, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream f(cache_path(d.sites, d.twice_sz, dir), std::ios::binary);
  if (!f) return false;
  auto put_i64 = [&](std::int64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
  f.write(magic, 8);
  put_i64(d.sites);
  put_i64(d.twice_sz);
  put_i64(std::int64_t(d.basis.size()));
  f.write(reinterpret_cast<const char*>(d.basis.data()), 8 * d.basis.size());
  f.write(reinterpret_cast<const char*>(d.eigenvalues.data()), 8 * d.eigenvalues.size());
  f.write(reinterpret_cast<const char*>(d.eigenvectors.data()),
          sizeof(cplx) * d.eigenvectors.size());
  for (int k : d.momentum) put_i64(k);
  for (int k : d.twice_total_spin) put_i64(k);
  return bool(f);
}

std::optional<SpectralDecomposition> load_decomposition(int sites, int twice_sz,
                                                        const std::string& dir) {
  std::ifstream f(cache_path(sites, twice_sz, dir), std::ios::binary);
  if (!f) return std::nullopt;
  char got[8];
  f.read(got, 8);
  if (!f || std::memcmp(got, magic, 8) != 0) return std::nullopt;
  auto get_i64 = [&] {
    std::int64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  SpectralDecomposition d;
  d.sites = int(get_i64());
  d.twice_sz = int(get_i64());
  if (d.sites != sites || d.twice_sz != twice_sz) return std::nullopt;
  const std::int64_t dim = get_i64();
  d.basis.resize(dim);
  f.read(reinterpret_cast<char*>(d.basis.data()), 8 * dim);
  d.eigenvalues.resize(dim);
  f.read(reinterpret_cast<char*>(d.eigenvalues.data()), 8 * dim);
  d.eigenvectors.resize(dim, dim);
  f.read(reinterpret_cast<char*>(d.eigenvectors.data()), sizeof(cplx) * dim * dim);
  d.momentum.resize(dim);
  for (auto& k : d.momentum) k = int(get_i64());
  d.twice_total_spin.resize(dim);
  for (auto& k : d.twice_total_spin) k = int(get_i64());
  if (!f) return std::nullopt;
  return d;
}

SpectralDecomposition diagonalize_cached(int sites, int twice_sz,
                                         std::optional<std::string> cache_dir) {
  std::string dir;
  if (cache_dir) {
    dir = *cache_dir;
  } else if (const char* env = std::getenv("BETHELAB_CACHE_DIR")) {
    dir = env;
  }
  if (!dir.empty()) {
    if (auto d = load_decomposition(sites, twice_sz, dir)) return *d;
  }
  auto d = diagonalize(sites, twice_sz);
  if (!dir.empty()) save_decomposition(d, dir);
  return d;
}

}  // namespace bethelab::oracle
