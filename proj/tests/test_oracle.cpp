#include <filesystem>
#include <unordered_map>

#include "bethelab/oracle.hpp"
#include "doctest.h"

using namespace bethelab;
using namespace bethelab::oracle;

TEST_CASE("two-site sector spectrum by hand") {
  auto h = build_hamiltonian(2, 0);
  REQUIRE(h.rows() == 2);
  auto d = diagonalize(2, 0);
  CHECK(d.eigenvalues[0] == doctest::Approx(-8.0).epsilon(1e-14));
  CHECK(std::abs(d.eigenvalues[1]) < 1e-13);
}

TEST_CASE("translation symmetry of the sector Hamiltonian") {
  const int m = 8;
  auto basis = sector_basis(m, 0);
  auto h = build_hamiltonian(m, 0);
  const int dim = int(basis.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  std::unordered_map<std::uint64_t, int> idx;
  for (int i = 0; i < dim; ++i) idx[basis[i]] = i;
  for (int i = 0; i < dim; ++i) {
    const std::uint64_t mask = (1ull << m) - 1;
    const std::uint64_t rot = ((basis[i] << 1) | (basis[i] >> (m - 1))) & mask;
    t(idx.at(rot), i) = 1.0;
  }
  CHECK((h * t - t * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenvectors orthonormal, spectrum spin-flip symmetric") {
  auto d = diagonalize(6, 2);
  const int dim = int(d.basis.size());
  Eigen::MatrixXcd gram = d.eigenvectors.adjoint() * d.eigenvectors;
  CHECK((gram - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
  auto dm = diagonalize(6, -2);
  for (int i = 0; i < dim; ++i)
    CHECK(d.eigenvalues[i] == doctest::Approx(dm.eigenvalues[i]).epsilon(1e-12));
}

TEST_CASE("Bethe vector from an empty rapidity set is the reference state") {
  auto v = bethe_vector(6, {});
  CHECK(std::abs(v(0) - cplx(1, 0)) < 1e-15);
  CHECK(v.tail(v.size() - 1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("completeness and selection rules for sigma3 matrix elements") {
  const int m = 6;
  auto d = diagonalize(m, 0);
  const int dim = int(d.basis.size());
  double sum = 0.0;
  for (int e = 0; e < dim; ++e) sum += direct_form_factor(d, 0, d, e, 2);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // <sigma3> vanishes in the zero-magnetization ground state
  CHECK(direct_form_factor(d, 0, d, 0, 1) < 1e-12);
  int checked_triplet = 0;
  for (int e = 1; e < dim; ++e) {
    const double f = direct_form_factor(d, 0, d, e, 0);
    if (d.twice_total_spin[e] != 2) {
      CHECK(f < 1e-12);  // only triplet first descendants couple
    } else if (f > 1e-8) {
      for (int site = 1; site < m; ++site)
        CHECK(direct_form_factor(d, 0, d, e, site) == doctest::Approx(f).epsilon(1e-10));
      ++checked_triplet;
    }
  }
  CHECK(checked_triplet > 0);
}

TEST_CASE("multiplet structure: triplet levels repeat in the Sz = 1 sector") {
  auto d0 = diagonalize(8, 0);
  auto d1 = diagonalize(8, 2);
  for (std::size_t i = 0; i < d0.eigenvalues.size(); ++i) {
    if (d0.twice_total_spin[i] < 2) continue;
    bool found = false;
    for (std::size_t j = 0; j < d1.eigenvalues.size(); ++j)
      if (std::abs(d0.eigenvalues[i] - d1.eigenvalues[j]) < 1e-9 &&
          d0.twice_total_spin[i] == d1.twice_total_spin[j])
        found = true;
    CHECK(found);
  }
}

TEST_CASE("decomposition cache round trip") {
  const std::string dir =
      (std::filesystem::temp_directory_path() / "bethelab_cache_test").string();
  std::filesystem::remove_all(dir);
  auto d = diagonalize_cached(6, 0, dir);
  auto d2 = diagonalize_cached(6, 0, dir);  // served from disk
  REQUIRE(d.eigenvalues.size() == d2.eigenvalues.size());
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
    CHECK(d.eigenvalues[i] == doctest::Approx(d2.eigenvalues[i]).epsilon(1e-15));
    CHECK(d.momentum[i] == d2.momentum[i]);
    CHECK(d.twice_total_spin[i] == d2.twice_total_spin[i]);
  }
  CHECK((d.eigenvectors - d2.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove_all(dir);
}
