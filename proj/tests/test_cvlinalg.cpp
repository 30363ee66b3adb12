#include <cmath>
#include <random>

#include "bethelab/cvlinalg.hpp"
#include "doctest.h"

using namespace bethelab;

namespace {

StructuredMatrixSpec make_spec(MatrixKind kind, Parametrization param, std::vector<cplx> x,
                               std::vector<cplx> y) {
  StructuredMatrixSpec s;
  s.kind = kind;
  s.param = param;
  s.x_nodes = std::move(x);
  s.y_nodes = std::move(y);
  const int n = int(s.x_nodes.size()) - int(s.y_nodes.size());
  if (kind != MatrixKind::Cauchy)
    s.partition = param == Parametrization::Rational ? Partition::delta(n)
                                                     : Partition::gamma_pairs(n);
  return s;
}

// random spec generator shared with the acceptance population
StructuredMatrixSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind_d(0, 3), size_d(1, 12);
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(-0.4, 0.4);
  const auto kind = MatrixKind(kind_d(rng));
  const auto param = (rng() & 1) ? Parametrization::Rational : Parametrization::Hyperbolic;
  const int total = size_d(rng);
  int m = 0;
  if (kind == MatrixKind::Cauchy) {
    m = total;
  } else if (kind != MatrixKind::Vandermonde) {
    m = std::uniform_int_distribution<int>(0, total - 1)(rng);
  }
  std::vector<cplx> x, y;
  auto draw = [&] {
    return param == Parametrization::Rational ? cplx(2.0 * re(rng), 2.0 * im(rng))
                                              : cplx(re(rng), im(rng));
  };
  for (int i = 0; i < (kind == MatrixKind::Cauchy ? total : total); ++i) x.push_back(draw());
  for (int i = 0; i < m; ++i) y.push_back(draw());
  return make_spec(kind, param, std::move(x), std::move(y));
}

}  // namespace

TEST_CASE("symmetric function values") {
  CHECK(std::abs(elementary_symmetric({1.0, 2.0, 3.0}, 2) - cplx(11, 0)) < 1e-14);
  CHECK(std::abs(elementary_symmetric({1.0, 2.0}, 0) - cplx(1, 0)) < 1e-14);
  CHECK(std::abs(elementary_symmetric({1.0, 2.0}, 3)) < 1e-14);
  CHECK(std::abs(complete_symmetric({1.0, 2.0}, 2) - cplx(7, 0)) < 1e-14);
  CHECK(std::abs(complete_symmetric({1.0, 2.0}, 0) - cplx(1, 0)) < 1e-14);
  const cplx a(0.3, 1.2);
  CHECK(std::abs(complete_symmetric({a}, 3) - a * a * a) < 1e-14);
}

TEST_CASE("supersymmetric elementary function") {
  std::vector<cplx> x{cplx(1, 0.3), cplx(-2, 0), cplx(0.5, -1)};
  std::vector<cplx> y{cplx(2, 1), cplx(0.1, 0)};
  // e1(x||y) = e1(x) - e1(y)
  CHECK(std::abs(super_elementary(x, y, 1) -
                 (elementary_symmetric(x, 1) - elementary_symmetric(y, 1))) < 1e-13);
  // vanishes when the sets coincide
  for (int r = 1; r <= 4; ++r) CHECK(std::abs(super_elementary(x, x, r)) < 1e-12);
  CHECK(std::abs(super_elementary({1.0, 2.0}, {3.0}, 1) - cplx(0, 0)) < 1e-14);
  CHECK(std::abs(super_elementary(x, y, 0) - cplx(1, 0)) < 1e-14);
}

TEST_CASE("build_matrix entries") {
  auto cau = make_spec(MatrixKind::Cauchy, Parametrization::Rational, {0.0, 1.0}, {2.0, 3.0});
  MatrixXc m = build_matrix(cau);
  CHECK(std::abs(m(0, 0) - cplx(-0.5, 0)) < 1e-15);
  CHECK(std::abs(m(0, 1) - cplx(-1.0 / 3.0, 0)) < 1e-15);
  CHECK(std::abs(m(1, 0) - cplx(-1.0, 0)) < 1e-15);
  CHECK(std::abs(m(1, 1) - cplx(-0.5, 0)) < 1e-15);

  const cplx a(0.4, 0), b(1.7, 0);
  auto van = make_spec(MatrixKind::Vandermonde, Parametrization::Rational, {a, b}, {});
  MatrixXc v = build_matrix(van);
  CHECK(std::abs(v(0, 0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(v(0, 1) - a) < 1e-15);
  CHECK(std::abs(v(1, 1) - b) < 1e-15);

  // hyperbolic CV with a single Vandermonde column: cosh(0) = 1 everywhere
  auto hcv = make_spec(MatrixKind::CauchyVandermonde, Parametrization::Hyperbolic,
                       {cplx(0.2, 0), cplx(-0.5, 0.1)}, {cplx(0.7, 0)});
  MatrixXc h = build_matrix(hcv);
  CHECK(std::abs(h(0, 1) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(h(1, 1) - cplx(1, 0)) < 1e-15);

  StructuredMatrixSpec bad = cau;
  bad.x_nodes[1] = bad.x_nodes[0];
  CHECK_THROWS_AS((void)build_matrix(bad), CoincidentNodeError);
}

TEST_CASE("closed-form determinants, hand values") {
  auto cau = make_spec(MatrixKind::Cauchy, Parametrization::Rational, {0.0, 1.0}, {2.0, 3.0});
  CHECK(std::abs(closed_form_det(cau) - cplx(-1.0 / 12.0, 0)) < 1e-14);

  // pure-Vandermonde degeneration of the CV closed form
  auto van = make_spec(MatrixKind::Vandermonde, Parametrization::Rational,
                       {cplx(0.3, 0), cplx(-1.1, 0), cplx(2.0, 0)}, {});
  const cplx expect = (cplx(-1.1) - 0.3) * (cplx(2.0) - 0.3) * (cplx(2.0) + 1.1);
  CHECK(std::abs(closed_form_det(van) - expect) < 1e-12);

  auto cv = make_spec(MatrixKind::CauchyVandermonde, Parametrization::Rational,
                      {1.0, 2.0, 4.0}, {7.0});
  const auto lu = generic_det(build_matrix(cv));
  CHECK(std::abs(closed_form_det(cv) - lu.value) < 1e-12 * std::abs(lu.value));
}

TEST_CASE("closed-form vs LU determinant on the random population") {
  std::mt19937_64 rng(2024);
  int tested = 0, skipped = 0;
  while (tested < 200) {
    StructuredMatrixSpec spec;
    try {
      spec = random_spec(rng);
      spec.validate();
    } catch (const std::exception&) {
      continue;
    }
    const auto lu = generic_det(build_matrix(spec));
    if (lu.rcond < 1e-6) {
      ++skipped;  // condition-screened draw (LU itself loses the target digits)
      continue;
    }
    const LogComplex closed = closed_form_log_det(spec);
    const cplx ratio = (closed / lu.log).value();
    CHECK(std::abs(ratio - 1.0) < 1e-9);
    ++tested;
  }
  CHECK(skipped < 100);
}

TEST_CASE("closed-form inverses: both routes, all kinds") {
  std::mt19937_64 rng(99);
  int tested = 0;
  while (tested < 60) {
    StructuredMatrixSpec spec;
    try {
      spec = random_spec(rng);
      spec.validate();
    } catch (const std::exception&) {
      continue;
    }
    const MatrixXc m = build_matrix(spec);
    if (generic_det(m).rcond < 1e-6) continue;
    const MatrixXc inv_a = closed_form_inverse(spec, InverseRoute::Direct);
    const MatrixXc inv_b = closed_form_inverse(spec, InverseRoute::DualDressing);
    const int n = int(m.rows());
    const double resid_a = (m * inv_a - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff();
    const double resid_b = (m * inv_b - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff();
    CHECK(resid_a < 1e-8);
    CHECK(resid_b < 1e-8);
    CHECK((inv_a - inv_b).cwiseAbs().maxCoeff() <
          1e-8 * std::max(1.0, inv_a.cwiseAbs().maxCoeff()));
    ++tested;
  }
}

TEST_CASE("closed-form inverse hand values") {
  // 1x1 Cauchy: inverse is a - b
  const cplx a(0.7, 0.2), b(-1.1, 0);
  auto cau = make_spec(MatrixKind::Cauchy, Parametrization::Rational, {a}, {b});
  CHECK(std::abs(closed_form_inverse(cau)(0, 0) - (a - b)) < 1e-14);

  auto van = make_spec(MatrixKind::Vandermonde, Parametrization::Rational, {0.0, 1.0}, {});
  MatrixXc vi = closed_form_inverse(van);
  CHECK(std::abs(vi(0, 0) - cplx(1, 0)) < 1e-13);
  CHECK(std::abs(vi(0, 1) - cplx(0, 0)) < 1e-13);
  CHECK(std::abs(vi(1, 0) - cplx(-1, 0)) < 1e-13);
  CHECK(std::abs(vi(1, 1) - cplx(1, 0)) < 1e-13);

  auto cv = make_spec(MatrixKind::CauchyVandermonde, Parametrization::Rational,
                      {1.0, 2.0, 4.0}, {7.0});
  const MatrixXc m = build_matrix(cv);
  const MatrixXc inv = closed_form_inverse(cv);
  CHECK((m * inv - MatrixXc::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("duality: det(CV) = det(dual CV), both parametrizations") {
  std::mt19937_64 rng(17);
  int tested = 0;
  while (tested < 40) {
    StructuredMatrixSpec spec;
    try {
      spec = random_spec(rng);
      spec.validate();
    } catch (const std::exception&) {
      continue;
    }
    if (spec.kind == MatrixKind::Cauchy) continue;
    spec.kind = MatrixKind::CauchyVandermonde;
    StructuredMatrixSpec dual = spec;
    dual.kind = MatrixKind::DualCauchyVandermonde;
    const auto d1 = generic_det(build_matrix(spec));
    const auto d2 = generic_det(build_matrix(dual));
    if (d1.rcond < 1e-10 || d2.rcond < 1e-10) continue;
    CHECK(std::abs((d1.log / d2.log).value() - 1.0) < 1e-9);
    ++tested;
  }
}

TEST_CASE("hyperbolic-rational reparametrization dressing") {
  // C_gamma[alpha||beta] = diag(e^{(1-n) pi a}) cv[x||y] blockdiag(2 e^{(n+1) pi b}, T)
  // checked through the determinants: det C_gamma = prod(dressings) det cv det T
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + int(rng() % 3), n = 1 + int(rng() % 3);
    std::vector<cplx> alpha, beta;
    for (int i = 0; i < m + n; ++i) alpha.emplace_back(u(rng), 0.0);
    for (int i = 0; i < m; ++i) beta.emplace_back(u(rng), 0.0);
    auto hyp = make_spec(MatrixKind::CauchyVandermonde, Parametrization::Hyperbolic, alpha, beta);
    std::vector<cplx> x, y;
    for (auto& v : alpha) x.push_back(std::exp(2.0 * pi * v));
    for (auto& v : beta) y.push_back(std::exp(2.0 * pi * v));
    auto rat = make_spec(MatrixKind::CauchyVandermonde, Parametrization::Rational, x, y);
    try {
      hyp.validate();
      rat.validate();
    } catch (const std::exception&) {
      continue;
    }
    LogComplex lhs = closed_form_log_det(hyp);
    LogComplex rhs = closed_form_log_det(rat);
    for (auto& v : alpha) rhs *= LogComplex(pi * (1.0 - n) * v.real(), 0.0);
    for (auto& v : beta) rhs *= LogComplex(std::log(2.0) + pi * (n + 1) * v.real(), 0.0);
    // what remains is det T, the exact cosh/sinh mixing: a signed power of two
    const double p2 = (lhs.log_mag - rhs.log_mag) / std::log(2.0);
    CHECK(std::abs(p2 - std::round(p2)) < 1e-9);
    CHECK(std::abs(std::remainder(lhs.phase - rhs.phase, pi)) < 1e-9);
  }
}

TEST_CASE("schur quotient equals the supersymmetric polynomial") {
  auto [lhs0, rhs0] = schur_quotient_check({1.0, 2.0, 4.0, 5.0}, {9.0}, 0);
  CHECK(std::abs(lhs0 - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(rhs0 - cplx(1, 0)) < 1e-14);
  auto [lhs1, rhs1] = schur_quotient_check({1.0, 2.0, 4.0, 5.0}, {9.0}, 1);
  CHECK(std::abs(lhs1 - rhs1) < 1e-10 * std::max(1.0, std::abs(rhs1)));
  // x -> y union {w} makes e1(x||y) -> w; approached through nearby nodes
  // because exactly coincident x, y nodes are rejected by the spec guard
  const cplx w(3.7, 0.4);
  const double eps = 1e-7;
  auto [lhs2, rhs2] =
      schur_quotient_check({1.0 + eps, -2.0 + 2.0 * eps, w}, {1.0, -2.0}, 1);
  CHECK(std::abs(rhs2 - w) < 1e-5);
  CHECK(std::abs(lhs2 - w) < 1e-5);

  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + int(rng() % 3), n = 2 + int(rng() % 3);
    std::vector<cplx> x, y;
    for (int i = 0; i < m + n; ++i) x.emplace_back(u(rng), u(rng));
    for (int i = 0; i < m; ++i) y.emplace_back(u(rng), u(rng));
    const int r = int(rng() % n);
    try {
      auto [lhs, rhs] = schur_quotient_check(x, y, r);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    } catch (const CoincidentNodeError&) {
    }
  }
}

TEST_CASE("block determinant reduction") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  auto rnd = [&](int r, int c) {
    MatrixXc m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
  };
  BlockMatrix bm{rnd(4, 4), rnd(2, 4), rnd(4, 2), rnd(2, 2)};
  MatrixXc full(6, 6);
  full << bm.a, bm.c, bm.b, bm.d;
  const MatrixXc p = det_reduce(bm);
  const cplx lhs = generic_det(full).value;
  const cplx rhs = generic_det(bm.a).value * generic_det(p).value;
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));

  // A = Id: P = D - B C
  BlockMatrix idm{MatrixXc::Identity(4, 4), bm.b, bm.c, bm.d};
  CHECK((det_reduce(idm) - (bm.d - bm.b * bm.c)).norm() < 1e-13);

  // B = 0: block triangular
  BlockMatrix tri{bm.a, MatrixXc::Zero(2, 4), bm.c, bm.d};
  MatrixXc tfull(6, 6);
  tfull << bm.a, bm.c, MatrixXc::Zero(2, 4), bm.d;
  CHECK(std::abs(generic_det(tfull).value -
                 generic_det(bm.a).value * generic_det(bm.d).value) < 1e-10);
}

TEST_CASE("rank-1 determinant lemma") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXc m(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = cplx(g(rng), g(rng));
  VectorXc u(5), v(5);
  for (int i = 0; i < 5; ++i) u(i) = cplx(g(rng), g(rng)), v(i) = cplx(g(rng), g(rng));
  const MatrixXc p = u * v.transpose();
  const cplx direct = generic_det(m + p).value;
  CHECK(std::abs(rank1_det(m, p) - direct) < 1e-10 * std::abs(direct));

  // p = 0 and the matrix determinant lemma on the identity
  CHECK(std::abs(rank1_det(m, MatrixXc::Zero(5, 5)) - generic_det(m).value) < 1e-12);
  const MatrixXc id2 = MatrixXc::Identity(2, 2);
  VectorXc a(2), b(2);
  a << cplx(1, 1), cplx(0, 2);
  b << cplx(2, 0), cplx(-1, 1);
  const cplx vu = (b.transpose() * a)(0, 0);
  CHECK(std::abs(rank1_det(id2, a * b.transpose()) - (1.0 + vu)) < 1e-12);

  CHECK_THROWS_AS((void)rank1_det(m, m), std::invalid_argument);
}

TEST_CASE("generic_det basics") {
  CHECK(std::abs(generic_det(MatrixXc::Identity(5, 5)).value - 1.0) < 1e-14);
  MatrixXc d = MatrixXc::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  CHECK(std::abs(generic_det(d).value - 6.0) < 1e-14);
}
