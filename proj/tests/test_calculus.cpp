#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gammalab/calculus.hpp"

using namespace gammalab;
using namespace gammalab::calculus;

namespace {

Matrix diag(std::initializer_list<Complex> entries) {
  Matrix m = Matrix::Zero(entries.size(), entries.size());
  int i = 0;
  for (Complex e : entries) m(i, i) = e, ++i;
  return m;
}

// random diagonalizable matrix with prescribed eigenvalues and a
// well-conditioned eigenvector basis
Matrix with_spectrum(const std::vector<Complex>& eigs, std::uint64_t seed) {
  const int n = static_cast<int>(eigs.size());
  Rng rng(seed);
  Matrix v(n, n);
  for (;;) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        v(i, j) = Complex(rng.next_gauss(), rng.next_gauss()) + (i == j ? 3.0 : 0.0);
    Eigen::JacobiSVD<Matrix> svd(v);
    if (svd.singularValues()(0) / svd.singularValues()(n - 1) < 50.0) break;
  }
  Matrix lam = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) lam(i, i) = eigs[i];
  return v * lam * v.partialPivLu().inverse();
}

SectorialOperator certified(Matrix m, double sigma) {
  SectorialOperator a(std::move(m));
  const auto cert = a.certify(sigma);
  REQUIRE(cert.ok);
  return a;
}

}  // namespace

TEST_CASE("resolvent on diagonal matrices and the diagonalization oracle") {
  SectorialOperator a1(diag({1.0}));
  CHECK(std::abs(resolvent(a1, Complex(2.0, 0.0))(0, 0) - Complex(1.0)) <= 1e-14);

  SectorialOperator a2(diag({1.0, 3.0}));
  const Matrix r0 = resolvent(a2, Complex(0.0, 0.0));
  CHECK(std::abs(r0(0, 0) - Complex(-1.0)) <= 1e-14);
  CHECK(std::abs(r0(1, 1) - Complex(-1.0 / 3.0)) <= 1e-14);

  // random diagonalizable: (z - A)^{-1} = V (z - Lambda)^{-1} V^{-1}
  const std::vector<Complex> eigs = {Complex(1.0, 0.2), Complex(2.5, -0.4), Complex(4.0, 0.0),
                                     Complex(0.7, 0.1)};
  SectorialOperator a3(with_spectrum(eigs, 5));
  const Complex z(6.0, 1.0);
  const Matrix lhs = resolvent(a3, z);
  const auto& eig = a3.eigensystem();
  Matrix inv_diag = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) inv_diag(i, i) = 1.0 / (z - eig.eigenvalues[i]);
  const Matrix rhs = eig.v * inv_diag * eig.v_inv;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);

  CHECK_THROWS_AS(resolvent(a2, Complex(1.0, 0.0)), NumericalFailure);
}

TEST_CASE("sectoriality certificates") {
  // identity: finite constant at every angle
  SectorialOperator ident(diag({1.0, 1.0, 1.0}));
  CHECK(ident.certify(0.1).ok);
  CHECK(ident.certify(0.1).constant >= 1.0);

  // positive diagonal: sectorial of every positive angle
  SectorialOperator pos(diag({0.5, 2.0, 7.0}));
  CHECK(pos.certify(0.05).ok);

  // eigenvalue at arg = pi/3 fails below, succeeds above
  SectorialOperator tilted(diag({std::polar(1.0, kPi / 3.0), 1.0}));
  CHECK_FALSE(tilted.certify(kPi / 3.0 - 0.2).ok);
  CHECK(tilted.certify(kPi / 3.0 + 0.2).ok);

  // singular matrix is not injective
  SectorialOperator singular(diag({0.0, 1.0}));
  CHECK_FALSE(singular.certify(0.5).ok);
  CHECK(singular.shifted_if_singular().shifted());
  CHECK_FALSE(pos.shifted_if_singular().shifted());
}

TEST_CASE("dunford calculus matches the diagonalization oracle") {
  auto a = certified(diag({1.0, 2.0, 5.0}), 0.1);
  const auto q = symbol_q();
  const Matrix qa = symbol_apply(a, q);
  for (int i = 0; i < 3; ++i) {
    const Complex lam = a.matrix()(i, i);
    CHECK(std::abs(qa(i, i) - q.eval(lam)) <= 1e-6);
  }
  CHECK(qa.cwiseAbs().maxCoeff() - std::abs(qa(0, 0)) <= 1.0);  // off-diagonals tiny
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(qa(i, j)) <= 1e-8);

  // ten random diagonalizable certified 8x8 matrices
  Rng rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Complex> eigs;
    for (int i = 0; i < 8; ++i) {
      const double mod = 0.5 + 3.5 * rng.next_unit();
      const double arg = 0.5 * (rng.next_unit() - 0.5);  // |arg| <= 0.25
      eigs.push_back(std::polar(mod, arg));
    }
    auto a8 = certified(with_spectrum(eigs, 200 + rep), 0.3);
    const Matrix direct = symbol_apply(a8, q);
    const auto& eig = a8.eigensystem();
    Matrix fd = Matrix::Zero(8, 8);
    for (int i = 0; i < 8; ++i) fd(i, i) = q.eval(eig.eigenvalues[i]);
    const Matrix oracle = eig.v * fd * eig.v_inv;
    const double scale = oracle.cwiseAbs().maxCoeff();
    CHECK((direct - oracle).cwiseAbs().maxCoeff() / scale <= 1e-6);
  }
}

TEST_CASE("contour angle independence and scaling covariance") {
  auto a = certified(diag({1.0, 2.0, 5.0}), 0.1);
  const auto q = symbol_q();
  ContourConfig c1, c2;
  c1.angle = 1.1;
  c2.angle = 2.0;
  const Matrix m1 = symbol_apply(a, q, c1);
  const Matrix m2 = symbol_apply(a, q, c2);
  CHECK((m1 - m2).cwiseAbs().maxCoeff() <= 1e-8);

  // f(tA) through the scaled contour equals q applied directly to tA
  const double t = 0.37;
  auto at = certified((t * a.matrix()).eval(), 0.1);
  const Matrix direct = symbol_apply(at, q);
  banach::Vector x(3);
  x << 1.0, -2.0, 0.5;
  const auto trace = g_trace(a, q, x, t, t * std::exp(1.0), 2, /*endpoint_tol=*/2.0);
  CHECK((direct * x - trace.values[0]).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("rational identity and the scalar subordination value") {
  auto a = certified(diag({1.0, 2.0, 5.0}), 0.1);
  const Matrix wa = symbol_apply(a, symbol_w());
  const Matrix inv = (Matrix::Identity(3, 3) + a.matrix()).partialPivLu().inverse();
  CHECK((wa + inv - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);

  auto one = certified(diag({1.0}), 0.1);
  const Matrix g = symbol_apply(one, symbol_g_alpha(0.5));
  CHECK(std::abs(g(0, 0) - Complex(std::exp(-1.0))) <= 1e-8);
}

TEST_CASE("multiplicativity on rational symbols") {
  auto a = certified(diag({0.8, 1.7, 3.2, 6.0}), 0.1);
  const auto q = symbol_q();
  Symbol q2;
  q2.name = "q-squared";
  q2.admissible_angle = kPi;
  q2.h0 = holo::DecayCertificate{16.0, 2.0};
  q2.eval = [](Complex z) {
    const Complex w = z / ((1.0 + z) * (1.0 + z));
    return w * w;
  };
  const Matrix lhs = symbol_apply(a, q2);
  const Matrix qa = symbol_apply(a, q);
  const Matrix rhs = qa * qa;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("fractional powers: closed forms, additivity, integral form") {
  auto four = certified(diag({4.0}), 0.1);
  CHECK(std::abs(fractional_power(four, 0.5)(0, 0) - Complex(2.0)) <= 1e-12);

  Rng rng(9);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<Complex> eigs;
    for (int i = 0; i < 5; ++i) eigs.emplace_back(0.3 + 5.0 * rng.next_unit(), 0.0);
    auto a = certified(with_spectrum(eigs, 300 + rep), 0.2);
    const double theta = 0.3 + 0.4 * rng.next_unit();
    const Matrix prod =
        fractional_power(a, theta) * fractional_power(a, 1.0 - theta);
    CHECK((prod - a.matrix()).cwiseAbs().maxCoeff() /
              a.matrix().cwiseAbs().maxCoeff() <=
          1e-8);
  }

  // non-normal 4x4: integral form matches the eigendecomposition
  const std::vector<Complex> eigs = {Complex(0.5, 0.1), Complex(1.2, -0.2), Complex(3.0, 0.3),
                                     Complex(5.5, 0.0)};
  auto a = certified(with_spectrum(eigs, 47), 0.4);
  for (double theta : {0.25, 0.5, 0.75}) {
    const Matrix via_eig = fractional_power(a, theta, FractionalMethod::Eigen);
    const Matrix via_int = fractional_power(a, theta, FractionalMethod::Integral);
    CHECK((via_eig - via_int).cwiseAbs().maxCoeff() / via_eig.cwiseAbs().maxCoeff() <= 1e-6);
  }

  SectorialOperator negative(diag({-1.0, 2.0}));
  CHECK_THROWS_AS(fractional_power(negative, 0.5, FractionalMethod::Eigen), InvalidInput);
}

TEST_CASE("g-function traces: scalar closed form and grid refinement") {
  auto one = certified(diag({1.0}), 0.1);
  const auto q = symbol_q();
  banach::Vector x(1);
  x << 1.0;
  const auto trace = g_trace(one, q, x, 1e-8, 1e8, 128);
  for (std::size_t k = 0; k < trace.t.size(); k += 13) {
    const double t = trace.t[k];
    CHECK(std::abs(trace.values[k][0] - Complex(t / ((1.0 + t) * (1.0 + t)))) <= 1e-8);
  }

  // int |q(t)|^2 dt/t = B(2,2) = 1/6 by log-grid quadrature
  const auto space1 = banach::SpaceDescriptor::lp(2, 1);
  const double l2 = trace_lp_norm(trace, space1, 2.0);
  CHECK(std::abs(l2 * l2 - 1.0 / 6.0) <= 1e-8);

  // grid refinement stability of every L^p(dt/t) norm
  auto a = certified(diag({0.5, 2.0, 8.0}), 0.1);
  banach::Vector y(3);
  y << 1.0, 0.3, -0.7;
  const auto space3 = banach::SpaceDescriptor::lp(2, 3);
  const auto t64 = g_trace(a, q, y, 1e-9, 1e9, 64);
  const auto t128 = g_trace(a, q, y, 1e-9, 1e9, 128);
  for (double p : {1.0, 2.0, 4.0}) {
    CHECK(std::abs(trace_lp_norm(t64, space3, p) - trace_lp_norm(t128, space3, p)) < 1e-6);
  }
}

TEST_CASE("littlewood-paley-stein probe") {
  // hilbert eigenvector case: both ratios equal 6^{-1/2}
  auto a = certified(diag({1.0, 3.0, 10.0}), 0.1);
  const auto space = banach::SpaceDescriptor::lp(2, 3);
  const auto q = symbol_q();
  for (int i = 0; i < 3; ++i) {
    banach::Vector x = banach::Vector::Zero(3);
    x[i] = 2.0;
    const auto r = lps_probe(a, q, x, space, 2.0, 2.0);
    CHECK(std::abs(r.ratio - 1.0 / std::sqrt(6.0)) <= 1e-4);
    CHECK(std::abs(r.params["ratio_lower"].get<double>() - std::sqrt(6.0)) <= 1e-3);
  }

  // zero vector: trace vanishes identically
  banach::Vector zero = banach::Vector::Zero(3);
  const auto rz = lps_probe(a, q, zero, space, 2.0, 2.0);
  CHECK(rz.lhs == 0.0);
  CHECK(rz.rhs == 0.0);
  CHECK(rz.quantity("trace_lp") == 0.0);
}

TEST_CASE("calibrated dual symbol") {
  const auto q = symbol_q();
  const double c = calibration_constant(q);
  CHECK(std::abs(c - 6.0) <= 1e-6);

  const auto g = calibrated_dual(q);
  // reproducing integral int f g dt/t = 1 on a fine log grid
  const double margin = 40.0;
  const std::size_t pts = 4096;
  const double h = 2.0 * margin / (pts - 1);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < pts; ++i) {
    const double t = std::exp(-margin + h * static_cast<double>(i));
    acc += h * q.eval(t) * g.eval(t);
  }
  CHECK(std::abs(acc - Complex(1.0)) <= 1e-8);

  // real-coefficient symbol: dual is c times the symbol itself on the reals
  for (double t : {0.1, 1.0, 7.3}) {
    CHECK(std::abs(g.eval(t) - 6.0 * q.eval(t)) <= 1e-6);
  }
  CHECK_THROWS_AS(calibrated_dual(symbol_w()), InvalidInput);
}

TEST_CASE("matrix exponential and diffusion checks") {
  // 4-cycle laplacian generates a stochastic semigroup
  const Matrix q4 = SectorialOperator::from_named("cycle-laplacian:4").matrix();
  const auto check = diffusion_check(q4, {0.1, 1.0, 10.0});
  CHECK(check.nonnegative);
  CHECK(check.substochastic);
  CHECK(check.max_row_sum <= 1.0 + 1e-9);

  // a generator with a negative off-diagonal rate pattern fails positivity
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.0;
  bad(0, 1) = 0.5;  // positive entry in the generator -> negative in e^{-tQ}
  bad(1, 0) = 0.5;
  bad(1, 1) = 1.0;
  const auto bad_check = diffusion_check(bad, {0.5});
  CHECK_FALSE(bad_check.nonnegative);
}

TEST_CASE("diffusion tensor extension probe") {
  const auto q = symbol_q();
  const auto l4 = banach::SpaceDescriptor::lp(4, 4);

  // single state reduces exactly to the lps probe quantities, taking the
  // tensor operator 2 I_4 on the coordinate space
  Matrix q1 = Matrix::Zero(1, 1);
  q1(0, 0) = 2.0;
  Matrix x1(1, 4);
  x1 << 1.0, -0.5, Complex(0.0, 2.0), 0.25;
  const auto rd = diffusion_extend_probe(q1, l4, 2.0, q, x1, 2.0, 4.0,
                                         Eigen::VectorXd::Ones(1), 0.0, 0.0, 128);
  auto a1 = certified(diag({2.0, 2.0, 2.0, 2.0}), 0.1);
  const auto rl = lps_probe(a1, q, x1.row(0).transpose(), l4, 2.0, 4.0);
  CHECK(rd.quantity("mixed_lq") == doctest::Approx(rl.quantity("trace_lq")).epsilon(1e-4));
  CHECK(rd.quantity("x_norm") == doctest::Approx(rl.quantity("x_norm")).epsilon(1e-12));
  CHECK(rd.quantity("mixed_lp") == doctest::Approx(rl.quantity("trace_lp")).epsilon(1e-4));

  // 16-cycle laplacian has a kernel (constants): probe projects it out
  const Matrix q16 = SectorialOperator::from_named("cycle-laplacian:16").matrix();
  Rng rng(55);
  Matrix x(16, 4);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 4; ++j) x(i, j) = Complex(rng.next_gauss(), rng.next_gauss());
  const auto r16 = diffusion_extend_probe(q16, l4, 2.0, symbol_g_alpha(0.5), x, 2.0, 4.0,
                                          Eigen::VectorXd::Constant(16, 1.0 / 16.0));
  CHECK(r16.params["kernel_projected"].get<bool>());
  CHECK(std::isfinite(r16.ratio));
  CHECK(r16.ratio > 0.0);
  CHECK(std::isfinite(r16.params["ratio_lower"].get<double>()));
}

TEST_CASE("named operators and csv loading") {
  const auto lap = SectorialOperator::from_named("laplacian1d:4");
  CHECK(lap.dim() == 4);
  CHECK(lap.matrix()(0, 0).real() == doctest::Approx(2.0));
  CHECK(lap.matrix()(0, 1).real() == doctest::Approx(-1.0));
  CHECK(lap.matrix()(0, 3).real() == doctest::Approx(0.0));

  const auto cyc = SectorialOperator::from_named("cycle-laplacian:4");
  CHECK(cyc.matrix()(0, 3).real() == doctest::Approx(-1.0));

  const auto dg = SectorialOperator::from_named("diag:1,2.5,4");
  CHECK(dg.dim() == 3);
  CHECK(dg.matrix()(1, 1).real() == doctest::Approx(2.5));

  std::stringstream ss("1,0,0,1\n0,-1,2,0\n");
  const auto fromcsv = SectorialOperator::read_csv(ss);
  CHECK(fromcsv.dim() == 2);
  CHECK(fromcsv.matrix()(0, 1) == Complex(0.0, 1.0));
  CHECK(fromcsv.matrix()(1, 0) == Complex(0.0, -1.0));
  CHECK(fromcsv.matrix()(1, 1) == Complex(2.0, 0.0));

  CHECK_THROWS_AS(SectorialOperator::from_named("mystery:3"), InvalidInput);
}

TEST_CASE("symbol certificates spot-check cleanly") {
  symbol_q().check_certificate(2.5, 200, 1);
  symbol_v_theta(0.3).check_certificate(2.0, 200, 2);
  symbol_g_alpha(0.5).check_certificate(kPi / 2.0, 200, 3);
  CHECK_THROWS_AS(symbol_parse("bogus"), InvalidInput);
  CHECK(symbol_parse("v:0.25").name == "v:0.25");
  CHECK(symbol_parse("g:0.5").admissible_angle == doctest::Approx(kPi));
}
