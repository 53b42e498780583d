#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lft/lattice.h"

using namespace lft;

TEST_CASE("make_box site counts and index round trip") {
  auto b1 = make_box(1, 1);
  CHECK(b1.n == 3);
  CHECK(b1.coord(0)[0] == -1);
  CHECK(b1.coord(2)[0] == 1);
  CHECK(make_box(2, 2).n == 25);
  auto b3 = make_box(3, 1);
  CHECK(b3.n == 27);
  for (int i = 0; i < b3.n; ++i) CHECK(b3.index(b3.coord(i)) == i);
  CHECK(b3.index({2, 0, 0}) == -1);
  CHECK_THROWS_AS(make_box(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_box(3, 20), std::invalid_argument);
}

TEST_CASE("sample_potential") {
  auto box = make_box(2, 3);
  auto z = sample_potential(box, 7, Distribution::zero);
  for (double v : z.values) CHECK(v == 0.0);
  auto u1 = sample_potential(box, 7, Distribution::uniform);
  auto u2 = sample_potential(box, 7, Distribution::uniform);
  CHECK(u1.values == u2.values);
  for (double v : u1.values) CHECK(std::abs(v) <= 1.0);
  auto u3 = sample_potential(box, 8, Distribution::uniform);
  CHECK(u1.values != u3.values);
  auto bin = sample_potential(box, 7, Distribution::binary);
  for (double v : bin.values) CHECK((v == 1.0 || v == -1.0));
  CHECK(parse_distribution("binary") == Distribution::binary);
  CHECK_THROWS_AS(parse_distribution("gauss"), std::invalid_argument);
}

TEST_CASE("build_hamiltonian small cases") {
  auto box = make_box(1, 1);
  auto H = build_hamiltonian(box, sample_potential(box, 1, Distribution::zero), 0.0);
  Eigen::Matrix3d ref;
  ref << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  CHECK((H.real() - ref).cwiseAbs().maxCoeff() == 0.0);
  CHECK(H.imag().cwiseAbs().maxCoeff() == 0.0);

  auto one = make_box(1, 0);
  Potential p{{0.5}, 0, Distribution::uniform};
  auto H1 = build_hamiltonian(one, p, 1.0);
  CHECK(H1(0, 0).real() == doctest::Approx(2.5));

  auto sq = make_box(2, 1);
  auto H2 = build_hamiltonian(sq, sample_potential(sq, 1, Distribution::zero), 0.0);
  const int c = sq.index({0, 0});
  CHECK(std::abs(H2.row(c).sum()) < 1e-15);

  Potential bad{{0.1, 0.2}, 0, Distribution::uniform};
  CHECK_THROWS_AS(build_hamiltonian(box, bad, 1.0), std::invalid_argument);
}

TEST_CASE("field profile is compactly supported and AC") {
  FieldProfile f;
  f.t0 = 0.0;
  f.t1 = 2.0;
  f.l = 1;
  CHECK(f.envelope(-0.1) == 0.0);
  CHECK(f.envelope(2.1) == 0.0);
  CHECK(f.efield(0.0) == 0.0);
  auto [x, w] = gauss_legendre(200, f.t0, f.t1);
  double acc = 0;
  for (int i = 0; i < x.size(); ++i) acc += w[i] * f.efield(x[i]);
  CHECK(std::abs(acc) < 1e-10);
  // E = -dA/dt by central difference
  const double t = 0.73, h = 1e-5;
  CHECK(f.efield(t) == doctest::Approx(-(f.envelope(t + h) - f.envelope(t - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  auto [x, w] = gauss_legendre(5, -1.0, 2.0);
  double acc = 0;
  for (int i = 0; i < 5; ++i) acc += w[i] * std::pow(x[i], 9);
  CHECK(acc == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre(0, 0, 1), std::invalid_argument);
}

TEST_CASE("magnetic hamiltonian") {
  auto box = make_box(1, 4);
  auto pot = sample_potential(box, 3, Distribution::uniform);
  FieldProfile f;
  f.t0 = 0.0;
  f.t1 = 1.0;
  f.l = 1;
  auto H = build_hamiltonian(box, pot, 0.7);
  CHECK((build_magnetic_hamiltonian(box, pot, 0.7, f, 0.0, 0.5) - H).cwiseAbs().maxCoeff() == 0.0);
  CHECK((build_magnetic_hamiltonian(box, pot, 0.7, f, 0.3, -1.0) - H).cwiseAbs().maxCoeff() == 0.0);

  const double eta = 0.3, t = 0.4;
  auto Hm = build_magnetic_hamiltonian(box, pot, 0.7, f, eta, t);
  const int x = box.index({0}), y = box.index({1});
  // bond inside the support carries exp(-i eta A) in the (x+e1, x) entry
  const cplx expect = -std::polar(1.0, -eta * f.envelope(t));
  CHECK(std::abs(Hm(y, x) - expect) < 1e-14);
  CHECK(std::abs(Hm(x, y) - std::conj(expect)) < 1e-14);
  // bond outside the support untouched
  const int u = box.index({3}), v = box.index({4});
  CHECK(Hm(u, v) == cplx(-1.0));
  CHECK((Hm - Hm.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(peierls_phase(box, f, eta, t, {y, x}) == doctest::Approx(-peierls_phase(box, f, eta, t, {x, y})));
}

TEST_CASE("integrated_field") {
  auto box = make_box(2, 3);
  FieldProfile f;
  f.t0 = 0.0;
  f.t1 = 2.0;
  f.w = {0.6, 0.8};
  f.l = 1;
  const int x = box.index({0, 0}), y = box.index({1, 0}), z = box.index({0, 1});
  CHECK(integrated_field(box, f, 0.2, 3.0, {x, y}) == 0.0);
  const double t = 0.9;
  CHECK(integrated_field(box, f, 0.2, t, {x, y}) == doctest::Approx(0.2 * f.efield(t) * 0.6).epsilon(1e-13));
  CHECK(integrated_field(box, f, 0.2, t, {x, z}) == doctest::Approx(0.2 * f.efield(t) * 0.8).epsilon(1e-13));
  CHECK(integrated_field(box, f, 0.2, t, {y, x}) == doctest::Approx(-integrated_field(box, f, 0.2, t, {x, y})));
  // support is [-l, l+1)^d: (1,0)->(2,0) is a field bond, (2,0)->(3,0) is not
  const int a = box.index({1, 0}), c = box.index({2, 0}), e = box.index({3, 0});
  CHECK(bond_geometry(box, f, {a, c}, 20) == doctest::Approx(0.6));
  CHECK(bond_geometry(box, f, {c, e}, 20) == 0.0);
  CHECK_THROWS_AS(integrated_field(box, f, 0.2, t, {x, c}), std::invalid_argument);
}

TEST_CASE("validate field") {
  FieldProfile f;
  f.w = {1.0, 1.0};
  CHECK_THROWS_AS(validate(f, 2), std::invalid_argument);
  f.w = {0.6, 0.8};
  CHECK_NOTHROW(validate(f, 2));
  f.t1 = f.t0;
  CHECK_THROWS_AS(validate(f, 2), std::invalid_argument);
}
