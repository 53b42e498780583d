#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "lft/transport.h"

using namespace lft;

namespace {

CMat chain2() {
  CMat H(2, 2);
  H << 2.0, -1.0, -1.0, 2.0;
  return H;
}

// one bond (site 1 -> site 0), one averaging site
Region chain2_region() { return Region{1, 2, 1, {{Bond{1, 0}}}}; }

const double f1 = fermi(1.0, 1.0), f3 = fermi(3.0, 1.0);

struct Instance {
  LatticeBox box;
  CMat h, d;
  EigenSystem es;
  Region r;
};

Instance instance(int d, int L, int l, double beta, double lambda, std::uint64_t seed) {
  Instance in;
  in.box = make_box(d, L);
  in.h = build_hamiltonian(in.box, sample_potential(in.box, seed, Distribution::uniform), lambda);
  in.es = eigendecompose(in.h);
  in.d = fermi_symbol(in.es, beta);
  in.r = averaging_region(in.box, l);
  return in;
}

}  // namespace

TEST_CASE("current and adjacency coefficients") {
  auto box = make_box(1, 2);
  auto I = current_operator(box, 0, 0);
  const int x = box.index({0}), y = box.index({1});
  CHECK(I.b(x, y) == cplx(0, 1));
  CHECK(I.b(y, x) == cplx(0, -1));
  CHECK(I.b.cwiseAbs().sum() == doctest::Approx(2.0));
  CHECK((I.b - I.b.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  auto P = adjacency_operator(box, 0, 0);
  CHECK(P.b(x, y) == cplx(-1));
  CHECK(P.b(y, x) == cplx(-1));

  // 2 a_{x1}^* a_{x2} = -P + i I
  const Bond b{y, x};
  CMat two = CMat::Zero(box.n, box.n);
  two(b.x1, b.x2) = 2.0;
  CHECK((-bond_adjacency(box.n, b).b + cplx(0, 1) * bond_current(box.n, b).b - two).cwiseAbs().maxCoeff() == 0.0);

  auto in = instance(2, 3, 1, 1.3, 1.0, 5);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(expectation(in.d, current_operator(in.r, k))) < 1e-14);
  CHECK(in.r.sites == 9);
  CHECK(in.r.bonds[0].size() == 9);
  CHECK_THROWS_AS(averaging_region(in.box, 3), std::invalid_argument);
  CHECK_THROWS_AS(current_operator(in.r, 2), std::invalid_argument);

  auto hot = instance(1, 4, 2, 1e-9, 1.0, 2);
  CHECK(std::abs(expectation(hot.d, adjacency_operator(hot.r, 0))) < 1e-8);
}

TEST_CASE("sigma_dia and xi_dia on the 2-site chain") {
  const CMat H = chain2();
  const CMat d = fermi_symbol(eigendecompose(H), 1.0);
  const Region r = chain2_region();
  CHECK(sigma_dia(d, {1, 0}) == doctest::Approx(f3 - f1).epsilon(1e-14));
  CHECK(xi_dia(d, r)(0, 0) == doctest::Approx(f3 - f1).epsilon(1e-14));
  // frozen
  CHECK(xi_dia(d, r)(0, 0) == doctest::Approx(-0.221515548192).epsilon(1e-11));
  CHECK(std::abs(sigma_dia(fermi_symbol(eigendecompose(H), 1e-9), {1, 0})) < 1e-9);

  auto in = instance(2, 3, 2, 0.4, 1.0, 8);
  const RMat xd = xi_dia(in.d, in.r);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(xd(k, k)) <= 2.0);
  CHECK(xd(0, 1) == 0.0);
}

TEST_CASE("sigma_para against the commutator time integral") {
  const CMat H = chain2();
  auto es = eigendecompose(H);
  const double beta = 1.0;
  const CMat d = fermi_symbol(es, beta);
  const Bond x{1, 0};
  const double t = 0.5;
  // sigma_p(x, x, t) = int_0^t i Tr([b_y, tau_s(b_x)] d) ds
  const CMat bx = bond_current(2, x).b;
  auto [s, w] = gauss_legendre(64, 0.0, t);
  cplx acc = 0;
  for (int j = 0; j < s.size(); ++j) {
    const CMat U = CMat(cplx(0, s[j]) * H).exp();
    const CMat bt = U * bx * U.adjoint();
    acc += w[j] * cplx(0, 1) * ((bx * bt - bt * bx) * d).trace();
  }
  const auto sp = sigma_para(es, beta, x, x, {0.0, t});
  CHECK(sp[0] == 0.0);
  CHECK(std::abs(sp[1] - acc.real()) < 1e-8);
  CHECK(sp[1] == doctest::Approx((f1 - f3) * (std::cos(2 * t) - 1)).epsilon(1e-12));

  auto in = instance(1, 5, 2, 1.0, 1.0, 4);
  const Bond a = in.r.bonds[0][1], b = in.r.bonds[0][3];
  const auto ab = sigma_para(in.es, 1.0, a, b, {0.3, 1.7});
  const auto ba = sigma_para(in.es, 1.0, b, a, {0.3, 1.7});
  CHECK(ab[0] == doctest::Approx(ba[0]).epsilon(1e-12));
  CHECK(ab[1] == doctest::Approx(ba[1]).epsilon(1e-12));
}

TEST_CASE("xi_para structure") {
  auto es = eigendecompose(chain2());
  const auto grid = uniform_grid(0.0, 3.0, 31);
  const auto xi = xi_para(es, 1.0, chain2_region(), grid);
  for (size_t i = 0; i < grid.size(); ++i)
    CHECK(xi.v[i](0, 0) == doctest::Approx((f1 - f3) * (std::cos(2 * grid[i]) - 1)).epsilon(1e-12));
  CHECK(xi.v[0].cwiseAbs().maxCoeff() == 0.0);

  auto in = instance(2, 3, 1, 2.0, 1.0, 6);
  std::vector<double> pm{-2.1, -0.4, 0.0, 0.4, 2.1};
  const auto x2 = xi_para(in.es, 2.0, in.r, pm);
  CHECK(x2.v[2].cwiseAbs().maxCoeff() == 0.0);
  CHECK((x2.v[0] - x2.v[4]).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((x2.v[1] - x2.v[3]).cwiseAbs().maxCoeff() < 1e-10);
  for (const auto& m : x2.v) {
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<RMat> se(m);
    CHECK(se.eigenvalues().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(xi_para(in.es, 2.0, chain2_region(), pm), std::invalid_argument);
}

TEST_CASE("xi_para Green-Kubo cross check") {
  auto in = instance(1, 6, 2, 0.7, 1.0, 12);
  const auto grid = uniform_grid(0.0, 2.0, 6);
  const auto a = xi_para(in.es, 0.7, in.r, grid);
  const auto b = xi_para_commutator(in.h, in.d, in.r, grid);
  for (size_t i = 0; i < grid.size(); ++i) CHECK((a.v[i] - b.v[i]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("viscosity") {
  auto es = eigendecompose(chain2());
  const CMat d = fermi_symbol(es, 1.0);
  const RMat xd = xi_dia(d, chain2_region());
  double prev = 0;
  for (int pts : {41, 81, 161}) {
    const auto grid = uniform_grid(0.0, 2.0, pts);
    const auto V = viscosity(xi_para(es, 1.0, chain2_region(), grid), xd);
    CHECK(std::abs(V.v[0](0, 0)) < 1e-3);
    double err = 0;
    for (size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(V.v[i](0, 0) - 2.0 * std::sin(2 * grid[i])));
    if (prev > 0) CHECK(err < prev / 3.5);
    prev = err;
  }
  TransportKernel flat{uniform_grid(0.0, 1.0, 6), std::vector<RMat>(6, RMat::Constant(1, 1, -0.3))};
  for (const auto& m : viscosity(flat, xd).v) CHECK(std::abs(m(0, 0)) < 1e-14);
  CHECK_THROWS_AS(viscosity(flat, RMat::Zero(1, 1)), std::runtime_error);
}
