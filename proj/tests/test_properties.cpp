#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lft/dynamics.h"

using namespace lft;

// Randomized instances: dimension, size, beta, lambda and seed drawn from a fixed stream.

namespace {

struct Draw {
  int d, L, l;
  double beta, lambda;
  std::uint64_t seed;
};

std::vector<Draw> draws(int count) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Draw> out;
  for (int i = 0; i < count; ++i) {
    Draw x;
    x.d = u(rng) < 0.7 ? 1 : 2;
    x.L = x.d == 1 ? 3 + static_cast<int>(5 * u(rng)) : 2;
    x.l = 1 + static_cast<int>((x.L - 1) * u(rng));
    x.beta = std::exp(std::log(0.1) + u(rng) * std::log(50.0));
    x.lambda = 3.0 * u(rng);
    x.seed = rng();
    out.push_back(x);
  }
  return out;
}

struct Instance {
  LatticeBox box;
  Potential pot;
  CMat h, d;
  EigenSystem es;
  Region r;
};

Instance make(const Draw& x) {
  Instance in;
  in.box = make_box(x.d, x.L);
  in.pot = sample_potential(in.box, x.seed, Distribution::uniform);
  in.h = build_hamiltonian(in.box, in.pot, x.lambda);
  in.es = eigendecompose(in.h);
  in.d = fermi_symbol(in.es, x.beta);
  in.r = averaging_region(in.box, x.l);
  return in;
}

double max_abs(const RMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("equilibrium state") {
  for (const auto& x : draws(12)) {
    auto in = make(x);
    CHECK((in.h - in.h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<CMat> se(in.d);
    CHECK(se.eigenvalues().minCoeff() >= -1e-13);
    CHECK(se.eigenvalues().maxCoeff() <= 1 + 1e-13);
    double n = 0;
    for (int m = 0; m < in.es.E.size(); ++m) n += fermi(in.es.E[m], x.beta);
    CHECK(in.d.trace().real() == doctest::Approx(n).epsilon(1e-12));
    for (int k = 0; k < x.d; ++k) CHECK(std::abs(expectation(in.d, current_operator(in.r, k))) < 1e-12);
  }
}

TEST_CASE("transport kernel and measure") {
  for (const auto& x : draws(12)) {
    INFO("d=", x.d, " L=", x.L, " l=", x.l, " beta=", x.beta, " lambda=", x.lambda);
    auto in = make(x);
    const std::vector<double> t{-3.1, -0.6, 0.0, 0.6, 3.1, 9.0};
    const auto xi = xi_para(in.es, x.beta, in.r, t);
    CHECK(max_abs(xi.v[2]) == 0.0);
    CHECK(max_abs(xi.v[0] - xi.v[4]) < 1e-10);
    CHECK(max_abs(xi.v[1] - xi.v[3]) < 1e-10);
    for (const auto& m : xi.v) {
      CHECK(max_abs(m - m.transpose()) < 1e-10);
      Eigen::SelfAdjointEigenSolver<RMat> se(m);
      CHECK(se.eigenvalues().maxCoeff() <= 1e-10);
    }
    const RMat xd = xi_dia(in.d, in.r);
    for (int k = 0; k < x.d; ++k) CHECK(std::abs(xd(k, k)) <= 2.0);
    CHECK(max_abs(xd - RMat(xd.diagonal().asDiagonal())) == 0.0);

    const auto mu = build_measure(in.es, x.beta, in.r);
    for (const auto& a : mu.atoms) {
      Eigen::SelfAdjointEigenSolver<RMat> se(a.M);
      CHECK(se.eigenvalues().minCoeff() >= -1e-10);
    }
    const auto rec = eval_xi_from_measure(mu, t);
    for (size_t i = 0; i < t.size(); ++i) CHECK(max_abs(rec.v[i] - xi.v[i]) < 1e-9);

    const auto m = moment_norms(mu);
    const auto b = moment_bounds(in.h, in.d, in.r);
    CHECK(m.mass <= std::max(1.0, x.beta) * b.mass + 1e-10);
    CHECK(m.first <= b.first + 1e-10);
    CHECK(m.first <= b.first_alt + 1e-10);
  }
}

TEST_CASE("duhamel identities") {
  for (const auto& x : draws(6)) {
    auto in = make(x);
    const auto r = duhamel_identity_checks(in.h, x.beta, 3, x.seed);
    CHECK(r.auto_bound <= 1e-10);
    CHECK(r.commutator <= 1e-9);
    CHECK(r.stationarity <= 1e-9);
    CHECK(r.time_reversal <= 1e-9);
  }
}

TEST_CASE("heat form and resistivity") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (const auto& x : draws(6)) {
    auto in = make(x);
    const auto mu = build_measure(in.es, x.beta, in.r);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(x.d);
    w[0] = 1.0;
    ACFieldSpace sp{0.0, 1.0 + 2.0 * std::abs(g(rng)), 3};
    const auto Q = heat_form(mu, w, sp);
    Eigen::SelfAdjointEigenSolver<RMat> se(Q.Q);
    CHECK(se.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, se.eigenvalues().maxCoeff()));
    Eigen::VectorXd E(6), E1(6);
    for (int i = 0; i < 6; ++i) {
      E[i] = g(rng);
      E1[i] = g(rng);
    }
    CHECK(Q(E + E1) - Q(E) == doctest::Approx(2 * conductivity_map(Q, E).dot(E1) + Q(E1)).epsilon(1e-10));
    const Eigen::VectorXd J = conductivity_map(Q, E);
    const auto r = resistivity_map(Q, J);
    CHECK(r.in_domain);
    CHECK((conductivity_map(Q, r.rho) - J).norm() <= 1e-8 * std::max(1.0, J.norm()));
    CHECK(r.qstar >= -1e-12);
    // Fenchel-Young: <J, E> <= Q(E)/2 + Q*(J)/2 with equality at E = rho(J)
    CHECK(J.dot(E1) <= 0.5 * Q(E1) + 0.5 * r.qstar + 1e-9);
  }
}

TEST_CASE("driven runs are passive") {
  int runs = 0;
  for (const auto& x : draws(6)) {
    if (x.d != 1) continue;
    ++runs;
    auto in = make(x);
    FieldProfile f;
    f.t0 = 0.0;
    f.t1 = 0.5;
    f.l = x.l;
    const double eta = 0.3;
    DrivenHamiltonian H(in.box, in.pot, x.lambda, f, eta);
    const auto run = run_drive(H, in.d, in.r, 1.0, 1e-3, 10);
    double worst = 0;
    for (double s : run.ledger.S) worst = std::max(worst, -s);
    CHECK(worst <= 1e-10);
    CHECK((H.at(0.9) - in.h).cwiseAbs().maxCoeff() <= 1e-14);
    // particle number is conserved
    CHECK(run.d_final.trace().real() == doctest::Approx(in.d.trace().real()).epsilon(1e-10));
  }
  CHECK(runs >= 2);
}
