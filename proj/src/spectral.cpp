#include "lft/spectral.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace lft {

void check_hermitian(const CMat& H, double tol, const char* what) {
  if (H.rows() != H.cols()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

EigenSystem eigendecompose(const CMat& H) {
  check_hermitian(H, 1e-10, "eigendecompose");
  Eigen::SelfAdjointEigenSolver<CMat> solver(H);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double fermi(double e, double beta) {
  const double x = beta * e;
  if (x > 0) {
    const double q = std::exp(-x);
    return q / (1.0 + q);
  }
  return 1.0 / (1.0 + std::exp(x));
}

CMat fermi_symbol(const EigenSystem& es, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("fermi_symbol: beta must be positive");
  Eigen::VectorXd f(es.size());
  for (int m = 0; m < es.size(); ++m) f[m] = fermi(es.E[m], beta);
  return es.phi * f.asDiagonal() * es.phi.adjoint();
}

cplx complex_time_correlation(const EigenSystem& es, double beta, double t, double alpha, const Bond& x) {
  if (alpha < 0 || alpha > beta) throw std::invalid_argument("complex_time_correlation: alpha outside [0, beta]");
  cplx acc = 0;
  for (int m = 0; m < es.size(); ++m) {
    const double e = es.E[m];
    // e^{alpha e} / (1 + e^{beta e}) without overflow
    const double F = e > 0 ? std::exp((alpha - beta) * e) / (1.0 + std::exp(-beta * e))
                           : std::exp(alpha * e) / (1.0 + std::exp(beta * e));
    acc += std::polar(F, -t * e) * es.phi(x.x2, m) * std::conj(es.phi(x.x1, m));
  }
  return acc;
}

cplx expectation(const CMat& d, const Quadratic& B) {
  if (d.rows() != B.b.rows() || d.cols() != B.b.cols())
    throw std::invalid_argument("expectation: shape mismatch");
  return (B.b.cwiseProduct(d.transpose())).sum() + B.offset;
}

cplx second_moment(const CMat& d, const Quadratic& A, const Quadratic& B) {
  const CMat one = CMat::Identity(d.rows(), d.cols());
  const cplx wa = expectation(d, A);
  const cplx wb = expectation(d, B);
  return std::conj(wa) * wb + (d * A.b.adjoint() * (one - d) * B.b).trace();
}

double duhamel_kernel(double em, double en, double beta) {
  if (em > en) std::swap(em, en);
  // em <= en, delta <= 0
  const double delta = em - en;
  const double fm = fermi(em, beta), fn = fermi(en, beta);
  if (-delta * beta < 1e-12) return beta * fm * (1.0 - fm);
  return fm * (1.0 - fn) * std::expm1(beta * delta) / delta;
}

CMat to_eigenbasis(const EigenSystem& es, const CMat& b) { return es.phi.adjoint() * b * es.phi; }

cplx duhamel_evolved(const EigenSystem& es, double beta, const Quadratic& A, const Quadratic& B, double t) {
  if (A.b.rows() != es.size() || B.b.rows() != es.size()) throw std::invalid_argument("duhamel: box mismatch");
  const CMat a = to_eigenbasis(es, A.b), b = to_eigenbasis(es, B.b);
  cplx wa = A.offset, wb = B.offset;
  for (int m = 0; m < es.size(); ++m) {
    const double f = fermi(es.E[m], beta);
    wa += a(m, m) * f;
    wb += b(m, m) * f;
  }
  cplx acc = beta * std::conj(wa) * wb;
  const int n = es.size();
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      // (tau_t b)_{km} = e^{it(E_k - E_m)} b_{km}
      const cplx phase = t == 0.0 ? cplx(1.0) : std::polar(1.0, t * (es.E[k] - es.E[m]));
      acc += duhamel_kernel(es.E[m], es.E[k], beta) * std::conj(a(k, m)) * b(k, m) * phase;
    }
  return acc;
}

cplx duhamel(const EigenSystem& es, double beta, const Quadratic& A, const Quadratic& B) {
  return duhamel_evolved(es, beta, A, B, 0.0);
}

Quadratic heisenberg(const EigenSystem& es, const Quadratic& B, double t) {
  Eigen::VectorXcd ph(es.size());
  for (int m = 0; m < es.size(); ++m) ph[m] = std::polar(1.0, t * es.E[m]);
  const CMat U = es.phi * ph.asDiagonal() * es.phi.adjoint();
  return {U * B.b * U.adjoint(), B.offset};
}

Quadratic derivation(const CMat& h, const Quadratic& B) {
  return {cplx(0, 1) * (h * B.b - B.b * h), cplx(0.0)};
}

namespace {

CMat random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = cplx(g(rng), g(rng));
  return b;
}

double rel(cplx diff, double scale) { return std::abs(diff) / std::max(1.0, scale); }

}  // namespace

DuhamelChecks duhamel_identity_checks(const CMat& h, double beta, int samples, std::uint64_t seed,
                                      const std::vector<double>& times) {
  if (samples < 1) throw std::invalid_argument("duhamel_identity_checks: samples must be >= 1");
  const EigenSystem es = eigendecompose(h);
  const CMat d = fermi_symbol(es, beta);
  const int n = es.size();
  const bool real_h = h.imag().cwiseAbs().maxCoeff() < 1e-14;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DuhamelChecks out;
  for (int s = 0; s < samples; ++s) {
    CMat a = random_matrix(n, rng);
    const Quadratic B{0.5 * (a + a.adjoint()), cplx(g(rng), 0.0)};
    const double bb = duhamel(es, beta, B, B).real();
    const double rhs = beta * second_moment(d, B, B).real();
    out.auto_bound = std::max(out.auto_bound, std::max(0.0, bb - rhs) / std::max(1.0, std::abs(rhs)));

    const Quadratic dB = derivation(h, B);
    out.stationarity = std::max(out.stationarity, rel(duhamel(es, beta, B, dB), bb));

    const Quadratic B1{random_matrix(n, rng), cplx(g(rng), g(rng))};
    const Quadratic B2{random_matrix(n, rng), cplx(g(rng), g(rng))};
    const cplx lhs = cplx(0, -1) * duhamel(es, beta, B1, derivation(h, B2));
    const CMat b1s = B1.b.adjoint();
    const cplx tr = ((b1s * B2.b - B2.b * b1s) * d).trace();
    out.commutator = std::max(out.commutator, rel(lhs - tr, std::abs(tr)));

    if (!real_h) continue;
    // real symmetric (Theta-even) or imaginary antisymmetric (Theta-odd) coefficients, same class per pair
    const bool odd = s % 2 == 1;
    auto theta_class = [&](CMat m) -> CMat {
      Eigen::MatrixXd r = m.real();
      if (!odd) return (0.5 * (r + r.transpose())).cast<cplx>();
      return cplx(0, 1) * (0.5 * (r - r.transpose())).cast<cplx>();
    };
    const Quadratic C1{theta_class(random_matrix(n, rng)), 0.0};
    const Quadratic C2{theta_class(random_matrix(n, rng)), 0.0};
    for (double t : times) {
      const cplx f12 = duhamel_evolved(es, beta, C1, C2, t);
      const cplx f12m = duhamel_evolved(es, beta, C1, C2, -t);
      const cplx f21 = duhamel_evolved(es, beta, C2, C1, t);
      const double sc = std::abs(f12);
      out.time_reversal = std::max({out.time_reversal, rel(f12.imag(), sc), rel(f12 - f12m, sc), rel(f12 - f21, sc)});
    }
  }
  return out;
}

}  // namespace lft
