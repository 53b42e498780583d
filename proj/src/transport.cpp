#include "lft/transport.h"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace lft {

Quadratic bond_current(int n, const Bond& x) {
  Quadratic q{CMat::Zero(n, n)};
  q.b(x.x2, x.x1) += cplx(0, 1);
  q.b(x.x1, x.x2) += cplx(0, -1);
  return q;
}

Quadratic bond_adjacency(int n, const Bond& x) {
  Quadratic q{CMat::Zero(n, n)};
  q.b(x.x2, x.x1) += -1.0;
  q.b(x.x1, x.x2) += -1.0;
  return q;
}

Region averaging_region(const LatticeBox& box, int l) {
  if (l < 0) throw std::invalid_argument("averaging_region: l must be >= 0");
  if (l >= box.radius) throw std::invalid_argument("averaging_region: averaging box exceeds simulation box");
  Region r;
  r.dim = box.dim;
  r.n = box.n;
  r.bonds.resize(box.dim);
  const LatticeBox inner = make_box(box.dim, l);
  r.sites = inner.n;
  for (int i = 0; i < inner.n; ++i) {
    const int x = box.index(inner.coord(i));
    for (int k = 0; k < box.dim; ++k) r.bonds[k].push_back({box.shift(x, k, 1), x});
  }
  return r;
}

Quadratic current_operator(const Region& r, int k) {
  if (k < 0 || k >= r.dim) throw std::invalid_argument("current_operator: direction out of range");
  Quadratic q{CMat::Zero(r.n, r.n)};
  for (const auto& x : r.bonds[k]) q.b += bond_current(r.n, x).b;
  return q;
}

Quadratic adjacency_operator(const Region& r, int k) {
  if (k < 0 || k >= r.dim) throw std::invalid_argument("adjacency_operator: direction out of range");
  Quadratic q{CMat::Zero(r.n, r.n)};
  for (const auto& x : r.bonds[k]) q.b += bond_adjacency(r.n, x).b;
  return q;
}

Quadratic current_operator(const LatticeBox& box, int k, int l) {
  return current_operator(averaging_region(box, l), k);
}

Quadratic adjacency_operator(const LatticeBox& box, int k, int l) {
  return adjacency_operator(averaging_region(box, l), k);
}

namespace {

// eigenbasis matrix of a single bond current
CMat bond_current_eigen(const EigenSystem& es, const Bond& x) {
  const int n = es.size();
  CMat a(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      a(k, m) = cplx(0, 1) * (std::conj(es.phi(x.x2, k)) * es.phi(x.x1, m) -
                              std::conj(es.phi(x.x1, k)) * es.phi(x.x2, m));
  return a;
}

}  // namespace

std::vector<double> sigma_para(const EigenSystem& es, double beta, const Bond& x, const Bond& y,
                               const std::vector<double>& t) {
  const int n = es.size();
  if (x.x1 >= n || x.x2 >= n || y.x1 >= n || y.x2 >= n) throw std::invalid_argument("sigma_para: bond outside box");
  const CMat ax = bond_current_eigen(es, x), ay = bond_current_eigen(es, y);
  std::vector<double> out(t.size(), 0.0);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const cplx c = duhamel_kernel(es.E[m], es.E[k], beta) * std::conj(ay(k, m)) * ax(k, m);
      const double nu = es.E[k] - es.E[m];
      for (size_t j = 0; j < t.size(); ++j)
        out[j] += c.real() * (std::cos(nu * t[j]) - 1.0) - c.imag() * std::sin(nu * t[j]);
    }
  return out;
}

double sigma_dia(const CMat& d, const Bond& x) {
  return expectation(d, bond_adjacency(static_cast<int>(d.rows()), x)).real();
}

TransportKernel xi_para(const EigenSystem& es, double beta, const Region& r, const std::vector<double>& t) {
  const int n = es.size(), dim = r.dim;
  if (r.n != n) throw std::invalid_argument("xi_para: box mismatch");
  std::vector<CMat> a(dim);
  for (int k = 0; k < dim; ++k) a[k] = to_eigenbasis(es, current_operator(r, k).b);
  TransportKernel out{t, std::vector<RMat>(t.size(), RMat::Zero(dim, dim))};
  std::vector<cplx> c(dim * dim);
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p) {
      const double K = duhamel_kernel(es.E[m], es.E[p], beta);
      bool any = false;
      for (int k = 0; k < dim; ++k)
        for (int q = 0; q < dim; ++q) {
          c[k * dim + q] = K * std::conj(a[k](p, m)) * a[q](p, m);
          any = any || std::abs(c[k * dim + q]) > 0.0;
        }
      if (!any) continue;
      const double nu = es.E[p] - es.E[m];
      for (size_t j = 0; j < t.size(); ++j) {
        const double cs = std::cos(nu * t[j]) - 1.0, sn = std::sin(nu * t[j]);
        for (int k = 0; k < dim; ++k)
          for (int q = 0; q < dim; ++q) {
            const cplx& v = c[k * dim + q];
            out.v[j](k, q) += v.real() * cs - v.imag() * sn;
          }
      }
    }
  for (auto& M : out.v) M /= r.sites;
  return out;
}

TransportKernel xi_para_commutator(const CMat& h, const CMat& d, const Region& r, const std::vector<double>& t,
                                   int nodes_per_unit) {
  const int dim = r.dim;
  std::vector<CMat> a(dim);
  for (int k = 0; k < dim; ++k) a[k] = current_operator(r, k).b;
  auto integrand = [&](double s) {
    const CMat U = (cplx(0, s) * h).exp();
    RMat M(dim, dim);
    for (int q = 0; q < dim; ++q) {
      const CMat bq = U * a[q] * U.adjoint();
      for (int k = 0; k < dim; ++k) M(k, q) = (cplx(0, 1) * (d * (a[k] * bq - bq * a[k])).trace()).real();
    }
    return M;
  };
  const int order = 16;
  const double piece = static_cast<double>(order) / nodes_per_unit;
  TransportKernel out{t, {}};
  RMat acc = RMat::Zero(dim, dim);
  double prev = 0.0;
  for (double tj : t) {
    if (tj < prev) throw std::invalid_argument("xi_para_commutator: grid must be ascending and non-negative");
    const int m = std::max(1, static_cast<int>(std::ceil((tj - prev) / piece)));
    const double len = (tj - prev) / m;
    for (int i = 0; i < m && tj > prev; ++i) {
      auto [x, w] = gauss_legendre(order, prev + i * len, prev + (i + 1) * len);
      for (int q = 0; q < order; ++q) acc += w[q] * integrand(x[q]);
    }
    prev = tj;
    out.v.push_back(acc / r.sites);
  }
  return out;
}

RMat xi_dia(const CMat& d, const Region& r) {
  RMat X = RMat::Zero(r.dim, r.dim);
  for (int k = 0; k < r.dim; ++k) X(k, k) = expectation(d, adjacency_operator(r, k)).real() / r.sites;
  return X;
}

TransportKernel viscosity(const TransportKernel& xi_p, const RMat& xi_d) {
  const int N = static_cast<int>(xi_p.t.size());
  if (N < 5) throw std::invalid_argument("viscosity: need at least 5 samples");
  const double h = xi_p.t[1] - xi_p.t[0];
  for (int i = 1; i < N; ++i)
    if (std::abs(xi_p.t[i] - xi_p.t[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("viscosity: grid must be uniform");
  for (int k = 0; k < xi_d.rows(); ++k)
    if (std::abs(xi_d(k, k)) <= 1e-10) throw std::runtime_error("viscosity: Xi_d is singular");
  const RMat inv = xi_d.inverse();
  const auto& f = xi_p.v;
  TransportKernel out{xi_p.t, std::vector<RMat>(N)};
  for (int i = 0; i < N; ++i) {
    RMat df;
    if (i >= 2 && i <= N - 3)
      df = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    else if (i == 0)
      df = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    else if (i == 1)
      df = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    else if (i == N - 2)
      df = (3.0 * f[N - 1] + 10.0 * f[N - 2] - 18.0 * f[N - 3] + 6.0 * f[N - 4] - f[N - 5]) / (12.0 * h);
    else
      df = (25.0 * f[N - 1] - 48.0 * f[N - 2] + 36.0 * f[N - 3] - 16.0 * f[N - 4] + 3.0 * f[N - 5]) / (12.0 * h);
    out.v[i] = inv * df;
  }
  return out;
}

std::vector<double> uniform_grid(double a, double b, int points) {
  if (points < 2) return {a};
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = a + (b - a) * i / (points - 1);
  return g;
}

}  // namespace lft
