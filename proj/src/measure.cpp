#include "lft/measure.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lft {

RMat SpectralMeasure::total() const {
  RMat T = RMat::Zero(dim, dim);
  for (const auto& a : atoms) T += a.M;
  return T;
}

RMat SpectralMeasure::zero_atom() const {
  for (const auto& a : atoms)
    if (a.nu == 0.0) return a.M;
  return RMat::Zero(dim, dim);
}

double SpectralMeasure::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms)
    if (a.nu != 0.0) g = std::min(g, std::abs(a.nu));
  return g;
}

SpectralMeasure build_measure(const EigenSystem& es, double beta, const Region& r, double cluster_tol) {
  const int n = es.size(), dim = r.dim;
  if (r.n != n) throw std::invalid_argument("build_measure: box mismatch");
  SpectralMeasure mu;
  mu.dim = dim;
  bool has_bonds = false;
  for (const auto& b : r.bonds) has_bonds = has_bonds || !b.empty();
  if (!has_bonds || n == 0) return mu;

  std::vector<CMat> a(dim);
  for (int k = 0; k < dim; ++k) a[k] = to_eigenbasis(es, current_operator(r, k).b);
  const double tol = cluster_tol * std::max(1.0, es.E[n - 1] - es.E[0]);

  auto weight = [&](int m, int p) {
    const double K = duhamel_kernel(es.E[m], es.E[p], beta);
    RMat W(dim, dim);
    for (int k = 0; k < dim; ++k)
      for (int q = 0; q < dim; ++q) W(k, q) = (K * std::conj(a[k](p, m)) * a[q](p, m)).real();
    return RMat((W + W.transpose()) / (2.0 * r.sites));
  };

  RMat zero = RMat::Zero(dim, dim);
  std::vector<std::pair<double, RMat>> pos;
  for (int m = 0; m < n; ++m) {
    zero += weight(m, m);
    for (int p = m + 1; p < n; ++p) {
      const double nu = es.E[p] - es.E[m];
      RMat W = weight(m, p);
      if (nu <= tol)
        zero += 2.0 * W;
      else
        pos.emplace_back(nu, std::move(W));
    }
  }
  std::stable_sort(pos.begin(), pos.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<Atom> up;
  for (size_t i = 0; i < pos.size();) {
    size_t j = i;
    double sum_nu = 0;
    RMat W = RMat::Zero(dim, dim);
    while (j < pos.size() && pos[j].first - pos[i].first <= tol) {
      sum_nu += pos[j].first;
      W += pos[j].second;
      ++j;
    }
    up.push_back({sum_nu / static_cast<double>(j - i), W});
    i = j;
  }
  for (auto it = up.rbegin(); it != up.rend(); ++it) mu.atoms.push_back({-it->nu, it->M});
  mu.atoms.push_back({0.0, zero});
  for (const auto& at : up) mu.atoms.push_back(at);
  return mu;
}

TransportKernel eval_xi_from_measure(const SpectralMeasure& mu, const std::vector<double>& t) {
  TransportKernel out{t, std::vector<RMat>(t.size(), RMat::Zero(mu.dim, mu.dim))};
  for (size_t j = 0; j < t.size(); ++j)
    for (const auto& a : mu.atoms)
      if (a.nu != 0.0) out.v[j] += (std::cos(a.nu * t[j]) - 1.0) * a.M;
  return out;
}

namespace {

double op_norm(const RMat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RMat> s(M);
  return s.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Moments moment_norms(const SpectralMeasure& mu) {
  Moments m;
  for (const auto& a : mu.atoms) {
    const double nrm = op_norm(a.M);
    m.mass += nrm;
    m.first += std::abs(a.nu) * nrm;
  }
  return m;
}

MomentBounds moment_bounds(const CMat& h, const CMat& d, const Region& r) {
  MomentBounds b;
  for (int k = 0; k < r.dim; ++k) {
    Quadratic I = current_operator(r, k);
    I.offset = -expectation(d, I);
    const double i2 = second_moment(d, I, I).real();
    const Quadratic dI = derivation(h, I);
    const double di2 = second_moment(d, dI, dI).real();
    b.mass += i2;
    b.first += 2.0 * i2;
    b.first_alt += 2.0 * std::sqrt(std::max(0.0, i2)) * std::sqrt(std::max(0.0, di2));
  }
  b.mass /= r.sites;
  b.first /= r.sites;
  b.first_alt /= r.sites;
  return b;
}

SpectralMeasure full_conductivity_measure(const SpectralMeasure& mu_p, const RMat& xi_d) {
  SpectralMeasure mu = mu_p;
  mu.dim = static_cast<int>(xi_d.rows());
  const RMat shift = xi_d - (mu_p.atoms.empty() ? RMat::Zero(mu.dim, mu.dim) : mu_p.total());
  for (auto& a : mu.atoms)
    if (a.nu == 0.0) {
      a.M += shift;
      return mu;
    }
  auto it = std::lower_bound(mu.atoms.begin(), mu.atoms.end(), 0.0,
                             [](const Atom& a, double v) { return a.nu < v; });
  mu.atoms.insert(it, Atom{0.0, shift});
  return mu;
}

RMat laplace_viscosity(const SpectralMeasure& mu_p, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("laplace_viscosity: eps must be positive");
  RMat L = RMat::Zero(mu_p.dim, mu_p.dim);
  for (const auto& a : mu_p.atoms)
    if (a.nu != 0.0) L -= a.nu * a.nu / (a.nu * a.nu + eps * eps) * a.M;
  return L;
}

RMat laplace_viscosity(const TransportKernel& V, const RMat& xi_d, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("laplace_viscosity: eps must be positive");
  if (V.t.empty() || V.t.front() != 0.0) throw std::invalid_argument("laplace_viscosity: grid must start at 0");
  RMat L = RMat::Zero(xi_d.rows(), xi_d.cols());
  for (size_t i = 1; i < V.t.size(); ++i) {
    const double h = V.t[i] - V.t[i - 1];
    L += 0.5 * h * (std::exp(-eps * V.t[i - 1]) * V.v[i - 1] + std::exp(-eps * V.t[i]) * V.v[i]);
  }
  return xi_d * L;
}

RMat static_admittance(const SpectralMeasure& mu_p, double eps) { return -laplace_viscosity(mu_p, eps); }

RMat static_admittance_limit(const SpectralMeasure& mu_p) { return mu_p.off_zero(); }

RMat cesaro_mean(const TransportKernel& xi_p, double T) {
  if (!(T > 0)) throw std::invalid_argument("cesaro_mean: T must be positive");
  if (xi_p.t.empty() || xi_p.t.front() != 0.0) throw std::invalid_argument("cesaro_mean: grid must start at 0");
  if (T > xi_p.t.back() * (1 + 1e-12)) throw std::invalid_argument("cesaro_mean: T exceeds grid");
  RMat acc = RMat::Zero(xi_p.v[0].rows(), xi_p.v[0].cols());
  for (size_t i = 1; i < xi_p.t.size(); ++i) {
    const double a = xi_p.t[i - 1], b = std::min(xi_p.t[i], T);
    if (b <= a) break;
    const double frac = (b - a) / (xi_p.t[i] - a);
    const RMat fb = xi_p.v[i - 1] + frac * (xi_p.v[i] - xi_p.v[i - 1]);
    acc += 0.5 * (b - a) * (xi_p.v[i - 1] + fb);
  }
  return acc / T;
}

double richardson3(double f1, double f2, double f4) { return (8.0 * f4 - 6.0 * f2 + f1) / 3.0; }

double pair_with_measure(const SpectralMeasure& mu, const Eigen::VectorXd& w, const std::function<double(double)>& f) {
  double acc = 0;
  for (const auto& a : mu.atoms) acc += f(a.nu) * w.dot(a.M * w);
  return acc;
}

double reconstruct_from_viscosity(const SpectralMeasure& mu_p, const Eigen::VectorXd& w,
                                  const std::function<double(double)>& ehat, double nu_lo, double nu_hi,
                                  const std::vector<double>& eps) {
  if (eps.size() != 3) throw std::invalid_argument("reconstruct_from_viscosity: need eps, eps/2, eps/4");
  if (std::abs(ehat(0.0)) > 1e-12) throw std::invalid_argument("reconstruct_from_viscosity: Ehat(0) must vanish");
  std::vector<std::pair<double, double>> at;
  for (const auto& a : mu_p.atoms)
    if (a.nu != 0.0) at.emplace_back(a.nu, w.dot(a.M * w));
  std::vector<double> val;
  for (double e : eps) {
    if (!(e > 0)) throw std::invalid_argument("reconstruct_from_viscosity: eps must be positive");
    auto g = [&](double nu) {
      double acc = 0;
      for (auto [a, m] : at) {
        const double ap = a + nu, am = a - nu;
        const double C = 0.5 * (ap / (ap * ap + e * e) + am / (am * am + e * e));
        const double S = 0.5 * (e / (am * am + e * e) - e / (ap * ap + e * e));
        acc += -a * m * (e * C - nu * S);
      }
      return acc / (nu * nu + e * e);
    };
    const int panels = std::max(1, static_cast<int>(std::ceil((nu_hi - nu_lo) / (0.25 * e))));
    const double len = (nu_hi - nu_lo) / panels;
    double acc = 0;
    for (int p = 0; p < panels; ++p) {
      auto [x, wt] = gauss_legendre(8, nu_lo + p * len, nu_lo + (p + 1) * len);
      for (int q = 0; q < 8; ++q) acc += wt[q] * ehat(x[q]) * g(x[q]);
    }
    val.push_back(acc / M_PI);
  }
  return richardson3(val[0], val[1], val[2]);
}

Nontriviality nontriviality_check(const SpectralMeasure& mu_p, const CMat* h, const Region* r) {
  Nontriviality out;
  if (!mu_p.atoms.empty()) out.off_zero_trace = mu_p.off_zero().trace();
  out.nontrivial = out.off_zero_trace > 1e-12;
  if (h && r)
    for (int k = 0; k < r->dim; ++k) out.generator_norm.push_back(derivation(*h, current_operator(*r, k)).b.norm());
  return out;
}

}  // namespace lft
