#include "lft/response.h"

#include <cmath>
#include <stdexcept>

namespace lft {

namespace {

bool uniform_from_zero(const std::vector<double>& t, double& h) {
  if (t.size() < 2 || t.front() != 0.0) return false;
  h = t[1] - t[0];
  for (size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * h) return false;
  return h > 0;
}

void check_symmetric_uniform(const std::vector<double>& nu, const char* what) {
  if (nu.size() < 3) throw std::invalid_argument(std::string(what) + ": grid too small");
  const double h = nu[1] - nu[0];
  const size_t n = nu.size();
  for (size_t i = 1; i < n; ++i)
    if (std::abs(nu[i] - nu[i - 1] - h) > 1e-9 * std::abs(h) || !(h > 0))
      throw std::invalid_argument(std::string(what) + ": non-uniform grid");
  for (size_t i = 0; i < n; ++i)
    if (std::abs(nu[i] + nu[n - 1 - i]) > 1e-9 * h)
      throw std::invalid_argument(std::string(what) + ": grid not symmetric");
}

// int_0^T e^{-i k u} du
cplx phase_integral(double k, double T) {
  if (std::abs(k * T) < 1e-6) return cplx(T, -0.5 * k * T * T);
  return (1.0 - std::polar(1.0, -k * T)) / cplx(0, k);
}

}  // namespace

SigmaKernel sigma_kernel(const TransportKernel& xi_p, const RMat& xi_d, const std::vector<double>& t_grid) {
  const size_t n = t_grid.size();
  if (n % 2 == 0) throw std::invalid_argument("sigma_kernel: grid mismatch (symmetric grid needs odd size)");
  const size_t mid = n / 2;
  if (xi_p.t.size() != mid + 1) throw std::invalid_argument("sigma_kernel: grid mismatch");
  for (size_t i = 0; i <= mid; ++i) {
    const double scale = std::max(1.0, std::abs(t_grid.back()));
    if (std::abs(t_grid[mid + i] - xi_p.t[i]) > 1e-12 * scale || std::abs(t_grid[mid - i] + xi_p.t[i]) > 1e-12 * scale)
      throw std::invalid_argument("sigma_kernel: grid mismatch");
  }
  SigmaKernel s;
  s.causal.t = s.even.t = s.odd.t = t_grid;
  const RMat zero = RMat::Zero(xi_d.rows(), xi_d.cols());
  s.causal.v.assign(n, zero);
  for (size_t i = 0; i <= mid; ++i) s.causal.v[mid + i] = xi_d + xi_p.v[i];
  s.even.v.assign(n, zero);
  s.odd.v.assign(n, zero);
  for (size_t i = 0; i < n; ++i) {
    s.even.v[i] = 0.5 * (s.causal.v[i] + s.causal.v[n - 1 - i]);
    s.odd.v[i] = 0.5 * (s.causal.v[i] - s.causal.v[n - 1 - i]);
  }
  return s;
}

LinearCurrents linear_currents(const TransportKernel& xi_p, const RMat& xi_d, const Eigen::VectorXd& w,
                               const std::function<double(double)>& efield, double t0, double t) {
  const int dim = static_cast<int>(xi_d.rows());
  if (w.size() != dim) throw std::invalid_argument("linear_currents: w has wrong dimension");
  LinearCurrents out{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim)};
  if (t <= t0) return out;
  double h = 0;
  if (!uniform_from_zero(xi_p.t, h)) throw std::invalid_argument("linear_currents: kernel grid must be uniform from 0");
  const double span = t - t0;
  if (span > xi_p.t.back() * (1 + 1e-12)) throw std::invalid_argument("linear_currents: insufficient grid coverage");
  const int N = std::min(static_cast<int>(xi_p.t.size()) - 1, static_cast<int>(std::floor(span / h + 1e-9)));
  double area = 0;
  for (int i = 0; i <= N; ++i) {
    const double wt = (i == 0 || i == N) ? 0.5 * h : h;
    const double e = efield(t - i * h);
    out.Jp += wt * e * (xi_p.v[i] * w);
    area += wt * e;
  }
  const double rest = span - N * h;
  if (rest > 1e-12 * h && N + 1 < static_cast<int>(xi_p.t.size())) {
    const double frac = rest / h;
    const RMat kend = xi_p.v[N] + frac * (xi_p.v[N + 1] - xi_p.v[N]);
    const double ea = efield(t - N * h), eb = efield(t0);
    out.Jp += 0.5 * rest * (ea * (xi_p.v[N] * w) + eb * (kend * w));
    area += 0.5 * rest * (ea + eb);
  }
  if (N == 0 && rest <= 1e-12 * h) out.Jp.setZero();
  out.Jd = xi_d * w * area;
  out.J = out.Jp + out.Jd;
  return out;
}

LinearCurrents linear_currents(const TransportKernel& xi_p, const RMat& xi_d, const FieldProfile& field, double t) {
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(field.w.data(), field.w.size());
  LinearCurrents out =
      linear_currents(xi_p, xi_d, w, [&](double s) { return field.efield(s); }, field.t0, t);
  out.Jd = xi_d * w * (t <= field.t0 ? 0.0 : -field.envelope(t));
  out.J = out.Jp + out.Jd;
  return out;
}

LinearCurrents linear_currents(const std::function<RMat(double)>& xi_p, const RMat& xi_d, const Eigen::VectorXd& w,
                               const std::function<double(double)>& efield, double t0, double t, int panels) {
  const int dim = static_cast<int>(xi_d.rows());
  if (w.size() != dim) throw std::invalid_argument("linear_currents: w has wrong dimension");
  LinearCurrents out{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim)};
  if (t <= t0) return out;
  const double len = (t - t0) / panels;
  double area = 0;
  for (int p = 0; p < panels; ++p) {
    auto [x, wt] = gauss_legendre(16, t0 + p * len, t0 + (p + 1) * len);
    for (int q = 0; q < 16; ++q) {
      const double e = efield(x[q]);
      if (e == 0.0) continue;
      out.Jp += wt[q] * e * (xi_p(t - x[q]) * w);
      area += wt[q] * e;
    }
  }
  out.Jd = xi_d * w * area;
  out.J = out.Jp + out.Jd;
  return out;
}

LinearResponseSeries linear_response_series(const SpectralMeasure& mu_p, const RMat& xi_d, const FieldProfile& field,
                                            double tf, int steps) {
  if (steps < 1 || !(tf > field.t0)) throw std::invalid_argument("linear_response_series: bad grid");
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(field.w.data(), field.w.size());
  if (w.size() != xi_d.rows()) throw std::invalid_argument("linear_response_series: w has wrong dimension");
  std::vector<double> nus, ms;
  std::vector<Eigen::VectorXd> mw;
  for (const auto& at : mu_p.atoms) {
    if (at.nu == 0.0) continue;
    nus.push_back(at.nu);
    mw.push_back(at.M * w);
    ms.push_back(w.dot(at.M * w));
  }
  const size_t na = nus.size();
  const double h = (tf - field.t0) / steps;
  std::vector<cplx> C(na, 0.0);
  LinearResponseSeries out;
  const Eigen::VectorXd dw = xi_d * w;
  for (int k = 0; k <= steps; ++k) {
    const double t = field.t0 + k * h;
    if (k > 0) {
      auto [x, wt] = gauss_legendre(6, t - h, t);
      for (int q = 0; q < 6; ++q) {
        const double ew = wt[q] * field.efield(x[q]);
        if (ew == 0.0) continue;
        for (size_t i = 0; i < na; ++i) C[i] += ew * std::polar(1.0, -nus[i] * x[q]);
      }
    }
    const double a = -field.envelope(t);
    Eigen::VectorXd J = Eigen::VectorXd::Zero(w.size());
    double g = 0;
    for (size_t i = 0; i < na; ++i) {
      J += (std::real(std::polar(1.0, nus[i] * t) * C[i]) - a) * mw[i];
      g += 0.5 * ms[i] * (std::norm(C[i]) - a * a);
    }
    out.t.push_back(t);
    out.a.push_back(a);
    out.G.push_back(g);
    out.Jp.push_back(J);
    out.Jd.push_back(a * dw);
  }
  for (size_t i = 0; i < na; ++i) out.pairing += std::norm(C[i]) * ms[i];
  if (tf < field.t1) out.pairing = 0.0;
  return out;
}

std::vector<LinearCurrents> linear_current_series(const TransportKernel& xi_p, const RMat& xi_d,
                                                  const Eigen::VectorXd& w, const std::vector<double>& efield) {
  double h = 0;
  if (!uniform_from_zero(xi_p.t, h)) throw std::invalid_argument("linear_current_series: kernel grid must be uniform from 0");
  const size_t N = efield.size();
  if (xi_p.t.size() < N) throw std::invalid_argument("linear_current_series: insufficient grid coverage");
  const int dim = static_cast<int>(xi_d.rows());
  std::vector<Eigen::VectorXd> kw(N);
  for (size_t j = 0; j < N; ++j) kw[j] = xi_p.v[j] * w;
  std::vector<LinearCurrents> out(N);
  double area = 0;
  for (size_t k = 0; k < N; ++k) {
    Eigen::VectorXd Jp = Eigen::VectorXd::Zero(dim);
    for (size_t i = 0; i <= k; ++i) {
      const double wt = (i == 0 || i == k) ? 0.5 * h : h;
      Jp += (wt * efield[i]) * kw[k - i];
    }
    if (k == 0) Jp.setZero();
    if (k > 0) area += 0.5 * h * (efield[k - 1] + efield[k]);
    out[k].Jp = Jp;
    out[k].Jd = xi_d * w * area;
    out[k].J = out[k].Jp + out[k].Jd;
  }
  return out;
}

std::vector<cplx> hilbert_transform(const std::vector<double>& nu, const std::vector<cplx>& f) {
  if (nu.size() != f.size()) throw std::invalid_argument("hilbert_transform: size mismatch");
  check_symmetric_uniform(nu, "hilbert_transform");
  const int n = static_cast<int>(nu.size());
  // Maclaurin: odd offsets only, weight 2/m
  std::vector<double> k(2 * n - 1, 0.0);
  for (int m = -(n - 1); m <= n - 1; ++m)
    if (m % 2) k[m + n - 1] = 2.0 / m;
  std::vector<cplx> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cplx acc = 0;
    for (int j = 0; j < n; ++j) acc += f[j] * k[i - j + n - 1];
    out[i] = -acc / M_PI;
  }
  return out;
}

cplx hilbert_at(const std::vector<double>& nu, const std::vector<cplx>& f, double x) {
  const double h = nu[1] - nu[0];
  cplx acc = 0;
  for (size_t j = 0; j < nu.size(); ++j) {
    const double u = x - nu[j];
    acc += f[j] * (u / (u * u + h * h));
  }
  return -h * acc / M_PI;
}

cplx field_transform(const std::function<double(double)>& efield, double t0, double t1, double nu, int panels) {
  const double len = (t1 - t0) / panels;
  cplx acc = 0;
  for (int p = 0; p < panels; ++p) {
    auto [x, wt] = gauss_legendre(16, t0 + p * len, t0 + (p + 1) * len);
    for (int q = 0; q < 16; ++q) acc += wt[q] * efield(x[q]) * std::polar(1.0, -nu * x[q]);
  }
  return acc;
}

std::vector<double> symmetric_grid(double half_width, int nodes) {
  if (nodes < 3 || !(half_width > 0)) throw std::invalid_argument("symmetric_grid: bad parameters");
  std::vector<double> g(nodes);
  for (int i = 0; i < nodes; ++i) g[i] = -half_width + 2.0 * half_width * i / (nodes - 1);
  for (int i = 0; i < nodes / 2; ++i) g[nodes - 1 - i] = -g[i];
  if (nodes % 2) g[nodes / 2] = 0.0;
  return g;
}

FourierOhm fourier_ohm_current(const SpectralMeasure& mu, const Eigen::VectorXd& w, const FieldProfile& field,
                               double t, const std::vector<double>& nu_grid, double hilbert_sign) {
  check_symmetric_uniform(nu_grid, "fourier_ohm_current");
  const int dim = mu.dim;
  FourierOhm out{Eigen::VectorXd::Zero(dim), 0.0};
  // field samples at composite GL nodes, reused for every frequency
  const int panels = 64;
  std::vector<double> s, ws;
  const double len = (field.t1 - field.t0) / panels;
  for (int p = 0; p < panels; ++p) {
    auto [x, wt] = gauss_legendre(16, field.t0 + p * len, field.t0 + (p + 1) * len);
    for (int q = 0; q < 16; ++q) {
      s.push_back(x[q]);
      ws.push_back(wt[q] * field.efield(x[q]));
    }
  }
  auto ehat_t = [&](double nu) {
    cplx acc = 0;
    for (size_t q = 0; q < s.size(); ++q) acc += ws[q] * std::polar(1.0, nu * (t - s[q]));
    return acc;
  };
  std::vector<cplx> F(nu_grid.size());
  for (size_t j = 0; j < nu_grid.size(); ++j) F[j] = ehat_t(nu_grid[j]);
  Eigen::VectorXcd J = Eigen::VectorXcd::Zero(dim);
  for (const auto& a : mu.atoms) {
    const cplx c = 0.5 * ehat_t(a.nu) + hilbert_sign * cplx(0, 0.5) * hilbert_at(nu_grid, F, a.nu);
    J += c * (a.M * w).cast<cplx>();
  }
  out.J = J.real();
  out.imag_residual = J.imag().norm();
  return out;
}

cplx mu_parallel(const SpectralMeasure& mu, const Eigen::VectorXd& w, const std::function<cplx(double)>& f) {
  cplx acc = 0;
  for (const auto& a : mu.atoms) acc += f(a.nu) * w.dot(a.M * w);
  return 0.5 * acc;
}

cplx mu_perp(const SpectralMeasure& mu, const Eigen::VectorXd& w, const std::vector<double>& nu_grid,
             const std::vector<cplx>& f) {
  check_symmetric_uniform(nu_grid, "mu_perp");
  cplx acc = 0;
  for (const auto& a : mu.atoms) acc += hilbert_at(nu_grid, f, a.nu) * w.dot(a.M * w);
  return 0.5 * acc;
}

double ACFieldSpace::frequency(int j) const { return 2.0 * M_PI * j / (t1 - t0); }

double ACFieldSpace::basis(int i, double t) const {
  if (t < t0 || t > t1) return 0.0;
  if (i < modes) return std::cos(frequency(i + 1) * (t - t0));
  return std::sin(frequency(i - modes + 1) * (t - t0));
}

double ACFieldSpace::value(const Eigen::VectorXd& c, double t) const {
  if (c.size() != size()) throw std::invalid_argument("ACFieldSpace: coefficient size mismatch");
  double v = 0;
  for (int i = 0; i < size(); ++i) v += c[i] * basis(i, t);
  return v;
}

cplx ACFieldSpace::basis_transform(int i, double nu) const {
  const double T = t1 - t0;
  const double om = i < modes ? frequency(i + 1) : frequency(i - modes + 1);
  const cplx shift = std::polar(1.0, -nu * t0);
  if (i < modes) return shift * 0.5 * (phase_integral(nu - om, T) + phase_integral(nu + om, T));
  return shift * (phase_integral(nu - om, T) - phase_integral(nu + om, T)) / cplx(0, 2);
}

cplx ACFieldSpace::transform(const Eigen::VectorXd& c, double nu) const {
  if (c.size() != size()) throw std::invalid_argument("ACFieldSpace: coefficient size mismatch");
  cplx v = 0;
  for (int i = 0; i < size(); ++i) v += c[i] * basis_transform(i, nu);
  return v;
}

double ACFieldSpace::mean(const Eigen::VectorXd& c) const { return transform(c, 0.0).real(); }

double QuadraticFormQ::norm(const Eigen::VectorXd& c) const { return std::sqrt(std::max(0.0, (*this)(c))); }

QuadraticFormQ heat_form(const SpectralMeasure& mu_p, const Eigen::VectorXd& w, const ACFieldSpace& space) {
  const int M = space.size();
  QuadraticFormQ q{RMat::Zero(M, M), w, space};
  Eigen::VectorXcd e(M);
  for (const auto& a : mu_p.atoms) {
    const double m = w.dot(a.M * w);
    if (m == 0.0) continue;
    for (int i = 0; i < M; ++i) e[i] = space.basis_transform(i, a.nu);
    q.Q += 0.5 * m * (e * e.adjoint()).real();
  }
  q.Q = 0.5 * (q.Q + q.Q.transpose()).eval();
  return q;
}

double heat_time_domain(const std::function<RMat(double)>& xi_p, const Eigen::VectorXd& w,
                        const std::function<double(double)>& efield, double t0, double t1, int panels) {
  std::vector<double> x, we;
  const double len = (t1 - t0) / panels;
  for (int p = 0; p < panels; ++p) {
    auto [xs, ws] = gauss_legendre(16, t0 + p * len, t0 + (p + 1) * len);
    for (int q = 0; q < 16; ++q) {
      x.push_back(xs[q]);
      we.push_back(ws[q] * efield(xs[q]));
    }
  }
  double acc = 0;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) acc += we[i] * we[j] * w.dot(xi_p(std::abs(x[i] - x[j])) * w);
  return 0.5 * acc;
}

Eigen::VectorXd conductivity_map(const QuadraticFormQ& Q, const Eigen::VectorXd& c) {
  if (c.size() != Q.Q.rows()) throw std::invalid_argument("conductivity_map: coefficient size mismatch");
  return Q.Q * c;
}

namespace {

struct Pinv {
  RMat inv, proj;
};

Pinv pseudo_inverse(const RMat& Q, double threshold) {
  Eigen::SelfAdjointEigenSolver<RMat> s(Q);
  const double top = s.eigenvalues().cwiseAbs().maxCoeff();
  const int n = static_cast<int>(Q.rows());
  Pinv p{RMat::Zero(n, n), RMat::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    const double lam = s.eigenvalues()[i];
    if (top == 0.0 || lam <= threshold * top) continue;
    const Eigen::VectorXd v = s.eigenvectors().col(i);
    p.inv += v * v.transpose() / lam;
    p.proj += v * v.transpose();
  }
  return p;
}

}  // namespace

Resistivity resistivity_map(const QuadraticFormQ& Q, const Eigen::VectorXd& J, double threshold) {
  if (J.size() != Q.Q.rows()) throw std::invalid_argument("resistivity_map: current size mismatch");
  const Pinv p = pseudo_inverse(Q.Q, threshold);
  Resistivity r;
  r.rho = p.inv * J;
  r.qstar = J.dot(r.rho);
  r.in_domain = (J - p.proj * J).norm() <= 1e-9 * std::max(J.norm(), 1e-300);
  if (J.norm() == 0.0) r.in_domain = true;
  return r;
}

double dual_bilinear(const QuadraticFormQ& Q, const Eigen::VectorXd& J1, const Eigen::VectorXd& J2, double threshold) {
  const Pinv p = pseudo_inverse(Q.Q, threshold);
  return J1.dot(p.inv * J2);
}

double out_of_phase_work(const SpectralMeasure& mu, const Eigen::VectorXd& w,
                         const std::function<double(double)>& efield, double t0, double t1, int panels) {
  std::vector<double> x, we;
  const double len = (t1 - t0) / panels;
  for (int p = 0; p < panels; ++p) {
    auto [xs, ws] = gauss_legendre(16, t0 + p * len, t0 + (p + 1) * len);
    for (int q = 0; q < 16; ++q) {
      x.push_back(xs[q]);
      we.push_back(ws[q] * efield(xs[q]));
    }
  }
  // J_perp(t) = (1/2) int dmu int sign(t - s) cos(nu (t - s)) E_s ds
  double acc = 0;
  for (const auto& a : mu.atoms) {
    const double m = w.dot(a.M * w);
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < x.size(); ++j) {
        const double u = x[i] - x[j];
        if (u == 0.0) continue;
        acc += 0.5 * m * (u > 0 ? 1.0 : -1.0) * std::cos(a.nu * u) * we[i] * we[j];
      }
  }
  return acc;
}

}  // namespace lft
