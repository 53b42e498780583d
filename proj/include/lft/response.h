#pragma once

#include <functional>
#include <vector>

#include "lft/measure.h"

namespace lft {

// Sigma(t) = 0 for t < 0, Xi_d + Xi_p(t) for t >= 0, with its even/odd parts.
struct SigmaKernel {
  TransportKernel causal, even, odd;
};

// t_grid symmetric about 0; xi_p sampled on its nonnegative half.
SigmaKernel sigma_kernel(const TransportKernel& xi_p, const RMat& xi_d, const std::vector<double>& t_grid);

struct LinearCurrents {
  Eigen::VectorXd Jp, Jd, J;
};

// Trapezoid convolution against a sampled kernel on a uniform grid starting at 0.
LinearCurrents linear_currents(const TransportKernel& xi_p, const RMat& xi_d, const Eigen::VectorXd& w,
                               const std::function<double(double)>& efield, double t0, double t);
LinearCurrents linear_currents(const TransportKernel& xi_p, const RMat& xi_d, const FieldProfile& field, double t);

// Composite Gauss-Legendre convolution against a kernel function.
LinearCurrents linear_currents(const std::function<RMat(double)>& xi_p, const RMat& xi_d, const Eigen::VectorXd& w,
                               const std::function<double(double)>& efield, double t0, double t, int panels = 64);

// Linear response on t_k = t0 + k h from the atoms of mu_p (exact in time up to per-step Gauss-Legendre):
// J_p^lin = sum_a M_a w (Re(e^{i nu t} C_nu(t)) - a(t)), a(t) = int E, C_nu(t) = int_{t0}^t e^{-i nu s} E_s ds,
// G(t) = int <w, J_p^lin> E ds, pairing = int |Ehat|^2 <w, mu_p w> over the whole pulse.
struct LinearResponseSeries {
  std::vector<double> t, a, G;
  std::vector<Eigen::VectorXd> Jp, Jd;
  double pairing = 0.0;
};
LinearResponseSeries linear_response_series(const SpectralMeasure& mu_p, const RMat& xi_d, const FieldProfile& field,
                                            double tf, int steps);

// All samples t_k = t0 + k h at once, kernel and field on the same step h; O(N^2).
std::vector<LinearCurrents> linear_current_series(const TransportKernel& xi_p, const RMat& xi_d,
                                                  const Eigen::VectorXd& w, const std::vector<double>& efield);

// H(f)(nu) = -(1/pi) PV int f(kappa) / (nu - kappa) dkappa on grid nodes (Maclaurin odd-point rule).
std::vector<cplx> hilbert_transform(const std::vector<double>& nu, const std::vector<cplx>& f);
// Off-grid evaluation, regularized with eps = grid step.
cplx hilbert_at(const std::vector<double>& nu, const std::vector<cplx>& f, double x);

// Ehat(nu) = int e^{-i nu s} E(s) ds over [t0, t1]
cplx field_transform(const std::function<double(double)>& efield, double t0, double t1, double nu,
                     int panels = 64);

std::vector<double> symmetric_grid(double half_width, int nodes);

struct FourierOhm {
  Eigen::VectorXd J;
  double imag_residual = 0.0;  // size of the discarded imaginary part
};

// (1/2) int Ehat^(t) dmu w - (i/2) int H(Ehat^(t)) dmu w, Ehat^(t)_nu = e^{i nu t} Ehat_nu; mu the full measure.
// hilbert_sign = +1 gives the opposite orientation.
FourierOhm fourier_ohm_current(const SpectralMeasure& mu, const Eigen::VectorXd& w, const FieldProfile& field,
                               double t, const std::vector<double>& nu_grid, double hilbert_sign = -1.0);

// Paired functionals mu_par(f) = (1/2) int f dmu, mu_perp(f) = (1/2) int H(f) dmu, contracted with w.
cplx mu_parallel(const SpectralMeasure& mu, const Eigen::VectorXd& w, const std::function<cplx(double)>& f);
cplx mu_perp(const SpectralMeasure& mu, const Eigen::VectorXd& w, const std::vector<double>& nu_grid,
             const std::vector<cplx>& f);

// Real fields sum_j c_j cos(2 pi j (t - t0)/T) + s_j sin(...) on [t0, t1], j = 1..modes.
struct ACFieldSpace {
  double t0 = 0.0;
  double t1 = 1.0;
  int modes = 4;

  int size() const { return 2 * modes; }
  double frequency(int j) const;  // nu_j = 2 pi j / T, j = 1..modes
  double basis(int i, double t) const;
  double value(const Eigen::VectorXd& c, double t) const;
  cplx basis_transform(int i, double nu) const;
  cplx transform(const Eigen::VectorXd& c, double nu) const;
  double mean(const Eigen::VectorXd& c) const;  // int E dt
};

struct QuadraticFormQ {
  RMat Q;
  Eigen::VectorXd w;
  ACFieldSpace space;

  double operator()(const Eigen::VectorXd& c) const { return c.dot(Q * c); }
  double norm(const Eigen::VectorXd& c) const;
};

// Q(E) = (1/2) int |Ehat|^2 <w, mu_p w>
QuadraticFormQ heat_form(const SpectralMeasure& mu_p, const Eigen::VectorXd& w, const ACFieldSpace& space);

// (1/2) int int <w, Xi_p(t - s) w> E_s E_t ds dt by tensor Gauss-Legendre.
double heat_time_domain(const std::function<RMat(double)>& xi_p, const Eigen::VectorXd& w,
                        const std::function<double(double)>& efield, double t0, double t1, int panels = 16);

// J_E with <J_E, E1> = c1 . J_E
Eigen::VectorXd conductivity_map(const QuadraticFormQ& Q, const Eigen::VectorXd& c);

struct Resistivity {
  bool in_domain = true;
  Eigen::VectorXd rho;
  double qstar = 0.0;
};

Resistivity resistivity_map(const QuadraticFormQ& Q, const Eigen::VectorXd& J, double threshold = 1e-9);

// (J1, J2)_* = J1 . Q^+ J2
double dual_bilinear(const QuadraticFormQ& Q, const Eigen::VectorXd& J1, const Eigen::VectorXd& J2,
                     double threshold = 1e-9);

// int E_t <w, J_perp(t)> dt with J_perp the out-of-phase current (time-domain form).
double out_of_phase_work(const SpectralMeasure& mu, const Eigen::VectorXd& w,
                         const std::function<double(double)>& efield, double t0, double t1, int panels = 16);

}  // namespace lft
