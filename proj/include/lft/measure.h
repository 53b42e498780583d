#pragma once

#include <functional>
#include <vector>

#include "lft/transport.h"

namespace lft {

struct Atom {
  double nu = 0.0;
  RMat M;
};

// Atoms sorted by nu; the atom at nu = 0 (if any) collects m = n and degenerate pairs.
struct SpectralMeasure {
  int dim = 1;
  std::vector<Atom> atoms;

  RMat total() const;
  RMat zero_atom() const;
  RMat off_zero() const { return total() - zero_atom(); }
  double min_gap() const;  // smallest |nu| > 0, +inf if none
};

SpectralMeasure build_measure(const EigenSystem& es, double beta, const Region& r, double cluster_tol = 1e-9);

TransportKernel eval_xi_from_measure(const SpectralMeasure& mu, const std::vector<double>& t);

struct Moments {
  double mass = 0.0;
  double first = 0.0;
};
Moments moment_norms(const SpectralMeasure& mu);

// Right-hand sides of the moment bounds.
struct MomentBounds {
  double mass = 0.0;       // |Lambda|^{-1} sum_k omega(I_k^2)
  double first = 0.0;      // 2 |Lambda|^{-1} sum_k omega(I_k^2)
  double first_alt = 0.0;  // 2 |Lambda|^{-1} sum_k sqrt(omega(I_k^2)) sqrt(omega(delta(I_k)^2))
};
MomentBounds moment_bounds(const CMat& h, const CMat& d, const Region& r);

SpectralMeasure full_conductivity_measure(const SpectralMeasure& mu_p, const RMat& xi_d);

// Xi_d L[V](eps) = int_0^infty e^{-eps s} dXi_p/ds ds, closed form from the atoms.
RMat laplace_viscosity(const SpectralMeasure& mu_p, double eps);
// Same transform from a sampled kernel (trapezoid on the grid, which must start at 0).
RMat laplace_viscosity(const TransportKernel& V, const RMat& xi_d, double eps);
// static admittance -Xi_d L[V](eps); tends to mu_p(R \ {0}) as eps -> 0
RMat static_admittance(const SpectralMeasure& mu_p, double eps);
RMat static_admittance_limit(const SpectralMeasure& mu_p);

RMat cesaro_mean(const TransportKernel& xi_p, double T);

double richardson3(double f1, double f2, double f4);

// int Ehat d<w, mu_p w> from the viscosity (closed-form Laplace integrals of the atoms), extrapolated in eps.
double reconstruct_from_viscosity(const SpectralMeasure& mu_p, const Eigen::VectorXd& w,
                                  const std::function<double(double)>& ehat, double nu_lo, double nu_hi,
                                  const std::vector<double>& eps);

double pair_with_measure(const SpectralMeasure& mu, const Eigen::VectorXd& w, const std::function<double(double)>& f);

struct Nontriviality {
  bool nontrivial = false;
  double off_zero_trace = 0.0;
  std::vector<double> generator_norm;  // ||delta(I_k)|| per direction (Frobenius norm of i[h, a_k])
};
Nontriviality nontriviality_check(const SpectralMeasure& mu_p, const CMat* h = nullptr, const Region* r = nullptr);

}  // namespace lft
