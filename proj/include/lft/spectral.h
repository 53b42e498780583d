#pragma once

#include <cstdint>
#include <vector>

#include "lft/lattice.h"

namespace lft {

struct EigenSystem {
  Eigen::VectorXd E;  // ascending
  CMat phi;           // columns are eigenvectors
  int size() const { return static_cast<int>(E.size()); }
};

EigenSystem eigendecompose(const CMat& H);

double fermi(double e, double beta);

// d = sum_m f(E_m) phi_m phi_m^dagger
CMat fermi_symbol(const EigenSystem& es, double beta);

// C_{t+i alpha}(x) = <e_{x2}, e^{-itH} F(H) e_{x1}>, F(k) = e^{alpha k} / (1 + e^{beta k})
cplx complex_time_correlation(const EigenSystem& es, double beta, double t, double alpha, const Bond& x);

// sum_{uv} b_{uv} a_u^* a_v + offset
struct Quadratic {
  CMat b;
  cplx offset{0.0, 0.0};

  Quadratic adjoint() const { return {b.adjoint(), std::conj(offset)}; }
};

// omega(B) = sum_{uv} b_{uv} <e_v, d e_u> + offset = Tr(b d) + offset
cplx expectation(const CMat& d, const Quadratic& B);

// omega(A^* B) for a quasi-free state with symbol d
cplx second_moment(const CMat& d, const Quadratic& A, const Quadratic& B);

// Kubo-Mori kernel (f_n - f_m) / (E_m - E_n), limit beta f (1-f) at equal energies
double duhamel_kernel(double em, double en, double beta);

CMat to_eigenbasis(const EigenSystem& es, const CMat& b);

// (A, B)_~ = int_0^beta omega(A^* tau_{i alpha}(B)) d alpha
cplx duhamel(const EigenSystem& es, double beta, const Quadratic& A, const Quadratic& B);

// (A, tau_t(B))_~
cplx duhamel_evolved(const EigenSystem& es, double beta, const Quadratic& A, const Quadratic& B, double t);

// tau_t(B) = dGamma(e^{ith} b e^{-ith})
Quadratic heisenberg(const EigenSystem& es, const Quadratic& B, double t);

// delta(B) = dGamma(i[h, b])
Quadratic derivation(const CMat& h, const Quadratic& B);

void check_hermitian(const CMat& H, double tol, const char* what);

// Max residuals over random quadratic observables (seeded); all relative to max(1, |value|).
struct DuhamelChecks {
  double auto_bound = 0;    // max(0, (B,B)~ - beta omega(B^2)), B self-adjoint
  double commutator = 0;    // |-i (B1, delta B2)~ - Tr([b1^*, b2] d)|
  double stationarity = 0;  // |(B, delta B)~|, B self-adjoint
  double time_reversal = 0; // imaginary part and asymmetry of (B1, tau_t B2)~ for real h, Theta-even/odd pairs
};
DuhamelChecks duhamel_identity_checks(const CMat& h, double beta, int samples, std::uint64_t seed,
                                      const std::vector<double>& times = {0.0, 0.7, 2.3});

}  // namespace lft
