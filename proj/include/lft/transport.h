#pragma once

#include <vector>

#include "lft/spectral.h"

namespace lft {

// I_x = i(a_{x2}^* a_{x1} - a_{x1}^* a_{x2})
Quadratic bond_current(int n, const Bond& x);
// P_x = -a_{x2}^* a_{x1} - a_{x1}^* a_{x2}
Quadratic bond_adjacency(int n, const Bond& x);

// Bonds (x + e_k, x), x in Lambda_l, grouped by direction k.
struct Region {
  int dim = 1;
  int n = 0;      // sites of the simulation box
  int sites = 0;  // |Lambda_l|
  std::vector<std::vector<Bond>> bonds;
};

Region averaging_region(const LatticeBox& box, int l);

Quadratic current_operator(const Region& r, int k);
Quadratic adjacency_operator(const Region& r, int k);
Quadratic current_operator(const LatticeBox& box, int k, int l);
Quadratic adjacency_operator(const LatticeBox& box, int k, int l);

struct TransportKernel {
  std::vector<double> t;
  std::vector<RMat> v;
};

// sigma_p(x, y, t) = (I_y, tau_t I_x)_~ - (I_y, I_x)_~
std::vector<double> sigma_para(const EigenSystem& es, double beta, const Bond& x, const Bond& y,
                               const std::vector<double>& t);

// sigma_d(x) = omega(P_x)
double sigma_dia(const CMat& d, const Bond& x);

// Xi_p(t)_{kq} = |Lambda|^{-1} [(I_k, tau_t I_q)_~ - (I_k, I_q)_~]
TransportKernel xi_para(const EigenSystem& es, double beta, const Region& r, const std::vector<double>& t);

// Same kernel by direct time integration of omega(i[I_k, tau_s(I_q)]); dense exponentials, no eigenbasis.
TransportKernel xi_para_commutator(const CMat& h, const CMat& d, const Region& r, const std::vector<double>& t,
                                   int nodes_per_unit = 24);

// Xi_d = diag(omega(P_k)) / |Lambda|
RMat xi_dia(const CMat& d, const Region& r);

// V(t) = Xi_d^{-1} dXi_p/dt; 4th-order differences, one-sided near the ends
TransportKernel viscosity(const TransportKernel& xi_p, const RMat& xi_d);

std::vector<double> uniform_grid(double a, double b, int points);

}  // namespace lft
