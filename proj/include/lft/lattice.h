#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lft {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr int kMaxSites = 4096;

// Sites x in Z^d with max-norm <= radius, lexicographic order (last coordinate fastest).
struct LatticeBox {
  int dim = 1;
  int radius = 0;
  int n = 1;

  std::vector<int> coord(int i) const;
  int index(const std::vector<int>& x) const;  // -1 if outside
  bool contains(const std::vector<int>& x) const;
  int shift(int i, int k, int step) const;  // index of x + step*e_k, -1 if outside
};

LatticeBox make_box(int d, int radius);

enum class Distribution { uniform, binary, zero };
Distribution parse_distribution(const std::string& s);
std::string to_string(Distribution dist);

struct Potential {
  std::vector<double> values;
  std::uint64_t seed = 0;
  Distribution dist = Distribution::uniform;
};

Potential sample_potential(const LatticeBox& box, std::uint64_t seed, Distribution dist);

// Oriented pair (x1, x2) of site indices.
struct Bond {
  int x1 = 0;
  int x2 = 0;
  Bond reversed() const { return {x2, x1}; }
};

bool is_neighbor(const LatticeBox& box, const Bond& b);

// Smooth compactly supported envelope A(t) = a exp(-1/(1-s^2)) sin(omega t),
// vector potential A(t,x) = A(t) w 1[x in S_l], S_l = [-l, l+1)^d.
// The half-open support makes the field bonds exactly {(x, x+e_k) : x in Lambda_l}.
struct FieldProfile {
  double t0 = 0.0;
  double t1 = 2.0;
  double amplitude = 1.0;
  double carrier = 3.0;
  std::vector<double> w{1.0};
  double l = 1.0;

  double envelope(double t) const;  // A(t)
  double efield(double t) const;    // E(t) = -dA/dt
  double inside(const Eigen::VectorXd& x) const;  // spatial indicator, 0 or 1
};

void validate(const FieldProfile& f, int dim);

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order, double a, double b);

CMat build_hamiltonian(const LatticeBox& box, const Potential& pot, double lambda);

// int_0^1 1[alpha x2 + (1-alpha) x1 in S_l] w . (x2 - x1) d alpha
double bond_geometry(const LatticeBox& box, const FieldProfile& field, const Bond& b, int order = 20);

// theta(u -> v) = int_0^1 eta A(t, alpha v + (1-alpha) u) . (v - u) d alpha
double peierls_phase(const LatticeBox& box, const FieldProfile& field, double eta, double t,
                     const Bond& b, int order = 20);

CMat build_magnetic_hamiltonian(const LatticeBox& box, const Potential& pot, double lambda,
                                const FieldProfile& field, double eta, double t, int order = 20);

// int_0^1 eta E(t, alpha x2 + (1-alpha) x1) . (x2 - x1) d alpha
double integrated_field(const LatticeBox& box, const FieldProfile& field, double eta, double t,
                        const Bond& b, int order = 20);

}  // namespace lft
