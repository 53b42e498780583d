#include "lft/lattice.h"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace lft {

std::vector<int> LatticeBox::coord(int i) const {
  std::vector<int> x(dim);
  const int side = 2 * radius + 1;
  for (int k = dim - 1; k >= 0; --k) {
    x[k] = i % side - radius;
    i /= side;
  }
  return x;
}

bool LatticeBox::contains(const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (int v : x)
    if (v < -radius || v > radius) return false;
  return true;
}

int LatticeBox::index(const std::vector<int>& x) const {
  if (!contains(x)) return -1;
  const int side = 2 * radius + 1;
  int i = 0;
  for (int k = 0; k < dim; ++k) i = i * side + (x[k] + radius);
  return i;
}

int LatticeBox::shift(int i, int k, int step) const {
  auto x = coord(i);
  x[k] += step;
  return index(x);
}

LatticeBox make_box(int d, int radius) {
  if (d < 1) throw std::invalid_argument("make_box: dimension must be >= 1");
  if (radius < 0) throw std::invalid_argument("make_box: radius must be >= 0");
  long long n = 1;
  for (int k = 0; k < d; ++k) {
    n *= 2LL * radius + 1;
    if (n > kMaxSites)
      throw std::invalid_argument("make_box: site count exceeds maximum " + std::to_string(kMaxSites));
  }
  return LatticeBox{d, radius, static_cast<int>(n)};
}

Distribution parse_distribution(const std::string& s) {
  if (s == "uniform") return Distribution::uniform;
  if (s == "binary") return Distribution::binary;
  if (s == "zero") return Distribution::zero;
  throw std::invalid_argument("unknown distribution: " + s);
}

std::string to_string(Distribution dist) {
  switch (dist) {
    case Distribution::uniform: return "uniform";
    case Distribution::binary: return "binary";
    case Distribution::zero: return "zero";
  }
  return "uniform";
}

Potential sample_potential(const LatticeBox& box, std::uint64_t seed, Distribution dist) {
  Potential p;
  p.seed = seed;
  p.dist = dist;
  p.values.assign(box.n, 0.0);
  if (dist == Distribution::zero) return p;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (auto& v : p.values) v = dist == Distribution::uniform ? uni(rng) : (coin(rng) ? 1.0 : -1.0);
  return p;
}

bool is_neighbor(const LatticeBox& box, const Bond& b) {
  if (b.x1 < 0 || b.x2 < 0 || b.x1 >= box.n || b.x2 >= box.n) return false;
  auto a = box.coord(b.x1), c = box.coord(b.x2);
  int dist = 0;
  for (int k = 0; k < box.dim; ++k) dist += std::abs(a[k] - c[k]);
  return dist == 1;
}

double FieldProfile::envelope(double t) const {
  if (t <= t0 || t >= t1) return 0.0;
  const double s = (2.0 * t - t0 - t1) / (t1 - t0);
  const double g = 1.0 - s * s;
  if (g < 5e-3) return 0.0;
  return amplitude * std::exp(-1.0 / g) * std::sin(carrier * t);
}

double FieldProfile::efield(double t) const {
  if (t <= t0 || t >= t1) return 0.0;
  const double s = (2.0 * t - t0 - t1) / (t1 - t0);
  const double ds = 2.0 / (t1 - t0);
  const double g = 1.0 - s * s;
  if (g < 5e-3) return 0.0;
  const double bump = std::exp(-1.0 / g);
  const double dbump = bump * (-2.0 * s / (g * g)) * ds;
  return -amplitude * (dbump * std::sin(carrier * t) + bump * carrier * std::cos(carrier * t));
}

double FieldProfile::inside(const Eigen::VectorXd& x) const {
  for (int k = 0; k < x.size(); ++k)
    if (x[k] < -l || x[k] >= l + 1.0) return 0.0;
  return 1.0;
}

void validate(const FieldProfile& f, int dim) {
  if (!(f.t1 > f.t0)) throw std::invalid_argument("field: t1 must exceed t0");
  if (static_cast<int>(f.w.size()) != dim) throw std::invalid_argument("field: w has wrong dimension");
  double nrm = 0;
  for (double v : f.w) nrm += v * v;
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-9) throw std::invalid_argument("field: |w| must be 1");
  if (!(f.l >= 0)) throw std::invalid_argument("field: support radius must be >= 0");
}

namespace {

// nodes/weights on [-1,1]; Golub-Welsch start, Newton polish
const std::pair<Eigen::VectorXd, Eigen::VectorXd>& gl_reference(int order) {
  static thread_local std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Eigen::VectorXd x = es.eigenvalues(), w(order);
  for (int i = 0; i < order; ++i) {
    double p0 = 1, p1 = 0, dp = 0;
    for (int it2 = 0; it2 < 3; ++it2) {
      p0 = 1.0;
      p1 = x[i];
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1) * x[i] * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) { p1 = x[i]; p0 = 1.0; }
      dp = order * (x[i] * p1 - p0) / (x[i] * x[i] - 1.0);
      x[i] -= p1 / dp;
    }
    p0 = 1.0;
    p1 = x[i];
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1) * x[i] * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x[i] * p1 - p0) / (x[i] * x[i] - 1.0);
    w[i] = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
  }
  return cache.emplace(order, std::make_pair(x, w)).first->second;
}

template <class F>
double line_integral(const LatticeBox& box, const Bond& b, int order, F&& value_at) {
  auto a = box.coord(b.x1), c = box.coord(b.x2);
  Eigen::VectorXd p(box.dim), dir(box.dim);
  for (int k = 0; k < box.dim; ++k) dir[k] = c[k] - a[k];
  auto [x, w] = gauss_legendre(order, 0.0, 1.0);
  double acc = 0;
  for (int q = 0; q < order; ++q) {
    for (int k = 0; k < box.dim; ++k) p[k] = x[q] * c[k] + (1.0 - x[q]) * a[k];
    acc += w[q] * value_at(p, dir);
  }
  return acc;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const auto& ref = gl_reference(order);
  Eigen::VectorXd x = (ref.first.array() + 1.0) * (0.5 * (b - a)) + a;
  Eigen::VectorXd w = ref.second * (0.5 * (b - a));
  return {x, w};
}

CMat build_hamiltonian(const LatticeBox& box, const Potential& pot, double lambda) {
  if (static_cast<int>(pot.values.size()) != box.n)
    throw std::invalid_argument("build_hamiltonian: potential size does not match box");
  CMat h = CMat::Zero(box.n, box.n);
  for (int i = 0; i < box.n; ++i) {
    h(i, i) = 2.0 * box.dim + lambda * pot.values[i];
    for (int k = 0; k < box.dim; ++k) {
      const int j = box.shift(i, k, 1);
      if (j < 0) continue;
      h(i, j) = -1.0;
      h(j, i) = -1.0;
    }
  }
  return h;
}

double bond_geometry(const LatticeBox& box, const FieldProfile& field, const Bond& b, int order) {
  return line_integral(box, b, order, [&](const Eigen::VectorXd& p, const Eigen::VectorXd& dir) {
    double dot = 0;
    for (int k = 0; k < box.dim; ++k) dot += field.w[k] * dir[k];
    return field.inside(p) * dot;
  });
}

double peierls_phase(const LatticeBox& box, const FieldProfile& field, double eta, double t,
                     const Bond& b, int order) {
  const double env = field.envelope(t);
  if (eta == 0.0 || env == 0.0) return 0.0;
  return eta * env * bond_geometry(box, field, b, order);
}

CMat build_magnetic_hamiltonian(const LatticeBox& box, const Potential& pot, double lambda,
                                const FieldProfile& field, double eta, double t, int order) {
  CMat h = build_hamiltonian(box, pot, lambda);
  if (eta == 0.0 || field.envelope(t) == 0.0) return h;
  for (int i = 0; i < box.n; ++i) {
    for (int k = 0; k < box.dim; ++k) {
      const int j = box.shift(i, k, 1);
      if (j < 0) continue;
      const double th = peierls_phase(box, field, eta, t, {i, j}, order);
      if (th == 0.0) continue;
      h(i, j) = -std::polar(1.0, th);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

double integrated_field(const LatticeBox& box, const FieldProfile& field, double eta, double t,
                        const Bond& b, int order) {
  if (!is_neighbor(box, b)) throw std::invalid_argument("integrated_field: bond is not a nearest-neighbor pair");
  const double e = field.efield(t);
  if (eta == 0.0 || e == 0.0) return 0.0;
  return eta * e * bond_geometry(box, field, b, order);
}

}  // namespace lft
