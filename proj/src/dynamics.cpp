#include "lft/dynamics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lft {

DrivenHamiltonian::DrivenHamiltonian(const LatticeBox& box, const Potential& pot, double lambda,
                                     const FieldProfile& field, double eta, int order)
    : box_(box), field_(field), eta_(eta), h0_(build_hamiltonian(box, pot, lambda)) {
  validate(field, box.dim);
  for (int i = 0; i < box.n; ++i)
    for (int k = 0; k < box.dim; ++k) {
      const int j = box.shift(i, k, 1);
      if (j < 0) continue;
      const double g = bond_geometry(box, field, {i, j}, order);
      if (g != 0.0) links_.push_back({i, j, g});
    }
}

CMat DrivenHamiltonian::at(double t) const {
  CMat h = h0_;
  const double a = eta_ * field_.envelope(t);
  if (a == 0.0) return h;
  for (const auto& L : links_) {
    h(L.i, L.j) = -std::polar(1.0, a * L.g);
    h(L.j, L.i) = std::conj(h(L.i, L.j));
  }
  return h;
}

CMat DrivenHamiltonian::w(double t) const {
  CMat w = CMat::Zero(box_.n, box_.n);
  const double a = eta_ * field_.envelope(t);
  if (a == 0.0) return w;
  for (const auto& L : links_) {
    w(L.i, L.j) = -(std::polar(1.0, a * L.g) - 1.0);
    w(L.j, L.i) = std::conj(w(L.i, L.j));
  }
  return w;
}

CMat DrivenHamiltonian::dw(double t) const {
  CMat w = CMat::Zero(box_.n, box_.n);
  const double a = eta_ * field_.envelope(t);
  const double da = -eta_ * field_.efield(t);
  if (da == 0.0) return w;
  for (const auto& L : links_) {
    w(L.i, L.j) = -cplx(0, da * L.g) * std::polar(1.0, a * L.g);
    w(L.j, L.i) = std::conj(w(L.i, L.j));
  }
  return w;
}

CMat unitary_step(const CMat& H, double dt) {
  Eigen::SelfAdjointEigenSolver<CMat> s(H);
  Eigen::VectorXcd ph(H.rows());
  for (int m = 0; m < H.rows(); ++m) ph[m] = std::polar(1.0, -dt * s.eigenvalues()[m]);
  return s.eigenvectors() * ph.asDiagonal() * s.eigenvectors().adjoint();
}

Propagator evolve_propagator(const DrivenHamiltonian& H, double t0, double t, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("evolve_propagator: dt must be positive");
  if (t < t0) throw std::invalid_argument("evolve_propagator: t must be >= t0");
  const int n = H.box().n;
  Propagator P{CMat::Identity(n, n), t0, t, dt};
  if (t == t0) return P;
  const int steps = std::max(1, static_cast<int>(std::ceil((t - t0) / dt - 1e-9)));
  const double h = (t - t0) / steps;
  P.dt = h;
  for (int k = 0; k < steps; ++k) P.U = unitary_step(H.at(t0 + (k + 0.5) * h), h) * P.U;
  return P;
}

Propagator evolve_propagator(const LatticeBox& box, const Potential& pot, double lambda, const FieldProfile& field,
                             double eta, double t0, double t, double dt) {
  return evolve_propagator(DrivenHamiltonian(box, pot, lambda, field, eta), t0, t, dt);
}

CMat evolve_state(const CMat& d0, const Propagator& U) {
  if (d0.rows() != U.U.rows()) throw std::invalid_argument("evolve_state: shape mismatch");
  return U.U * d0 * U.U.adjoint();
}

Quadratic dia_current(const LatticeBox& box, const FieldProfile& field, double eta, double t, const Bond& x) {
  Quadratic q{CMat::Zero(box.n, box.n)};
  const cplx c = std::polar(1.0, peierls_phase(box, field, eta, t, x)) - 1.0;
  q.b(x.x2, x.x1) = cplx(0, 1) * c;
  q.b(x.x1, x.x2) = cplx(0, -1) * std::conj(c);
  return q;
}

Currents nonlinear_currents(const CMat& d_t, const CMat& d0, const LatticeBox& box, const FieldProfile& field,
                            double eta, double t, const Region& r) {
  if (d_t.rows() != box.n || d0.rows() != box.n || r.n != box.n)
    throw std::invalid_argument("nonlinear_currents: box mismatch");
  Currents c{Eigen::VectorXd::Zero(r.dim), Eigen::VectorXd::Zero(r.dim)};
  const CMat dd = d_t - d0;
  for (int k = 0; k < r.dim; ++k) {
    double jp = 0, jd = 0;
    for (const auto& x : r.bonds[k]) {
      // I_x: b(x2,x1) = i, b(x1,x2) = -i
      jp += (cplx(0, 1) * dd(x.x1, x.x2) - cplx(0, 1) * dd(x.x2, x.x1)).real();
      const cplx ph = std::polar(1.0, peierls_phase(box, field, eta, t, x)) - 1.0;
      jd += (cplx(0, 1) * ph * d_t(x.x1, x.x2) - cplx(0, 1) * std::conj(ph) * d_t(x.x2, x.x1)).real();
    }
    c.Jp[k] = jp / r.sites;
    c.Jd[k] = jd / r.sites;
  }
  return c;
}

Quadratic potential_energy_observable(const FieldProfile& field, double eta, double t, const LatticeBox& box) {
  const Potential zero = sample_potential(box, 0, Distribution::zero);
  return {build_magnetic_hamiltonian(box, zero, 0.0, field, eta, t) - build_hamiltonian(box, zero, 0.0)};
}

EnergyAccumulator::EnergyAccumulator(const DrivenHamiltonian& H, const CMat& d0) : H_(H), d0_(d0) {}

void EnergyAccumulator::push(double t, const CMat& d_t) {
  const CMat w = H_.w(t);
  const double rate = (H_.dw(t).cwiseProduct(d_t.transpose())).sum().real();
  double work = 0.0;
  if (!ledger_.t.empty()) work = ledger_.work.back() + 0.5 * (t - ledger_.t.back()) * (last_rate_ + rate);
  last_rate_ = rate;
  const double S = (H_.static_part().cwiseProduct((d_t - d0_).transpose())).sum().real();
  const double P = (w.cwiseProduct(d_t.transpose())).sum().real();
  const double Id = (w.cwiseProduct(d0_.transpose())).sum().real();
  ledger_.t.push_back(t);
  ledger_.S.push_back(S);
  ledger_.P.push_back(P);
  ledger_.Id.push_back(Id);
  ledger_.Ip.push_back(S + P - Id);
  ledger_.work.push_back(work);
}

EnergyLedger energy_increments(const DrivenHamiltonian& H, const CMat& d0, const std::vector<double>& t,
                               const std::vector<CMat>& d) {
  if (t.size() != d.size()) throw std::invalid_argument("energy_increments: grid mismatch");
  EnergyAccumulator acc(H, d0);
  for (size_t i = 0; i < t.size(); ++i) acc.push(t[i], d[i]);
  return acc.ledger();
}

DriveRun run_drive(const DrivenHamiltonian& H, const CMat& d0, const Region& r, double tf, double dt, int every) {
  const double t0 = H.field().t0;
  if (!(dt > 0)) throw std::invalid_argument("run_drive: dt must be positive");
  if (tf <= t0) throw std::invalid_argument("run_drive: tf must exceed t0");
  const int steps = std::max(1, static_cast<int>(std::lround((tf - t0) / dt)));
  const double h = (tf - t0) / steps;
  DriveRun run;
  // evolve the eigenvectors of d0 and re-orthonormalize each step, so roundoff stays unitary
  Eigen::SelfAdjointEigenSolver<CMat> sd(d0);
  CMat psi = sd.eigenvectors();
  const Eigen::VectorXd occ = sd.eigenvalues();
  const CMat ref = psi * occ.cast<cplx>().asDiagonal() * psi.adjoint();
  const CMat eye = CMat::Identity(d0.rows(), d0.cols());
  EnergyAccumulator acc(H, ref);
  CMat d = ref;
  for (int k = 0; k <= steps; ++k) {
    const double t = t0 + k * h;
    if (k > 0) {
      psi = unitary_step(H.at(t - 0.5 * h), h) * psi;
      psi = psi * (1.5 * eye - 0.5 * (psi.adjoint() * psi));
      d = psi * occ.cast<cplx>().asDiagonal() * psi.adjoint();
    }
    acc.push(t, d);
    if (k % every == 0 || k == steps) {
      run.t.push_back(t);
      run.currents.push_back(nonlinear_currents(d, ref, H.box(), H.field(), H.eta(), t, r));
      const auto& L = acc.ledger();
      run.ledger.t.push_back(t);
      run.ledger.S.push_back(L.S.back());
      run.ledger.P.push_back(L.P.back());
      run.ledger.Ip.push_back(L.Ip.back());
      run.ledger.Id.push_back(L.Id.back());
      run.ledger.work.push_back(L.work.back());
    }
  }
  run.d_final = d;
  return run;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RunResiduals run_residuals(const DriveRun& run, const LinearResponseSeries& lin, double eta, double vol,
                           const RMat& xi_d, const Eigen::VectorXd& w) {
  if (run.t.size() != lin.t.size()) throw std::invalid_argument("run_residuals: grid mismatch");
  RunResiduals r;
  r.eta = eta;
  const double wdw = w.dot(xi_d * w);
  const double e2 = eta * eta * vol;
  for (size_t k = 0; k < run.t.size(); ++k) {
    if (std::abs(run.t[k] - lin.t[k]) > 1e-9) throw std::invalid_argument("run_residuals: grid mismatch");
    const auto& c = run.currents[k];
    const auto& L = run.ledger;
    const double a = lin.a[k], wj = w.dot(lin.Jp[k]);
    r.ohm_p = std::max(r.ohm_p, (c.Jp - eta * lin.Jp[k]).cwiseAbs().maxCoeff());
    r.ohm_d = std::max(r.ohm_d, (c.Jd - eta * lin.Jd[k]).cwiseAbs().maxCoeff());
    r.joule_p = std::max(r.joule_p, std::abs(L.Ip[k] - e2 * lin.G[k]));
    r.joule_d = std::max(r.joule_d, std::abs(L.Id[k] + 0.5 * e2 * wdw * a * a));
    r.joule_Q = std::max(r.joule_Q, std::abs(L.S[k] - (L.Ip[k] - e2 * a * wj)));
    r.joule_P = std::max(r.joule_P, std::abs(L.P[k] - (L.Id[k] + e2 * a * wj)));
  }
  r.heat = run.ledger.S.back();
  r.heat_pred = 0.5 * e2 * lin.pairing;
  return r;
}

void add_run(ScalingReport& rep, const RunResiduals& r) {
  rep.eta.push_back(r.eta);
  rep.ohm_p.push_back(r.ohm_p);
  rep.ohm_d.push_back(r.ohm_d);
  rep.joule_p.push_back(r.joule_p);
  rep.joule_d.push_back(r.joule_d);
  rep.joule_Q.push_back(r.joule_Q);
  rep.joule_P.push_back(r.joule_P);
  rep.heat.push_back(r.heat);
  rep.heat_pred.push_back(r.heat_pred);
}

void finish_slopes(ScalingReport& rep) {
  if (rep.eta.size() < 2) return;
  auto slope = [&](const std::vector<double>& y) {
    std::vector<double> yy(y.size());
    for (size_t i = 0; i < y.size(); ++i) yy[i] = std::max(y[i], 1e-300);
    return loglog_slope(rep.eta, yy);
  };
  rep.slope_ohm_p = slope(rep.ohm_p);
  rep.slope_ohm_d = slope(rep.ohm_d);
  rep.slope_joule_p = slope(rep.joule_p);
  rep.slope_joule_d = slope(rep.joule_d);
  rep.slope_joule_Q = slope(rep.joule_Q);
  rep.slope_joule_P = slope(rep.joule_P);
}

ScalingReport ohm_joule_scaling_check(const ScalingSetup& s, const std::vector<double>& etas) {
  if (etas.size() < 3) throw std::invalid_argument("ohm_joule_scaling_check: need at least 3 eta values");
  for (size_t i = 1; i < etas.size(); ++i)
    if (!(etas[i] < etas[i - 1]) || !(etas[i] > 0))
      throw std::invalid_argument("ohm_joule_scaling_check: eta list must be positive and decreasing");
  FieldProfile field = s.field;
  field.l = s.l;
  const double t0 = field.t0;
  const double tf = s.tf > field.t1 ? s.tf : field.t1 + 1.0;
  const int steps = std::max(1, static_cast<int>(std::lround((tf - t0) / s.dt)));
  const double h = (tf - t0) / steps;

  const CMat h0 = build_hamiltonian(s.box, s.pot, s.lambda);
  const EigenSystem es = eigendecompose(h0);
  const CMat d0 = fermi_symbol(es, s.beta);
  const Region r = averaging_region(s.box, s.l);
  const RMat xd = xi_dia(d0, r);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(field.w.data(), field.w.size());
  const double vol = r.sites;

  const SpectralMeasure mu = build_measure(es, s.beta, r);
  const LinearResponseSeries lin = linear_response_series(mu, xd, field, tf, steps);

  ScalingReport rep;
  for (double eta : etas) {
    DrivenHamiltonian H(s.box, s.pot, s.lambda, field, eta);
    const DriveRun run = run_drive(H, d0, r, tf, h, 1);
    const RunResiduals res = run_residuals(run, lin, eta, vol, xd, w);
    add_run(rep, res);
  }
  finish_slopes(rep);
  return rep;
}

}  // namespace lft
