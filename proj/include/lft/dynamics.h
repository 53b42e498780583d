#pragma once

#include <vector>

#include "lft/response.h"

namespace lft {

// H(t) = Delta^{(eta A_l)} + lambda V with cached bond geometry.
class DrivenHamiltonian {
 public:
  DrivenHamiltonian(const LatticeBox& box, const Potential& pot, double lambda, const FieldProfile& field,
                    double eta, int order = 20);

  const CMat& static_part() const { return h0_; }
  CMat at(double t) const;
  CMat w(double t) const;   // one-particle matrix of W_t = dGamma(H(t) - H)
  CMat dw(double t) const;  // d/dt of w(t), analytic through dA/dt = -E
  const LatticeBox& box() const { return box_; }
  const FieldProfile& field() const { return field_; }
  double eta() const { return eta_; }

 private:
  struct Link {
    int i, j;
    double g;  // bond_geometry for i -> j
  };
  LatticeBox box_;
  FieldProfile field_;
  double eta_;
  CMat h0_;
  std::vector<Link> links_;
};

struct Propagator {
  CMat U;
  double s = 0.0;
  double t = 0.0;
  double dt = 0.0;
};

// exp(-i dt H) for Hermitian H
CMat unitary_step(const CMat& H, double dt);

// Midpoint exponential product U_{t,t0} = prod exp(-i dt H(t_mid))
Propagator evolve_propagator(const DrivenHamiltonian& H, double t0, double t, double dt);
Propagator evolve_propagator(const LatticeBox& box, const Potential& pot, double lambda, const FieldProfile& field,
                             double eta, double t0, double t, double dt);

// d_t = U d0 U^*
CMat evolve_state(const CMat& d0, const Propagator& U);

struct Currents {
  Eigen::VectorXd Jp;
  Eigen::VectorXd Jd;
};

// Jp_k = |Lambda|^{-1} (rho_t - omega)(I_k), Jd_k = |Lambda|^{-1} rho_t(I_k^{eta A})
Currents nonlinear_currents(const CMat& d_t, const CMat& d0, const LatticeBox& box, const FieldProfile& field,
                            double eta, double t, const Region& r);

// coefficient of the diamagnetic current I^{eta A}_x = -2 Im((e^{i theta} - 1) a_{x2}^* a_{x1})
Quadratic dia_current(const LatticeBox& box, const FieldProfile& field, double eta, double t, const Bond& x);

// W_t = dGamma(Delta^{(eta A_l)} - Delta)
Quadratic potential_energy_observable(const FieldProfile& field, double eta, double t, const LatticeBox& box);

struct EnergyLedger {
  std::vector<double> t, S, P, Ip, Id, work;
};

// Accumulates the ledger along a trajectory; work by trapezoid on the pushed samples.
class EnergyAccumulator {
 public:
  EnergyAccumulator(const DrivenHamiltonian& H, const CMat& d0);
  void push(double t, const CMat& d_t);
  const EnergyLedger& ledger() const { return ledger_; }

 private:
  const DrivenHamiltonian& H_;
  CMat d0_;
  EnergyLedger ledger_;
  double last_rate_ = 0.0;
};

EnergyLedger energy_increments(const DrivenHamiltonian& H, const CMat& d0, const std::vector<double>& t,
                               const std::vector<CMat>& d);

struct DriveRun {
  std::vector<double> t;  // sample times
  std::vector<Currents> currents;
  EnergyLedger ledger;    // at sample times
  CMat d_final;
};

// Integrates from field.t0 to tf with step dt; samples every `every` steps.
DriveRun run_drive(const DrivenHamiltonian& H, const CMat& d0, const Region& r, double tf, double dt, int every = 1);

struct ScalingReport {
  std::vector<double> eta;
  std::vector<double> ohm_p, ohm_d;             // current residuals (sup over the run)
  std::vector<double> joule_p, joule_d, joule_Q, joule_P;  // energy residuals (sup over the run)
  std::vector<double> heat, heat_pred;          // S after field-off and its measure prediction
  double slope_ohm_p = 0, slope_ohm_d = 0;
  double slope_joule_p = 0, slope_joule_d = 0, slope_joule_Q = 0, slope_joule_P = 0;
};

struct ScalingSetup {
  LatticeBox box;
  Potential pot;
  double lambda = 1.0;
  double beta = 1.0;
  int l = 1;
  FieldProfile field;
  double dt = 1e-3;
  double tf = 0.0;  // defaults to field.t1 + 1 when <= t1
};

struct RunResiduals {
  double eta = 0;
  double ohm_p = 0, ohm_d = 0, joule_p = 0, joule_d = 0, joule_Q = 0, joule_P = 0;
  double heat = 0, heat_pred = 0;
};

// Sup-residuals of one driven run against the linear predictions on the same grid.
RunResiduals run_residuals(const DriveRun& run, const LinearResponseSeries& lin, double eta, double vol,
                           const RMat& xi_d, const Eigen::VectorXd& w);
void add_run(ScalingReport& rep, const RunResiduals& r);
void finish_slopes(ScalingReport& rep);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

ScalingReport ohm_joule_scaling_check(const ScalingSetup& s, const std::vector<double>& etas);

}  // namespace lft
