#include "lft/pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lft {

namespace {

const char* kStageNames[] = {"equilibrium", "transport", "measure", "drive", "joule", "verify"};

std::vector<Stage> direct_deps(Stage s) {
  switch (s) {
    case Stage::equilibrium: return {};
    case Stage::transport: return {Stage::equilibrium};
    case Stage::measure: return {Stage::equilibrium};
    case Stage::drive: return {Stage::equilibrium, Stage::measure};
    case Stage::joule: return {Stage::drive};
    case Stage::verify: return {Stage::equilibrium};
  }
  return {};
}

double max_abs(const RMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

void add(std::vector<VerifyItem>& v, const std::string& name, double residual, double tol) {
  v.push_back({name, residual, tol, std::isfinite(residual) && residual <= tol});
}

void run_verify(ResultBundle& b, const RunConfig& c) {
  auto& v = b.verify;
  const double beta = c.beta;
  const Region& r = b.region;
  const int dim = r.dim;

  add(v, "hamiltonian_hermitian", (b.h - b.h.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  {
    Eigen::SelfAdjointEigenSolver<CMat> sd(b.d0);
    const double out = std::max({0.0, -sd.eigenvalues().minCoeff(), sd.eigenvalues().maxCoeff() - 1.0});
    const double comm = (b.h * b.d0 - b.d0 * b.h).cwiseAbs().maxCoeff();
    add(v, "symbol_spectrum", std::max(out, comm), 1e-10);
  }

  // transport kernel on a short grid, both routes
  const TransportKernel xi = b.has(Stage::transport)
                                ? b.xi_p
                                : xi_para(b.es, beta, r, uniform_grid(0.0, std::min(c.t_max, 5.0), 11));
  {
    std::vector<double> tt(xi.t.begin(), xi.t.begin() + std::min<size_t>(xi.t.size(), 11));
    if (b.box.n > 150) tt.resize(std::min<size_t>(tt.size(), 3));
    const TransportKernel a = xi_para(b.es, beta, r, tt);
    const TransportKernel g = xi_para_commutator(b.h, b.d0, r, tt);
    double res = 0;
    for (size_t i = 0; i < tt.size(); ++i) res = std::max(res, max_abs(a.v[i] - g.v[i]));
    add(v, "green_kubo", res, 1e-8);
  }
  {
    double zero = std::numeric_limits<double>::infinity(), sym = 0, nsd = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < xi.t.size(); ++i) {
      if (xi.t[i] == 0.0) zero = max_abs(xi.v[i]);
      sym = std::max(sym, max_abs(xi.v[i] - xi.v[i].transpose()));
      Eigen::SelfAdjointEigenSolver<RMat> se(0.5 * (xi.v[i] + xi.v[i].transpose()));
      nsd = std::max(nsd, se.eigenvalues().maxCoeff());
    }
    add(v, "xi_p_zero", zero, 0.0);
    add(v, "xi_p_symmetric", sym, 1e-10);
    add(v, "xi_p_nsd", std::max(0.0, nsd), 1e-10);
    std::vector<double> neg(xi.t.size());
    for (size_t i = 0; i < xi.t.size(); ++i) neg[i] = -xi.t[i];
    const TransportKernel xm = xi_para(b.es, beta, r, neg);
    double even = 0;
    for (size_t i = 0; i < xi.t.size(); ++i) even = std::max(even, max_abs(xi.v[i] - xm.v[i]));
    add(v, "xi_p_even", even, 1e-10);
  }
  {
    double res = 0;
    for (int k = 0; k < dim; ++k) res = std::max(res, std::max(0.0, std::abs(b.xi_d(k, k)) - 2.0));
    res = std::max(res, max_abs(b.xi_d - RMat(b.xi_d.diagonal().asDiagonal())));
    add(v, "xi_d_range", res, 1e-12);
  }

  const SpectralMeasure mu = b.has(Stage::measure) ? b.mu_p : build_measure(b.es, beta, r);
  {
    const TransportKernel rec = eval_xi_from_measure(mu, xi.t);
    double res = 0;
    for (size_t i = 0; i < xi.t.size(); ++i) res = std::max(res, max_abs(rec.v[i] - xi.v[i]));
    add(v, "cosine_identity", res, 1e-8);

    RMat mass(dim, dim);
    for (int k = 0; k < dim; ++k)
      for (int q = 0; q < dim; ++q)
        mass(k, q) = duhamel(b.es, beta, current_operator(r, k), current_operator(r, q)).real() / r.sites;
    add(v, "mass_identity", max_abs(mu.total() - mass), 1e-9);

    double psd = 0, sym = 0;
    for (const auto& a : mu.atoms) {
      Eigen::SelfAdjointEigenSolver<RMat> se(0.5 * (a.M + a.M.transpose()));
      psd = std::max(psd, -se.eigenvalues().minCoeff());
      if (a.nu == 0.0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& o : mu.atoms)
        if (std::abs(o.nu + a.nu) <= 1e-9 * std::max(1.0, std::abs(a.nu))) best = max_abs(o.M - a.M);
      sym = std::max(sym, best);
    }
    add(v, "atoms_psd", psd, 1e-10);
    add(v, "atoms_symmetric", sym, 1e-12);

    const Moments m = moment_norms(mu);
    const MomentBounds mb = moment_bounds(b.h, b.d0, r);
    add(v, "moment_mass", std::max(0.0, m.mass - mb.mass), 1e-10);
    add(v, "moment_first", std::max(0.0, m.first - mb.first), 1e-10);
    add(v, "moment_first_alt", std::max(0.0, m.first - mb.first_alt), 1e-10);

    const double gap = mu.min_gap();
    if (std::isfinite(gap)) {
      const RMat lim = static_admittance_limit(mu);
      const RMat at = static_admittance(mu, 1e-6 * gap);
      add(v, "static_admittance", max_abs(at - lim) / std::max(1.0, max_abs(lim)), 1e-8);
    } else {
      add(v, "static_admittance", max_abs(static_admittance_limit(mu)), 1e-12);
    }
  }

  {
    const DuhamelChecks dc = duhamel_identity_checks(b.h, beta, 4, b.seed);
    add(v, "duhamel_commutator", dc.commutator, 1e-9);
    add(v, "duhamel_stationarity", dc.stationarity, 1e-9);
    add(v, "duhamel_auto_bound", dc.auto_bound, 1e-10);
    add(v, "duhamel_time_reversal", dc.time_reversal, 1e-9);
  }
  {
    double res = 0;
    for (int k = 0; k < dim; ++k) res = std::max(res, std::abs(expectation(b.d0, current_operator(r, k))) / r.sites);
    add(v, "thermal_current_zero", res, 1e-12);
  }

  const double h = c.step();
  const double span = c.drive_end() - c.field.t0;
  for (size_t i = 0; i < b.drives.size(); ++i) {
    const auto& L = b.drives[i].ledger;
    std::ostringstream tag;
    tag << "[eta=" << b.drive_eta[i] << "]";
    double first = 0, scale = 1.0, after = 0, negative = 0;
    for (size_t k = 0; k < L.t.size(); ++k) {
      first = std::max(first, std::abs(L.S[k] + L.P[k] - L.work[k]));
      scale = std::max({scale, std::abs(L.S[k]), std::abs(L.P[k])});
      negative = std::max(negative, -L.S[k]);
      if (L.t[k] >= c.field.t1) after = std::max(after, std::abs(L.P[k]));
    }
    add(v, "first_law" + tag.str(), first, 10.0 * h * h * span * scale);
    add(v, "passivity" + tag.str(), negative, 1e-10);
    add(v, "field_off_potential" + tag.str(), after, 1e-14);
  }
}

}  // namespace

Stage parse_stage(const std::string& s) {
  for (int i = 0; i < 6; ++i)
    if (s == kStageNames[i]) return static_cast<Stage>(i);
  throw std::invalid_argument("unknown stage: " + s);
}

std::string to_string(Stage s) { return kStageNames[static_cast<int>(s)]; }

std::vector<Stage> parse_stages(const std::string& csv) {
  std::vector<Stage> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Stage s = parse_stage(item);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) throw std::invalid_argument("stages: empty list");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Stage> with_dependencies(Stage s) {
  std::vector<Stage> out{s};
  for (size_t i = 0; i < out.size(); ++i)
    for (Stage d : direct_deps(out[i]))
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  std::sort(out.begin(), out.end());
  return out;
}

bool ResultBundle::has(Stage s) const { return std::find(stages.begin(), stages.end(), s) != stages.end(); }

ResultBundle run_pipeline(const RunConfig& c, const std::vector<Stage>& stages_in, std::size_t seed_index) {
  validate(c);
  if (seed_index >= c.seeds.size()) throw std::invalid_argument("run_pipeline: seed index out of range");
  std::vector<Stage> stages = stages_in;
  std::sort(stages.begin(), stages.end());
  stages.erase(std::unique(stages.begin(), stages.end()), stages.end());
  for (Stage s : stages)
    for (Stage d : direct_deps(s))
      if (!std::binary_search(stages.begin(), stages.end(), d))
        throw std::invalid_argument("stage " + to_string(s) + " requires " + to_string(d));

  ResultBundle b;
  b.config_hash = config_hash(c);
  b.version = kVersion;
  b.seed = c.seeds[seed_index];
  b.stages = stages;
  FieldProfile field = c.field;
  field.l = c.l;

  if (b.has(Stage::equilibrium)) {
    b.box = make_box(c.d, c.L);
    b.pot = sample_potential(b.box, b.seed, c.dist);
    b.h = build_hamiltonian(b.box, b.pot, c.lambda);
    b.es = eigendecompose(b.h);
    b.d0 = fermi_symbol(b.es, c.beta);
    b.region = averaging_region(b.box, c.l);
    b.xi_d = xi_dia(b.d0, b.region);
    b.particle_number = b.d0.trace().real();
  }
  if (b.has(Stage::transport)) b.xi_p = xi_para(b.es, c.beta, b.region, uniform_grid(0.0, c.t_max, c.t_points));
  if (b.has(Stage::measure)) b.mu_p = build_measure(b.es, c.beta, b.region);
  if (b.has(Stage::drive)) {
    const double tf = c.drive_end();
    const int steps = std::max(1, static_cast<int>(std::lround((tf - field.t0) / c.step())));
    const double h = (tf - field.t0) / steps;
    b.lin = linear_response_series(b.mu_p, b.xi_d, field, tf, steps);
    for (double eta : c.etas) {
      DrivenHamiltonian H(b.box, b.pot, c.lambda, field, eta);
      b.drives.push_back(run_drive(H, b.d0, b.region, tf, h, 1));
      b.drive_eta.push_back(eta);
    }
  }
  if (b.has(Stage::joule)) {
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(field.w.data(), field.w.size());
    for (size_t i = 0; i < b.drives.size(); ++i)
      add_run(b.scaling, run_residuals(b.drives[i], b.lin, b.drive_eta[i], b.region.sites, b.xi_d, w));
    finish_slopes(b.scaling);
  }
  if (b.has(Stage::verify)) run_verify(b, c);
  return b;
}

}  // namespace lft
