#include "lft/export.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lft {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return f;
}

// data rows of a hash-prefixed csv, header skipped
std::vector<std::vector<double>> read_rows(const std::string& path, std::string* header = nullptr) {
  auto f = open_in(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool seen_header = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = line;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (!seen_header) throw std::runtime_error(path + ": missing header");
  return rows;
}

int header_columns(const std::string& header) {
  return static_cast<int>(std::count(header.begin(), header.end(), ',')) + 1;
}

}  // namespace

void write_kernel_csv(const TransportKernel& k, const std::string& path, const std::string& hash) {
  auto f = open_out(path);
  f << "# config_hash=" << hash << "\n" << "t,k,q,value\n";
  for (size_t i = 0; i < k.t.size(); ++i)
    for (int a = 0; a < k.v[i].rows(); ++a)
      for (int b = 0; b < k.v[i].cols(); ++b)
        f << num(k.t[i]) << "," << a + 1 << "," << b + 1 << "," << num(k.v[i](a, b)) << "\n";
}

TransportKernel read_kernel_csv(const std::string& path) {
  const auto rows = read_rows(path);
  int dim = 0;
  for (const auto& r : rows) {
    if (r.size() != 4) throw std::runtime_error(path + ": expected 4 columns");
    dim = std::max(dim, static_cast<int>(r[1]));
  }
  TransportKernel k;
  for (const auto& r : rows) {
    if (k.t.empty() || k.t.back() != r[0]) {
      k.t.push_back(r[0]);
      k.v.push_back(RMat::Zero(dim, dim));
    }
    k.v.back()(static_cast<int>(r[1]) - 1, static_cast<int>(r[2]) - 1) = r[3];
  }
  return k;
}

void write_measure_csv(const SpectralMeasure& mu, const std::string& path, const std::string& hash) {
  auto f = open_out(path);
  f << "# config_hash=" << hash << "\n" << "nu";
  for (int a = 0; a < mu.dim; ++a)
    for (int b = 0; b < mu.dim; ++b) f << ",M_" << a + 1 << b + 1;
  f << "\n";
  for (const auto& at : mu.atoms) {
    f << num(at.nu);
    for (int a = 0; a < mu.dim; ++a)
      for (int b = 0; b < mu.dim; ++b) f << "," << num(at.M(a, b));
    f << "\n";
  }
}

SpectralMeasure read_measure_csv(const std::string& path) {
  std::string header;
  const auto rows = read_rows(path, &header);
  const int cols = header_columns(header) - 1;
  int dim = 1;
  while (dim * dim < cols) ++dim;
  if (dim * dim != cols) throw std::runtime_error(path + ": bad atom header");
  SpectralMeasure mu;
  mu.dim = dim;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols + 1) throw std::runtime_error(path + ": bad row");
    Atom a;
    a.nu = r[0];
    a.M = RMat(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a.M(i, j) = r[1 + i * dim + j];
    mu.atoms.push_back(std::move(a));
  }
  return mu;
}

void write_measure_json(const SpectralMeasure& mu, const std::string& path, const std::string& hash) {
  json j;
  j["config_hash"] = hash;
  j["dim"] = mu.dim;
  j["atoms"] = json::array();
  for (const auto& a : mu.atoms) {
    std::vector<double> rm(a.M.size());  // row-major
    for (int i = 0; i < mu.dim; ++i)
      for (int k = 0; k < mu.dim; ++k) rm[i * mu.dim + k] = a.M(i, k);
    j["atoms"].push_back({{"nu", a.nu}, {"M", rm}});
  }
  auto f = open_out(path);
  f << j.dump(1) << "\n";
}

SpectralMeasure read_measure_json(const std::string& path) {
  auto f = open_in(path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  SpectralMeasure mu;
  mu.dim = j.at("dim").get<int>();
  for (const auto& a : j.at("atoms")) {
    Atom at;
    at.nu = a.at("nu").get<double>();
    const auto m = a.at("M").get<std::vector<double>>();
    if (static_cast<int>(m.size()) != mu.dim * mu.dim) throw std::runtime_error(path + ": bad atom size");
    at.M = RMat(mu.dim, mu.dim);
    for (int i = 0; i < mu.dim; ++i)
      for (int k = 0; k < mu.dim; ++k) at.M(i, k) = m[i * mu.dim + k];
    mu.atoms.push_back(std::move(at));
  }
  return mu;
}

void write_verify_json(const std::vector<VerifyItem>& v, const std::string& path, const std::string& hash) {
  json j;
  j["config_hash"] = hash;
  json items = json::object();
  for (const auto& it : v) items[it.name] = {{"residual", it.residual}, {"tolerance", it.tolerance}, {"pass", it.pass}};
  j["identities"] = items;
  auto f = open_out(path);
  f << j.dump(1) << "\n";
}

namespace {

void write_equilibrium(const ResultBundle& b, const std::string& path) {
  json j;
  j["config_hash"] = b.config_hash;
  j["version"] = b.version;
  j["seed"] = b.seed;
  j["sites"] = b.box.n;
  j["region_sites"] = b.region.sites;
  j["particle_number"] = b.particle_number;
  j["energy_min"] = b.es.E.size() ? b.es.E.minCoeff() : 0.0;
  j["energy_max"] = b.es.E.size() ? b.es.E.maxCoeff() : 0.0;
  std::vector<double> xd(b.xi_d.rows());
  for (int k = 0; k < b.xi_d.rows(); ++k) xd[k] = b.xi_d(k, k);
  j["xi_d"] = xd;
  auto f = open_out(path);
  f << j.dump(1) << "\n";
}

void write_drive(const ResultBundle& b, const std::string& dir, int every) {
  const int dim = b.box.dim;
  auto fc = open_out(dir + "/currents.csv");
  auto fe = open_out(dir + "/energies.csv");
  fc << "# config_hash=" << b.config_hash << "\nt,eta";
  for (const char* p : {"Jp_", "Jd_", "Jlin_"})
    for (int k = 0; k < dim; ++k) fc << "," << p << k + 1;
  fc << "\n";
  fe << "# config_hash=" << b.config_hash << "\nt,eta,S,P,Ip,Id,work\n";
  for (size_t i = 0; i < b.drives.size(); ++i) {
    const auto& run = b.drives[i];
    const double eta = b.drive_eta[i];
    for (size_t k = 0; k < run.t.size(); ++k) {
      if (k % every != 0 && k + 1 != run.t.size()) continue;
      fc << num(run.t[k]) << "," << num(eta);
      for (int q = 0; q < dim; ++q) fc << "," << num(run.currents[k].Jp[q]);
      for (int q = 0; q < dim; ++q) fc << "," << num(run.currents[k].Jd[q]);
      for (int q = 0; q < dim; ++q) fc << "," << num(eta * (b.lin.Jp[k][q] + b.lin.Jd[k][q]));
      fc << "\n";
      const auto& L = run.ledger;
      fe << num(L.t[k]) << "," << num(eta) << "," << num(L.S[k]) << "," << num(L.P[k]) << "," << num(L.Ip[k]) << ","
         << num(L.Id[k]) << "," << num(L.work[k]) << "\n";
    }
  }
}

void write_scaling(const ResultBundle& b, const std::string& path) {
  const auto& s = b.scaling;
  auto f = open_out(path);
  f << "# config_hash=" << b.config_hash << "\n"
    << "eta,ohm_p,ohm_d,joule_p,joule_d,joule_Q,joule_P,heat,heat_pred\n";
  for (size_t i = 0; i < s.eta.size(); ++i)
    f << num(s.eta[i]) << "," << num(s.ohm_p[i]) << "," << num(s.ohm_d[i]) << "," << num(s.joule_p[i]) << ","
      << num(s.joule_d[i]) << "," << num(s.joule_Q[i]) << "," << num(s.joule_P[i]) << "," << num(s.heat[i]) << ","
      << num(s.heat_pred[i]) << "\n";
  f << "# slopes ohm_p=" << num(s.slope_ohm_p) << " ohm_d=" << num(s.slope_ohm_d) << " joule_p=" << num(s.slope_joule_p)
    << " joule_d=" << num(s.slope_joule_d) << " joule_Q=" << num(s.slope_joule_Q) << " joule_P=" << num(s.slope_joule_P)
    << "\n";
}

}  // namespace

void export_bundle(const ResultBundle& b, const std::string& dir, Format fmt, int every) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  if (every < 1) every = 1;
  if (b.has(Stage::equilibrium)) write_equilibrium(b, dir + "/equilibrium.json");
  if (b.has(Stage::transport)) write_kernel_csv(b.xi_p, dir + "/xi_para.csv", b.config_hash);
  if (b.has(Stage::measure)) {
    write_measure_csv(b.mu_p, dir + "/measure_atoms.csv", b.config_hash);
    if (fmt == Format::json) write_measure_json(b.mu_p, dir + "/measure.json", b.config_hash);
  }
  if (b.has(Stage::drive)) write_drive(b, dir, every);
  if (b.has(Stage::joule)) write_scaling(b, dir + "/scaling.csv");
  if (b.has(Stage::verify)) write_verify_json(b.verify, dir + "/verify_report.json", b.config_hash);
}

}  // namespace lft
