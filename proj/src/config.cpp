#include "lft/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lft {

using nlohmann::json;

int RunConfig::buffer() const { return static_cast<int>(std::ceil(4.0 * (field.t1 - field.t0) - 1e-12)); }

double RunConfig::step() const { return dt > 0 ? dt : (field.t1 - field.t0) / 2000.0; }

double RunConfig::drive_end() const { return tf > field.t1 ? tf : field.t1 + 1.0; }

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw std::invalid_argument(field + ": " + msg);
}

template <class T>
T get(const json& j, const char* key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path, "wrong type");
  }
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.d < 1 || c.d > 3) fail("d", "must be 1, 2 or 3");
  if (c.l < 0) fail("l", "must be >= 0");
  if (c.L < c.l) fail("L", "must be >= l (got L=" + std::to_string(c.L) + ", l=" + std::to_string(c.l) + ")");
  if (c.L < c.l + c.buffer())
    fail("L", "must be >= l + buffer = " + std::to_string(c.l + c.buffer()) + " (buffer = ceil(4 (t1 - t0)))");
  double n = std::pow(2.0 * c.L + 1, c.d);
  if (n > kMaxSites) fail("L", "box has " + std::to_string(static_cast<long long>(n)) + " sites, maximum is " +
                                    std::to_string(kMaxSites));
  if (!(c.beta > 0)) fail("beta", "must be positive");
  if (!(c.lambda >= 0)) fail("lambda", "must be >= 0");
  if (c.seeds.empty()) fail("seed", "at least one seed required");
  if (!(c.field.t1 > c.field.t0)) fail("field.t1", "must exceed field.t0");
  if (static_cast<int>(c.field.w.size()) != c.d) fail("field.w", "must have d components");
  double nrm = 0;
  for (double v : c.field.w) nrm += v * v;
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-9) fail("field.w", "must have unit norm");
  if (!std::isfinite(c.field.amplitude)) fail("field.amplitude", "must be finite");
  if (!std::isfinite(c.field.carrier)) fail("field.carrier", "must be finite");
  if (c.etas.empty()) fail("eta", "at least one value required");
  for (double e : c.etas)
    if (!(e > 0)) fail("eta", "values must be positive");
  if (c.dt < 0) fail("dt", "must be positive");
  if (c.tf != 0 && !(c.tf > c.field.t1)) fail("tf", "must exceed field.t1");
  if (!(c.t_max > 0)) fail("t_max", "must be positive");
  if (c.t_points < 2) fail("t_points", "must be >= 2");
  if (c.every < 1) fail("every", "must be >= 1");
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config parse error: top level must be an object");
  static const char* known[] = {"d", "l", "L", "beta", "lambda", "seed", "seeds", "distribution", "field",
                                "eta", "dt", "tf", "t_max", "t_points", "every", "out"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(it.key(), "unknown key");
  }
  RunConfig c;
  for (const char* k : {"d", "l", "L"})
    if (!j.contains(k)) fail(k, "required");
  c.d = get<int>(j, "d", "d");
  c.l = get<int>(j, "l", "l");
  c.L = get<int>(j, "L", "L");
  if (j.contains("beta")) c.beta = get<double>(j, "beta", "beta");
  if (j.contains("lambda")) c.lambda = get<double>(j, "lambda", "lambda");
  if (j.contains("seed")) c.seeds = {get<std::uint64_t>(j, "seed", "seed")};
  if (j.contains("seeds")) c.seeds = get<std::vector<std::uint64_t>>(j, "seeds", "seeds");
  if (j.contains("distribution")) {
    try {
      c.dist = parse_distribution(get<std::string>(j, "distribution", "distribution"));
    } catch (const std::invalid_argument& e) {
      fail("distribution", e.what());
    }
  }
  c.field.w.assign(c.d, 0.0);
  c.field.w[0] = 1.0;
  if (j.contains("field")) {
    const json& f = j["field"];
    if (!f.is_object()) fail("field", "must be an object");
    for (auto it = f.begin(); it != f.end(); ++it) {
      const std::string k = it.key();
      if (k != "t0" && k != "t1" && k != "amplitude" && k != "carrier" && k != "w") fail("field." + k, "unknown key");
    }
    if (f.contains("t0")) c.field.t0 = get<double>(f, "t0", "field.t0");
    if (f.contains("t1")) c.field.t1 = get<double>(f, "t1", "field.t1");
    if (f.contains("amplitude")) c.field.amplitude = get<double>(f, "amplitude", "field.amplitude");
    if (f.contains("carrier")) c.field.carrier = get<double>(f, "carrier", "field.carrier");
    if (f.contains("w")) c.field.w = get<std::vector<double>>(f, "w", "field.w");
  }
  if (j.contains("eta")) {
    if (j["eta"].is_number())
      c.etas = {get<double>(j, "eta", "eta")};
    else
      c.etas = get<std::vector<double>>(j, "eta", "eta");
  }
  if (j.contains("dt")) c.dt = get<double>(j, "dt", "dt");
  if (j.contains("tf")) c.tf = get<double>(j, "tf", "tf");
  if (j.contains("t_max")) c.t_max = get<double>(j, "t_max", "t_max");
  if (j.contains("t_points")) c.t_points = get<int>(j, "t_points", "t_points");
  if (j.contains("every")) c.every = get<int>(j, "every", "every");
  if (j.contains("out")) c.out = get<std::string>(j, "out", "out");
  c.field.l = c.l;
  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string to_json(const RunConfig& c) {
  json j;
  j["d"] = c.d;
  j["l"] = c.l;
  j["L"] = c.L;
  j["beta"] = c.beta;
  j["lambda"] = c.lambda;
  j["seeds"] = c.seeds;
  j["distribution"] = to_string(c.dist);
  j["field"] = {{"t0", c.field.t0}, {"t1", c.field.t1}, {"amplitude", c.field.amplitude},
                {"carrier", c.field.carrier}, {"w", c.field.w}};
  j["eta"] = c.etas;
  j["dt"] = c.step();
  j["tf"] = c.drive_end();
  j["t_max"] = c.t_max;
  j["t_points"] = c.t_points;
  j["every"] = c.every;
  return j.dump();  // object keys are sorted
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lft
