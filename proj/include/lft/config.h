#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lft/lattice.h"

namespace lft {

struct RunConfig {
  int d = 1;
  int l = 2;
  int L = 12;
  double beta = 1.0;
  double lambda = 0.0;
  std::vector<std::uint64_t> seeds{1};
  Distribution dist = Distribution::uniform;
  FieldProfile field;  // field.l mirrors l
  std::vector<double> etas{1e-1, 1e-2, 1e-3};
  double dt = 0.0;      // 0 -> (t1 - t0) / 2000
  double tf = 0.0;      // drive end, 0 -> t1 + 1
  double t_max = 20.0;  // transport kernel grid [0, t_max]
  int t_points = 201;
  int every = 10;       // drive samples written every `every` steps
  std::string out = "out";

  int buffer() const;
  double step() const;
  double drive_end() const;
};

// Throws std::invalid_argument("<field>: ...") on violated constraints.
void validate(const RunConfig& c);

RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config(const std::string& path);

std::string to_json(const RunConfig& c);   // resolved config, canonical key order
std::string config_hash(const RunConfig& c);  // FNV-1a 64 of to_json, hex

}  // namespace lft
