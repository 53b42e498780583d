#pragma once

#include <string>
#include <vector>

#include "lft/config.h"
#include "lft/dynamics.h"

namespace lft {

enum class Stage { equilibrium, transport, measure, drive, joule, verify };

Stage parse_stage(const std::string& s);
std::string to_string(Stage s);
std::vector<Stage> parse_stages(const std::string& csv);  // "a,b,c"
// s together with everything it depends on, in run order
std::vector<Stage> with_dependencies(Stage s);

struct VerifyItem {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ResultBundle {
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  std::vector<Stage> stages;

  // equilibrium
  LatticeBox box;
  Potential pot;
  Region region;
  CMat h, d0;
  EigenSystem es;
  RMat xi_d;
  double particle_number = 0.0;

  TransportKernel xi_p;        // transport
  SpectralMeasure mu_p;        // measure
  LinearResponseSeries lin;    // drive
  std::vector<DriveRun> drives;
  std::vector<double> drive_eta;
  ScalingReport scaling;       // joule
  std::vector<VerifyItem> verify;

  bool has(Stage s) const;
};

inline constexpr const char* kVersion = "lft 0.1.0";

// Runs the given stages for config.seeds[seed_index]; throws std::invalid_argument on a missing dependency.
ResultBundle run_pipeline(const RunConfig& c, const std::vector<Stage>& stages, std::size_t seed_index = 0);

}  // namespace lft
