#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lft/export.h"
#include "lft/pipeline.h"

namespace {

std::mutex log_mutex;

void log(const std::string& msg) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << msg << "\n";
}

struct Options {
  std::string config;
  std::string out;
  std::string stages;
  int threads = 1;
  bool json = false;
};

void report(const lft::ResultBundle& b) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cout << "seed " << b.seed << " hash " << b.config_hash << "\n";
  if (b.has(lft::Stage::equilibrium))
    std::cout << "  sites " << b.box.n << ", region " << b.region.sites << ", N = " << b.particle_number << "\n";
  if (b.has(lft::Stage::measure))
    std::cout << "  measure atoms " << b.mu_p.atoms.size() << ", off-zero trace " << b.mu_p.off_zero().trace() << "\n";
  if (b.has(lft::Stage::joule) && b.scaling.eta.size() >= 2) {
    const auto& s = b.scaling;
    std::cout << "  slopes ohm_p " << s.slope_ohm_p << " ohm_d " << s.slope_ohm_d << " joule_p " << s.slope_joule_p
              << " joule_d " << s.slope_joule_d << " joule_Q " << s.slope_joule_Q << " joule_P " << s.slope_joule_P
              << "\n";
  }
  for (const auto& v : b.verify)
    std::cout << "  " << (v.pass ? "ok   " : "FAIL ") << v.name << " residual " << v.residual << " tol "
              << v.tolerance << "\n";
}

bool all_pass(const lft::ResultBundle& b) {
  return std::all_of(b.verify.begin(), b.verify.end(), [](const auto& v) { return v.pass; });
}

int run_single(const Options& o, lft::Stage stage) {
  lft::RunConfig c = lft::parse_config(o.config);
  if (!o.out.empty()) c.out = o.out;
  const auto stages = o.stages.empty() ? lft::with_dependencies(stage) : lft::parse_stages(o.stages);
  const auto b = lft::run_pipeline(c, stages, 0);
  lft::export_bundle(b, c.out, o.json ? lft::Format::json : lft::Format::csv, c.every);
  report(b);
  return all_pass(b) ? 0 : 1;
}

int run_sweep(const Options& o) {
  lft::RunConfig c = lft::parse_config(o.config);
  if (!o.out.empty()) c.out = o.out;
  const auto stages = o.stages.empty() ? lft::parse_stages("equilibrium,transport,measure,verify")
                                       : lft::parse_stages(o.stages);
  const int nthreads = std::max(1, std::min<int>(o.threads, static_cast<int>(c.seeds.size())));
  std::atomic<size_t> next{0};
  std::atomic<int> failures{0};
  auto worker = [&] {
    for (size_t i = next++; i < c.seeds.size(); i = next++) {
      try {
        const auto b = lft::run_pipeline(c, stages, i);
        const std::string dir = c.out + "/seed_" + std::to_string(c.seeds[i]);
        {
          std::lock_guard<std::mutex> lock(log_mutex);
          lft::export_bundle(b, dir, o.json ? lft::Format::json : lft::Format::csv, c.every);
        }
        report(b);
        if (!all_pass(b)) ++failures;
      } catch (const std::exception& e) {
        log("seed " + std::to_string(c.seeds[i]) + ": " + e.what());
        ++failures;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice fermion transport simulator"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides config)");
    sub->add_option("--stages", o.stages, "comma-separated stage list");
    sub->add_option("--threads", o.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_flag("--json", o.json, "also write measure.json");
  };
  const char* names[] = {"equilibrium", "transport", "measure", "drive", "joule", "verify"};
  std::vector<CLI::App*> subs;
  for (const char* n : names) {
    subs.push_back(app.add_subcommand(n, std::string("run the ") + n + " stage and its dependencies"));
    add_common(subs.back());
  }
  auto* sweep = app.add_subcommand("sweep", "run the pipeline for every seed");
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sweep->parsed()) return run_sweep(o);
    for (size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return run_single(o, static_cast<lft::Stage>(i));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
