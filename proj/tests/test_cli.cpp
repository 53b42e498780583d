#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lft/export.h"
#include "lft/pipeline.h"

using namespace lft;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("lft_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

RunConfig reference() { return parse_config(LFT_SOURCE_DIR "/configs/reference.json"); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LFT_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const auto c = parse_config_text(R"({"d":1,"l":2,"L":12})");
  CHECK(c.beta == 1.0);
  CHECK(c.lambda == 0.0);
  CHECK(c.seeds == std::vector<std::uint64_t>{1});
  CHECK(c.field.t0 == 0.0);
  CHECK(c.field.t1 == 2.0);
  CHECK(c.buffer() == 8);
  CHECK(c.step() == doctest::Approx(1e-3));
  CHECK(c.drive_end() == 3.0);
  CHECK(c.field.l == 2);
  CHECK(c.etas.size() == 3);

  CHECK(error_of(R"({"d":1,"l":2,"L":9})").rfind("L:", 0) == 0);
  CHECK(error_of(R"({"d":1,"l":5,"L":3})").rfind("L:", 0) == 0);
  CHECK(error_of(R"({"d":4,"l":0,"L":9})").rfind("d:", 0) == 0);
  CHECK(error_of(R"({"d":1,"l":2,"L":12,"beta":0})").rfind("beta:", 0) == 0);
  CHECK(error_of(R"({"d":1,"l":2,"L":12,"bogus":1})").rfind("bogus:", 0) == 0);
  CHECK(error_of(R"({"d":2,"l":1,"L":9,"field":{"w":[1,1]}})").rfind("field.w:", 0) == 0);
  CHECK(error_of(R"({"d":2,"l":1,"L":9,"field":{"w":[0.6,0.8]}})").empty());
  CHECK(error_of(R"({"d":1,"l":1,"L":9,"eta":[0.1,-1]})").rfind("eta:", 0) == 0);
  CHECK(error_of(R"({"d":1,"l":1,"L":9,"field":{"t0":1,"t1":1}})").rfind("field.t1:", 0) == 0);
  CHECK(error_of(R"({"d":1,"l":1})").rfind("L:", 0) == 0);
  CHECK_THROWS_AS(parse_config_text("{not json"), std::runtime_error);
}

TEST_CASE("config hash") {
  const auto a = parse_config_text(R"({"d":1,"l":2,"L":12})");
  const auto b = parse_config_text(R"({"L":12, "l":2, "d":1, "beta":1.0, "out":"elsewhere"})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  const auto c = parse_config_text(R"({"d":1,"l":2,"L":12,"beta":2})");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("stages") {
  CHECK(parse_stage("joule") == Stage::joule);
  CHECK_THROWS_AS(parse_stage("nope"), std::invalid_argument);
  const auto s = parse_stages("verify,equilibrium,verify");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Stage::equilibrium);
  CHECK(s[1] == Stage::verify);
  const auto j = with_dependencies(Stage::joule);
  CHECK(j == std::vector<Stage>{Stage::equilibrium, Stage::measure, Stage::drive, Stage::joule});

  const auto c = reference();
  try {
    run_pipeline(c, {Stage::equilibrium, Stage::measure, Stage::joule});
    FAIL("missing dependency accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("joule requires drive") != std::string::npos);
  }
  const auto b = run_pipeline(c, {Stage::equilibrium});
  CHECK(b.has(Stage::equilibrium));
  CHECK_FALSE(b.has(Stage::measure));
  CHECK(b.box.n == 3);
}

TEST_CASE("reference verify passes") {
  const auto c = reference();
  const auto b = run_pipeline(c, with_dependencies(Stage::verify));
  CHECK(b.verify.size() > 15);
  for (const auto& v : b.verify) {
    INFO(v.name, " residual ", v.residual, " tol ", v.tolerance);
    CHECK(v.pass);
  }
}

TEST_CASE("exports and determinism") {
  auto c = reference();
  const std::vector<Stage> all{Stage::equilibrium, Stage::transport, Stage::measure,
                               Stage::drive,       Stage::joule,     Stage::verify};
  const auto d1 = scratch("a"), d2 = scratch("b");
  export_bundle(run_pipeline(c, all), d1.string(), Format::json, 50);
  export_bundle(run_pipeline(c, all), d2.string(), Format::json, 50);
  for (const char* f : {"equilibrium.json", "xi_para.csv", "measure_atoms.csv", "measure.json", "currents.csv",
                        "energies.csv", "scaling.csv", "verify_report.json"}) {
    INFO(f);
    REQUIRE(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  const std::string hash = config_hash(c);
  CHECK(slurp(d1 / "currents.csv").rfind("# config_hash=" + hash, 0) == 0);
  const std::string energies = slurp(d1 / "energies.csv");
  CHECK(energies.find("t,eta,S,P,Ip,Id,work") != std::string::npos);
  CHECK(slurp(d1 / "currents.csv").find("Jp_1,Jd_1,Jlin_1") != std::string::npos);

  const auto rep = nlohmann::json::parse(slurp(d1 / "verify_report.json"));
  CHECK(rep["config_hash"] == hash);
  for (auto& [k, v] : rep["identities"].items()) {
    INFO(k);
    CHECK(v["pass"].get<bool>());
  }

  // round trips
  const auto b = run_pipeline(c, {Stage::equilibrium, Stage::transport, Stage::measure});
  const auto k = read_kernel_csv((d1 / "xi_para.csv").string());
  REQUIRE(k.t.size() == b.xi_p.t.size());
  for (size_t i = 0; i < k.t.size(); ++i) {
    CHECK(k.t[i] == b.xi_p.t[i]);
    CHECK((k.v[i] - b.xi_p.v[i]).cwiseAbs().maxCoeff() <= 1e-15);
  }
  for (const auto& mu : {read_measure_csv((d1 / "measure_atoms.csv").string()),
                         read_measure_json((d1 / "measure.json").string())}) {
    REQUIRE(mu.atoms.size() == b.mu_p.atoms.size());
    for (size_t i = 0; i < mu.atoms.size(); ++i) {
      CHECK(mu.atoms[i].nu == b.mu_p.atoms[i].nu);
      CHECK((mu.atoms[i].M - b.mu_p.atoms[i].M).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }

  // empty measure: header only
  const auto e = scratch("empty");
  SpectralMeasure empty;
  empty.dim = 1;
  write_measure_csv(empty, (e / "m.csv").string(), hash);
  CHECK(slurp(e / "m.csv") == "# config_hash=" + hash + "\nnu,M_11\n");
  CHECK(read_measure_csv((e / "m.csv").string()).atoms.empty());
}

TEST_CASE("command line") {
  const std::string cfg = LFT_SOURCE_DIR "/configs/reference.json";
  const auto out = scratch("cli");
  CHECK(run_cli("verify --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "verify_report.json"));
  CHECK(run_cli("equilibrium --config " + cfg + " --out " + out.string() + " --stages equilibrium,joule") == 2);
  std::ofstream(out / "bad.json") << R"({"d":1,"l":3,"L":2})";
  CHECK(run_cli("equilibrium --config " + (out / "bad.json").string() + " --out " + out.string()) == 2);
  CHECK(run_cli("equilibrium --config /nonexistent.json") != 0);

  std::ofstream(out / "sweep.json") << R"({"d":1,"l":0,"L":1,"seeds":[1,2,3],"field":{"t1":0.25}})";
  CHECK(run_cli("sweep --config " + (out / "sweep.json").string() + " --out " + (out / "sw").string() +
                " --threads 3") == 0);
  for (int s : {1, 2, 3}) CHECK(fs::exists(out / "sw" / ("seed_" + std::to_string(s)) / "verify_report.json"));
}
