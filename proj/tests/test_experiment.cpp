#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "fflab/experiment.hpp"

using namespace fflab;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("experiment");

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("fflab_test_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig base_sumprod(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.kind = "sumprod";
  cfg.qs = {13};
  cfg.sizes = {2, 3};
  cfg.mode = SearchMode::Exhaustive;
  cfg.seed = 1;
  cfg.out_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("config pairs parse and reject unknowns") {
  ExperimentConfig cfg;
  apply_config_pair(cfg, "kind", "distance");
  apply_config_pair(cfg, "q", "7,11");
  apply_config_pair(cfg, "n", "3");
  apply_config_pair(cfg, "mode", "randomized");
  apply_config_pair(cfg, "trials", "9");
  apply_config_pair(cfg, "seed", "12345678901");
  apply_config_pair(cfg, "out", "elsewhere");
  apply_config_pair(cfg, "format", "csv");
  apply_config_pair(cfg, "generator", "grid");
  apply_config_pair(cfg, "exclude_zero", "true");

  CHECK(cfg.kind == "distance");
  CHECK(cfg.qs == std::vector<std::uint32_t>{7, 11});
  CHECK(cfg.sizes == std::vector<std::uint32_t>{3});
  CHECK(cfg.mode == SearchMode::HillClimb);
  CHECK(cfg.trials == 9);
  CHECK(cfg.seed == 12345678901ull);
  CHECK(cfg.out_dir == "elsewhere");
  CHECK(cfg.format == "csv");
  CHECK(cfg.exclude_zero);

  CHECK_THROWS_AS(apply_config_pair(cfg, "size", "3"), BadConfig);
  CHECK_THROWS_AS(apply_config_pair(cfg, "q", "7,,11"), BadConfig);
  CHECK_THROWS_AS(apply_config_pair(cfg, "trials", "many"), BadConfig);
  CHECK_THROWS_AS(apply_config_pair(cfg, "mode", "annealed"), BadConfig);
  CHECK_THROWS_AS(apply_config_pair(cfg, "exclude_zero", "maybe"), BadConfig);
}

TEST_CASE("config files allow comments and aliases") {
  std::stringstream is(
      "# batch setup\n"
      "kind=sumprod\n"
      "qs=17,13\n"
      "sizes=4\n"
      "\n"
      "seed=3   # trailing comment\n");
  ExperimentConfig cfg;
  read_config_file(is, cfg);
  CHECK(cfg.kind == "sumprod");
  CHECK(cfg.qs == std::vector<std::uint32_t>{17, 13});
  CHECK(cfg.sizes == std::vector<std::uint32_t>{4});
  CHECK(cfg.seed == 3);

  std::stringstream bad("kind sumprod\n");
  ExperimentConfig c2;
  CHECK_THROWS_AS(read_config_file(bad, c2), BadConfig);
}

TEST_CASE("hash covers outputs but not the output directory") {
  ExperimentConfig a = base_sumprod("x");
  ExperimentConfig b = a;
  b.out_dir = "completely/else/where";
  CHECK(config_hash(a) == config_hash(b));

  ExperimentConfig reordered = a;
  reordered.qs = {13};
  reordered.sizes = {3, 2};  // canonical order, same run
  CHECK(config_hash(a) == config_hash(reordered));

  ExperimentConfig seeded = a;
  seeded.seed = 2;
  CHECK(config_hash(a) != config_hash(seeded));
  ExperimentConfig other = a;
  other.kind = "incidence";
  CHECK(config_hash(a) != config_hash(other));
}

TEST_CASE("runs write canonical tables plus manifest") {
  fs::path out = fresh_dir("sumprod");
  RunOutcome r = run_experiment(base_sumprod(out));
  CHECK(r.ok);
  CHECK(slurp(out / "sumprod.csv") ==
        "q,n,minMax,mode,trials,seed,argmin\n"
        "13,2,3,exhaustive,1,1,0;1\n"
        "13,3,5,exhaustive,1,1,0;1;2\n");

  auto man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["artifact_version"] == "0.1.0");
  char want[17];
  std::snprintf(want, sizeof want, "%016llx",
                static_cast<unsigned long long>(config_hash(base_sumprod(out))));
  CHECK(man["config_hash"] == std::string(want));
  CHECK(man["provenance"].size() == 2);

  auto mirror = nlohmann::json::parse(slurp(out / "sumprod.json"));
  CHECK(mirror["rows"].size() == 2);
  CHECK(mirror["rows"][0]["minMax"] == 3);
  CHECK(mirror["rows"][1]["argmin"] == nlohmann::json::array({0, 1, 2}));
}

TEST_CASE("csv format skips the json mirror") {
  fs::path out = fresh_dir("csvonly");
  ExperimentConfig cfg = base_sumprod(out);
  cfg.format = "csv";
  run_experiment(cfg);
  CHECK(fs::exists(out / "sumprod.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK_FALSE(fs::exists(out / "sumprod.json"));
}

TEST_CASE("replay and worker count leave bytes unchanged") {
  fs::path o1 = fresh_dir("rep1"), o2 = fresh_dir("rep2"), o3 = fresh_dir("rep3");
  ExperimentConfig cfg;
  cfg.kind = "incidence";
  cfg.qs = {11, 7};
  cfg.sizes = {16, 9};
  cfg.generator = "elekes";
  cfg.trials = 2;
  cfg.seed = 5;

  cfg.out_dir = o1.string();
  run_experiment(cfg);
  cfg.out_dir = o2.string();
  run_experiment(cfg);
  CHECK(slurp(o1 / "incidence.csv") == slurp(o2 / "incidence.csv"));
  CHECK(slurp(o1 / "incidence.json") == slurp(o2 / "incidence.json"));

  setenv("FFLAB_WORKERS", "4", 1);
  cfg.out_dir = o3.string();
  run_experiment(cfg);
  unsetenv("FFLAB_WORKERS");
  CHECK(slurp(o1 / "incidence.csv") == slurp(o3 / "incidence.csv"));

  // sorted cells: q-major then n
  std::string csv = slurp(o1 / "incidence.csv");
  CHECK(csv.find("7,9,") < csv.find("7,16,"));
  CHECK(csv.find("7,16,") < csv.find("11,9,"));
}

TEST_CASE("verify-all run reports suite outcomes") {
  fs::path out = fresh_dir("verify");
  ExperimentConfig cfg;
  cfg.kind = "verify-all";
  cfg.qs = {3};
  cfg.seed = 7;
  cfg.out_dir = out.string();
  RunOutcome r = run_experiment(cfg);
  CHECK(r.ok);
  CHECK(r.suites.size() >= 10);
  std::string csv = slurp(out / "verify-all.csv");
  CHECK(csv.find("cauchy_davenport,3,") != std::string::npos);
  CHECK(csv.find(",pass") != std::string::npos);
  CHECK(csv.find(",FAIL") == std::string::npos);
}

TEST_CASE("invalid configurations are rejected up front") {
  ExperimentConfig cfg = base_sumprod(fresh_dir("bad"));
  cfg.qs = {};
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.qs = {9};
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.sizes = {14};  // above q = 13
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.kind = "distance";
  cfg.qs = {13};  // -1 is a square
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.kind = "kakeya";
  cfg.qs = {17};
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.format = "xml";
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);

  cfg = base_sumprod(fresh_dir("bad"));
  cfg.kind = "incidence";
  cfg.generator = "spiral";
  CHECK_THROWS_AS(run_experiment(cfg), BadConfig);
}

TEST_CASE("plot scripts appear for each table found") {
  fs::path out = fresh_dir("plots");
  run_experiment(base_sumprod(out));
  ExperimentConfig k;
  k.kind = "kakeya";
  k.qs = {3};
  k.trials = 1;
  k.seed = 0;
  k.out_dir = out.string();
  run_experiment(k);

  auto written = emit_plots(out.string());
  CHECK(written == std::vector<std::string>{"plot_sumprod.py", "plot_kakeya.py"});
  CHECK(fs::exists(out / "plot_sumprod.py"));
  CHECK(fs::exists(out / "plot_kakeya.py"));
  CHECK_FALSE(fs::exists(out / "plot_distance.py"));
  CHECK(slurp(out / "plot_sumprod.py").find("sumprod.csv") != std::string::npos);

  fs::path empty = fresh_dir("noresults");
  fs::create_directories(empty);
  CHECK_THROWS_AS(emit_plots(empty.string()), MissingResults);
}

TEST_SUITE_END();
