#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fflab/errors.hpp"
#include "fflab/experiment.hpp"

namespace {

struct RawOpts {
  std::string config, q, n, mode, trials, seed, out, format, generator;
  bool exclude_zero = false;
};

struct SubFlags {
  bool sizes = false;
  bool mode = false;
  bool trials = false;
  bool generator = false;
  bool exclude = false;
};

void add_run_options(CLI::App* cmd, RawOpts& o, const SubFlags& fl) {
  cmd->add_option("--config", o.config, "key=value config file; flags override it");
  cmd->add_option("--q", o.q, "comma-separated prime moduli");
  if (fl.sizes) cmd->add_option("--n", o.n, "comma-separated set sizes");
  if (fl.mode) cmd->add_option("--mode", o.mode, "exhaustive or randomized");
  if (fl.trials) cmd->add_option("--trials", o.trials, "random restarts per cell");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--out", o.out, "output directory (default results)");
  cmd->add_option("--format", o.format, "csv, or json for a JSON mirror too");
  if (fl.generator)
    cmd->add_option("--generator", o.generator, "uniform, elekes, or grid");
  if (fl.exclude)
    cmd->add_flag("--exclude-zero", o.exclude_zero,
                  "count only nonzero distances");
}

// Precedence: config file first, then any flag the user actually passed.
fflab::ExperimentConfig build_config(const CLI::App* cmd, const RawOpts& o,
                                     const std::string& kind) {
  fflab::ExperimentConfig cfg;
  auto given = [cmd](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--config")) {
    std::ifstream is(o.config);
    if (!is) throw fflab::BadConfig("cannot read config file: " + o.config);
    fflab::read_config_file(is, cfg);
  }
  cfg.kind = kind;
  if (given("--q")) fflab::apply_config_pair(cfg, "q", o.q);
  if (given("--n")) fflab::apply_config_pair(cfg, "n", o.n);
  if (given("--mode")) fflab::apply_config_pair(cfg, "mode", o.mode);
  if (given("--trials")) fflab::apply_config_pair(cfg, "trials", o.trials);
  if (given("--seed")) fflab::apply_config_pair(cfg, "seed", o.seed);
  if (given("--out")) fflab::apply_config_pair(cfg, "out", o.out);
  if (given("--format")) fflab::apply_config_pair(cfg, "format", o.format);
  if (given("--generator"))
    fflab::apply_config_pair(cfg, "generator", o.generator);
  if (given("--exclude-zero")) cfg.exclude_zero = true;
  return cfg;
}

int run_kind(const CLI::App* cmd, const RawOpts& o, const std::string& kind) {
  fflab::ExperimentConfig cfg = build_config(cmd, o, kind);
  fflab::RunOutcome out = fflab::run_experiment(cfg);
  if (kind == "verify-all") {
    for (const fflab::SuiteResult& s : out.suites) {
      std::cout << std::left << std::setw(20) << s.suite << " q=" << std::setw(6)
                << s.q << " checks=" << std::setw(8) << s.checks
                << " violations=" << s.violations << "  "
                << (s.passed() ? "pass" : "FAIL") << "\n";
    }
    std::cout << (out.ok ? "all suites passed" : "VIOLATIONS FOUND") << "\n";
  }
  for (const std::string& f : out.files)
    std::cout << "wrote " << cfg.out_dir << "/" << f << "\n";
  return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-field combinatorics laboratory"};
  app.require_subcommand(1);

  RawOpts o;
  CLI::App* verify = app.add_subcommand(
      "verify-all", "run every invariant suite over the given moduli");
  add_run_options(verify, o, {});

  CLI::App* sumprod = app.add_subcommand(
      "sumprod", "extremal max(|A+A|,|A.A|) tables over n-subsets");
  add_run_options(sumprod, o,
                  {.sizes = true, .mode = true, .trials = true});

  CLI::App* incidence = app.add_subcommand(
      "incidence", "seeded point-line incidence experiments");
  add_run_options(incidence, o,
                  {.sizes = true, .trials = true, .generator = true});

  CLI::App* distance = app.add_subcommand(
      "distance", "minimum distinct-distance configurations");
  add_run_options(distance, o,
                  {.sizes = true, .mode = true, .trials = true, .exclude = true});

  CLI::App* kakeya = app.add_subcommand(
      "kakeya", "small Besicovitch unions from line assignments");
  add_run_options(kakeya, o, {.trials = true});

  std::string plot_dir = "results";
  CLI::App* plot =
      app.add_subcommand("plot", "emit matplotlib scripts for result tables");
  plot->add_option("dir", plot_dir, "results directory to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify)) return run_kind(verify, o, "verify-all");
    if (app.got_subcommand(sumprod)) return run_kind(sumprod, o, "sumprod");
    if (app.got_subcommand(incidence)) return run_kind(incidence, o, "incidence");
    if (app.got_subcommand(distance)) return run_kind(distance, o, "distance");
    if (app.got_subcommand(kakeya)) return run_kind(kakeya, o, "kakeya");
    for (const std::string& f : fflab::emit_plots(plot_dir))
      std::cout << "wrote " << plot_dir << "/" << f << "\n";
    return 0;
  } catch (const fflab::BadConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fflab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const fflab::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const fflab::MissingResults& e) {
    std::cerr << "missing results: " << e.what() << "\n";
    return 2;
  } catch (const fflab::Error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
