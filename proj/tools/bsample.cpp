// bsample: simulate series, estimate intervals, run coverage studies and limit oracles.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bsample/config_file.hpp"
#include "bsample/error.hpp"
#include "bsample/harness.hpp"
#include "bsample/limit_oracle.hpp"
#include "bsample/process.hpp"

namespace {

using bsample::ConfigError;
using bsample::ExperimentConfig;

constexpr int kConfigExit = 1;
constexpr int kRuntimeExit = 2;

// Experiment flags are kept as strings and applied through the config-file setter so that
// command line values override file values with identical parsing.
struct ExperimentFlags {
  std::map<std::string, std::string> values;
  std::string config_path;

  void add(CLI::App* app, bool with_config) {
    const std::pair<const char*, const char*> flags[] = {
        {"model", "model preset (model-i .. model-iv)"},
        {"beta", "memory parameter beta"},
        {"n", "sample size"},
        {"c", "block size multiplier, l = floor(c sqrt(n))"},
        {"method", "h_hat or subsampling"},
        {"alpha", "nominal error level"},
        {"reps", "Monte Carlo replicates"},
        {"seed", "master seed"},
        {"truncation", "coefficient truncation M"},
        {"tail-tol", "max relative tail energy beyond M (inf disables the check)"},
        {"workers", "worker threads"},
        {"mean-mc-draws", "Monte Carlo draws for E K(X) when not exact"},
    };
    for (const auto& [name, help] : flags) {
      std::string key = name;
      for (auto& ch : key) if (ch == '-') ch = '_';
      app->add_option_function<std::string>(
          fmt::format("--{}", name), [this, key](const std::string& v) { values[key] = v; }, help);
    }
    app->add_flag_function("--paired", [this](std::int64_t) { values["paired"] = "true"; },
                           "share series between methods");
    if (with_config) app->add_option("--config", config_path, "experiment file")->check(CLI::ExistingFile);
  }

  std::vector<ExperimentConfig> experiments() const {
    ExperimentConfig base;
    std::vector<ExperimentConfig> out{base};
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", config_path));
      out = bsample::experiments_from(bsample::parse_config(in), base);
    }
    for (auto& cfg : out) {
      for (const auto& [k, v] : values) bsample::apply_setting(cfg, k, v);
    }
    return out;
  }

  ExperimentConfig single() const {
    auto all = experiments();
    if (all.size() != 1) {
      throw ConfigError(fmt::format("expected one experiment, config file defines {}", all.size()));
    }
    return all.front();
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError(fmt::format("cannot open output file '{}'", path));
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_dist(const std::string& path, const bsample::EmpiricalDist& d) {
  Output out(path);
  bsample::write_csv(out.stream(), d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block sampling inference for the mean of long-range dependent series"};
  app.require_subcommand(1);

  std::string out_path;
  std::string dist_out;

  // simulate
  ExperimentFlags sim_flags;
  std::size_t sim_past = 0;
  auto* sim = app.add_subcommand("simulate", "write a simulated series as CSV (index,y)");
  sim_flags.add(sim, false);
  sim->add_option("--past", sim_past, "length of the pre-sample block to include");
  sim->add_option("--out", out_path, "output path (default stdout)");

  // estimate
  ExperimentFlags est_flags;
  std::string data_path;
  std::size_t est_l = 0;
  auto* est = app.add_subcommand("estimate", "intervals and diagnostics for one series");
  est_flags.add(est, false);
  est->add_option("--data", data_path, "one-column numeric series; simulates from --model otherwise")
      ->check(CLI::ExistingFile);
  est->add_option("--l", est_l, "block length (default floor(c sqrt(n)))");
  est->add_option("--out", out_path, "JSON output path (default stdout)");
  est->add_option("--dist-out", dist_out, "CSV path for the studentized block distribution");

  // coverage
  ExperimentFlags cov_flags;
  std::size_t first_replicate = 0;
  auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the one-sided intervals");
  cov_flags.add(cov, true);
  cov->add_option("--first-replicate", first_replicate, "index of the first replicate");
  cov->add_option("--out", out_path, "JSON output path (default stdout)");

  // sweep
  ExperimentFlags sweep_flags;
  auto* swp = app.add_subcommand("sweep", "coverage table, one CSV row per experiment");
  sweep_flags.add(swp, true);
  swp->add_option("--out", out_path, "CSV output path (default stdout)");

  // oracle
  bsample::HermiteSpec hermite;
  std::size_t oracle_reps = 10000;
  std::uint64_t oracle_seed = 1;
  unsigned oracle_workers = 1;
  bool want_zeta = false;
  double zeta_tol = 1e-8;
  auto* orc = app.add_subcommand("oracle", "limit-distribution samples or zeta constants");
  orc->add_option("--r", hermite.r, "Hermite order (1 or 2)");
  orc->add_option("--beta", hermite.beta, "memory parameter beta");
  orc->add_option("--n", hermite.n, "grid length of the Volterra sum");
  orc->add_option("--truncation", hermite.truncation, "coefficient truncation M");
  orc->add_option("--reps", oracle_reps, "number of samples");
  orc->add_option("--seed", oracle_seed, "seed");
  orc->add_option("--workers", oracle_workers, "worker threads");
  orc->add_flag("--zeta", want_zeta, "print the variance constant instead of samples");
  orc->add_option("--tol", zeta_tol, "absolute quadrature tolerance for --zeta");
  orc->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*sim) {
      const auto cfg = sim_flags.single();
      const auto model = cfg.model_spec();
      const auto w = bsample::simulate_window(model, cfg.n, sim_past, {cfg.master_seed, 0});
      Output out(out_path);
      bsample::write_series_csv(out.stream(), w);
    } else if (*est) {
      bsample::SingleRunRequest req;
      req.simulation = est_flags.single();
      req.method = req.simulation.method;
      req.alpha = req.simulation.alpha;
      req.l = est_l;
      if (!data_path.empty()) {
        std::ifstream in(data_path);
        if (!in) throw ConfigError(fmt::format("cannot open data file '{}'", data_path));
        req.data = bsample::read_series(in);
      }
      const auto res = bsample::run_single(req);
      Output out(out_path);
      out.stream() << nlohmann::json(res).dump(2) << "\n";
      if (!dist_out.empty()) write_dist(dist_out, *res.distribution);
    } else if (*cov) {
      const auto cfg = cov_flags.single();
      cfg.validate();
      const auto rep = bsample::run_coverage(cfg, first_replicate);
      Output out(out_path.empty() ? cfg.output : out_path);
      out.stream() << nlohmann::json(rep).dump(2) << "\n";
    } else if (*swp) {
      const auto configs = sweep_flags.experiments();
      for (const auto& cfg : configs) cfg.validate();
      const auto rows = bsample::sweep(configs);
      Output out(out_path);
      bsample::write_sweep_csv(out.stream(), rows);
    } else if (*orc) {
      Output out(out_path);
      if (want_zeta) {
        const auto z = bsample::zeta(hermite.r, hermite.beta, zeta_tol);
        out.stream() << nlohmann::json{{"r", z.r}, {"beta", z.beta}, {"zeta", z.value}, {"error", z.error}}.dump(2)
                     << "\n";
      } else {
        hermite.validate();
        const auto d = bsample::sample_limit(hermite, oracle_reps, oracle_seed, oracle_workers);
        bsample::write_csv(out.stream(), d);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const bsample::UnsupportedError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeExit;
  }
  return 0;
}
