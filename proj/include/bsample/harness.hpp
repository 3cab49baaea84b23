#pragma once

// Monte Carlo coverage study and single-series workflows.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bsample/block_stats.hpp"
#include "bsample/empirical_dist.hpp"
#include "bsample/process.hpp"
#include "bsample/scale_estimators.hpp"
#include "bsample/subsample.hpp"

namespace bsample {

enum class Method { h_hat, subsampling };

std::string to_string(Method m);
Method method_from_string(std::string_view s);

struct ExperimentConfig {
  std::string model = "model-i";
  double beta = 0.75;
  std::size_t n = 1000;
  double c = 1.0;  // block size l = floor(c sqrt(n))
  Method method = Method::h_hat;
  double alpha = 0.1;
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  std::size_t truncation = kDefaultTruncation;
  double tail_tol = kDefaultTailTolerance;
  // Share series between methods: both simulate the h_hat layout from an unmethoded seed.
  bool paired = false;
  unsigned workers = 1;
  std::size_t mean_mc_draws = 1'000'000;  // only for thresholds where E K(X) is not exact
  std::string output;                     // optional report path

  // floor(c n^0.5)
  std::size_t block_size() const;
  // Throws ConfigError on any invalid field (including the model/truncation combination).
  void validate() const;
  ModelSpec model_spec() const;
};

struct ReplicateOutcome {
  bool degenerate = false;
  bool lower_covers = false;   // (-inf, ybar - q_a scale/n] contains mu
  bool upper_covers = false;   // [ybar - q_{1-a} scale/n, inf) contains mu
  bool two_sided_covers = false;
};

struct CoverageReport {
  ExperimentConfig config;
  std::size_t block_size = 0;
  double true_mean = 0.0;
  double true_mean_se = 0.0;
  double lower_coverage = 0.0;
  double upper_coverage = 0.0;
  double two_sided_coverage = 0.0;
  double mc_se_lower = 0.0;
  double mc_se_upper = 0.0;
  std::size_t degenerate_count = 0;
  double wall_time_s = 0.0;
  std::size_t first_replicate = 0;
  std::vector<ReplicateOutcome> outcomes;  // indexed by replicate - first_replicate
};

// Seed of replicate k; independent of method when cfg.paired is set.
StreamId replicate_stream(const ExperimentConfig& cfg, std::size_t replicate);

// Simulates replicate k and evaluates all three intervals against mu.
ReplicateOutcome evaluate_replicate(const ExperimentConfig& cfg, const ModelSpec& model,
                                    double mu, std::size_t replicate);

// Runs replicates first_replicate .. first_replicate + reps - 1. Output is identical for any
// worker count. `mu` overrides the true mean (otherwise computed by true_mean).
CoverageReport run_coverage(const ExperimentConfig& cfg, std::size_t first_replicate = 0,
                            std::optional<double> mu = std::nullopt);

struct SweepRow {
  ExperimentConfig config;
  std::optional<CoverageReport> report;
  std::string error;  // empty on success
};

// One row per config, in input order. Failures are recorded per row. Throws ConfigError on
// an empty list.
std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& configs);

// Fixed column layout:
// model,beta,n,c,method,alpha,reps,lower_cov,upper_cov,mc_se_lower,mc_se_upper,degenerate,
// seed,wall_time_s,error
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct SingleRunRequest {
  // Exactly one of data (a one-column series) or a simulated model is used.
  std::optional<std::vector<double>> data;
  ExperimentConfig simulation;  // model, beta, n, seed, truncation, tail_tol when simulating
  Method method = Method::h_hat;
  std::size_t l = 0;  // 0: floor(c sqrt(n))
  double alpha = 0.1;
};

struct SingleRunResult {
  std::size_t n = 0;
  std::size_t l = 0;
  Method method = Method::h_hat;
  BlockConvention convention = BlockConvention::backward_with_past;
  double mean = 0.0;
  std::vector<ConfidenceInterval> intervals;  // two_sided, upper, lower
  std::optional<ScaleEstimates> scales;       // h_hat only
  std::optional<SubsampleScales> subsample;   // subsampling only
  double subsample_scale = 0.0;               // s_{n1} estimate, subsampling only
  std::optional<EmpiricalDist> distribution;  // the studentized block distribution
};

// Data mode uses forward windows with no past block; simulation mode generates a past
// block of 2l values and uses backward windows for h_hat. Throws InsufficientDataError when
// n < 4l.
SingleRunResult run_single(const SingleRunRequest& req);

// Reads a one-column numeric series; blank lines and '#' comments are skipped, and a
// non-numeric first line is treated as a header.
std::vector<double> read_series(std::istream& is);

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void to_json(nlohmann::json& j, const CoverageReport& r);
void to_json(nlohmann::json& j, const SingleRunResult& r);

}  // namespace bsample
