#include "bsample/harness.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bsample/error.hpp"
#include "bsample/parallel.hpp"

namespace bsample {

std::string to_string(Method m) { return m == Method::h_hat ? "h_hat" : "subsampling"; }

Method method_from_string(std::string_view s) {
  if (s == "h_hat") return Method::h_hat;
  if (s == "subsampling") return Method::subsampling;
  throw ConfigError(fmt::format("unknown method '{}' (expected h_hat or subsampling)", s));
}

std::size_t ExperimentConfig::block_size() const {
  return static_cast<std::size_t>(std::floor(c * std::sqrt(static_cast<double>(n))));
}

void ExperimentConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError(fmt::format("block multiplier c must be positive, got {}", c));
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  const std::size_t l = block_size();
  if (l < 2) {
    throw ConfigError(fmt::format("block size floor(c sqrt(n)) = {} is below 2 (c={}, n={})", l, c, n));
  }
  if (2 * l > n) throw ConfigError(fmt::format("block size {} too large for n={} (need 2l <= n)", l, n));
  if (method == Method::subsampling) choose_scales(n, l);
  (void)model_spec();
}

ModelSpec ExperimentConfig::model_spec() const {
  return make_preset(model, beta, truncation, tail_tol);
}

StreamId replicate_stream(const ExperimentConfig& cfg, std::size_t replicate) {
  const std::uint64_t tag = cfg.paired ? 0 : (cfg.method == Method::h_hat ? 1 : 2);
  return {derive_seed(cfg.master_seed, replicate, tag), 0};
}

ReplicateOutcome evaluate_replicate(const ExperimentConfig& cfg, const ModelSpec& model,
                                    double mu, std::size_t replicate) {
  const std::size_t l = cfg.block_size();
  const bool h_hat = cfg.method == Method::h_hat;
  const std::size_t past = (h_hat || cfg.paired) ? 2 * l : 0;
  const auto window = simulate_window(model, cfg.n, past, replicate_stream(cfg, replicate));

  ReplicateOutcome out;
  try {
    auto outcome = [&](const auto& analysis) {
      out.lower_covers = ci_from_analysis(analysis, cfg.alpha, IntervalKind::lower_one_sided).contains(mu);
      out.upper_covers = ci_from_analysis(analysis, cfg.alpha, IntervalKind::upper_one_sided).contains(mu);
      out.two_sided_covers = ci_from_analysis(analysis, cfg.alpha, IntervalKind::two_sided).contains(mu);
    };
    if (h_hat) {
      outcome(analyze_h_hat(window, l));
    } else {
      outcome(analyze_subsample(window.observed(), choose_scales(cfg.n, l)));
    }
  } catch (const DegenerateScaleError&) {
    out = ReplicateOutcome{};
    out.degenerate = true;
  }
  return out;
}

CoverageReport run_coverage(const ExperimentConfig& cfg, std::size_t first_replicate,
                            std::optional<double> mu) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ModelSpec model = cfg.model_spec();

  CoverageReport rep;
  rep.config = cfg;
  rep.block_size = cfg.block_size();
  rep.first_replicate = first_replicate;
  if (mu) {
    rep.true_mean = *mu;
  } else {
    const MeanValue m = true_mean(model, cfg.mean_mc_draws);
    rep.true_mean = m.value;
    rep.true_mean_se = m.std_error;
  }

  rep.outcomes.resize(cfg.reps);
  parallel_for(cfg.reps, cfg.workers, [&](std::size_t k, unsigned) {
    rep.outcomes[k] = evaluate_replicate(cfg, model, rep.true_mean, first_replicate + k);
  });

  std::size_t lower = 0, upper = 0, two = 0;
  for (const auto& o : rep.outcomes) {
    if (o.degenerate) {
      ++rep.degenerate_count;
      continue;
    }
    lower += o.lower_covers;
    upper += o.upper_covers;
    two += o.two_sided_covers;
  }
  const std::size_t ok = cfg.reps - rep.degenerate_count;
  if (ok > 0) {
    const double denom = static_cast<double>(ok);
    rep.lower_coverage = static_cast<double>(lower) / denom;
    rep.upper_coverage = static_cast<double>(upper) / denom;
    rep.two_sided_coverage = static_cast<double>(two) / denom;
    rep.mc_se_lower = std::sqrt(rep.lower_coverage * (1.0 - rep.lower_coverage) / denom);
    rep.mc_se_upper = std::sqrt(rep.upper_coverage * (1.0 - rep.upper_coverage) / denom);
  } else {
    rep.lower_coverage = rep.upper_coverage = rep.two_sided_coverage =
        std::numeric_limits<double>::quiet_NaN();
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw ConfigError("sweep needs at least one configuration");
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const auto& cfg : configs) {
    SweepRow row{cfg, std::nullopt, {}};
    try {
      row.report = run_coverage(cfg);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "model,beta,n,c,method,alpha,reps,lower_cov,upper_cov,mc_se_lower,mc_se_upper,"
        "degenerate,seed,wall_time_s,error\n";
  for (const auto& row : rows) {
    const auto& c = row.config;
    os << fmt::format("{},{},{},{},{},{},{},", c.model, c.beta, c.n, c.c, to_string(c.method),
                      c.alpha, c.reps);
    if (row.report) {
      const auto& r = *row.report;
      os << fmt::format("{:.6f},{:.6f},{:.6f},{:.6f},{},{},{:.3f},\n", r.lower_coverage,
                        r.upper_coverage, r.mc_se_lower, r.mc_se_upper, r.degenerate_count,
                        c.master_seed, r.wall_time_s);
    } else {
      os << fmt::format(",,,,,{},,{}\n", c.master_seed, csv_field(row.error));
    }
  }
}

SingleRunResult run_single(const SingleRunRequest& req) {
  if (!(req.alpha > 0.0 && req.alpha < 1.0)) {
    throw ConfigError(fmt::format("alpha must lie in (0, 1), got {}", req.alpha));
  }
  SingleRunResult res;
  res.method = req.method;

  std::optional<SeriesWindow> simulated;
  std::span<const double> past;
  std::span<const double> observed;
  const std::size_t n = req.data ? req.data->size() : req.simulation.n;
  std::size_t l = req.l;
  if (l == 0) {
    ExperimentConfig sized = req.simulation;
    sized.n = n;
    l = sized.block_size();
  }
  if (l < 1) throw ConfigError("block length must be at least 1");
  if (n < 4 * l) {
    throw InsufficientDataError(
        fmt::format("series too short: n={} but at least 4l = {} observations are needed", n, 4 * l));
  }

  if (req.data) {
    observed = *req.data;
    res.convention = BlockConvention::forward_interior;
  } else {
    const ModelSpec model = req.simulation.model_spec();
    const bool with_past = req.method == Method::h_hat || req.simulation.paired;
    simulated = simulate_window(model, n, with_past ? 2 * l : 0,
                                {req.simulation.master_seed, 0});
    past = simulated->past_block();
    observed = simulated->observed();
    res.convention = req.method == Method::h_hat ? BlockConvention::backward_with_past
                                                 : BlockConvention::forward_interior;
  }
  res.n = n;
  res.l = l;

  const IntervalKind kinds[] = {IntervalKind::two_sided, IntervalKind::upper_one_sided,
                                IntervalKind::lower_one_sided};
  if (req.method == Method::h_hat) {
    const auto analysis = analyze_h_hat(SeriesView(past, observed), l, res.convention);
    for (auto k : kinds) res.intervals.push_back(ci_from_analysis(analysis, req.alpha, k));
    res.scales = analysis.scales;
    res.mean = analysis.blocks.mean;
    res.distribution = analysis.blocks.dist;
  } else {
    const auto analysis = analyze_subsample(observed, choose_scales(n, l));
    for (auto k : kinds) res.intervals.push_back(ci_from_analysis(analysis, req.alpha, k));
    res.subsample = analysis.scales;
    res.subsample_scale = analysis.s_n1_tilde;
    res.mean = analysis.mean;
    res.distribution = analysis.studentized;
  }
  return res;
}

std::vector<double> read_series(std::istream& is) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string field = line.substr(first, last - first + 1);
    std::istringstream ss(field);
    ss.imbue(std::locale::classic());
    double v = 0.0;
    if (!(ss >> v) || !(ss >> std::ws).eof()) {
      if (out.empty() && lineno == 1) continue;  // header
      throw ConfigError(fmt::format("line {}: '{}' is not a single numeric value", lineno, field));
    }
    out.push_back(v);
  }
  return out;
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"model", c.model},
                     {"beta", c.beta},
                     {"n", c.n},
                     {"c", c.c},
                     {"method", to_string(c.method)},
                     {"alpha", c.alpha},
                     {"reps", c.reps},
                     {"master_seed", c.master_seed},
                     {"truncation", c.truncation},
                     {"tail_tol", c.tail_tol},
                     {"paired", c.paired},
                     {"workers", c.workers}};
}

void to_json(nlohmann::json& j, const CoverageReport& r) {
  j = nlohmann::json{{"config", r.config},
                     {"block_size", r.block_size},
                     {"true_mean", r.true_mean},
                     {"true_mean_se", r.true_mean_se},
                     {"lower_coverage", r.lower_coverage},
                     {"upper_coverage", r.upper_coverage},
                     {"two_sided_coverage", r.two_sided_coverage},
                     {"mc_se_lower", r.mc_se_lower},
                     {"mc_se_upper", r.mc_se_upper},
                     {"degenerate_count", r.degenerate_count},
                     {"wall_time_s", r.wall_time_s}};
}

void to_json(nlohmann::json& j, const SingleRunResult& r) {
  j = nlohmann::json{{"n", r.n},
                     {"l", r.l},
                     {"method", to_string(r.method)},
                     {"convention", r.convention == BlockConvention::backward_with_past
                                        ? "backward_with_past"
                                        : "forward_interior"},
                     {"mean", r.mean},
                     {"intervals", r.intervals}};
  if (r.scales) j["scales"] = *r.scales;
  if (r.subsample) {
    j["subsample"] = {{"n", r.subsample->n},
                      {"l", r.subsample->l},
                      {"n1", r.subsample->n1},
                      {"l1", r.subsample->l1},
                      {"ratio_error", r.subsample->ratio_error()},
                      {"s_n1_tilde", r.subsample_scale}};
  }
}

}  // namespace bsample
