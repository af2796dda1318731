// Copyright 2026 The clipsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clipsim/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "clipsim/errors.h"
#include "parallel.h"

namespace clipsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kCsvHeader =
    "t,grad_norm_sq,f_gap,lyapunov,clip_active,eps_spent,delta_spent";

void AppendNumber(std::string& out, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double ParseField(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw ParseError("<csv>", line, "bad number '" + field + "'");
  }
  return value;
}

double SanitizedMetric(double value) {
  return std::isnan(value) ? kInf : value;
}

}  // namespace

ConfigRun RunFromConfig(const RunConfig& config) {
  const auto problem = BuildProblem(config);
  ResolvedParams params = ResolveParams(config, *problem);
  const GradientOracle oracle(config.oracle, config.seed);

  RunOptions options;
  options.x0 = StartPoint(config, *problem);
  options.threads = config.threads;
  options.f_ref = params.f_ref;
  options.dp_delta = config.algorithm.dp_delta;
  if (config.lyapunov) options.lyapunov_eta = params.lyapunov_eta;

  ConfigRun out;
  out.result = Run(config.algorithm.algorithm, *problem, oracle, params.hp,
                   config.T, options);
  RunSummary& s = out.summary;
  s.hp = params.hp;
  s.calibrated = params.calibrated;
  s.final_metric = FinalAveraged(out.result.records);
  s.eps_spent = out.result.records.back().eps_spent;
  s.delta_spent = out.result.records.back().delta_spent;
  s.warnings = std::move(params.warnings);
  return out;
}

std::string FormatSummary(const RunSummary& s) {
  std::ostringstream out;
  out.precision(17);
  out << "gamma " << s.hp.gamma << (s.calibrated ? " (calibrated)" : "")
      << "\nbeta " << s.hp.beta << "\nbeta_hat " << s.hp.beta_hat << "\ntau "
      << s.hp.tau << "\nsigma_omega " << s.hp.sigma_omega
      << "\nfinal_mean_grad_norm " << s.final_metric.mean_grad_norm
      << "\nfinal_mean_grad_norm_sq " << s.final_metric.mean_grad_norm_sq
      << "\neps_spent " << s.eps_spent << "\ndelta_spent " << s.delta_spent
      << "\n";
  for (const auto& w : s.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string FormatCsv(std::span<const RunRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const RunRecord& r : records) {
    out += std::to_string(r.t);
    out += ',';
    AppendNumber(out, r.grad_norm_sq);
    out += ',';
    if (r.f_gap) AppendNumber(out, *r.f_gap);
    out += ',';
    if (r.lyapunov) AppendNumber(out, *r.lyapunov);
    out += ',';
    out += std::to_string(r.clip_active);
    out += ',';
    AppendNumber(out, r.eps_spent);
    out += ',';
    AppendNumber(out, r.delta_spent);
    out += '\n';
  }
  return out;
}

void WriteCsv(std::span<const RunRecord> records,
              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const std::string text = FormatCsv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RunRecord> ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("<csv>", 1, "missing header");
  }
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.size() != 7) {
      throw ParseError("<csv>", line_no, "expected 7 fields");
    }
    RunRecord r;
    r.t = static_cast<std::uint64_t>(ParseField(fields[0], line_no));
    r.grad_norm_sq = ParseField(fields[1], line_no);
    if (!fields[2].empty()) r.f_gap = ParseField(fields[2], line_no);
    if (!fields[3].empty()) r.lyapunov = ParseField(fields[3], line_no);
    r.clip_active = static_cast<std::size_t>(ParseField(fields[4], line_no));
    r.eps_spent = ParseField(fields[5], line_no);
    r.delta_spent = ParseField(fields[6], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

SweepAxis ParseSweepAxis(const std::string& name) {
  if (name == "tau") return SweepAxis::kTau;
  if (name == "ratio") return SweepAxis::kNoiseRatio;
  if (name == "workers") return SweepAxis::kWorkers;
  throw ConfigError("unknown sweep axis '" + name + "'");
}

std::string ToString(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kTau:
      return "tau";
    case SweepAxis::kNoiseRatio:
      return "ratio";
    case SweepAxis::kWorkers:
      return "workers";
  }
  return "?";
}

TuningGrid::TuningGrid() {
  for (int e = -5; e <= 5; ++e) gammas.push_back(std::ldexp(1.0, e));
}

std::size_t SelectBest(std::span<const GridCandidate> candidates) {
  if (candidates.empty()) throw InvalidParameterError("empty tuning grid");
  auto key = [](const GridCandidate& c) {
    return std::make_tuple(SanitizedMetric(c.metric), c.hp.gamma, c.hp.beta,
                           c.hp.beta_hat, c.hp.tau);
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (key(candidates[i]) < key(candidates[best])) best = i;
  }
  return best;
}

std::vector<HyperParams> GridCells(const SweepSpec& spec, Algorithm algorithm,
                                   const HyperParams& base) {
  const TuningGrid& grid = spec.grid;
  const bool ratio_axis = spec.axis == SweepAxis::kNoiseRatio;
  const bool clipped = algorithm != Algorithm::kSgdm;
  const bool dp = base.sigma_omega > 0.0 || ratio_axis;

  std::vector<double> betas = {base.beta};
  std::vector<double> beta_hats = {base.beta_hat};
  std::vector<double> taus = {base.tau};
  if (algorithm == Algorithm::kClip21Sgd2M) {
    betas = grid.betas;
    if (dp) beta_hats = grid.beta_hats;
  }
  if (algorithm == Algorithm::kSgdm) beta_hats = grid.betas;
  if (ratio_axis && clipped) taus = grid.taus;

  const double ratio = base.sigma_omega / base.tau;
  std::vector<HyperParams> cells;
  for (double tau : taus) {
    for (double gamma : grid.gammas) {
      for (double beta : betas) {
        for (double beta_hat : beta_hats) {
          HyperParams hp = base;
          hp.gamma = gamma;
          hp.beta = beta;
          hp.beta_hat = beta_hat;
          hp.tau = tau;
          if (ratio_axis) hp.sigma_omega = ratio * tau;
          cells.push_back(hp);
        }
      }
    }
  }
  return cells;
}

std::vector<SweepRow> Sweep(const SweepSpec& spec) {
  if (spec.values.empty() || spec.algorithms.empty() || spec.seeds.empty()) {
    throw ConfigError("sweep needs values, algorithms and seeds");
  }
  {
    std::vector<std::uint64_t> sorted = spec.seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("sweep seeds must be distinct");
    }
  }

  std::vector<SweepRow> rows;
  for (double value : spec.values) {
    RunConfig config = spec.base;
    config.algorithm.auto_params = false;
    switch (spec.axis) {
      case SweepAxis::kTau:
        config.algorithm.hp.tau = value;
        break;
      case SweepAxis::kNoiseRatio:
        config.algorithm.noise_ratio = value;
        config.algorithm.dp_epsilon.reset();
        break;
      case SweepAxis::kWorkers:
        if (!(value >= 1.0) || value != std::floor(value)) {
          throw ConfigError("worker counts must be positive integers");
        }
        config.problem.workers = static_cast<std::size_t>(value);
        break;
    }
    const auto problem = BuildProblem(config);
    const ResolvedParams base = ResolveParams(config, *problem);
    const DenseVector x0 = StartPoint(config, *problem);

    for (Algorithm algorithm : spec.algorithms) {
      const std::vector<HyperParams> cells = GridCells(spec, algorithm, base.hp);
      const std::size_t n_seeds = spec.seeds.size();
      std::vector<double> metrics(cells.size() * n_seeds);
      internal::ParallelFor(metrics.size(), config.threads, [&](std::size_t j) {
        const HyperParams& hp = cells[j / n_seeds];
        const GradientOracle oracle(config.oracle, spec.seeds[j % n_seeds]);
        RunOptions options;
        options.x0 = x0;
        options.f_ref = base.f_ref;
        options.dp_delta = config.algorithm.dp_delta;
        options.record_f_gap = false;
        try {
          const RunResult r =
              Run(algorithm, *problem, oracle, hp, config.T, options);
          metrics[j] =
              SanitizedMetric(FinalAveraged(r.records).mean_grad_norm);
        } catch (const DivergenceError&) {
          metrics[j] = kInf;
        }
      });

      std::vector<GridCandidate> candidates(cells.size());
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::span<const double> seeds(&metrics[c * n_seeds], n_seeds);
        candidates[c] = {cells[c], Mean(seeds)};
      }
      const std::size_t best = SelectBest(candidates);
      const std::span<const double> seeds(&metrics[best * n_seeds], n_seeds);
      SweepRow row;
      row.axis_value = value;
      row.algorithm = algorithm;
      row.best = cells[best];
      row.metric_mean = SanitizedMetric(candidates[best].metric);
      row.metric_min = *std::min_element(seeds.begin(), seeds.end());
      row.metric_max = *std::max_element(seeds.begin(), seeds.end());
      rows.push_back(row);
    }
  }
  return rows;
}

std::string FormatSweepTable(std::span<const SweepRow> rows) {
  std::string out =
      "axis_value,algorithm,gamma,beta,beta_hat,tau,sigma_omega,metric_mean,"
      "metric_min,metric_max\n";
  for (const SweepRow& r : rows) {
    AppendNumber(out, r.axis_value);
    out += ',' + ToString(r.algorithm);
    for (double v : {r.best.gamma, r.best.beta, r.best.beta_hat, r.best.tau,
                     r.best.sigma_omega, r.metric_mean, r.metric_min,
                     r.metric_max}) {
      out += ',';
      AppendNumber(out, v);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> MonteCarlo(std::uint64_t first_seed, std::size_t count,
                               int threads,
                               const std::function<double(std::uint64_t)>& fn) {
  std::vector<double> out(count);
  internal::ParallelFor(count, threads,
                        [&](std::size_t i) { out[i] = fn(first_seed + i); });
  return out;
}

std::vector<std::vector<double>> MonteCarloTraces(
    std::uint64_t first_seed, std::size_t count, int threads,
    const std::function<std::vector<double>(std::uint64_t)>& fn) {
  std::vector<std::vector<double>> out(count);
  internal::ParallelFor(count, threads,
                        [&](std::size_t i) { out[i] = fn(first_seed + i); });
  return out;
}

double Mean(std::span<const double> values) {
  if (values.empty()) throw InvalidParameterError("mean of nothing");
  double sum = 0.0;
  for (double v : values) sum += SanitizedMetric(v);
  return sum / static_cast<double>(values.size());
}

double Median(std::vector<double> values) {
  if (values.empty()) throw InvalidParameterError("median of nothing");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<double> MedianTrace(
    const std::vector<std::vector<double>>& traces) {
  if (traces.empty()) throw InvalidParameterError("no traces");
  const std::size_t length = traces.front().size();
  std::vector<double> out(length);
  std::vector<double> column(traces.size());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t s = 0; s < traces.size(); ++s) {
      if (traces[s].size() != length) {
        throw InvalidParameterError("traces differ in length");
      }
      column[s] = traces[s][t];
    }
    out[t] = Median(column);
  }
  return out;
}

}  // namespace clipsim
