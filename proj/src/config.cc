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

#include "clipsim/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "clipsim/calibration.h"
#include "clipsim/dataset.h"
#include "clipsim/diagnostics.h"
#include "clipsim/errors.h"

namespace clipsim {
namespace {

namespace pt = boost::property_tree;

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> ToDouble(const std::string& text) {
  const std::string s = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> ToUnsigned(const std::string& text) {
  const std::string s = Trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string Join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// Collects conversion errors so every bad field is reported at once.
class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  void Known(const std::string& section, std::set<std::string> keys) {
    known_[section] = std::move(keys);
  }

  std::optional<std::string> Raw(const std::string& section,
                                 const std::string& key) {
    const auto node = tree_.get_child_optional(pt::ptree::path_type(
        section + "/" + key, '/'));
    if (!node) return std::nullopt;
    return Trim(node->data());
  }

  void String(const std::string& section, const std::string& key,
              std::string& out) {
    if (auto raw = Raw(section, key)) out = *raw;
  }

  template <typename T>
  void Number(const std::string& section, const std::string& key, T& out) {
    auto raw = Raw(section, key);
    if (!raw) return;
    if constexpr (std::is_floating_point_v<T>) {
      if (auto v = ToDouble(*raw)) {
        out = *v;
        return;
      }
    } else {
      if (auto v = ToUnsigned(*raw)) {
        out = static_cast<T>(*v);
        return;
      }
    }
    Fail(section, key, "cannot parse '" + *raw + "'");
  }

  void Optional(const std::string& section, const std::string& key,
                std::optional<double>& out) {
    auto raw = Raw(section, key);
    if (!raw) return;
    if (auto v = ToDouble(*raw)) {
      out = *v;
    } else {
      Fail(section, key, "cannot parse '" + *raw + "'");
    }
  }

  void Bool(const std::string& section, const std::string& key, bool& out) {
    auto raw = Raw(section, key);
    if (!raw) return;
    if (*raw == "true" || *raw == "1") {
      out = true;
    } else if (*raw == "false" || *raw == "0") {
      out = false;
    } else {
      Fail(section, key, "expected true or false");
    }
  }

  void List(const std::string& section, const std::string& key,
            std::vector<double>& out) {
    auto raw = Raw(section, key);
    if (!raw || raw->empty() || *raw == "zero") return;
    std::vector<double> values;
    std::stringstream stream(*raw);
    std::string item;
    while (std::getline(stream, item, ',')) {
      auto v = ToDouble(item);
      if (!v) {
        Fail(section, key, "cannot parse list entry '" + Trim(item) + "'");
        return;
      }
      values.push_back(*v);
    }
    out = std::move(values);
  }

  void Fail(const std::string& section, const std::string& key,
            const std::string& message) {
    errors_.push_back(section + "." + key + ": " + message);
  }

  void CheckUnknown() {
    for (const auto& [section, node] : tree_) {
      auto it = known_.find(section);
      if (it == known_.end()) {
        errors_.push_back("unknown section [" + section + "]");
        continue;
      }
      for (const auto& [key, value] : node) {
        if (!it->second.contains(key)) {
          errors_.push_back(section + "." + key + ": unknown key");
        }
      }
    }
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  const pt::ptree& tree_;
  std::map<std::string, std::set<std::string>> known_;
  std::vector<std::string> errors_;
};

double EffectiveSigmaOmega(const RunConfig& config) {
  const AlgorithmConfig& a = config.algorithm;
  if (a.dp_epsilon) return DpSigma(a.hp.tau, *a.dp_epsilon, a.dp_delta, config.T);
  if (a.noise_ratio) return *a.noise_ratio * a.hp.tau;
  return a.hp.sigma_omega;
}

}  // namespace

RunConfig ParseRunConfig(const std::string& text,
                         const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream stream(text);
  try {
    pt::read_ini(stream, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("<config>", e.line(), e.message());
  }

  RunConfig config;
  config.base_dir = base_dir;
  Reader reader(tree);
  reader.Known("problem", {"kind", "workers", "smoothness", "dim", "dataset",
                           "lambda", "normalize", "partition_seed", "rows",
                           "density", "data_seed", "x0", "f_lower"});
  reader.Known("oracle", {"kind", "sigma", "batch_fraction", "batch"});
  reader.Known("algorithm",
               {"name", "gamma", "tau", "beta", "beta_hat", "sigma_omega",
                "noise_ratio", "dp_epsilon", "dp_delta", "alpha", "Delta"});
  reader.Known("run", {"T", "seed", "threads", "lyapunov", "output"});
  reader.CheckUnknown();

  ProblemConfig& p = config.problem;
  reader.String("problem", "kind", p.kind);
  reader.Number("problem", "workers", p.workers);
  reader.Number("problem", "smoothness", p.smoothness);
  reader.Number("problem", "dim", p.dim);
  reader.String("problem", "dataset", p.dataset);
  reader.Number("problem", "lambda", p.lambda);
  reader.Bool("problem", "normalize", p.normalize);
  reader.Number("problem", "partition_seed", p.partition_seed);
  reader.Number("problem", "rows", p.rows);
  reader.Number("problem", "density", p.density);
  reader.Number("problem", "data_seed", p.data_seed);
  reader.List("problem", "x0", p.x0);
  reader.Optional("problem", "f_lower", p.f_lower);

  if (auto kind = reader.Raw("oracle", "kind")) {
    try {
      config.oracle.kind = ParseOracleKind(*kind);
    } catch (const std::exception& e) {
      reader.Fail("oracle", "kind", e.what());
    }
  }
  reader.Number("oracle", "sigma", config.oracle.sigma);
  reader.Number("oracle", "batch_fraction", config.oracle.batch_fraction);
  reader.Number("oracle", "batch", config.oracle.batch);

  AlgorithmConfig& a = config.algorithm;
  if (auto name = reader.Raw("algorithm", "name")) {
    try {
      a.algorithm = ParseAlgorithm(*name);
    } catch (const std::exception& e) {
      reader.Fail("algorithm", "name", e.what());
    }
  }
  if (reader.Raw("algorithm", "gamma") == std::optional<std::string>("auto")) {
    a.auto_params = true;
  } else {
    reader.Number("algorithm", "gamma", a.hp.gamma);
  }
  reader.Number("algorithm", "tau", a.hp.tau);
  reader.Number("algorithm", "beta", a.hp.beta);
  reader.Number("algorithm", "beta_hat", a.hp.beta_hat);
  reader.Number("algorithm", "sigma_omega", a.hp.sigma_omega);
  reader.Optional("algorithm", "noise_ratio", a.noise_ratio);
  reader.Optional("algorithm", "dp_epsilon", a.dp_epsilon);
  reader.Number("algorithm", "dp_delta", a.dp_delta);
  reader.Number("algorithm", "alpha", a.alpha);
  reader.Optional("algorithm", "Delta", a.Delta);

  reader.Number("run", "T", config.T);
  reader.Number("run", "seed", config.seed);
  reader.Number("run", "threads", config.threads);
  reader.Bool("run", "lyapunov", config.lyapunov);
  reader.String("run", "output", config.output);

  if (!reader.errors().empty()) {
    throw ConfigError("invalid config: " + Join(reader.errors()));
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseRunConfig(buffer.str(), path.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.line(), e.what());
  }
}

std::vector<std::string> ValidateConfig(const RunConfig& config) {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) errors.push_back(message);
  };

  const ProblemConfig& p = config.problem;
  const bool is_logreg = p.kind == "logreg" || p.kind == "synthetic_logreg";
  require(p.kind == "chen" || p.kind == "quadratic" || is_logreg,
          "problem.kind: expected chen, quadratic, logreg or synthetic_logreg");
  require(p.workers >= 1, "problem.workers: must be >= 1");
  if (p.kind == "quadratic") {
    require(p.smoothness > 0.0, "problem.smoothness: must be positive");
    require(p.dim >= 1, "problem.dim: must be >= 1");
    require(p.x0.empty() || p.x0.size() == p.dim,
            "problem.x0: length must equal problem.dim");
  }
  if (p.kind == "chen") {
    require(p.x0.size() <= 1, "problem.x0: chen is one-dimensional");
  }
  if (is_logreg) require(p.lambda >= 0.0, "problem.lambda: must be >= 0");
  if (p.kind == "logreg") {
    const auto path = config.base_dir / p.dataset;
    require(!p.dataset.empty() && std::filesystem::is_regular_file(path),
            "problem.dataset: file not found: " + path.string());
  }
  if (p.kind == "synthetic_logreg") {
    require(p.rows >= p.workers, "problem.rows: fewer rows than workers");
    require(p.dim >= 1, "problem.dim: must be >= 1");
    require(p.density > 0.0 && p.density <= 1.0,
            "problem.density: must lie in (0, 1]");
  }

  const OracleSpec& o = config.oracle;
  require(o.sigma >= 0.0, "oracle.sigma: must be >= 0");
  require(o.batch_fraction > 0.0 && o.batch_fraction <= 1.0,
          "oracle.batch_fraction: must lie in (0, 1]");
  require(o.batch >= 1, "oracle.batch: must be >= 1");
  if (o.kind == OracleKind::kMinibatch) {
    require(is_logreg, "oracle.kind: minibatch needs a logreg problem");
  }
  if (o.kind == OracleKind::kThreePoint) {
    require(p.kind == "quadratic" && p.dim >= 2,
            "oracle.kind: three_point needs a quadratic with dim >= 2");
  }

  const AlgorithmConfig& a = config.algorithm;
  const HyperParams& hp = a.hp;
  require(hp.tau > 0.0, "algorithm.tau: must be positive");
  if (!a.auto_params) {
    require(hp.gamma > 0.0, "algorithm.gamma: must be positive or auto");
    require(hp.beta > 0.0 && hp.beta <= 1.0, "algorithm.beta: must lie in (0, 1]");
  }
  require(hp.beta_hat > 0.0 && hp.beta_hat <= 1.0,
          "algorithm.beta_hat: must lie in (0, 1]");
  require(hp.sigma_omega >= 0.0, "algorithm.sigma_omega: must be >= 0");
  require(!(a.noise_ratio && a.dp_epsilon),
          "algorithm.noise_ratio and algorithm.dp_epsilon are exclusive");
  if (a.noise_ratio) {
    require(*a.noise_ratio >= 0.0, "algorithm.noise_ratio: must be >= 0");
  }
  if (a.dp_epsilon) {
    require(*a.dp_epsilon > 0.0 && *a.dp_epsilon <= 1.0,
            "algorithm.dp_epsilon: must lie in (0, 1]");
  }
  require(a.dp_delta > 0.0 && a.dp_delta < 1.0,
          "algorithm.dp_delta: must lie in (0, 1)");
  require(a.alpha > 0.0 && a.alpha < 1.0, "algorithm.alpha: must lie in (0, 1)");
  if (a.Delta) require(*a.Delta > 0.0, "algorithm.Delta: must be positive");
  if (a.auto_params) {
    require(!is_logreg ||
                p.f_lower.has_value() || a.Delta.has_value(),
            "algorithm.gamma = auto: needs problem.f_lower or algorithm.Delta "
            "when f* is unknown");
  }

  require(config.T >= 1, "run.T: must be >= 1");
  require(config.threads >= 1, "run.threads: must be >= 1");
  if (config.lyapunov && is_logreg) {
    require(p.f_lower.has_value(),
            "run.lyapunov: needs problem.f_lower when f* is unknown");
  }

  if (!errors.empty()) throw ConfigError("invalid config: " + Join(errors));

  const double sigma_omega = EffectiveSigmaOmega(config);
  if (sigma_omega > 0.0) {
    switch (a.algorithm) {
      case Algorithm::kClipSgd:
        warnings.push_back(
            "clip_sgd has no DP step of its own; noise is added to the "
            "clipped gradients");
        break;
      case Algorithm::kClip21Ideal:
      case Algorithm::kSgdm:
        warnings.push_back("sigma_omega is ignored by " +
                           ToString(a.algorithm));
        break;
      default:
        break;
    }
  }
  if (a.auto_params && a.algorithm != Algorithm::kClip21Sgd2M) {
    warnings.push_back("gamma = auto targets clip21_sgd2m; applying it to " +
                       ToString(a.algorithm));
  }
  return warnings;
}

std::unique_ptr<Problem> BuildProblem(const RunConfig& config) {
  const ProblemConfig& p = config.problem;
  if (p.kind == "chen") return MakeChenExample();
  if (p.kind == "quadratic") {
    return MakeScaledQuadratic(p.smoothness, p.dim, p.workers);
  }
  SparseDataset data;
  if (p.kind == "logreg") {
    data = LoadLibsvm((config.base_dir / p.dataset).string());
  } else if (p.kind == "synthetic_logreg") {
    data = MakeSyntheticDataset(p.rows, p.dim, p.density, p.data_seed);
  } else {
    throw ConfigError("problem.kind: unknown kind " + p.kind);
  }
  if (p.normalize) data = NormalizeRows(std::move(data));
  return MakeNonconvexLogReg(Partition(data, p.workers, p.partition_seed),
                             p.lambda);
}

DenseVector StartPoint(const RunConfig& config, const Problem& problem) {
  if (config.problem.x0.empty()) return DenseVector(problem.dim());
  if (config.problem.x0.size() != problem.dim()) {
    throw ConfigError("problem.x0: length " +
                      std::to_string(config.problem.x0.size()) +
                      " does not match dimension " +
                      std::to_string(problem.dim()));
  }
  return DenseVector(config.problem.x0);
}

ResolvedParams ResolveParams(const RunConfig& config, const Problem& problem) {
  ResolvedParams out;
  out.warnings = ValidateConfig(config);
  out.hp = config.algorithm.hp;
  out.hp.sigma_omega = EffectiveSigmaOmega(config);
  out.f_ref = config.problem.f_lower ? config.problem.f_lower : problem.f_star();

  const DenseVector x0 = StartPoint(config, problem);
  const double L = problem.smoothness();
  const double local_max = MaxLocalGradientNorm(problem, x0);
  const bool deterministic =
      config.oracle.kind == OracleKind::kExact && out.hp.sigma_omega == 0.0;
  const double tau = out.hp.tau;

  if (deterministic) {
    const double B = local_max;
    if (config.algorithm.auto_params) {
      DeterministicInputs in;
      in.L = L;
      in.B = B;
      in.tau = tau;
      in.beta_hat = out.hp.beta_hat;
      if (config.algorithm.Delta) {
        in.Delta = config.algorithm.Delta;
      } else {
        in.geometry = MeasureInitialGeometry(problem, x0, out.f_ref);
      }
      const DeterministicParams params = ComputeDeterministicParams(in);
      out.hp.gamma = params.gamma;
      out.hp.beta = params.beta;
      out.calibrated = true;
      if (params.vacuous) {
        out.warnings.push_back("B <= tau: clipping is never active at x0");
      }
      if (!params.beta_hat_ok) {
        out.warnings.push_back("beta_hat exceeds 1/(2 eta)");
      }
    }
    out.lyapunov_eta = B > 0.0 ? tau / B : 1.0;
  } else {
    const TheoryConstants k = ComputeTheoryConstants(
        config.oracle.sigma, out.hp.sigma_omega, config.T,
        problem.num_workers(), problem.dim(), config.algorithm.alpha);
    const double B = std::max(3.0 * tau, local_max + k.b);
    const double eta = tau / B;
    out.lyapunov_eta = eta;
    if (config.algorithm.auto_params) {
      StochasticInputs in;
      in.L = L;
      in.B = B;
      in.tau = tau;
      in.a = k.a;
      in.b = k.b;
      in.c = k.c;
      in.n = problem.num_workers();
      in.T = config.T;
      in.sigma = config.oracle.sigma;
      in.alpha = config.algorithm.alpha;
      in.beta_hat_request = out.hp.beta_hat;
      if (config.algorithm.Delta) {
        in.Delta = *config.algorithm.Delta;
      } else {
        // Phi^0 is largest at gamma = 1/(12L), beta = 6 L gamma; the bound
        // depends on beta_hat, which in turn is capped by sqrt(L Delta) / a.
        const InitialGeometry geometry =
            MeasureInitialGeometry(problem, x0, out.f_ref);
        double bh = std::min(out.hp.beta_hat, 1.0);
        for (int iter = 0; iter < 50; ++iter) {
          in.Delta = InitialLyapunov(geometry, 1.0 / (12.0 * L), 0.5, bh, eta);
          double next = std::min(out.hp.beta_hat, 1.0);
          if (k.a > 0.0) next = std::min(next, std::sqrt(L * in.Delta) / k.a);
          if (next == bh) break;
          bh = next;
        }
        in.Delta = std::max(in.Delta, std::numeric_limits<double>::min());
      }
      const StochasticParams params = ComputeStochasticParams(in);
      out.hp.gamma = params.gamma;
      out.hp.beta = params.beta;
      out.hp.beta_hat = params.beta_hat;
      out.calibrated = true;
    }
  }
  Validate(out.hp);
  return out;
}

}  // namespace clipsim
