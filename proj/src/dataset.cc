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

#include "clipsim/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

#include "clipsim/errors.h"
#include "clipsim/rng.h"

namespace clipsim {
namespace {

bool ParseDouble(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool ParseIndex(std::string_view token, std::size_t& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

SparseDataset ParseLibsvm(const std::string& text, const std::string& source) {
  SparseDataset data;
  std::vector<double> raw_labels;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_index = 0;
  bool any_feature = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const auto tokens = SplitWhitespace(view);
    if (tokens.empty()) continue;

    double label = 0.0;
    if (!ParseDouble(tokens[0], label)) {
      throw ParseError(source, line_no, "bad label '" + std::string(tokens[0]) + "'");
    }
    SparseRow row;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto colon = tokens[k].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(source, line_no,
                         "expected idx:val, got '" + std::string(tokens[k]) + "'");
      }
      std::size_t index = 0;
      double value = 0.0;
      if (!ParseIndex(tokens[k].substr(0, colon), index) || index == 0) {
        throw ParseError(source, line_no, "bad feature index");
      }
      if (!ParseDouble(tokens[k].substr(colon + 1), value)) {
        throw ParseError(source, line_no, "bad feature value");
      }
      if (!row.empty() && index - 1 <= row.back().index) {
        throw ParseError(source, line_no,
                         "feature indices must be strictly increasing");
      }
      row.push_back({index - 1, value});
      max_index = std::max(max_index, index);
      any_feature = true;
    }
    data.rows.push_back(std::move(row));
    raw_labels.push_back(label);
  }

  std::vector<double> distinct = raw_labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() > 2) {
    throw UnsupportedDatasetError(source + ": " +
                                  std::to_string(distinct.size()) +
                                  " distinct labels; only binary data is supported");
  }
  data.labels.reserve(raw_labels.size());
  for (double label : raw_labels) {
    int mapped;
    if (distinct.size() == 2) {
      mapped = label == distinct[0] ? -1 : +1;
    } else {
      // A single class keeps its sign; 0 is treated as the negative class.
      mapped = label > 0.0 ? +1 : -1;
    }
    data.labels.push_back(mapped);
  }
  data.dim = any_feature ? max_index : 0;
  return data;
}

SparseDataset LoadLibsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseLibsvm(buffer.str(), path);
}

void WriteLibsvm(const SparseDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset '" + path + "'");
  out << std::setprecision(17);
  for (std::size_t r = 0; r < data.size(); ++r) {
    out << (data.labels[r] > 0 ? "+1" : "-1");
    for (const SparseEntry& e : data.rows[r]) {
      out << ' ' << (e.index + 1) << ':' << e.value;
    }
    out << '\n';
  }
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

SparseDataset NormalizeRows(SparseDataset data) {
  for (SparseRow& row : data.rows) {
    double sq = 0.0;
    for (const SparseEntry& e : row) sq += e.value * e.value;
    if (sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(sq);
    for (SparseEntry& e : row) e.value *= inv;
  }
  return data;
}

std::vector<SparseDataset> Partition(const SparseDataset& data,
                                     std::size_t n_workers,
                                     std::uint64_t seed) {
  if (n_workers == 0) throw InvalidParameterError("n_workers must be >= 1");
  if (n_workers > data.size()) {
    throw InvalidParameterError("more workers than rows");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  CounterEngine engine =
      RngStream(seed, {0, StreamPurpose::kPartition}).ForStep(0);
  std::shuffle(order.begin(), order.end(), engine);

  std::vector<SparseDataset> shards(n_workers);
  const std::size_t base = data.size() / n_workers;
  const std::size_t extra = data.size() % n_workers;
  std::size_t next = 0;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t count = base + (w < extra ? 1 : 0);
    shards[w].dim = data.dim;
    for (std::size_t k = 0; k < count; ++k, ++next) {
      shards[w].rows.push_back(data.rows[order[next]]);
      shards[w].labels.push_back(data.labels[order[next]]);
    }
  }
  return shards;
}

SparseDataset MakeSyntheticDataset(std::size_t rows, std::size_t dim,
                                   double density, std::uint64_t seed) {
  if (dim == 0) throw InvalidParameterError("dim must be positive");
  if (!(density > 0.0 && density <= 1.0)) {
    throw InvalidParameterError("density must lie in (0, 1]");
  }
  CounterEngine engine = RngStream(seed, {0, StreamPurpose::kData}).ForStep(0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> separator(dim);
  for (double& w : separator) w = normal(engine);

  SparseDataset data;
  data.dim = dim;
  for (std::size_t r = 0; r < rows; ++r) {
    SparseRow row;
    double margin = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (unit(engine) >= density) continue;
      const double v = normal(engine);
      row.push_back({j, v});
      margin += v * separator[j];
    }
    if (row.empty()) {
      const std::size_t j = static_cast<std::size_t>(unit(engine) * dim) % dim;
      row.push_back({j, 1.0});
      margin = separator[j];
    }
    // 10% label flips keep the problem non-separable.
    int label = margin >= 0.0 ? +1 : -1;
    if (unit(engine) < 0.1) label = -label;
    data.rows.push_back(std::move(row));
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace clipsim
