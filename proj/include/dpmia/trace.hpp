// Copyright 2026 The dpmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Traces, aggregates and the operations that build them.
//
// A trace is a binary sites x epochs matrix stored row-major (site-major):
// cell (l, e) lives at flat index l * epochs + e. The same layout is used
// for every matrix in the library, which also fixes the feature order of
// observation vectors.

#ifndef DPMIA_TRACE_HPP_
#define DPMIA_TRACE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpmia/mechanism_spec.hpp"
#include "dpmia/rng.hpp"

namespace dpmia {

struct Cell {
  int site = 0;
  int epoch = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline void CheckShape(int sites, int epochs) {
  if (sites <= 0 || epochs <= 0) {
    throw std::invalid_argument("grid dimensions must be positive, got " +
                                std::to_string(sites) + "x" +
                                std::to_string(epochs));
  }
}

class TraceMatrix {
 public:
  // All-zero trace.
  TraceMatrix(int sites, int epochs)
      : sites_(sites), epochs_(epochs) {
    CheckShape(sites, epochs);
    cells_.assign(static_cast<std::size_t>(sites) * epochs, 0);
  }

  TraceMatrix(int sites, int epochs, std::vector<std::uint8_t> cells)
      : sites_(sites), epochs_(epochs), cells_(std::move(cells)) {
    CheckShape(sites, epochs);
    if (cells_.size() != static_cast<std::size_t>(sites) * epochs) {
      throw std::invalid_argument("trace has " + std::to_string(cells_.size()) +
                                  " cells, expected " +
                                  std::to_string(sites * epochs));
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (cells_[i] > 1) {
        throw std::invalid_argument("trace cell " + std::to_string(i) +
                                    " is not binary");
      }
      if (cells_[i] == 1) support_.push_back(static_cast<int>(i));
    }
  }

  static TraceMatrix FromSupport(int sites, int epochs,
                                 std::span<const int> flat_ones) {
    CheckShape(sites, epochs);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(sites) * epochs,
                                    0);
    for (int index : flat_ones) {
      if (index < 0 || index >= sites * epochs) {
        throw std::invalid_argument("support index out of range");
      }
      cells[index] = 1;
    }
    return TraceMatrix(sites, epochs, std::move(cells));
  }

  int sites() const { return sites_; }
  int epochs() const { return epochs_; }
  int size() const { return sites_ * epochs_; }
  bool SameShape(int sites, int epochs) const {
    return sites_ == sites && epochs_ == epochs;
  }

  std::uint8_t at(int site, int epoch) const {
    return cells_[static_cast<std::size_t>(site) * epochs_ + epoch];
  }
  std::span<const std::uint8_t> cells() const { return cells_; }

  // Flat indices of the ones, ascending (row-major order).
  const std::vector<int>& support() const { return support_; }
  int CountOnes() const { return static_cast<int>(support_.size()); }

  int ColumnSum(int epoch) const {
    int total = 0;
    for (int l = 0; l < sites_; ++l) total += at(l, epoch);
    return total;
  }

  friend bool operator==(const TraceMatrix& a, const TraceMatrix& b) {
    return a.sites_ == b.sites_ && a.epochs_ == b.epochs_ &&
           a.cells_ == b.cells_;
  }

 private:
  int sites_;
  int epochs_;
  std::vector<std::uint8_t> cells_;
  std::vector<int> support_;
};

class TraceDataset {
 public:
  explicit TraceDataset(std::vector<TraceMatrix> traces)
      : traces_(std::move(traces)) {
    if (traces_.empty()) throw std::invalid_argument("no traces");
    for (const TraceMatrix& t : traces_) {
      if (!t.SameShape(sites(), epochs())) {
        throw std::invalid_argument(
            "dataset is not dimension-homogeneous: found " +
            std::to_string(t.sites()) + "x" + std::to_string(t.epochs()) +
            " next to " + std::to_string(sites()) + "x" +
            std::to_string(epochs()));
      }
    }
  }

  int sites() const { return traces_.front().sites(); }
  int epochs() const { return traces_.front().epochs(); }
  std::size_t size() const { return traces_.size(); }
  const TraceMatrix& operator[](std::size_t i) const { return traces_[i]; }
  const std::vector<TraceMatrix>& traces() const { return traces_; }
  auto begin() const { return traces_.begin(); }
  auto end() const { return traces_.end(); }

  // Fraction of traces with a one at each cell.
  std::vector<double> CellFrequencies() const {
    std::vector<double> freq(static_cast<std::size_t>(sites()) * epochs(), 0);
    for (const TraceMatrix& t : traces_) {
      for (int index : t.support()) freq[index] += 1;
    }
    for (double& f : freq) f /= static_cast<double>(traces_.size());
    return freq;
  }

 private:
  std::vector<TraceMatrix> traces_;
};

// Non-negative integer counts; cell (l, e) is the number of summed traces
// with a one there.
class AggregateMatrix {
 public:
  AggregateMatrix(int sites, int epochs) : sites_(sites), epochs_(epochs) {
    CheckShape(sites, epochs);
    counts_.assign(static_cast<std::size_t>(sites) * epochs, 0);
  }

  int sites() const { return sites_; }
  int epochs() const { return epochs_; }
  int size() const { return sites_ * epochs_; }
  std::int64_t at(int site, int epoch) const {
    return counts_[static_cast<std::size_t>(site) * epochs_ + epoch];
  }
  std::span<const std::int64_t> counts() const { return counts_; }

  void Add(const TraceMatrix& trace) {
    if (!trace.SameShape(sites_, epochs_)) {
      throw std::invalid_argument("aggregate: trace dimension mismatch");
    }
    for (int index : trace.support()) ++counts_[index];
  }

  friend bool operator==(const AggregateMatrix&,
                         const AggregateMatrix&) = default;

 private:
  int sites_;
  int epochs_;
  std::vector<std::int64_t> counts_;
};

// Released aggregate: counts plus DP noise, tagged with its mechanism.
class NoisyAggregate {
 public:
  NoisyAggregate(int sites, int epochs, std::vector<double> values,
                 MechanismSpec mechanism)
      : sites_(sites), epochs_(epochs), values_(std::move(values)),
        mechanism_(mechanism) {
    CheckShape(sites, epochs);
    if (values_.size() != static_cast<std::size_t>(sites) * epochs) {
      throw std::invalid_argument("noisy aggregate size mismatch");
    }
  }

  int sites() const { return sites_; }
  int epochs() const { return epochs_; }
  int size() const { return sites_ * epochs_; }
  double at(int site, int epoch) const {
    return values_[static_cast<std::size_t>(site) * epochs_ + epoch];
  }
  std::span<const double> values() const { return values_; }
  const MechanismSpec& mechanism() const { return mechanism_; }

 private:
  int sites_;
  int epochs_;
  std::vector<double> values_;
  MechanismSpec mechanism_;
};

// Released values at the cells where the target has a one.
struct ObservationVector {
  std::vector<double> values;
  std::vector<Cell> cells;
  std::size_t size() const { return values.size(); }
};

// Keeps at most `clip_bound` ones per epoch column, dropping the excess
// uniformly at random. Columns already within the bound are untouched.
inline TraceMatrix ClipTrace(const TraceMatrix& trace, int clip_bound,
                             Rng& rng) {
  if (clip_bound < 1) throw std::invalid_argument("clip bound must be >= 1");
  std::vector<std::uint8_t> cells(trace.cells().begin(), trace.cells().end());
  std::vector<int> ones;
  for (int e = 0; e < trace.epochs(); ++e) {
    ones.clear();
    for (int l = 0; l < trace.sites(); ++l) {
      if (trace.at(l, e)) ones.push_back(l);
    }
    if (static_cast<int>(ones.size()) <= clip_bound) continue;
    rng.Shuffle(std::span<int>(ones));
    for (std::size_t i = clip_bound; i < ones.size(); ++i) {
      cells[static_cast<std::size_t>(ones[i]) * trace.epochs() + e] = 0;
    }
  }
  return TraceMatrix(trace.sites(), trace.epochs(), std::move(cells));
}

inline TraceMatrix ClipTrace(const TraceMatrix& trace, int clip_bound,
                             std::uint64_t seed) {
  Rng rng(seed);
  return ClipTrace(trace, clip_bound, rng);
}

// Clips every trace with its own stream derived from `seed`.
inline TraceDataset ClipDataset(const TraceDataset& dataset, int clip_bound,
                                std::uint64_t seed) {
  std::vector<TraceMatrix> clipped;
  clipped.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    Rng rng = Rng::Stream(seed, i);
    clipped.push_back(ClipTrace(dataset[i], clip_bound, rng));
  }
  return TraceDataset(std::move(clipped));
}

inline AggregateMatrix Aggregate(const TraceDataset& dataset) {
  AggregateMatrix out(dataset.sites(), dataset.epochs());
  for (const TraceMatrix& t : dataset) out.Add(t);
  return out;
}

// Sum over the traces selected by `indices`.
inline AggregateMatrix AggregateSubset(const TraceDataset& dataset,
                                       std::span<const std::size_t> indices) {
  AggregateMatrix out(dataset.sites(), dataset.epochs());
  for (std::size_t i : indices) out.Add(dataset[i]);
  return out;
}

// Independent Bernoulli(rates[l * epochs + e]) cells.
inline TraceDataset GenerateSyntheticTraces(int sites, int epochs,
                                            std::span<const double> rates,
                                            std::size_t n,
                                            std::uint64_t seed) {
  CheckShape(sites, epochs);
  if (rates.size() != static_cast<std::size_t>(sites) * epochs) {
    throw std::invalid_argument("rates has " + std::to_string(rates.size()) +
                                " entries, expected " +
                                std::to_string(sites * epochs));
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0 && rates[i] <= 1)) {
      throw std::invalid_argument("rate at cell " + std::to_string(i) +
                                  " is outside [0, 1]");
    }
  }
  if (n == 0) throw std::invalid_argument("no traces");
  std::vector<TraceMatrix> traces;
  traces.reserve(n);
  std::vector<std::uint8_t> cells(rates.size());
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::Stream(seed, i);
    for (std::size_t c = 0; c < rates.size(); ++c) {
      cells[c] = rng.Bernoulli(rates[c]) ? 1 : 0;
    }
    traces.emplace_back(sites, epochs, cells);
  }
  return TraceDataset(std::move(traces));
}

// Part sizes: floor(n * w_i), with the remainder handed out one at a time to
// the earliest parts.
inline std::vector<std::size_t> SplitSizes(std::size_t n,
                                           std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("split: no weights");
  double total = 0;
  for (double w : weights) {
    if (!(w > 0)) throw std::invalid_argument("split: weights must be > 0");
    total += w;
  }
  if (std::abs(total - 1) > 1e-9) {
    throw std::invalid_argument("split: weights must sum to 1");
  }
  if (weights.size() > n) {
    throw std::invalid_argument("split: more parts than traces");
  }
  std::vector<std::size_t> sizes(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sizes[i] = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * weights[i] + 1e-9));
    assigned += sizes[i];
  }
  for (std::size_t i = 0; assigned < n; i = (i + 1) % sizes.size()) {
    ++sizes[i];
    ++assigned;
  }
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("split: a part would be empty");
  }
  return sizes;
}

inline std::vector<TraceDataset> SplitDataset(const TraceDataset& dataset,
                                              std::span<const double> weights,
                                              std::uint64_t seed) {
  const std::vector<std::size_t> sizes = SplitSizes(dataset.size(), weights);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));
  std::vector<TraceDataset> parts;
  std::size_t offset = 0;
  for (std::size_t size : sizes) {
    std::vector<TraceMatrix> part;
    part.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      part.push_back(dataset[order[offset + i]]);
    }
    offset += size;
    parts.emplace_back(std::move(part));
  }
  return parts;
}

// Released value minus the attacker's background counts, per cell.
inline std::vector<double> Residual(const NoisyAggregate& release,
                                    const AggregateMatrix& background) {
  if (release.sites() != background.sites() ||
      release.epochs() != background.epochs()) {
    throw std::invalid_argument("residual: dimension mismatch");
  }
  std::vector<double> out(release.values().begin(), release.values().end());
  const auto counts = background.counts();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] -= static_cast<double>(counts[i]);
  }
  return out;
}

inline ObservationVector PositiveObservations(const NoisyAggregate& release,
                                              const TraceMatrix& target) {
  if (!target.SameShape(release.sites(), release.epochs())) {
    throw std::invalid_argument("positive observations: dimension mismatch");
  }
  ObservationVector out;
  out.values.reserve(target.support().size());
  out.cells.reserve(target.support().size());
  for (int index : target.support()) {
    out.values.push_back(release.values()[index]);
    out.cells.push_back({index / target.epochs(), index % target.epochs()});
  }
  return out;
}

}  // namespace dpmia

#endif  // DPMIA_TRACE_HPP_
