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

// Histogram-smoothed empirical CDF.
//
// Samples are binned with the Freedman-Diaconis width (Sturges' rule when the
// interquartile range is zero). The CDF is the piecewise-linear curve through
// (lowest edge, 0), (bin midpoint, mass below the midpoint), and
// (highest edge, 1); mass inside a bin counts half at its midpoint.

#ifndef DPMIA_ECDF_HPP_
#define DPMIA_ECDF_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpmia/stats.hpp"

namespace dpmia {

class SmoothedCdf {
 public:
  static constexpr int kMaxBins = 4096;

  static SmoothedCdf FromSamples(std::span<const double> samples) {
    if (samples.size() < 2) {
      throw std::invalid_argument("smoothed CDF needs at least two samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (!(hi > lo)) {
      throw std::invalid_argument("degenerate single-valued histogram");
    }
    const double n = static_cast<double>(sorted.size());
    const double iqr = SampleQuantile(sorted, 0.75) - SampleQuantile(sorted, 0.25);
    int bins = 0;
    if (iqr > 0) {
      const double width = 2 * iqr / std::cbrt(n);
      bins = static_cast<int>(std::ceil((hi - lo) / width));
    } else {
      bins = static_cast<int>(std::ceil(std::log2(n))) + 1;
    }
    bins = std::clamp(bins, 1, kMaxBins);
    const double width = (hi - lo) / bins;

    std::vector<double> counts(bins, 0);
    for (double x : sorted) {
      int b = static_cast<int>((x - lo) / width);
      counts[std::clamp(b, 0, bins - 1)] += 1;
    }
    SmoothedCdf cdf;
    cdf.x_.push_back(lo);
    cdf.p_.push_back(0);
    double below = 0;
    for (int b = 0; b < bins; ++b) {
      cdf.x_.push_back(lo + (b + 0.5) * width);
      cdf.p_.push_back((below + counts[b] / 2) / n);
      below += counts[b];
    }
    cdf.x_.push_back(hi);
    cdf.p_.push_back(1);
    return cdf;
  }

  // Rebuilds from stored knots (e.g. parsed from JSON).
  static SmoothedCdf FromKnots(std::vector<double> x, std::vector<double> p) {
    if (x.size() < 2 || x.size() != p.size()) {
      throw std::invalid_argument("smoothed CDF knots malformed");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (x[i] < x[i - 1] || p[i] < p[i - 1]) {
        throw std::invalid_argument("smoothed CDF knots not monotone");
      }
    }
    if (p.front() != 0 || p.back() != 1) {
      throw std::invalid_argument("smoothed CDF must run from 0 to 1");
    }
    SmoothedCdf cdf;
    cdf.x_ = std::move(x);
    cdf.p_ = std::move(p);
    return cdf;
  }

  double Cdf(double value) const {
    if (value <= x_.front()) return 0;
    if (value >= x_.back()) return 1;
    const auto it = std::upper_bound(x_.begin(), x_.end(), value);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin());
    const double x0 = x_[j - 1], x1 = x_[j];
    if (x1 == x0) return p_[j];
    return p_[j - 1] + (p_[j] - p_[j - 1]) * (value - x0) / (x1 - x0);
  }

  double Quantile(double prob) const {
    if (prob <= 0) return x_.front();
    if (prob >= 1) return x_.back();
    const auto it = std::lower_bound(p_.begin(), p_.end(), prob);
    const std::size_t j = static_cast<std::size_t>(it - p_.begin());
    const double p0 = p_[j - 1], p1 = p_[j];
    return x_[j - 1] + (x_[j] - x_[j - 1]) * (prob - p0) / (p1 - p0);
  }

  double min() const { return x_.front(); }
  double max() const { return x_.back(); }
  const std::vector<double>& knots_x() const { return x_; }
  const std::vector<double>& knots_p() const { return p_; }

 private:
  std::vector<double> x_;
  std::vector<double> p_;
};

inline void to_json(nlohmann::json& j, const SmoothedCdf& cdf) {
  j = nlohmann::json{{"x", cdf.knots_x()}, {"p", cdf.knots_p()}};
}

}  // namespace dpmia

#endif  // DPMIA_ECDF_HPP_
