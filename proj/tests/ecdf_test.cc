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

#include "dpmia/ecdf.hpp"

#include <cmath>
#include <vector>

#include "dpmia/rng.hpp"
#include "gtest/gtest.h"

namespace dpmia {
namespace {

TEST(SmoothedCdfTest, MonotoneAndBounded) {
  Rng rng(3);
  std::vector<double> xs(5000);
  for (double& x : xs) x = rng.Gaussian(1.0);
  const SmoothedCdf cdf = SmoothedCdf::FromSamples(xs);
  double previous = 0;
  for (double x = -5; x <= 5; x += 0.01) {
    const double p = cdf.Cdf(x);
    EXPECT_GE(p, previous);
    EXPECT_GE(p, 0);
    EXPECT_LE(p, 1);
    previous = p;
  }
  EXPECT_EQ(cdf.Cdf(cdf.min() - 1), 0);
  EXPECT_EQ(cdf.Cdf(cdf.max() + 1), 1);
}

TEST(SmoothedCdfTest, QuantileInvertsCdf) {
  Rng rng(4);
  std::vector<double> xs(2000);
  for (double& x : xs) x = rng.Uniform() * 10;
  const SmoothedCdf cdf = SmoothedCdf::FromSamples(xs);
  for (double p : {0.05, 0.25, 0.5, 0.9}) {
    EXPECT_NEAR(cdf.Cdf(cdf.Quantile(p)), p, 1e-9);
  }
  EXPECT_EQ(cdf.Quantile(1), cdf.max());
  EXPECT_EQ(cdf.Quantile(0), cdf.min());
}

TEST(SmoothedCdfTest, MedianOfSymmetricSampleNearCentre) {
  Rng rng(5);
  std::vector<double> xs(20000);
  for (double& x : xs) x = 3 + rng.Laplace(2.0);
  const SmoothedCdf cdf = SmoothedCdf::FromSamples(xs);
  EXPECT_NEAR(cdf.Quantile(0.5), 3, 0.1);
  EXPECT_NEAR(cdf.Cdf(3.5), 1 - 0.5 * std::exp(-0.25), 0.01);
}

TEST(SmoothedCdfTest, RejectsDegenerateInput) {
  const std::vector<double> same = {2, 2, 2, 2};
  EXPECT_THROW(SmoothedCdf::FromSamples(same), std::invalid_argument);
  const std::vector<double> one = {1};
  EXPECT_THROW(SmoothedCdf::FromSamples(one), std::invalid_argument);
}

TEST(SmoothedCdfTest, ZeroIqrFallsBackToSturges) {
  std::vector<double> xs(100, 1.0);
  xs[0] = 0;
  xs[99] = 2;
  const SmoothedCdf cdf = SmoothedCdf::FromSamples(xs);
  EXPECT_EQ(cdf.knots_x().size(), 2u + 8u);  // ceil(log2 100) + 1 = 8 bins
}

TEST(SmoothedCdfTest, KnotsRoundTrip) {
  const SmoothedCdf cdf = SmoothedCdf::FromKnots({0, 1, 2}, {0, 0.25, 1});
  EXPECT_DOUBLE_EQ(cdf.Cdf(0.5), 0.125);
  EXPECT_DOUBLE_EQ(cdf.Quantile(0.625), 1.5);
  EXPECT_THROW(SmoothedCdf::FromKnots({0, 1}, {0, 0.5}), std::invalid_argument);
  EXPECT_THROW(SmoothedCdf::FromKnots({1, 0}, {0, 1}), std::invalid_argument);
}

}  // namespace
}  // namespace dpmia
