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

#include "dpmia/stats.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace dpmia {
namespace {

TEST(StatsTest, NormalCdfAndQuantileInvert) {
  EXPECT_DOUBLE_EQ(NormalCdf(0), 0.5);
  EXPECT_NEAR(NormalCdf(1.959963984540054), 0.975, 1e-12);
  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.8, 0.999}) {
    EXPECT_NEAR(NormalCdf(NormalQuantile(p)), p, 1e-12);
  }
  EXPECT_TRUE(std::isinf(NormalQuantile(0)));
}

TEST(StatsTest, LogChooseMatchesSmallBinomials) {
  EXPECT_NEAR(std::exp(LogChoose(10, 3)), 120, 1e-9);
  EXPECT_NEAR(std::exp(LogChoose(52, 5)), 2598960, 1e-4);
  EXPECT_NEAR(LogChoose(7, 0), 0, 1e-12);
}

TEST(StatsTest, LogSumExpIsStable) {
  const std::vector<double> big = {1000, 1000};
  EXPECT_NEAR(LogSumExp(big), 1000 + std::log(2.0), 1e-12);
  const std::vector<double> mixed = {std::log(1.0), std::log(3.0)};
  EXPECT_NEAR(LogSumExp(mixed), std::log(4.0), 1e-12);
}

TEST(StatsTest, MomentsAndQuantiles) {
  const std::vector<double> xs = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Mean(xs), 2.5);
  EXPECT_NEAR(StdDev(xs), std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(SampleQuantile(xs, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(SampleQuantile(xs, 0), 1);
  EXPECT_DOUBLE_EQ(SampleQuantile(xs, 1), 4);
}

}  // namespace
}  // namespace dpmia
