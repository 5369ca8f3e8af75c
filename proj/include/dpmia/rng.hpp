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

#ifndef DPMIA_RNG_HPP_
#define DPMIA_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace dpmia {

// SplitMix64 finalizer. Used to derive decorrelated seeds for independent
// streams from a (master seed, index) pair.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  return MixSeed(MixSeed(master) ^ MixSeed(index + 0x632be59bd9b4e019ULL));
}

// Seedable generator with platform-independent transforms. The engine is
// mt19937_64, whose output sequence is fixed by the standard; every
// distribution below is implemented here rather than through <random>
// distributions, whose outputs are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(MixSeed(seed)) {}

  // Independent stream number `index` under `master`.
  static Rng Stream(std::uint64_t master, std::uint64_t index) {
    return Rng(DeriveSeed(master, index));
  }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1).
  double UniformOpen() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Unbiased integer in [0, n). Lemire's multiply-and-reject.
  std::uint64_t UniformInt(std::uint64_t n) {
    if (n == 0) return 0;
    unsigned __int128 product =
        static_cast<unsigned __int128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(engine_()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Zero-mean Laplace with scale b (inverse CDF).
  double Laplace(double scale) {
    if (scale == 0) return 0;
    const double u = UniformOpen() - 0.5;
    return u < 0 ? scale * std::log1p(2 * u) : -scale * std::log1p(-2 * u);
  }

  // Zero-mean Gaussian with standard deviation sd (Box-Muller, one draw
  // per call so that the stream position is a function of the call count).
  double Gaussian(double sd) {
    if (sd == 0) return 0;
    const double u1 = UniformOpen();
    const double u2 = Uniform();
    return sd * std::sqrt(-2 * std::log(u1)) *
           std::cos(2 * std::numbers::pi * u2);
  }

  // Fisher-Yates over the first `k` positions: afterwards items[0, k) is a
  // uniformly random k-subset in random order.
  template <typename T>
  void PartialShuffle(std::span<T> items, std::size_t k) {
    const std::size_t n = items.size();
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(UniformInt(n - i));
      std::swap(items[i], items[j]);
    }
  }

  template <typename T>
  void Shuffle(std::span<T> items) {
    PartialShuffle(items, items.size());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpmia

#endif  // DPMIA_RNG_HPP_
