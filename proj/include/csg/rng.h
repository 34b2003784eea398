// Copyright 2026 The csg-solver Authors
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

#ifndef CSG_RNG_H_
#define CSG_RNG_H_

#include <cstdint>
#include <span>
#include <vector>

namespace csg {

// Counter-based generator built on the SplitMix64 finalizer.
//
// A stream is identified by (seed, stream). Its key is
//   key = mix(seed ^ mix(stream + G))
// and its k-th draw (k = 0, 1, ...) is
//   mix(key + (k + 1) * G)
// with G = 0x9E3779B97F4A7C15 and mix the SplitMix64 output function.
// Uniform doubles take the top 53 bits. Draws depend only on (seed, stream,
// k), so any partition of streams over workers reproduces the same numbers.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + kGolden))) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Index drawn from an unnormalized-safe cumulative table (last entry ~1).
  int categorical(std::span<const double> cumulative) {
    const double u = uniform();
    const int n = static_cast<int>(cumulative.size());
    for (int k = 0; k < n - 1; ++k) {
      if (u < cumulative[k]) return k;
    }
    return n - 1;
  }

  // Dirichlet(1, ..., 1) sample via spacings of sorted uniforms.
  std::vector<double> flat_dirichlet(int n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline std::vector<double> CounterRng::flat_dirichlet(int n) {
  std::vector<double> cuts(n + 1);
  cuts[0] = 0.0;
  cuts[n] = 1.0;
  for (int k = 1; k < n; ++k) cuts[k] = uniform();
  // insertion sort; n is tiny
  for (int a = 2; a < n; ++a) {
    for (int b = a; b > 1 && cuts[b] < cuts[b - 1]; --b) std::swap(cuts[b], cuts[b - 1]);
  }
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = cuts[k + 1] - cuts[k];
  return out;
}

}  // namespace csg

#endif  // CSG_RNG_H_
