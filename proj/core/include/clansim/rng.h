// Copyright 2026 The clansim Authors
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

#ifndef CLANSIM_RNG_H_
#define CLANSIM_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace clansim {

// Philox4x32-10 block function (Salmon et al., Random123).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter Generate(Counter counter, Key key);
};

// Counter-based random stream for one sample. The key is the batch seed and
// the upper counter words hold the sample index, so streams for distinct
// (seed, sample_index) pairs never overlap and need no seeding state.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t sample_index)
      : seed_(seed), sample_index_(sample_index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t sample_index() const { return sample_index_; }
  // Number of 64-bit words drawn so far.
  std::uint64_t counter() const { return drawn_; }

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Exponential holding time with the given rate (> 0).
  double Exponential(double rate);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t sample_index_;
  std::uint64_t drawn_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
};

}  // namespace clansim

#endif  // CLANSIM_RNG_H_
