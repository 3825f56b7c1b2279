// Copyright 2026 The riskcert Authors
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

#ifndef RISKCERT_RNG_H_
#define RISKCERT_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace riskcert {

// Counter-based pseudorandom stream built on Philox4x32-10.
//
// A stream is identified by (seed, stream id); the i-th 64-bit output is a
// pure function of (seed, stream id, i), so results never depend on how work
// is scheduled across threads. Split() derives child streams whose counters
// live in a different region of the 128-bit counter space (the stream id
// occupies the upper 64 bits, the position the lower 64 bits).
//
// All derived quantities (uniform doubles, bounded integers) are computed
// here rather than through <random> distributions, whose algorithms are
// implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Child stream number `index`. Deterministic; does not advance *this.
  Rng Split(std::uint64_t index) const;

  std::uint64_t NextU64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return position_; }

  // UniformRandomBitGenerator surface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

  // Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> PhiloxBlock(
      std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  // Cache of the most recent block (two 64-bit outputs).
  std::uint64_t cached_block_ = std::numeric_limits<std::uint64_t>::max();
  std::array<std::uint64_t, 2> cache_{};
};

// Stream ids used by the campaign drivers under a common seed.
inline constexpr std::uint64_t kCampaignStream = 1;
inline constexpr std::uint64_t kValidationStream = 2;

}  // namespace riskcert

#endif  // RISKCERT_RNG_H_
