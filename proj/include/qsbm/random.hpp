// Copyright 2026 The QSBM Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace qsbm {

/// Splittable pseudo-random stream.
///
/// The generator is xoshiro256** seeded through SplitMix64. Child streams are
/// derived from the parent *seed* (not from its consumed state), so
/// `substream("init")` yields the same sequence no matter how many numbers the
/// parent has already produced. All distributions are implemented here rather
/// than through <random> so sequences are identical across standard libraries.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    [[nodiscard]] RandomStream substream(std::uint64_t index) const;
    [[nodiscard]] RandomStream substream(std::string_view name) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Standard normal (Box-Muller, one cached deviate).
    double normal();
    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);

  private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; exposed for key derivation.
std::uint64_t mix64(std::uint64_t x);

} // namespace qsbm
