// Copyright 2026 The dapt Authors.
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

#ifndef DAPT_RNG_HPP_
#define DAPT_RNG_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace dapt {

/// One step of the splitmix64 generator. Advances `state` and returns the
/// mixed output.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Stateless splitmix64 finalizer: the first output of a splitmix64 stream
/// started at `x`. Used to derive per-item seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a over the bytes of `s`.
std::uint64_t fnv1a64(std::string_view s);

/// Incremental FNV-1a 64, for content fingerprints.
class Fnv1a64 {
 public:
  void update(std::string_view bytes);
  /// Length-prefixed, so that ("ab","c") and ("a","bc") differ.
  void update_field(std::string_view bytes);
  void update_u64(std::uint64_t v);
  std::uint64_t digest() const { return h_; }
  /// 16 lowercase hex digits.
  std::string hex() const;

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

/// Seed for a named sub-stream of a run-wide seed, so that one --seed fans
/// out to independent module streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain);

/// xoshiro256** seeded from a splitmix64 stream.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  /// Unbiased integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// One fair coin flip (top bit of a single draw).
  bool coin();

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace dapt

#endif  // DAPT_RNG_HPP_
