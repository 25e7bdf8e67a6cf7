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

#ifndef DAPT_MASK_HPP_
#define DAPT_MASK_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dapt/corpus.hpp"

namespace dapt {

inline constexpr double kDefaultMaskProb = 0.15;
inline constexpr std::size_t kDefaultTaptEpochs = 100;

struct MaskedSequence {
  std::string seq_id;
  std::size_t epoch = 0;
  std::vector<std::string> tokens;  // "<mask>" at masked positions
  std::vector<std::size_t> masked_positions;
  std::vector<std::string> originals;

  friend bool operator==(const MaskedSequence&, const MaskedSequence&) = default;
};

/// Masks each position independently with probability `p`. The stream is
/// Rng(splitmix64(base_seed ^ fnv1a64(seq_id) ^ epoch)), so the mask set is a
/// function of (base_seed, seq_id, epoch) alone.
MaskedSequence mask_sequence(const PackedSequence& seq, double p, std::size_t epoch,
                             std::uint64_t base_seed);

/// Puts the originals back. Inverse of mask_sequence on its source tokens.
std::vector<std::string> unmask(const MaskedSequence& m);

/// Emits epochs x |corpus| masked sequences, epoch-major, corpus order
/// within an epoch.
void augment_epochs(std::span<const PackedSequence> corpus, std::size_t epochs, double p,
                    std::uint64_t base_seed,
                    const std::function<void(const MaskedSequence&)>& sink);

nlohmann::ordered_json to_json(const MaskedSequence& m);

}  // namespace dapt

#endif  // DAPT_MASK_HPP_
