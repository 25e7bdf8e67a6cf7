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

#include "dapt/mask.hpp"

#include <stdexcept>

#include "dapt/rng.hpp"

namespace dapt {

MaskedSequence mask_sequence(const PackedSequence& seq, double p, std::size_t epoch,
                             std::uint64_t base_seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("mask_sequence: probability must be in [0, 1]");
  Rng rng(splitmix64(base_seed ^ fnv1a64(seq.seq_id) ^ static_cast<std::uint64_t>(epoch)));
  MaskedSequence m;
  m.seq_id = seq.seq_id;
  m.epoch = epoch;
  m.tokens = seq.tokens;
  for (std::size_t i = 0; i < m.tokens.size(); ++i) {
    if (rng.uniform() < p) {
      m.masked_positions.push_back(i);
      m.originals.push_back(std::move(m.tokens[i]));
      m.tokens[i] = std::string(kMaskToken);
    }
  }
  return m;
}

std::vector<std::string> unmask(const MaskedSequence& m) {
  if (m.masked_positions.size() != m.originals.size())
    throw std::invalid_argument("unmask: positions and originals differ in length");
  std::vector<std::string> out = m.tokens;
  for (std::size_t i = 0; i < m.masked_positions.size(); ++i) {
    const std::size_t pos = m.masked_positions[i];
    if (pos >= out.size()) throw std::invalid_argument("unmask: position out of range");
    out[pos] = m.originals[i];
  }
  return out;
}

void augment_epochs(std::span<const PackedSequence> corpus, std::size_t epochs, double p,
                    std::uint64_t base_seed,
                    const std::function<void(const MaskedSequence&)>& sink) {
  if (epochs == 0) throw std::invalid_argument("augment_epochs: epochs must be >= 1");
  for (std::size_t e = 0; e < epochs; ++e)
    for (const auto& seq : corpus) sink(mask_sequence(seq, p, e, base_seed));
}

nlohmann::ordered_json to_json(const MaskedSequence& m) {
  return nlohmann::ordered_json{{"seq_id", m.seq_id},
                        {"epoch", m.epoch},
                        {"tokens", m.tokens},
                        {"masked_positions", m.masked_positions},
                        {"originals", m.originals}};
}

}  // namespace dapt
