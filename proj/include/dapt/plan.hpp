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

#ifndef DAPT_PLAN_HPP_
#define DAPT_PLAN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dapt {

inline constexpr std::uint64_t kDaptFixedSteps = 12500;
inline constexpr std::uint64_t kSmallCorpusBatch = 256;
inline constexpr std::uint64_t kLargeCorpusBatch = 2048;
/// Corpora with fewer documents than this train with the small batch.
inline constexpr std::uint64_t kSmallCorpusDocs = 5000;

enum class PhaseKind { kDapt, kTapt, kKnnTapt, kRandTapt, kCuratedTapt, kDaptThenTapt };

struct Phase {
  PhaseKind kind = PhaseKind::kTapt;
  std::size_t k = 0;  // only for kKnnTapt / kRandTapt

  /// "DAPT", "TAPT", "KNN_TAPT(50)", "RAND_TAPT(50)", "CURATED_TAPT",
  /// "DAPT_THEN_TAPT".
  std::string name() const;
  static Phase parse(std::string_view s);

  friend bool operator==(const Phase&, const Phase&) = default;
};

struct PlanOverrides {
  std::optional<std::uint64_t> fixed_steps;
};

struct PhasePlan {
  Phase phase;
  std::uint64_t docs = 0;
  std::uint64_t epochs = 0;
  std::uint64_t batch = 0;
  std::uint64_t steps = 0;
  std::uint64_t storage_bytes = 0;
  bool fixed_steps = false;
};

/// 256 below kSmallCorpusDocs documents, 2048 otherwise.
std::uint64_t batch_for_docs(std::uint64_t docs);

/// steps = ceil(docs * epochs / batch), one document per training sequence.
/// DAPT always runs a single epoch and may take a fixed step count.
/// Throws std::invalid_argument for docs == 0, epochs == 0, a zero fixed
/// step count, or DAPT_THEN_TAPT (use combine_plans).
PhasePlan plan_phase(const Phase& phase, std::uint64_t docs, std::uint64_t epochs,
                     std::uint64_t storage_bytes, const PlanOverrides& overrides = {});

/// DAPT followed by a TAPT-family phase: steps, documents and storage add.
PhasePlan combine_plans(const PhasePlan& dapt, const PhasePlan& tapt);

/// Steps in thousands, rounded half-up to one decimal: 196 -> "0.2K".
std::string format_steps(std::uint64_t steps);

struct PlanComparison {
  struct Row {
    PhasePlan plan;
    double ratio = 1.0;  // steps / cheapest steps
  };
  std::vector<Row> rows;  // ascending steps, then name

  double max_ratio() const;
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
};

/// Throws std::invalid_argument for fewer than two plans.
PlanComparison compare_plans(std::span<const PhasePlan> plans);

nlohmann::ordered_json to_json(const PhasePlan& p);
PhasePlan plan_from_json(const nlohmann::ordered_json& j);

}  // namespace dapt

#endif  // DAPT_PLAN_HPP_
