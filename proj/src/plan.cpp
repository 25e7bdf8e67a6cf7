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

#include "dapt/plan.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "dapt/errors.hpp"

namespace dapt {

std::string Phase::name() const {
  switch (kind) {
    case PhaseKind::kDapt: return "DAPT";
    case PhaseKind::kTapt: return "TAPT";
    case PhaseKind::kKnnTapt: return "KNN_TAPT(" + std::to_string(k) + ")";
    case PhaseKind::kRandTapt: return "RAND_TAPT(" + std::to_string(k) + ")";
    case PhaseKind::kCuratedTapt: return "CURATED_TAPT";
    case PhaseKind::kDaptThenTapt: return "DAPT_THEN_TAPT";
  }
  return "TAPT";
}

Phase Phase::parse(std::string_view s) {
  if (s == "DAPT") return {PhaseKind::kDapt, 0};
  if (s == "TAPT") return {PhaseKind::kTapt, 0};
  if (s == "CURATED_TAPT") return {PhaseKind::kCuratedTapt, 0};
  if (s == "DAPT_THEN_TAPT") return {PhaseKind::kDaptThenTapt, 0};
  for (auto [prefix, kind] : {std::pair{std::string_view("KNN_TAPT("), PhaseKind::kKnnTapt},
                              std::pair{std::string_view("RAND_TAPT("), PhaseKind::kRandTapt}}) {
    if (s.starts_with(prefix) && s.ends_with(")")) {
      const auto digits = s.substr(prefix.size(), s.size() - prefix.size() - 1);
      std::size_t k = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && k > 0) return {kind, k};
    }
  }
  throw std::invalid_argument("unknown phase: " + std::string(s));
}

std::uint64_t batch_for_docs(std::uint64_t docs) {
  return docs < kSmallCorpusDocs ? kSmallCorpusBatch : kLargeCorpusBatch;
}

PhasePlan plan_phase(const Phase& phase, std::uint64_t docs, std::uint64_t epochs,
                     std::uint64_t storage_bytes, const PlanOverrides& overrides) {
  if (phase.kind == PhaseKind::kDaptThenTapt)
    throw std::invalid_argument("plan_phase: DAPT_THEN_TAPT is built with combine_plans");
  if ((phase.kind == PhaseKind::kKnnTapt || phase.kind == PhaseKind::kRandTapt) && phase.k == 0)
    throw std::invalid_argument("plan_phase: " + phase.name() + " needs k >= 1");
  if (docs == 0) throw std::invalid_argument("plan_phase: docs must be >= 1");
  if (epochs == 0) throw std::invalid_argument("plan_phase: epochs must be >= 1");
  PhasePlan p;
  p.phase = phase;
  p.docs = docs;
  p.epochs = phase.kind == PhaseKind::kDapt ? 1 : epochs;
  p.batch = batch_for_docs(docs);
  p.storage_bytes = storage_bytes;
  if (overrides.fixed_steps) {
    if (*overrides.fixed_steps == 0)
      throw std::invalid_argument("plan_phase: fixed steps must be >= 1");
    p.steps = *overrides.fixed_steps;
    p.fixed_steps = true;
  } else {
    p.steps = (p.docs * p.epochs + p.batch - 1) / p.batch;
  }
  return p;
}

PhasePlan combine_plans(const PhasePlan& dapt, const PhasePlan& tapt) {
  if (dapt.phase.kind != PhaseKind::kDapt)
    throw std::invalid_argument("combine_plans: first plan must be DAPT");
  if (tapt.phase.kind == PhaseKind::kDapt || tapt.phase.kind == PhaseKind::kDaptThenTapt)
    throw std::invalid_argument("combine_plans: second plan must be a TAPT phase");
  PhasePlan p;
  p.phase = {PhaseKind::kDaptThenTapt, 0};
  p.docs = dapt.docs + tapt.docs;
  p.epochs = tapt.epochs;
  p.batch = batch_for_docs(p.docs);
  p.steps = dapt.steps + tapt.steps;
  p.storage_bytes = dapt.storage_bytes + tapt.storage_bytes;
  p.fixed_steps = true;
  return p;
}

std::string format_steps(std::uint64_t steps) {
  const std::uint64_t tenths = (steps + 50) / 100;
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "K";
}

double PlanComparison::max_ratio() const {
  double r = 1.0;
  for (const auto& row : rows) r = std::max(r, row.ratio);
  return r;
}

std::string PlanComparison::to_text() const {
  std::string out = "phase\tsteps\tdocs\tbatch\tepochs\tstorage_bytes\tratio\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.1fx", row.ratio);
    out += row.plan.phase.name() + "\t" + format_steps(row.plan.steps) + "\t" +
           std::to_string(row.plan.docs) + "\t" + std::to_string(row.plan.batch) + "\t" +
           std::to_string(row.plan.epochs) + "\t" + std::to_string(row.plan.storage_bytes) +
           "\t" + buf + "\n";
  }
  return out;
}

nlohmann::ordered_json PlanComparison::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto j = dapt::to_json(row.plan);
    j["ratio"] = row.ratio;
    arr.push_back(std::move(j));
  }
  return nlohmann::ordered_json{{"plans", std::move(arr)}, {"max_ratio", max_ratio()}};
}

PlanComparison compare_plans(std::span<const PhasePlan> plans) {
  if (plans.size() < 2) throw std::invalid_argument("compare_plans: need at least two plans");
  PlanComparison c;
  for (const auto& p : plans) c.rows.push_back({p, 1.0});
  std::stable_sort(c.rows.begin(), c.rows.end(), [](const auto& a, const auto& b) {
    if (a.plan.steps != b.plan.steps) return a.plan.steps < b.plan.steps;
    return a.plan.phase.name() < b.plan.phase.name();
  });
  const auto cheapest = static_cast<double>(c.rows.front().plan.steps);
  for (auto& row : c.rows) row.ratio = static_cast<double>(row.plan.steps) / cheapest;
  return c;
}

nlohmann::ordered_json to_json(const PhasePlan& p) {
  return nlohmann::ordered_json{{"phase", p.phase.name()},
                        {"docs", p.docs},
                        {"epochs", p.epochs},
                        {"batch", p.batch},
                        {"steps", p.steps},
                        {"steps_display", format_steps(p.steps)},
                        {"storage_bytes", p.storage_bytes}};
}

PhasePlan plan_from_json(const nlohmann::ordered_json& j) {
  PhasePlan p;
  try {
    p.phase = Phase::parse(j.at("phase").get<std::string>());
    p.docs = j.at("docs").get<std::uint64_t>();
    p.epochs = j.at("epochs").get<std::uint64_t>();
    p.batch = j.at("batch").get<std::uint64_t>();
    p.steps = j.at("steps").get<std::uint64_t>();
    p.storage_bytes = j.at("storage_bytes").get<std::uint64_t>();
  } catch (const nlohmann::ordered_json::exception& e) {
    throw DataError(std::string("plan.json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("plan.json: ") + e.what());
  }
  p.fixed_steps = p.steps != (p.docs * p.epochs + p.batch - 1) / std::max<std::uint64_t>(p.batch, 1);
  return p;
}

}  // namespace dapt
