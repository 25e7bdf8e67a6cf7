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

#include "doctest.h"

#include "dapt/errors.hpp"
#include "dapt/plan.hpp"

namespace dapt {

namespace {

const Phase kTapt{PhaseKind::kTapt, 0};
const Phase kDapt{PhaseKind::kDapt, 0};

PhasePlan dapt_plan() { return plan_phase(kDapt, 500000, 1, 0, {kDaptFixedSteps}); }

}  // namespace

TEST_CASE("phase names round trip") {
  for (const char* s : {"DAPT", "TAPT", "KNN_TAPT(50)", "RAND_TAPT(150)", "CURATED_TAPT",
                        "DAPT_THEN_TAPT"})
    CHECK(Phase::parse(s).name() == s);
  CHECK_THROWS_AS(Phase::parse("KNN_TAPT(0)"), std::invalid_argument);
  CHECK_THROWS_AS(Phase::parse("KNN_TAPT(x)"), std::invalid_argument);
  CHECK_THROWS_AS(Phase::parse("tapt"), std::invalid_argument);
}

TEST_CASE("batch rule") {
  CHECK(batch_for_docs(1) == 256);
  CHECK(batch_for_docs(4999) == 256);
  CHECK(batch_for_docs(5000) == 2048);
}

TEST_CASE("TAPT-family step counts") {
  CHECK(plan_phase(kTapt, 500, 100, 0).steps == 196);
  CHECK(plan_phase(kTapt, 500, 100, 0).batch == 256);
  CHECK(plan_phase({PhaseKind::kKnnTapt, 50}, 24000, 100, 0).steps == 1172);
  CHECK(plan_phase({PhaseKind::kKnnTapt, 150}, 66000, 100, 0).steps == 3223);
  // 18,500,000 / 2048 = 9033.2, so the ceiling is 9034; both show as 9.0K.
  CHECK(plan_phase({PhaseKind::kKnnTapt, 500}, 185000, 100, 0).steps == 9034);
  CHECK(plan_phase({PhaseKind::kCuratedTapt, 0}, 180000, 100, 0).steps == 8790);
  CHECK(plan_phase(kTapt, 1, 1, 0).steps == 1);
}

TEST_CASE("display rounds to the nearest 0.1K, halves up") {
  CHECK(format_steps(196) == "0.2K");
  CHECK(format_steps(3223) == "3.2K");
  CHECK(format_steps(9034) == "9.0K");
  CHECK(format_steps(8790) == "8.8K");
  CHECK(format_steps(12500) == "12.5K");
  CHECK(format_steps(12696) == "12.7K");
  CHECK(format_steps(1149) == "1.1K");
  CHECK(format_steps(1150) == "1.2K");
  CHECK(format_steps(0) == "0.0K");
}

TEST_CASE("DAPT uses one epoch and the fixed override") {
  const auto p = dapt_plan();
  CHECK(p.steps == 12500);
  CHECK(p.epochs == 1);
  CHECK(p.fixed_steps);
  CHECK(plan_phase(kDapt, 4096, 7, 0).epochs == 1);
  CHECK(plan_phase(kDapt, 4096, 7, 0).steps == 16);
}

TEST_CASE("DAPT then TAPT sums the phases") {
  const auto both = combine_plans(dapt_plan(), plan_phase(kTapt, 500, 100, 1000));
  CHECK(both.steps == 12696);
  CHECK(both.phase.name() == "DAPT_THEN_TAPT");
  CHECK(both.storage_bytes == 1000);
  CHECK_THROWS_AS(combine_plans(plan_phase(kTapt, 5, 1, 0), dapt_plan()),
                  std::invalid_argument);
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(plan_phase(kTapt, 0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(plan_phase(kTapt, 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(plan_phase({PhaseKind::kDaptThenTapt, 0}, 1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(plan_phase({PhaseKind::kKnnTapt, 0}, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("compare_plans") {
  const std::vector<PhasePlan> plans = {dapt_plan(), plan_phase(kTapt, 500, 100, 0)};
  const auto c = compare_plans(plans);
  CHECK(c.rows.front().plan.phase.name() == "TAPT");
  CHECK(c.max_ratio() == doctest::Approx(12500.0 / 196));
  CHECK(c.to_text().find("DAPT\t12.5K\t") != std::string::npos);
  CHECK(c.to_json()["plans"][1]["steps"] == 12500);

  const std::vector<PhasePlan> same = {plans[1], plans[1]};
  CHECK(compare_plans(same).max_ratio() == 1.0);
  CHECK_THROWS_AS(compare_plans(std::span<const PhasePlan>(plans.data(), 1)),
                  std::invalid_argument);
}

TEST_CASE("ratios are scale-free") {
  std::vector<PhasePlan> a = {plan_phase(kTapt, 500, 100, 0), plan_phase(kTapt, 700, 100, 0),
                              plan_phase(kTapt, 90000, 3, 0)};
  const auto base = compare_plans(a);
  for (auto& p : a) p.steps *= 7;
  const auto scaled = compare_plans(a);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(scaled.rows[i].ratio == doctest::Approx(base.rows[i].ratio));
}

TEST_CASE("steps are monotone and the batch switch never adds steps") {
  std::uint64_t prev = 0;
  for (std::uint64_t docs = 1; docs < 20000; docs += 37) {
    const auto s = plan_phase(kTapt, docs, 10, 0).steps;
    if (batch_for_docs(docs) == batch_for_docs(docs > 37 ? docs - 37 : docs)) CHECK(s >= prev);
    // The same docs and epochs under the small batch never take fewer steps.
    CHECK(s <= (docs * 10 + 255) / 256);
    prev = s;
  }
  for (std::uint64_t e = 1; e < 50; ++e)
    CHECK(plan_phase(kTapt, 300, e, 0).steps <= plan_phase(kTapt, 300, e + 1, 0).steps);
}

TEST_CASE("plan JSON round trip") {
  const auto p = plan_phase({PhaseKind::kKnnTapt, 50}, 24000, 100, 123);
  const auto j = to_json(p);
  CHECK(j.dump() ==
        R"j({"phase":"KNN_TAPT(50)","docs":24000,"epochs":100,"batch":2048,"steps":1172,)j"
        R"j("steps_display":"1.2K","storage_bytes":123})j");
  const auto back = plan_from_json(j);
  CHECK(back.phase == p.phase);
  CHECK(back.steps == p.steps);
  CHECK_FALSE(back.fixed_steps);
  CHECK_THROWS_AS(plan_from_json(nlohmann::ordered_json{{"phase", "TAPT"}}), DataError);
}

}  // namespace dapt
