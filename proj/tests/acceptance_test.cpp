// Copyright 2026 The fedchi2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Release acceptance suite as a test binary: one test per criterion, each
// printing a single machine-greppable PASS/FAIL line with the measured
// numbers. Tolerances, seeds, and runtime budgets are pinned inside
// fedchi2/acceptance.hpp; this file only reports and asserts.

#include "fedchi2/acceptance.hpp"

#include <cstdio>

#include <gtest/gtest.h>

namespace fedchi2 {
namespace {

void report(const CriterionResult& r) {
  std::printf("[criterion %2d] %-18s %s  %7.2f s (budget %.0f s)\n    %s\n", r.id, r.name.c_str(),
              r.passed ? "PASS" : "FAIL", r.seconds, r.budget_seconds, r.detail.c_str());
  std::fflush(stdout);
  EXPECT_TRUE(r.property_ok) << r.detail;
  EXPECT_LT(r.seconds, r.budget_seconds) << "runtime budget exceeded: " << r.detail;
}

TEST(Acceptance, C01RecastIdentity) { report(acceptance_recast_identity()); }

TEST(Acceptance, C02MaskCancellation) { report(acceptance_mask_cancellation()); }

TEST(Acceptance, C03DecoderUnbiasedness) { report(acceptance_decoder_unbiasedness()); }

TEST(Acceptance, C04AccuracyProfile) { report(acceptance_accuracy_profile()); }

TEST(Acceptance, C05ClientCountIndependence) { report(acceptance_client_count_independence()); }

TEST(Acceptance, C06HidingRank) { report(acceptance_hiding_rank()); }

TEST(Acceptance, C07TailBoundSoundness) { report(acceptance_tail_bound_soundness()); }

TEST(Acceptance, C08Caesar) { report(acceptance_caesar(FEDCHI2_DATA_DIR)); }

TEST(Acceptance, C09FdrControl) { report(acceptance_fdr()); }

TEST(Acceptance, C10CostModel) { report(acceptance_cost_model()); }

}  // namespace
}  // namespace fedchi2
