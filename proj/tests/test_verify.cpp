// Copyright 2026 The qinstr Authors
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

#include "test_util.hpp"

namespace qinstr {
namespace {

bool same(const VerificationRecord& a, const VerificationRecord& b) {
  return a.theorem_id == b.theorem_id && a.trial_seed == b.trial_seed && a.closed_form == b.closed_form &&
         a.oracle_value == b.oracle_value && a.abs_error == b.abs_error && a.passed == b.passed && a.note == b.note;
}

TEST(Verify, TheoremNamesRoundTrip) {
  for (const auto& t : kTheorems) EXPECT_EQ(parse_theorem_id(t.name), t.id);
  EXPECT_QINSTR_ERROR(parse_theorem_id("no-such-check"), ErrorKind::kInvalidArgument);
}

TEST(Verify, ZeroTrialsRejected) {
  try {
    run_trials(TheoremId::kFvg, 0, 1);
    ADD_FAILURE() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("trials must be"), std::string::npos);
  }
}

TEST(Verify, CheapSuitesPass) {
  for (TheoremId id : {TheoremId::kUniformFidelity, TheoremId::kNonUniformFidelity, TheoremId::kFvg,
                       TheoremId::kOrthogonality, TheoremId::kKrausRank}) {
    const auto records = run_trials(id, 20, 100);
    ASSERT_EQ(records.size(), 20u);
    for (std::size_t i = 0; i < records.size(); ++i) {
      EXPECT_TRUE(records[i].passed) << records[i].theorem_id << " seed " << records[i].trial_seed << ": "
                                     << records[i].note;
      EXPECT_EQ(records[i].trial_seed, 100 + i);
      EXPECT_EQ(records[i].theorem_id, theorem_info(id).name);
    }
  }
}

TEST(Verify, OracleSuitesPassOnSmallDimensions) {
  VerifyOptions opt;
  opt.dim_d = 2;
  opt.dim_e = 1;
  for (TheoremId id : {TheoremId::kStochasticDiamondIdentity, TheoremId::kInstrumentBounds,
                       TheoremId::kUniformDiamond}) {
    for (const auto& r : run_trials(id, 3, 5, opt)) EXPECT_TRUE(r.passed) << r.theorem_id << ": " << r.note;
  }
}

TEST(Verify, CounterexampleRecordsSeparation) {
  const auto records = run_trials(TheoremId::kOutcomeDependentCounterexample, 2, 0);
  ASSERT_EQ(records.size(), 2u);
  // Trial 0 is the shipped model: closed form 0.4.
  EXPECT_NEAR(records[0].closed_form, 0.4, 1e-12);
  EXPECT_NEAR(records[0].oracle_value, 0.4, 1e-5);
  for (const auto& r : records) EXPECT_TRUE(r.passed) << r.note;
}

TEST(Verify, DeterministicAndThreadIndependent) {
  const auto a = run_trials(TheoremId::kNonUniformFidelity, 12, 42, {}, 1);
  const auto b = run_trials(TheoremId::kNonUniformFidelity, 12, 42, {}, 1);
  const auto c = run_trials(TheoremId::kNonUniformFidelity, 12, 42, {}, 4);
  ASSERT_EQ(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same(a[i], b[i]));
    EXPECT_TRUE(same(a[i], c[i]));
  }
}

TEST(Verify, TrialDependsOnlyOnItsSeed) {
  const auto batch = run_trials(TheoremId::kUniformFidelity, 5, 10);
  const VerificationRecord single = run_trial(TheoremId::kUniformFidelity, 13, 3, {});
  EXPECT_TRUE(same(batch[3], single));
}

TEST(Verify, ToleranceOverrideFailsTightChecks) {
  VerifyOptions opt;
  opt.tol = -1.0;
  for (const auto& r : run_trials(TheoremId::kFvg, 3, 1, opt)) EXPECT_FALSE(r.passed);
}

TEST(Verify, Summary) {
  std::vector<VerificationRecord> rs(3);
  rs[0].passed = true;
  rs[0].abs_error = 1e-9;
  rs[1].passed = false;
  rs[1].abs_error = 3e-3;
  rs[2].passed = true;
  const VerificationSummary s = summarize(rs);
  EXPECT_EQ(s.trials, 3u);
  EXPECT_EQ(s.passed, 2u);
  EXPECT_EQ(s.max_abs_error, 3e-3);
  EXPECT_FALSE(s.all_passed());
}

}  // namespace
}  // namespace qinstr
