/* Copyright 2026 The lpdebias Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cmath>
#include <limits>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lpdebias/report.hpp"
#include "testing.hpp"

namespace lpdebias {
namespace {

TEST(Table, AlignsColumnsByCodePoints) {
  const std::string t = format_table({"lang", "v"}, {{"hi", "0.5"}, {"తెలుగు", "12.25"}});
  EXPECT_EQ(t,
            "lang   |     v\n"
            "--------------\n"
            "hi     |   0.5\n"
            "తెలుగు | 12.25\n");
}

TEST(Table, NumberFormatting) {
  EXPECT_EQ(format_number(0.0144, 3), "0.014");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN(), 3), "n/a");
}

TEST(Table, InBiasLayout) {
  InBiasColumn orig{"Orig", {{"en", InBiasResult{0.014, {}, {}}}}};
  InBiasColumn mono{"LP_mono", {{"en", InBiasResult{0.0, {}, {}}}}};
  const std::string t = inbias_table({"en", "te"}, {orig, mono});
  EXPECT_NE(t.find("lang |  Orig | LP_mono"), std::string::npos) << t;
  EXPECT_NE(t.find("en   | 0.014 |   0.000"), std::string::npos) << t;
  EXPECT_NE(t.find("te   |   n/a |     n/a"), std::string::npos) << t;
}

TEST(Table, CrossScoreMarksErrors) {
  CrossScoreMatrix m;
  m.languages = {"en", "hi"};
  m.values = Eigen::MatrixXd::Identity(2, 2);
  m.values(0, 1) = 0.143;
  m.values(1, 0) = std::numeric_limits<double>::quiet_NaN();
  m.errors = {{"", ""}, {"all guarded", ""}};
  const std::string t = cross_score_table(m);
  EXPECT_NE(t.find("b_en | 1.000 | 0.143"), std::string::npos) << t;
  EXPECT_NE(t.find("b_hi | error | 1.000"), std::string::npos) << t;
}

TEST(Table, ExBiasPercentages) {
  ExtrinsicResult before;
  before.male_accuracy = 0.8;
  before.female_accuracy = 0.7253;
  before.diff = 0.0747;
  ExtrinsicResult after = before;
  after.diff = 0.05;
  const std::string t = exbias_table({{"en", "orig", before, std::nullopt},
                                      {"en", "LP_mono", after, 0.647}});
  EXPECT_NE(t.find("en |    orig | 80.00 | 72.53 |   7.47 |"), std::string::npos) << t;
  EXPECT_NE(t.find("   | LP_mono | 80.00 | 72.53 |   5.00 | 0.647"), std::string::npos) << t;
}

TEST(Manifest, OnlyTimestampVaries) {
  RunManifest m;
  m.command_line = "lpdebias debias";
  m.seeds["seed"] = 3;
  m.inputs["a.vec"] = "0123";
  nlohmann::json a = m.to_json();
  EXPECT_EQ(a["tool_version"], kToolVersion);
  a.erase("timestamp");
  nlohmann::json b = m.to_json();
  b.erase("timestamp");
  EXPECT_EQ(a, b);
}

TEST(Files, FingerprintAndJsonIo) {
  testing::TempDir dir;
  auto p = dir.write("a.txt", "hello");
  auto q = dir.write("b.txt", "hello");
  auto r = dir.write("c.txt", "hellO");
  EXPECT_EQ(file_fingerprint(p), file_fingerprint(q));
  EXPECT_NE(file_fingerprint(p), file_fingerprint(r));
  EXPECT_THROW(file_fingerprint(dir.file("missing")), IoError);
  write_json({{"x", 1}}, dir.file("d.json"));
  EXPECT_EQ(read_json(dir.file("d.json"))["x"], 1);
  EXPECT_EQ(testing::slurp(dir.file("d.json")), "{\n  \"x\": 1\n}\n");
  dir.write("bad.json", "{");
  EXPECT_THROW(read_json(dir.file("bad.json")), ValidationError);
}

}  // namespace
}  // namespace lpdebias
