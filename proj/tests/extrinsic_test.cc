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
#include <iomanip>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lpdebias/debias.hpp"
#include "lpdebias/extrinsic.hpp"
#include "lpdebias/random.hpp"
#include "oracles.hpp"
#include "testing.hpp"

namespace lpdebias {
namespace {

using testing::space_of;

constexpr double kGoldenDiff = 0.24713282701119088;

std::shared_ptr<const EmbeddingSpace> shared(EmbeddingSpace s) {
  return std::make_shared<const EmbeddingSpace>(std::move(s));
}

EmbeddingSpace gaussian_space(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  Rng rng(seed);
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  std::vector<std::string> words;
  for (Eigen::Index i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  return normalize(EmbeddingSpace("en", std::move(words), std::move(m)));
}

SynthSpec axis_spec(Eigen::Index d, std::size_t occupations, double rho) {
  SynthSpec spec;
  spec.occupations = occupations;
  spec.rho = rho;
  spec.gender_direction = Vector::Unit(d, 0);
  return spec;
}

BioRecord rec(Gender g, std::string occ, std::vector<std::string> tokens) {
  return {g, std::move(occ), std::move(tokens)};
}

TEST(Corpus, ParsesRecord) {
  auto records = parse_corpus("M\tprofessor\tteaches at university\n", 1);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].gender, Gender::kMale);
  EXPECT_EQ(records[0].occupation, "professor");
  EXPECT_EQ(records[0].tokens.size(), 3u);
}

TEST(Corpus, BadGenderToken) {
  EXPECT_THROW(parse_corpus("X\tprofessor\tteaches\n", 1), ValidationError);
  EXPECT_THROW(parse_corpus("F\tprofessor\t\n", 1), ValidationError);
  EXPECT_THROW(parse_corpus("F\tprofessor\n", 1), ValidationError);
}

TEST(Corpus, RareOccupationDropped) {
  std::string text;
  for (int i = 0; i < 12; ++i) text += "F\tnurse\tcares for patients\n";
  for (int i = 0; i < 100; ++i) text += "M\tpilot\tflies planes\n";
  Diagnostics diag;
  auto records = parse_corpus(text, kDefaultMinOccupationCount, &diag);
  EXPECT_EQ(records.size(), 100u);
  EXPECT_EQ(records[0].occupation, "pilot");
  ASSERT_EQ(diag.warnings().size(), 1u);
  EXPECT_NE(diag.warnings()[0].find("nurse"), std::string::npos);
}

TEST(Corpus, FormatRoundTrip) {
  std::vector<BioRecord> records = {rec(Gender::kFemale, "chef", {"a", "b"}),
                                    rec(Gender::kMale, "chef", {"c"})};
  auto back = parse_corpus(format_corpus(records), 1);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].tokens, records[0].tokens);
  EXPECT_EQ(back[1].gender, Gender::kMale);
}

TEST(Synth, SameSeedSameCorpus) {
  EmbeddingSpace s = gaussian_space(1, 400, 16);
  const SynthSpec spec = axis_spec(16, 4, 1.0);
  EXPECT_EQ(format_corpus(synthesize_corpus(s, spec, 5)),
            format_corpus(synthesize_corpus(s, spec, 5)));
  EXPECT_NE(format_corpus(synthesize_corpus(s, spec, 5)),
            format_corpus(synthesize_corpus(s, spec, 6)));
  EXPECT_EQ(synthesize_corpus(s, spec, 5).size(), spec.records);
}

TEST(Synth, RejectsTooSmallVocabulary) {
  EmbeddingSpace s = gaussian_space(1, 50, 16);
  EXPECT_THROW(synthesize_corpus(s, axis_spec(16, 4, 1.0), 1), ValidationError);
}

TEST(Synth, NoPlantedSignalNoGap) {
  EmbeddingSpace s = gaussian_space(2, 400, 16);
  SynthSpec spec = axis_spec(16, 4, 0.0);
  spec.records = 4000;
  auto records = synthesize_corpus(s, spec, 3);
  ExtrinsicResult r = run_extrinsic(shared(s), records, {.seed = 3});
  EXPECT_LT(r.diff, 0.05);
}

TEST(Synth, PlantedSignalGivesGolden) {
  EmbeddingSpace s = gaussian_space(3, 400, 16);
  auto records = synthesize_corpus(s, axis_spec(16, 2, 1.0), 11);
  ExtrinsicResult r = run_extrinsic(shared(s), records, {.seed = 11});
  EXPECT_GT(r.diff, 0.0);
  // Frozen from the first verified run of this configuration.
  EXPECT_NEAR(r.diff, kGoldenDiff, 1e-12) << std::setprecision(17) << r.diff;
}

TEST(Classifier, SeparableReachesFullAccuracy) {
  EmbeddingSpace s = space_of("en", {"a", "b", "c", "d"},
                              {{1, 0.1}, {0.9, -0.1}, {-1, 0.2}, {-0.8, 0}});
  std::vector<BioRecord> train;
  for (int i = 0; i < 10; ++i) {
    train.push_back(rec(Gender::kMale, "left", {i % 2 ? "a" : "b"}));
    train.push_back(rec(Gender::kFemale, "right", {i % 2 ? "c" : "d"}));
  }
  Classifier clf = train_classifier(shared(s), train, {.epochs = 200, .seed = 1});
  FeatureBatch batch = clf.featurize(train);
  for (Eigen::Index i = 0; i < batch.x.rows(); ++i) {
    EXPECT_EQ(clf.predict(batch.x.row(i).transpose()), batch.labels[static_cast<std::size_t>(i)]);
  }
}

TEST(Classifier, SingleClassRejected) {
  EmbeddingSpace s = space_of("en", {"a"}, {{1, 0}});
  std::vector<BioRecord> train = {rec(Gender::kMale, "only", {"a"}),
                                  rec(Gender::kFemale, "only", {"a"})};
  EXPECT_THROW(train_classifier(shared(s), train, {}), ValidationError);
}

TEST(Classifier, LowCoverageRecordsDropped) {
  EmbeddingSpace s = space_of("en", {"a", "b"}, {{1, 0}, {0, 1}});
  std::vector<BioRecord> train = {rec(Gender::kMale, "x", {"a"}),
                                  rec(Gender::kMale, "y", {"b"}),
                                  rec(Gender::kMale, "y", {"b", "q", "r"})};
  Diagnostics diag;
  Classifier clf = train_classifier(shared(s), train, {.epochs = 5}, &diag);
  EXPECT_EQ(clf.featurize(train).x.rows(), 2);
  EXPECT_FALSE(diag.warnings().empty());
}

TEST(Classifier, GradientMatchesFiniteDifferences) {
  // Three records, three classes, two features.
  Matrix x(3, 2);
  x << 0.5, -1.2, 1.5, 0.3, -0.7, 0.8;
  const std::vector<int> labels = {0, 2, 1};
  Matrix params(3, 3);
  params << 0.1, -0.2, 0.05, 0.3, 0.1, -0.1, -0.25, 0.2, 0.15;
  Matrix grad;
  const double loss = softmax_loss(params, x, labels, &grad);
  const oracle::Mat xs = testing::to_rows(x);
  oracle::Vec flat(params.data(), params.data() + params.size());  // row-major
  auto f = [&](const oracle::Vec& p) { return oracle::softmax_cross_entropy(p, 3, xs, labels); };
  EXPECT_NEAR(loss, f(flat), 1e-14);
  const oracle::Vec numeric = oracle::finite_difference(f, flat, 1e-5);
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double analytic = grad.data()[i];
    EXPECT_LE(std::abs(analytic - numeric[i]), 1e-6 * std::max(1.0, std::abs(numeric[i]))) << i;
  }
}

TEST(Classifier, LossNonIncreasingAndEmbeddingFrozen) {
  EmbeddingSpace s = gaussian_space(4, 400, 16);
  auto records = synthesize_corpus(s, axis_spec(16, 4, 1.0), 2);
  auto space = shared(s);
  const std::string before = space->fingerprint();
  Classifier clf = train_classifier(space, records, {.epochs = 100, .seed = 2});
  for (std::size_t i = 1; i < clf.loss_history().size(); ++i) {
    ASSERT_LE(clf.loss_history()[i], clf.loss_history()[i - 1] + 1e-15) << i;
  }
  EXPECT_EQ(space->fingerprint(), before);
}

TEST(Classifier, Deterministic) {
  EmbeddingSpace s = gaussian_space(5, 400, 16);
  auto records = synthesize_corpus(s, axis_spec(16, 4, 1.0), 9);
  ExtrinsicResult a = run_extrinsic(shared(s), records, {.seed = 4});
  ExtrinsicResult b = run_extrinsic(shared(s), records, {.seed = 4});
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Split, StratifiedEightyTwenty) {
  std::vector<BioRecord> records;
  for (int i = 0; i < 50; ++i) records.push_back(rec(Gender::kMale, "a", {"t"}));
  for (int i = 0; i < 30; ++i) records.push_back(rec(Gender::kFemale, "a", {"t"}));
  for (int i = 0; i < 20; ++i) records.push_back(rec(Gender::kFemale, "b", {"t"}));
  StratifiedSplit s = stratified_split(records, 0.2, 1);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(s.train.size(), 80u);
  std::size_t fa = 0;
  for (const auto& r : s.test) fa += r.occupation == "a" && r.gender == Gender::kFemale;
  EXPECT_EQ(fa, 6u);
}

TEST(Gap, ArithmeticAndAlwaysCorrect) {
  ExtrinsicResult r = summarize_gaps({{"x", 0.8, 0.6, 0.0, 10, 10}}, 0);
  EXPECT_NEAR(r.diff, 0.2, 1e-15);
  EXPECT_NEAR(r.male_accuracy, 0.8, 1e-15);

  EmbeddingSpace s = space_of("en", {"a", "b"}, {{1, 0}, {0, 1}});
  std::vector<BioRecord> data;
  for (int i = 0; i < 6; ++i) {
    data.push_back(rec(i % 2 ? Gender::kMale : Gender::kFemale, "x", {"a"}));
    data.push_back(rec(i % 2 ? Gender::kMale : Gender::kFemale, "y", {"b"}));
  }
  Classifier clf = train_classifier(shared(s), data, {.epochs = 200});
  ExtrinsicResult perfect = evaluate_gap(clf, data);
  EXPECT_EQ(perfect.diff, 0.0);
  EXPECT_EQ(perfect.male_accuracy, 1.0);
}

TEST(Gap, OccupationMissingAGenderExcluded) {
  EmbeddingSpace s = space_of("en", {"a", "b"}, {{1, 0}, {0, 1}});
  std::vector<BioRecord> data = {rec(Gender::kMale, "x", {"a"}), rec(Gender::kFemale, "x", {"a"}),
                                 rec(Gender::kMale, "y", {"b"})};
  Classifier clf = train_classifier(shared(s), data, {.epochs = 50});
  Diagnostics diag;
  ExtrinsicResult r = evaluate_gap(clf, data, &diag);
  EXPECT_EQ(r.per_occupation.size(), 1u);
  EXPECT_FALSE(diag.warnings().empty());
}

ExtrinsicResult gaps(const std::vector<double>& values) {
  std::vector<OccupationAccuracy> occ;
  for (std::size_t i = 0; i < values.size(); ++i) {
    occ.push_back({"o" + std::to_string(i), 0.5 + values[i], 0.5, 0.0, 1, 1});
  }
  return summarize_gaps(occ, 0);
}

TEST(Compare, FractionReduced) {
  EXPECT_EQ(compare_runs(gaps({0.2, 0.3}), gaps({0.1, 0.0})).f_i, 1.0);
  EXPECT_EQ(compare_runs(gaps({0.2, 0.3}), gaps({0.2, 0.3})).f_i, 0.0);
  std::vector<double> before(17, 0.3), after(17, 0.3);
  for (int i = 0; i < 11; ++i) after[static_cast<std::size_t>(i)] = 0.1;
  const double f = compare_runs(gaps(before), gaps(after)).f_i;
  EXPECT_DOUBLE_EQ(f, 11.0 / 17.0);
  EXPECT_NEAR(f, 0.647, 5e-4);
}

TEST(Compare, MismatchedOccupationsRejected) {
  EXPECT_THROW(compare_runs(gaps({0.2, 0.3}), gaps({0.1})), ValidationError);
}

TEST(Extrinsic, JsonRoundTrip) {
  ExtrinsicResult r = gaps({0.1, 0.25, 0.0});
  r.seed = 99;
  ExtrinsicResult back = extrinsic_from_json(to_json(r));
  EXPECT_EQ(to_json(back).dump(), to_json(r).dump());
}

}  // namespace
}  // namespace lpdebias
