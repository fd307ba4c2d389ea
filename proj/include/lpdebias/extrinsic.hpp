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

// Extrinsic bias: occupation classification from short bios with frozen
// word embeddings, and the per-occupation accuracy gap between male and
// female authors.
//
// The classifier is a multinomial logistic regression over the mean of the
// bio's token vectors, trained by full-batch gradient descent.

#ifndef LPDEBIAS_EXTRINSIC_HPP_
#define LPDEBIAS_EXTRINSIC_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/common.hpp"
#include "lpdebias/embedding.hpp"

namespace lpdebias {

enum class Gender { kMale, kFemale };

struct BioRecord {
  Gender gender = Gender::kMale;
  std::string occupation;
  std::vector<std::string> tokens;
};

inline constexpr std::size_t kDefaultMinOccupationCount = 100;

// TSV lines "M|F<TAB>occupation<TAB>space separated tokens". Occupations with
// fewer than `min_count` records are dropped with a warning.
std::vector<BioRecord> parse_corpus(std::string_view text,
                                    std::size_t min_count = kDefaultMinOccupationCount,
                                    Diagnostics* diag = nullptr);
std::vector<BioRecord> load_corpus(const std::filesystem::path& path,
                                   std::size_t min_count = kDefaultMinOccupationCount,
                                   Diagnostics* diag = nullptr);
std::string format_corpus(const std::vector<BioRecord>& records);
void save_corpus(const std::vector<BioRecord>& records,
                 const std::filesystem::path& path);

// Parameters of a synthetic corpus with a planted gender/occupation
// correlation.
struct SynthSpec {
  std::size_t occupations = 4;
  std::size_t records = 2000;
  // Fraction of each occupation's vocabulary drawn from the side of the
  // gender axis matching the occupation's stereotype. 0 gives occupation
  // vocabularies with no gender lean.
  double rho = 1.0;
  std::size_t words_per_occupation = 30;
  std::size_t content_tokens = 8;
  // Author-gender words per bio (words most aligned with the gender axis).
  std::size_t marker_tokens = 2;
  std::size_t marker_words = 10;
  // Probability that a content token comes from another occupation.
  double confusion = 0.25;
  // Gender axis; male words have positive projection.
  Vector gender_direction;

  nlohmann::json to_json() const;
};

// Deterministic given `seed`. Throws ValidationError when the vocabulary
// cannot supply the requested markers and occupation vocabularies.
std::vector<BioRecord> synthesize_corpus(const EmbeddingSpace& space,
                                         const SynthSpec& spec,
                                         std::uint64_t seed);

struct StratifiedSplit {
  std::vector<BioRecord> train;
  std::vector<BioRecord> test;
};

// Seeded split per (occupation, gender) stratum.
StratifiedSplit stratified_split(const std::vector<BioRecord>& records,
                                 double test_fraction, std::uint64_t seed);

struct ClassifierHyper {
  // <= 0 selects 1/L, L the curvature bound of the loss.
  double learning_rate = 0.0;
  std::size_t epochs = 300;
  std::uint64_t seed = 0;
  // Language used to resolve tokens in a merged space; empty uses the
  // space's own tag.
  std::string language;
};

// Standardized mean-of-embedding features for a batch of records.
struct FeatureBatch {
  Matrix x;
  std::vector<int> labels;
  std::vector<std::size_t> records;  // index of the source record
};

// Mean softmax cross-entropy of parameters (classes x (d + 1), last column
// the bias) on `x`, and its gradient when `grad` is non-null.
double softmax_loss(const Matrix& params, const Matrix& x,
                    const std::vector<int>& labels, Matrix* grad);

class Classifier {
 public:
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix& params() const { return params_; }
  const std::vector<double>& loss_history() const { return loss_history_; }
  const EmbeddingSpace& space() const { return *space_; }
  double learning_rate() const { return learning_rate_; }

  // Features for records whose tokens are at least half in vocabulary.
  // Dropped records are reported through `diag`.
  FeatureBatch featurize(const std::vector<BioRecord>& records,
                         Diagnostics* diag = nullptr) const;
  // Index into labels(); ties go to the earlier label.
  int predict(const Eigen::Ref<const Vector>& feature) const;

 private:
  friend Classifier train_classifier(std::shared_ptr<const EmbeddingSpace>,
                                     const std::vector<BioRecord>&,
                                     const ClassifierHyper&, Diagnostics*);

  std::shared_ptr<const EmbeddingSpace> space_;
  std::string language_;
  std::vector<std::string> labels_;
  Vector mean_;
  Vector scale_;
  Matrix params_;
  std::vector<double> loss_history_;
  double learning_rate_ = 0.0;
};

// The embedding is shared read-only; it is never modified.
Classifier train_classifier(std::shared_ptr<const EmbeddingSpace> space,
                            const std::vector<BioRecord>& train,
                            const ClassifierHyper& hyper,
                            Diagnostics* diag = nullptr);

struct OccupationAccuracy {
  std::string occupation;
  double male_accuracy = 0.0;
  double female_accuracy = 0.0;
  double gap = 0.0;
  std::size_t male_count = 0;
  std::size_t female_count = 0;
};

struct ExtrinsicResult {
  std::vector<OccupationAccuracy> per_occupation;
  double diff = 0.0;
  double male_accuracy = 0.0;
  double female_accuracy = 0.0;
  std::uint64_t seed = 0;
};

// Occupations without test records of both genders are excluded with a
// warning.
ExtrinsicResult evaluate_gap(const Classifier& classifier,
                             const std::vector<BioRecord>& test,
                             Diagnostics* diag = nullptr);

// |Diff| from per-occupation accuracies: the mean absolute gap.
ExtrinsicResult summarize_gaps(std::vector<OccupationAccuracy> per_occupation,
                               std::uint64_t seed);

struct GapDelta {
  std::string occupation;
  double gap_before = 0.0;
  double gap_after = 0.0;
  bool reduced = false;
};

struct GapComparison {
  double f_i = 0.0;
  std::vector<GapDelta> per_occupation;
};

// f_i: fraction of occupations whose gap strictly shrinks.
GapComparison compare_runs(const ExtrinsicResult& before,
                           const ExtrinsicResult& after);

// Split, train on the training part and score the test part.
ExtrinsicResult run_extrinsic(std::shared_ptr<const EmbeddingSpace> space,
                              const std::vector<BioRecord>& records,
                              const ClassifierHyper& hyper,
                              Diagnostics* diag = nullptr);

nlohmann::json to_json(const ExtrinsicResult& result);
ExtrinsicResult extrinsic_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GapComparison& comparison);

}  // namespace lpdebias

#endif  // LPDEBIAS_EXTRINSIC_HPP_
