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

// Intrinsic bias metrics: the seed-distance gap InBias and the
// cross-language debiasing score S(l1, l2).

#ifndef LPDEBIAS_INTRINSIC_HPP_
#define LPDEBIAS_INTRINSIC_HPP_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/common.hpp"
#include "lpdebias/embedding.hpp"
#include "lpdebias/lexicon.hpp"

namespace lpdebias {

// Mean cosine distance (1/|Y|) sum_y (1 - cos(x, y)). Throws on zero vectors
// or an empty Y.
double dis(const Vector& x, std::span<const Vector> ys);

struct SeedSet {
  std::vector<std::string> male;
  std::vector<std::string> female;
};
using SeedSets = std::map<std::string, SeedSet>;

// Static seed words of the lexicon.
SeedSets seeds_from_lexicon(const GenderLexicon& lexicon,
                            const std::vector<std::string>& languages);
// Male and female sides of the held-out gender pairs.
SeedSets seeds_from_test_pairs(const std::map<std::string, PairSplit>& splits,
                               const std::vector<std::string>& languages);

struct OccupationGap {
  std::string language;
  std::string masculine;
  std::string feminine;
  double gap = 0.0;
};

struct InBiasResult {
  double value = 0.0;
  std::vector<OccupationGap> per_occupation;
  // "<lang>:<masculine>/<feminine>" for pairs with an OOV word.
  std::vector<std::string> skipped;
};

// (1/N) sum_i |dis(O_M_i, S_M) - dis(O_F_i, S_F)| over the resolvable
// occupation pairs of `languages`, each scored against its own language's
// seeds.
InBiasResult inbias(const EmbeddingSpace& space, const GenderLexicon& lexicon,
                    const std::vector<std::string>& languages,
                    const SeedSets& seeds, Diagnostics* diag = nullptr);

inline constexpr double kDefaultCrossEpsilon = 1e-8;

struct CrossScore {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t guarded = 0;
  std::size_t missing = 0;
};

// Leading uncentered PCA direction of a language's gender pairs.
Vector gender_direction(const EmbeddingSpace& space,
                        const std::vector<GenderPair>& pairs,
                        Diagnostics* diag = nullptr);

// Debias the neutral words of l2 against l1's leading gender direction and
// average the relative change of their projection on l2's direction. Words
// whose original projection is below epsilon are skipped.
CrossScore cross_score(const EmbeddingSpace& space, const GenderLexicon& lexicon,
                       const std::string& l1, const std::string& l2,
                       double epsilon = kDefaultCrossEpsilon,
                       Diagnostics* diag = nullptr);

// Cross score from explicit directions; the building block of cross_score.
CrossScore cross_score(const Vector& debias_direction,
                       const Vector& eval_direction,
                       std::span<const Vector> neutral, double epsilon);

struct CrossScoreMatrix {
  std::vector<std::string> languages;
  // values(i, j) = S(languages[i], languages[j]); NaN where the cell failed.
  Eigen::MatrixXd values;
  // Non-empty where the cell could not be computed.
  std::vector<std::vector<std::string>> errors;
  double epsilon = kDefaultCrossEpsilon;

  bool ok() const;
};

CrossScoreMatrix cross_score_matrix(const EmbeddingSpace& space,
                                    const GenderLexicon& lexicon,
                                    const std::vector<std::string>& languages,
                                    double epsilon = kDefaultCrossEpsilon,
                                    Diagnostics* diag = nullptr);

nlohmann::json to_json(const InBiasResult& result);
nlohmann::json to_json(const CrossScoreMatrix& matrix);

}  // namespace lpdebias

#endif  // LPDEBIAS_INTRINSIC_HPP_
