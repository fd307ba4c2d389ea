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

#include "lpdebias/intrinsic.hpp"

#include <cmath>
#include <limits>

#include "lpdebias/subspace.hpp"

namespace lpdebias {
namespace {

std::vector<Vector> resolve_words(const EmbeddingSpace& space,
                                  const std::string& lang,
                                  const std::vector<std::string>& words,
                                  std::size_t* missing) {
  std::vector<Vector> out;
  for (const auto& w : words) {
    if (auto idx = space.resolve(lang, w)) {
      out.emplace_back(space.row(*idx));
    } else if (missing) {
      ++*missing;
    }
  }
  return out;
}

}  // namespace

double dis(const Vector& x, std::span<const Vector> ys) {
  if (ys.empty()) throw ValidationError("dis: empty comparison set");
  const double xn = x.norm();
  if (xn == 0.0) throw ValidationError("dis: zero vector");
  double total = 0.0;
  for (const auto& y : ys) {
    if (y.size() != x.size()) throw ValidationError("dis: dimension mismatch");
    const double yn = y.norm();
    if (yn == 0.0) throw ValidationError("dis: zero vector in comparison set");
    total += 1.0 - x.dot(y) / (xn * yn);
  }
  return total / static_cast<double>(ys.size());
}

SeedSets seeds_from_lexicon(const GenderLexicon& lexicon,
                            const std::vector<std::string>& languages) {
  SeedSets out;
  for (const auto& lang : languages) {
    const auto& lex = lexicon.at(lang);
    out[lang] = {lex.male_seeds, lex.female_seeds};
  }
  return out;
}

SeedSets seeds_from_test_pairs(const std::map<std::string, PairSplit>& splits,
                               const std::vector<std::string>& languages) {
  SeedSets out;
  for (const auto& lang : languages) {
    auto it = splits.find(lang);
    if (it == splits.end()) {
      throw ValidationError("no gender-pair split for language '" + lang + "'");
    }
    SeedSet seeds;
    for (const auto& p : it->second.test) {
      seeds.male.push_back(p.male_word);
      seeds.female.push_back(p.female_word);
    }
    out[lang] = std::move(seeds);
  }
  return out;
}

InBiasResult inbias(const EmbeddingSpace& space, const GenderLexicon& lexicon,
                    const std::vector<std::string>& languages,
                    const SeedSets& seeds, Diagnostics* diag) {
  InBiasResult result;
  double total = 0.0;
  for (const auto& lang : languages) {
    auto sit = seeds.find(lang);
    if (sit == seeds.end()) {
      throw ValidationError("no seed words for language '" + lang + "'");
    }
    std::size_t missing = 0;
    auto male = resolve_words(space, lang, sit->second.male, &missing);
    auto female = resolve_words(space, lang, sit->second.female, &missing);
    if (missing > 0) {
      warn(diag, std::to_string(missing) + " seed words of '" + lang +
                     "' are out of vocabulary");
    }
    if (male.empty() || female.empty()) {
      throw ValidationError("empty " + std::string(male.empty() ? "male" : "female") +
                            " seed set for '" + lang + "' after vocabulary lookup");
    }
    for (const auto& occ : lexicon.at(lang).occupation_pairs) {
      auto m = space.resolve(lang, occ.masculine);
      auto f = space.resolve(lang, occ.feminine);
      if (!m || !f) {
        result.skipped.push_back(lang + ":" + occ.masculine + "/" + occ.feminine);
        continue;
      }
      const double gap =
          std::abs(dis(Vector(space.row(*m)), male) - dis(Vector(space.row(*f)), female));
      result.per_occupation.push_back({lang, occ.masculine, occ.feminine, gap});
      total += gap;
    }
  }
  if (!result.skipped.empty()) {
    warn(diag, std::to_string(result.skipped.size()) +
                   " occupation pairs skipped (out of vocabulary)");
  }
  if (result.per_occupation.empty()) {
    throw ValidationError("no occupation pair resolves in the embedding");
  }
  result.value = total / static_cast<double>(result.per_occupation.size());
  return result;
}

Vector gender_direction(const EmbeddingSpace& space,
                        const std::vector<GenderPair>& pairs,
                        Diagnostics* diag) {
  DifferenceMatrix q = difference_matrix(space, pairs, diag);
  BiasSubspace top = pca_basis(q, 1, false);
  return top.vector(0);
}

CrossScore cross_score(const Vector& debias_direction,
                       const Vector& eval_direction,
                       std::span<const Vector> neutral, double epsilon) {
  CrossScore score;
  const double overlap = debias_direction.dot(eval_direction);
  double total = 0.0;
  for (const auto& w : neutral) {
    const double before = w.dot(eval_direction);
    if (std::abs(before) < epsilon) {
      ++score.guarded;
      continue;
    }
    // <w', b2> for w' = w - <w, b1> b1.
    const double after = before - w.dot(debias_direction) * overlap;
    total += std::abs(std::abs(after) - std::abs(before)) / std::abs(before);
    ++score.used;
  }
  if (score.used == 0) {
    throw ValidationError("every neutral word falls under the epsilon guard (" +
                          std::to_string(score.guarded) + " guarded)");
  }
  score.value = total / static_cast<double>(score.used);
  return score;
}

CrossScore cross_score(const EmbeddingSpace& space, const GenderLexicon& lexicon,
                       const std::string& l1, const std::string& l2,
                       double epsilon, Diagnostics* diag) {
  const Vector b1 = gender_direction(space, lexicon.at(l1).pairs, diag);
  const Vector b2 = l1 == l2 ? b1 : gender_direction(space, lexicon.at(l2).pairs, diag);
  std::size_t missing = 0;
  auto neutral = resolve_words(space, l2, lexicon.at(l2).neutral.all(), &missing);
  if (neutral.empty()) {
    throw ValidationError("no neutral word of '" + l2 + "' is in the embedding");
  }
  CrossScore score = cross_score(b1, b2, neutral, epsilon);
  score.missing = missing;
  if (score.guarded > 0) {
    warn(diag, "S(" + l1 + "," + l2 + "): " + std::to_string(score.guarded) +
                   " neutral words under the epsilon guard");
  }
  return score;
}

bool CrossScoreMatrix::ok() const {
  for (const auto& row : errors) {
    for (const auto& e : row) {
      if (!e.empty()) return false;
    }
  }
  return true;
}

CrossScoreMatrix cross_score_matrix(const EmbeddingSpace& space,
                                    const GenderLexicon& lexicon,
                                    const std::vector<std::string>& languages,
                                    double epsilon, Diagnostics* diag) {
  CrossScoreMatrix out;
  out.languages = languages;
  out.epsilon = epsilon;
  const auto L = static_cast<Eigen::Index>(languages.size());
  out.values = Eigen::MatrixXd::Constant(L, L, std::numeric_limits<double>::quiet_NaN());
  out.errors.assign(languages.size(), std::vector<std::string>(languages.size()));
  for (std::size_t i = 0; i < languages.size(); ++i) {
    for (std::size_t j = 0; j < languages.size(); ++j) {
      try {
        out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            cross_score(space, lexicon, languages[i], languages[j], epsilon, diag)
                .value;
      } catch (const ValidationError& e) {
        out.errors[i][j] = e.what();
      }
    }
  }
  return out;
}

nlohmann::json to_json(const InBiasResult& result) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& g : result.per_occupation) {
    per.push_back({{"language", g.language},
                   {"masculine", g.masculine},
                   {"feminine", g.feminine},
                   {"gap", g.gap}});
  }
  return {{"inbias", result.value},
          {"occupations", result.per_occupation.size()},
          {"per_occupation", per},
          {"skipped", result.skipped}};
}

nlohmann::json to_json(const CrossScoreMatrix& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
      const double v = matrix.values(i, j);
      row.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
    }
    rows.push_back(row);
  }
  return {{"languages", matrix.languages},
          {"epsilon", matrix.epsilon},
          {"values", rows},
          {"errors", matrix.errors}};
}

}  // namespace lpdebias
