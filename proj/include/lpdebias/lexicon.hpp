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

#ifndef LPDEBIAS_LEXICON_HPP_
#define LPDEBIAS_LEXICON_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/common.hpp"

namespace lpdebias {

struct GenderPair {
  std::string male_word;
  std::string female_word;
  std::string language;

  bool operator==(const GenderPair&) const = default;
};

struct OccupationPair {
  std::string masculine;
  std::string feminine;
};

struct NeutralWords {
  std::vector<std::string> professions;
  std::vector<std::string> adjectives;
  std::vector<std::string> transliterations;

  // Professions, adjectives and transliterations concatenated.
  std::vector<std::string> all() const;
  std::size_t size() const {
    return professions.size() + adjectives.size() + transliterations.size();
  }
};

struct LanguageLexicon {
  std::vector<GenderPair> pairs;
  NeutralWords neutral;
  std::vector<std::string> male_seeds;
  std::vector<std::string> female_seeds;
  std::vector<OccupationPair> occupation_pairs;
};

// Per-language gender-defining pairs, neutral words, seed words and
// occupation pairs. Languages are kept in lexicographic tag order.
class GenderLexicon {
 public:
  GenderLexicon() = default;
  // Validates every invariant; throws ValidationError otherwise.
  explicit GenderLexicon(std::map<std::string, LanguageLexicon> languages);

  const std::map<std::string, LanguageLexicon>& languages() const {
    return languages_;
  }
  bool has(const std::string& language) const {
    return languages_.count(language) > 0;
  }
  // Throws ValidationError for an unknown language.
  const LanguageLexicon& at(const std::string& language) const;
  std::vector<std::string> tags() const;

 private:
  std::map<std::string, LanguageLexicon> languages_;
};

GenderLexicon lexicon_from_json(const nlohmann::json& doc);
nlohmann::json lexicon_to_json(const GenderLexicon& lexicon);
GenderLexicon load_lexicon(const std::filesystem::path& path);

struct PairSplit {
  std::vector<GenderPair> train;
  std::vector<GenderPair> test;
};

inline constexpr std::size_t kDefaultTrainPairs = 10;

// Seeded shuffle of the language's defining pairs; the first `train_count`
// become the training set, the rest the test set.
PairSplit split_pairs(const GenderLexicon& lexicon, const std::string& language,
                      std::size_t train_count, std::uint64_t seed,
                      Diagnostics* diag = nullptr);

// Fingerprint of an ordered pair list.
std::string pairs_fingerprint(const std::vector<GenderPair>& pairs);

}  // namespace lpdebias

#endif  // LPDEBIAS_LEXICON_HPP_
