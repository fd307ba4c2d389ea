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

// Linear-projection debiasing: every in-scope word loses its component
// inside the gender subspace, w' = w - sum_j <w, b_j> b_j.

#ifndef LPDEBIAS_DEBIAS_HPP_
#define LPDEBIAS_DEBIAS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/common.hpp"
#include "lpdebias/embedding.hpp"
#include "lpdebias/lexicon.hpp"
#include "lpdebias/subspace.hpp"

namespace lpdebias {

enum class Variant { kMono, kMulti, kEqr };
enum class Scope { kAllWords, kNeutralOnly };

std::string to_string(Variant variant);
std::string to_string(Scope scope);
Variant parse_variant(const std::string& name);
Scope parse_scope(const std::string& name);

inline constexpr std::size_t kDefaultK = 4;
inline constexpr double kResidualTolerance = 1e-6;

struct DebiasConfig {
  Variant variant = Variant::kMono;
  std::size_t k = kDefaultK;
  SubspaceMethod method = SubspaceMethod::kPca;
  Scope scope = Scope::kAllWords;
  bool renormalize_after = false;
  bool center = false;
  std::uint64_t seed = 0;
  // Language whose pairs build the subspace for kMono. Empty means the
  // space's own tag, which must then name a single language.
  std::string mono_language;
  PpaOptions ppa;

  // Throws ValidationError if k < 1 or, for kEqr, k is not a multiple of
  // language_count.
  void validate(std::size_t language_count) const;
  nlohmann::json to_json() const;
};

// w_B = sum_j <w, b_j> b_j.
Vector project_component(const Vector& w, const BiasSubspace& subspace);

struct DebiasOptions {
  Scope scope = Scope::kAllWords;
  bool renormalize_after = false;
};

// Removes the subspace component from every in-scope row. `in_scope` lists
// vocabulary entries and is only consulted for Scope::kNeutralOnly. Rows
// whose residual vanishes are set to exactly zero and reported.
EmbeddingSpace debias_space(const EmbeddingSpace& space,
                            const BiasSubspace& subspace,
                            const DebiasOptions& options,
                            const std::vector<std::string>& in_scope = {},
                            Diagnostics* diag = nullptr);

// Vocabulary entries of the neutral words of `languages` present in space.
std::vector<std::string> neutral_vocabulary(
    const EmbeddingSpace& space, const GenderLexicon& lexicon,
    const std::vector<std::string>& languages);

// Lexicon languages covered by the space, in space tag order.
std::vector<std::string> present_languages(const EmbeddingSpace& space,
                                           const GenderLexicon& lexicon);

struct VariantResult {
  EmbeddingSpace space;
  BiasSubspace subspace;
  nlohmann::json provenance;
};

// Builds the subspace for config.variant from the training pairs in
// `splits` (keyed by language) and debiases the space with it.
//   kMono:  pairs of one language.
//   kMulti: pooled pairs of every language present in the space.
//   kEqr:   pooled pairs, language-labeled candidate components, k/L kept
//           per language.
VariantResult run_variant(const EmbeddingSpace& space,
                          const GenderLexicon& lexicon,
                          const DebiasConfig& config,
                          const std::map<std::string, PairSplit>& splits,
                          Diagnostics* diag = nullptr);

}  // namespace lpdebias

#endif  // LPDEBIAS_DEBIAS_HPP_
