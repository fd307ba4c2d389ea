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

#include "lpdebias/debias.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace lpdebias {
namespace {

BiasSubspace build_subspace(const DifferenceMatrix& q, std::size_t k,
                            const DebiasConfig& config) {
  if (config.method == SubspaceMethod::kPca) {
    return pca_basis(q, k, config.center);
  }
  PpaOptions ppa = config.ppa;
  ppa.seed = config.seed;
  return ppa_basis(q, k, ppa);
}

std::vector<GenderPair> train_pairs(
    const std::map<std::string, PairSplit>& splits, const std::string& lang) {
  auto it = splits.find(lang);
  if (it == splits.end()) {
    throw ValidationError("no gender-pair split for language '" + lang + "'");
  }
  return it->second.train;
}

}  // namespace

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::kMono: return "mono";
    case Variant::kMulti: return "multi";
    case Variant::kEqr: return "eqr";
  }
  return "?";
}

std::string to_string(Scope scope) {
  return scope == Scope::kAllWords ? "all" : "neutral";
}

Variant parse_variant(const std::string& name) {
  if (name == "mono") return Variant::kMono;
  if (name == "multi") return Variant::kMulti;
  if (name == "eqr") return Variant::kEqr;
  throw ValidationError("unknown variant '" + name +
                        "' (expected mono, multi or eqr)");
}

Scope parse_scope(const std::string& name) {
  if (name == "all") return Scope::kAllWords;
  if (name == "neutral") return Scope::kNeutralOnly;
  throw ValidationError("unknown scope '" + name + "' (expected all or neutral)");
}

void DebiasConfig::validate(std::size_t language_count) const {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (variant == Variant::kEqr) {
    if (language_count == 0 || k % language_count != 0) {
      throw ValidationError("eqr needs k divisible by the language count: k=" +
                            std::to_string(k) + ", languages=" +
                            std::to_string(language_count));
    }
  }
}

nlohmann::json DebiasConfig::to_json() const {
  return {{"variant", to_string(variant)},
          {"k", k},
          {"method", to_string(method)},
          {"scope", to_string(scope)},
          {"renormalize_after", renormalize_after},
          {"center", center},
          {"seed", seed},
          {"mono_language", mono_language},
          {"ppa",
           {{"starts", ppa.starts},
            {"max_iterations", ppa.max_iterations},
            {"gradient_tolerance", ppa.gradient_tolerance}}}};
}

Vector project_component(const Vector& w, const BiasSubspace& subspace) {
  if (static_cast<std::size_t>(w.size()) != subspace.dim()) {
    throw ValidationError("dimension mismatch: vector has " +
                          std::to_string(w.size()) + " entries, subspace d=" +
                          std::to_string(subspace.dim()));
  }
  return subspace.basis.transpose() * (subspace.basis * w);
}

EmbeddingSpace debias_space(const EmbeddingSpace& space,
                            const BiasSubspace& subspace,
                            const DebiasOptions& options,
                            const std::vector<std::string>& in_scope,
                            Diagnostics* diag) {
  if (space.dim() != subspace.dim()) {
    throw ValidationError("dimension mismatch: space d=" +
                          std::to_string(space.dim()) + ", subspace d=" +
                          std::to_string(subspace.dim()));
  }
  if (subspace.k() == 0 ||
      subspace.orthonormality_error() > kOrthonormalTolerance) {
    throw ValidationError("subspace basis is not orthonormal");
  }

  const auto n = static_cast<std::size_t>(space.size());
  std::vector<char> selected(n, options.scope == Scope::kAllWords ? 1 : 0);
  if (options.scope == Scope::kNeutralOnly) {
    for (const auto& w : in_scope) {
      if (auto idx = space.index_of(w)) selected[*idx] = 1;
    }
  }

  const Matrix& src = space.matrix();
  const Matrix& basis = subspace.basis;
  Matrix out = src;
  std::vector<char> zeroed(n, 0);
  parallel_rows(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!selected[i]) continue;
      const auto row = static_cast<Eigen::Index>(i);
      const Vector w = src.row(row).transpose();
      Vector residual = w - basis.transpose() * (basis * w);
      if (residual.norm() <= 1e-12 * w.norm()) {
        residual.setZero();
        zeroed[i] = 1;
      } else if (options.renormalize_after) {
        residual.normalize();
      }
      out.row(row) = residual.transpose();
    }
  });

  std::vector<std::string> zero_words;
  for (std::size_t i = 0; i < n; ++i) {
    if (zeroed[i]) zero_words.push_back(space.vocab()[i]);
  }
  if (!zero_words.empty()) {
    warn(diag, std::to_string(zero_words.size()) +
                   " words lie inside the subspace and became zero vectors: " +
                   join(zero_words, ", "));
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!selected[i]) continue;
    const auto row = static_cast<Eigen::Index>(i);
    worst = std::max(worst, (basis * out.row(row).transpose()).cwiseAbs().maxCoeff());
  }
  if (worst >= kResidualTolerance) {
    throw std::logic_error("debiased vectors keep a subspace component of " +
                           std::to_string(worst));
  }

  bool unit = options.renormalize_after;
  for (Eigen::Index i = 0; i < out.rows() && unit; ++i) {
    unit = std::abs(out.row(i).norm() - 1.0) <= 1e-9;
  }
  return EmbeddingSpace(space.language_tag(), space.vocab(), std::move(out),
                        unit);
}

std::vector<std::string> neutral_vocabulary(
    const EmbeddingSpace& space, const GenderLexicon& lexicon,
    const std::vector<std::string>& languages) {
  std::vector<std::string> out;
  for (const auto& lang : languages) {
    for (const auto& w : lexicon.at(lang).neutral.all()) {
      if (auto idx = space.resolve(lang, w)) out.push_back(space.vocab()[*idx]);
    }
  }
  return out;
}

std::vector<std::string> present_languages(const EmbeddingSpace& space,
                                           const GenderLexicon& lexicon) {
  std::vector<std::string> out;
  for (const auto& lang : space.languages()) {
    if (lexicon.has(lang)) out.push_back(lang);
  }
  return out;
}

VariantResult run_variant(const EmbeddingSpace& space,
                          const GenderLexicon& lexicon,
                          const DebiasConfig& config,
                          const std::map<std::string, PairSplit>& splits,
                          Diagnostics* diag) {
  std::vector<std::string> languages;
  if (config.variant == Variant::kMono) {
    std::string lang = config.mono_language;
    if (lang.empty()) {
      if (space.multilingual()) {
        throw ValidationError(
            "mono variant on a multilingual space needs an explicit language");
      }
      lang = space.language_tag();
    }
    if (!lexicon.has(lang)) {
      throw ValidationError("language '" + lang + "' is not in the lexicon");
    }
    languages.push_back(lang);
  } else {
    languages = present_languages(space, lexicon);
    if (languages.empty()) {
      throw ValidationError("no lexicon language is present in space '" +
                            space.language_tag() + "'");
    }
  }
  config.validate(languages.size());

  std::vector<GenderPair> pairs;
  nlohmann::json pair_prints = nlohmann::json::object();
  for (const auto& lang : languages) {
    auto train = train_pairs(splits, lang);
    pair_prints[lang] = pairs_fingerprint(train);
    pairs.insert(pairs.end(), train.begin(), train.end());
  }
  const DifferenceMatrix q = difference_matrix(space, pairs, diag);

  BiasSubspace subspace;
  if (config.variant == Variant::kEqr) {
    // Grow the labeled candidate pool until every language can contribute
    // k/L components or the pool reaches the rank of the difference matrix.
    const std::size_t rank = difference_rank(
        q, config.method == SubspaceMethod::kPpa || config.center);
    std::size_t pool_size = std::min(config.k, rank);
    while (true) {
      BiasSubspace pool = language_orientation(
          build_subspace(q, pool_size, config), q, languages, nullptr);
      try {
        subspace = select_equal_rep(pool, config.k, languages);
        break;
      } catch (const ValidationError&) {
        if (pool_size >= rank) throw;
        pool_size = std::min(rank, pool_size * 2);
      }
    }
  } else {
    subspace = language_orientation(build_subspace(q, config.k, config), q,
                                    languages, nullptr);
  }
  subspace.seed = config.seed;
  subspace.source_fingerprint = space.fingerprint();

  std::vector<std::string> scope_words;
  if (config.scope == Scope::kNeutralOnly) {
    scope_words = neutral_vocabulary(space, lexicon, present_languages(space, lexicon));
  }
  EmbeddingSpace debiased =
      debias_space(space, subspace, {config.scope, config.renormalize_after},
                   scope_words, diag);

  nlohmann::json provenance = {
      {"config", config.to_json()},
      {"languages", languages},
      {"train_pairs", pairs.size()},
      {"resolved_pairs", q.size()},
      {"pair_fingerprints", pair_prints},
      {"source_fingerprint", space.fingerprint()},
      {"output_fingerprint", debiased.fingerprint()},
      {"subspace", subspace_to_json(subspace)}};
  return {std::move(debiased), std::move(subspace), std::move(provenance)};
}

}  // namespace lpdebias
