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

// Random lexicon-covering embedding spaces for tests.

#ifndef LPDEBIAS_TESTS_SYNTHETIC_HPP_
#define LPDEBIAS_TESTS_SYNTHETIC_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/common.hpp"
#include "lpdebias/embedding.hpp"
#include "lpdebias/lexicon.hpp"
#include "lpdebias/random.hpp"

namespace lpdebias::testing {

struct WorldShape {
  std::size_t pairs = 8;
  std::size_t neutral = 12;
  std::size_t seeds = 3;
  std::size_t occupations = 5;
  std::size_t filler = 10;
};

// Word lists follow "<lang>_<role><i>" so tests can address them.
inline nlohmann::json world_lexicon(const std::vector<std::string>& languages,
                                    const WorldShape& shape = {}) {
  using nlohmann::json;
  json langs = json::object();
  for (const auto& l : languages) {
    json pairs = json::array(), occ = json::array(), prof = json::array(),
         adj = json::array(), sm = json::array(), sf = json::array();
    for (std::size_t i = 0; i < shape.pairs; ++i) {
      pairs.push_back({l + "_m" + std::to_string(i), l + "_f" + std::to_string(i)});
    }
    for (std::size_t i = 0; i < shape.neutral; ++i) {
      (i % 2 == 0 ? prof : adj).push_back(l + "_n" + std::to_string(i));
    }
    for (std::size_t i = 0; i < shape.seeds; ++i) {
      sm.push_back(l + "_sm" + std::to_string(i));
      sf.push_back(l + "_sf" + std::to_string(i));
    }
    for (std::size_t i = 0; i < shape.occupations; ++i) {
      occ.push_back({l + "_om" + std::to_string(i), l + "_of" + std::to_string(i)});
    }
    langs[l] = {{"pairs", pairs},
                {"neutral", {{"professions", prof}, {"adjectives", adj}, {"transliterations", json::array()}}},
                {"seeds", {{"male", sm}, {"female", sf}}},
                {"occupation_pairs", occ}};
  }
  return {{"languages", langs}};
}

inline std::vector<std::string> world_words(const std::string& lang,
                                            const WorldShape& shape = {}) {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < shape.pairs; ++i) {
    w.push_back(lang + "_m" + std::to_string(i));
    w.push_back(lang + "_f" + std::to_string(i));
  }
  for (std::size_t i = 0; i < shape.neutral; ++i) w.push_back(lang + "_n" + std::to_string(i));
  for (std::size_t i = 0; i < shape.seeds; ++i) {
    w.push_back(lang + "_sm" + std::to_string(i));
    w.push_back(lang + "_sf" + std::to_string(i));
  }
  for (std::size_t i = 0; i < shape.occupations; ++i) {
    w.push_back(lang + "_om" + std::to_string(i));
    w.push_back(lang + "_of" + std::to_string(i));
  }
  for (std::size_t i = 0; i < shape.filler; ++i) w.push_back(lang + "_x" + std::to_string(i));
  return w;
}

// Unit-norm Gaussian space over the words of one language.
inline EmbeddingSpace world_space(const std::string& lang, std::size_t d,
                                  std::uint64_t seed, const WorldShape& shape = {}) {
  Rng rng(seed);
  auto words = world_words(lang, shape);
  Matrix m(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return normalize(EmbeddingSpace(lang, std::move(words), std::move(m)));
}

}  // namespace lpdebias::testing

#endif  // LPDEBIAS_TESTS_SYNTHETIC_HPP_
