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

#include <algorithm>
#include <set>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lpdebias/lexicon.hpp"
#include "testing.hpp"

#ifndef LPDEBIAS_DATA_DIR
#error "LPDEBIAS_DATA_DIR must point at the bundled data directory"
#endif

namespace lpdebias {
namespace {

using nlohmann::json;

json minimal(int pair_count = 20) {
  json pairs = json::array();
  for (int i = 0; i < pair_count; ++i) {
    pairs.push_back({"m" + std::to_string(i), "f" + std::to_string(i)});
  }
  return {{"languages",
           {{"en",
             {{"pairs", pairs},
              {"neutral",
               {{"professions", {"doctor", "nurse"}},
                {"adjectives", {"smart"}},
                {"transliterations", json::array()}}},
              {"seeds", {{"male", {"he"}}, {"female", {"she"}}}},
              {"occupation_pairs",
               json::array({json::array({"actor", "actress"}), json::array({"doctor", "doctor"})})}}}}}};
}

TEST(Lexicon, BundledEnglishCounts) {
  GenderLexicon lex = load_lexicon(std::string(LPDEBIAS_DATA_DIR) + "/lexicon.json");
  const LanguageLexicon& en = lex.at("en");
  EXPECT_EQ(en.neutral.professions.size(), 59u);
  EXPECT_EQ(en.neutral.adjectives.size(), 50u);
  EXPECT_EQ(en.neutral.transliterations.size(), 0u);
  EXPECT_EQ(en.neutral.size(), 109u);
  EXPECT_EQ(en.pairs.size(), 20u);
  EXPECT_EQ(lex.tags(), (std::vector<std::string>{"be", "en", "hi", "te"}));
}

TEST(Lexicon, ParsesAllSections) {
  GenderLexicon lex = lexicon_from_json(minimal());
  const auto& en = lex.at("en");
  EXPECT_EQ(en.pairs.front().male_word, "m0");
  EXPECT_EQ(en.pairs.front().language, "en");
  EXPECT_EQ(en.neutral.all().size(), 3u);
  EXPECT_EQ(en.male_seeds, (std::vector<std::string>{"he"}));
  ASSERT_EQ(en.occupation_pairs.size(), 2u);
  // Gender-neutral occupations may repeat the word.
  EXPECT_EQ(en.occupation_pairs[1].masculine, en.occupation_pairs[1].feminine);
}

TEST(Lexicon, JsonRoundTrip) {
  GenderLexicon lex = lexicon_from_json(minimal());
  EXPECT_EQ(lexicon_to_json(lexicon_from_json(lexicon_to_json(lex))), lexicon_to_json(lex));
}

TEST(Lexicon, DefiningNeutralOverlapRejected) {
  json doc = minimal();
  doc["languages"]["en"]["pairs"].push_back({"king", "queen"});
  doc["languages"]["en"]["neutral"]["professions"].push_back("king");
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
}

TEST(Lexicon, EmptySeedSetRejected) {
  json doc = minimal();
  doc["languages"]["te"] = doc["languages"]["en"];
  doc["languages"]["te"]["seeds"]["female"] = json::array();
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
}

TEST(Lexicon, SchemaViolations) {
  EXPECT_THROW(lexicon_from_json(json::array()), ValidationError);
  json doc = minimal();
  doc["languages"]["en"]["pairs"].push_back(json::array({"solo"}));
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
  doc = minimal();
  doc["languages"]["en"]["pairs"].push_back({"same", "same"});
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
  doc = minimal();
  doc["languages"]["en"]["neutral"]["adjectives"].push_back("two words");
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
  doc = minimal();
  doc["languages"]["en"]["seeds"]["female"].push_back("he");
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
  doc = minimal();
  doc["languages"]["en"]["occupation_pairs"].push_back({"actor", "actress"});
  EXPECT_THROW(lexicon_from_json(doc), ValidationError);
}

TEST(Lexicon, MissingFileIsIoError) {
  EXPECT_THROW(load_lexicon("/nonexistent/lexicon.json"), IoError);
}

TEST(SplitPairs, TenOfTwenty) {
  GenderLexicon lex = lexicon_from_json(minimal());
  PairSplit s = split_pairs(lex, "en", 10, 42);
  EXPECT_EQ(s.train.size(), 10u);
  EXPECT_EQ(s.test.size(), 10u);
  std::set<std::string> train;
  for (const auto& p : s.train) train.insert(p.male_word);
  for (const auto& p : s.test) EXPECT_EQ(train.count(p.male_word), 0u);
}

TEST(SplitPairs, AllTrainWarns) {
  GenderLexicon lex = lexicon_from_json(minimal());
  Diagnostics diag;
  PairSplit s = split_pairs(lex, "en", 20, 1, &diag);
  EXPECT_TRUE(s.test.empty());
  EXPECT_EQ(diag.warnings().size(), 1u);
  EXPECT_THROW(split_pairs(lex, "en", 21, 1), ValidationError);
}

TEST(SplitPairs, SeedDeterministic) {
  GenderLexicon lex = lexicon_from_json(minimal());
  PairSplit a = split_pairs(lex, "en", 10, 7);
  PairSplit b = split_pairs(lex, "en", 10, 7);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(pairs_fingerprint(a.train), pairs_fingerprint(b.train));
  PairSplit c = split_pairs(lex, "en", 10, 8);
  EXPECT_NE(pairs_fingerprint(a.train), pairs_fingerprint(c.train));
}

TEST(SplitPairs, DisjointAndExhaustiveForManySeeds) {
  GenderLexicon lex = lexicon_from_json(minimal(13));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (std::size_t train = 0; train <= 13; ++train) {
      PairSplit s = split_pairs(lex, "en", train, seed);
      ASSERT_EQ(s.train.size(), train);
      std::multiset<std::string> seen;
      for (const auto& p : s.train) seen.insert(p.male_word);
      for (const auto& p : s.test) seen.insert(p.male_word);
      std::multiset<std::string> expected;
      for (const auto& p : lex.at("en").pairs) expected.insert(p.male_word);
      ASSERT_EQ(seen, expected) << "seed " << seed << " train " << train;
    }
  }
}

}  // namespace
}  // namespace lpdebias
