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

#include "lpdebias/lexicon.hpp"

#include <fstream>
#include <set>

#include "lpdebias/random.hpp"

namespace lpdebias {
namespace {

using nlohmann::json;

bool has_whitespace(const std::string& w) {
  return w.find_first_of(" \t\r\n\f\v") != std::string::npos;
}

void check_token(const std::string& word, const std::string& where) {
  if (word.empty()) throw ValidationError(where + ": empty word");
  if (has_whitespace(word)) {
    throw ValidationError(where + ": multi-token entry '" + word +
                          "' is not allowed");
  }
}

std::vector<std::string> string_list(const json& node,
                                     const std::string& where) {
  if (node.is_null()) return {};
  if (!node.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) {
      throw ValidationError(where + ": expected string entries");
    }
    out.push_back(item.get<std::string>());
    check_token(out.back(), where);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> pair_list(
    const json& node, const std::string& where) {
  if (node.is_null()) return {};
  if (!node.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : node) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
        !item[1].is_string()) {
      throw ValidationError(where + ": expected [\"male\", \"female\"] pairs");
    }
    out.emplace_back(item[0].get<std::string>(), item[1].get<std::string>());
    check_token(out.back().first, where);
    check_token(out.back().second, where);
  }
  return out;
}

void validate(const std::string& tag, const LanguageLexicon& lex) {
  const std::string where = "lexicon[" + tag + "]";
  std::set<std::string> gendered;
  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (const auto& p : lex.pairs) {
    check_token(p.male_word, where + ".pairs");
    check_token(p.female_word, where + ".pairs");
    if (p.male_word == p.female_word) {
      throw ValidationError(where + ": pair with identical words '" +
                            p.male_word + "'");
    }
    if (!seen_pairs.emplace(p.male_word, p.female_word).second) {
      throw ValidationError(where + ": duplicate pair (" + p.male_word + ", " +
                            p.female_word + ")");
    }
    gendered.insert(p.male_word);
    gendered.insert(p.female_word);
  }
  for (const auto& w : lex.neutral.all()) {
    if (gendered.count(w)) {
      throw ValidationError(where + ": '" + w +
                            "' is both a gender-defining and a neutral word");
    }
  }
  if (lex.male_seeds.empty()) {
    throw ValidationError(where + ": empty male seed set");
  }
  if (lex.female_seeds.empty()) {
    throw ValidationError(where + ": empty female seed set");
  }
  std::set<std::string> male(lex.male_seeds.begin(), lex.male_seeds.end());
  for (const auto& w : lex.female_seeds) {
    if (male.count(w)) {
      throw ValidationError(where + ": seed '" + w +
                            "' is in both the male and female sets");
    }
  }
  std::set<std::pair<std::string, std::string>> occ;
  for (const auto& o : lex.occupation_pairs) {
    if (!occ.emplace(o.masculine, o.feminine).second) {
      throw ValidationError(where + ": duplicate occupation pair (" +
                            o.masculine + ", " + o.feminine + ")");
    }
  }
}

}  // namespace

std::vector<std::string> NeutralWords::all() const {
  std::vector<std::string> out = professions;
  out.insert(out.end(), adjectives.begin(), adjectives.end());
  out.insert(out.end(), transliterations.begin(), transliterations.end());
  return out;
}

GenderLexicon::GenderLexicon(std::map<std::string, LanguageLexicon> languages)
    : languages_(std::move(languages)) {
  if (languages_.empty()) throw ValidationError("lexicon has no languages");
  for (const auto& [tag, lex] : languages_) {
    if (tag.empty() || tag.find('+') != std::string::npos) {
      throw ValidationError("invalid language tag '" + tag + "'");
    }
    validate(tag, lex);
  }
}

const LanguageLexicon& GenderLexicon::at(const std::string& language) const {
  auto it = languages_.find(language);
  if (it == languages_.end()) {
    throw ValidationError("language '" + language + "' is not in the lexicon");
  }
  return it->second;
}

std::vector<std::string> GenderLexicon::tags() const {
  std::vector<std::string> out;
  for (const auto& [tag, lex] : languages_) out.push_back(tag);
  return out;
}

GenderLexicon lexicon_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("languages") ||
      !doc["languages"].is_object()) {
    throw ValidationError("lexicon: expected an object with \"languages\"");
  }
  std::map<std::string, LanguageLexicon> langs;
  for (const auto& [tag, node] : doc["languages"].items()) {
    const std::string where = "lexicon[" + tag + "]";
    if (!node.is_object()) throw ValidationError(where + ": expected object");
    LanguageLexicon lex;
    for (auto& [m, f] : pair_list(node.value("pairs", json()), where + ".pairs")) {
      lex.pairs.push_back({m, f, tag});
    }
    json neutral = node.value("neutral", json::object());
    if (!neutral.is_object()) {
      throw ValidationError(where + ".neutral: expected object");
    }
    lex.neutral.professions = string_list(neutral.value("professions", json()),
                                          where + ".neutral.professions");
    lex.neutral.adjectives = string_list(neutral.value("adjectives", json()),
                                         where + ".neutral.adjectives");
    lex.neutral.transliterations =
        string_list(neutral.value("transliterations", json()),
                    where + ".neutral.transliterations");
    json seeds = node.value("seeds", json::object());
    if (!seeds.is_object()) {
      throw ValidationError(where + ".seeds: expected object");
    }
    lex.male_seeds = string_list(seeds.value("male", json()), where + ".seeds.male");
    lex.female_seeds =
        string_list(seeds.value("female", json()), where + ".seeds.female");
    for (auto& [m, f] : pair_list(node.value("occupation_pairs", json()),
                                  where + ".occupation_pairs")) {
      lex.occupation_pairs.push_back({m, f});
    }
    langs.emplace(tag, std::move(lex));
  }
  return GenderLexicon(std::move(langs));
}

json lexicon_to_json(const GenderLexicon& lexicon) {
  json langs = json::object();
  for (const auto& [tag, lex] : lexicon.languages()) {
    json pairs = json::array();
    for (const auto& p : lex.pairs) pairs.push_back({p.male_word, p.female_word});
    json occ = json::array();
    for (const auto& o : lex.occupation_pairs) occ.push_back({o.masculine, o.feminine});
    langs[tag] = {
        {"pairs", pairs},
        {"neutral",
         {{"professions", lex.neutral.professions},
          {"adjectives", lex.neutral.adjectives},
          {"transliterations", lex.neutral.transliterations}}},
        {"seeds", {{"male", lex.male_seeds}, {"female", lex.female_seeds}}},
        {"occupation_pairs", occ}};
  }
  return {{"languages", langs}};
}

GenderLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return lexicon_from_json(doc);
}

PairSplit split_pairs(const GenderLexicon& lexicon, const std::string& language,
                      std::size_t train_count, std::uint64_t seed,
                      Diagnostics* diag) {
  const auto& pairs = lexicon.at(language).pairs;
  if (train_count > pairs.size()) {
    throw ValidationError("train count " + std::to_string(train_count) +
                          " exceeds the " + std::to_string(pairs.size()) +
                          " gender pairs of '" + language + "'");
  }
  std::vector<GenderPair> shuffled = pairs;
  Rng rng(seed);
  rng.shuffle(shuffled);
  PairSplit split;
  split.train.assign(shuffled.begin(), shuffled.begin() + train_count);
  split.test.assign(shuffled.begin() + train_count, shuffled.end());
  if (split.test.empty()) {
    warn(diag, "all gender pairs of '" + language +
                   "' are used for training; the test split is empty");
  }
  return split;
}

std::string pairs_fingerprint(const std::vector<GenderPair>& pairs) {
  Fingerprint fp;
  for (const auto& p : pairs) {
    fp.add(p.language);
    fp.add(std::string_view("\t"));
    fp.add(p.male_word);
    fp.add(std::string_view("\t"));
    fp.add(p.female_word);
    fp.add(std::string_view("\n"));
  }
  return fp.hex();
}

}  // namespace lpdebias
