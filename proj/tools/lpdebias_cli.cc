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

// lpdebias: align, merge, debias and report on word embeddings.
//
// Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lpdebias/align.hpp"
#include "lpdebias/debias.hpp"
#include "lpdebias/embedding.hpp"
#include "lpdebias/extrinsic.hpp"
#include "lpdebias/intrinsic.hpp"
#include "lpdebias/lexicon.hpp"
#include "lpdebias/report.hpp"
#include "lpdebias/subspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lpdebias {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

// Reads --config files written as JSON. Top-level keys are option names of
// the main app; nested objects hold subcommand options, e.g.
// {"debias": {"k": 4, "variant": "eqr"}}.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->count() > 0) {
        j[name] = opt->results();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const json& node, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

std::string command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    out += argv[i];
  }
  return out;
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  return fs::path(path.string() + suffix);
}

void finish_manifest(RunManifest& manifest, const Diagnostics& diag,
                     const fs::path& path) {
  manifest.warnings = diag.warnings();
  write_json(manifest.to_json(), path);
  for (const auto& w : diag.warnings()) std::cerr << "warning: " << w << "\n";
}

EmbeddingSpace load_space(const std::string& path, const std::string& lang,
                          RunManifest& manifest) {
  manifest.inputs[path] = file_fingerprint(path);
  return load_vec(path, lang);
}

GenderLexicon load_lex(const std::string& path, RunManifest& manifest) {
  manifest.inputs[path] = file_fingerprint(path);
  return load_lexicon(path);
}

std::map<std::string, PairSplit> make_splits(const GenderLexicon& lexicon,
                                             const std::vector<std::string>& langs,
                                             std::size_t train_count,
                                             std::uint64_t seed,
                                             Diagnostics* diag) {
  std::map<std::string, PairSplit> splits;
  for (const auto& lang : langs) {
    splits[lang] = split_pairs(lexicon, lang, train_count, seed, diag);
  }
  return splits;
}

// ---------------------------------------------------------------- align

struct AlignArgs {
  std::string src, tgt, dict, out, merged_out;
  std::string src_lang = "src";
  std::string tgt_lang = "tgt";
  bool no_normalize = false;
  int precision = 8;
};

int run_align(const AlignArgs& a, const std::string& cmdline) {
  RunManifest manifest;
  manifest.command_line = cmdline;
  Diagnostics diag;
  EmbeddingSpace src = load_space(a.src, a.src_lang, manifest);
  EmbeddingSpace tgt = load_space(a.tgt, a.tgt_lang, manifest);
  if (src.dim() != tgt.dim()) {
    throw ValidationError("dimension mismatch: --src has d=" +
                          std::to_string(src.dim()) + ", --tgt has d=" +
                          std::to_string(tgt.dim()));
  }
  if (!a.no_normalize) {
    src = normalize(src);
    tgt = normalize(tgt);
  }
  manifest.inputs[a.dict] = file_fingerprint(a.dict);
  BilingualDictionary dict = load_dictionary(a.dict, a.src_lang, a.tgt_lang, &diag);
  OrthogonalMap map = procrustes_fit(src, tgt, dict, &diag);
  EmbeddingSpace aligned = apply_map(map, src);
  save_vec(aligned, a.out, a.precision);
  manifest.outputs["aligned"] = a.out;
  if (!a.merged_out.empty()) {
    save_vec(merge_spaces(aligned, tgt), a.merged_out, a.precision);
    manifest.outputs["merged"] = a.merged_out;
  }
  manifest.config = {{"src_lang", a.src_lang},
                     {"tgt_lang", a.tgt_lang},
                     {"normalize", !a.no_normalize},
                     {"precision", a.precision},
                     {"dictionary_entries", dict.entries.size()},
                     {"fit_pairs", map.fit_pair_count},
                     {"orthogonality_error", map.orthogonality_error()}};
  finish_manifest(manifest, diag, sibling(a.out, ".manifest.json"));
  std::cout << "aligned " << src.size() << " words (" << map.fit_pair_count
            << " dictionary pairs) -> " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- merge

struct MergeArgs {
  std::vector<std::string> inputs;  // lang=path
  std::string out;
  int precision = 8;
};

int run_merge(const MergeArgs& a, const std::string& cmdline) {
  RunManifest manifest;
  manifest.command_line = cmdline;
  Diagnostics diag;
  if (a.inputs.size() < 2) throw ValidationError("merge needs at least two --input");
  std::optional<EmbeddingSpace> merged;
  for (const auto& spec : a.inputs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ValidationError("--input expects lang=path, got '" + spec + "'");
    }
    EmbeddingSpace space = load_space(spec.substr(eq + 1), spec.substr(0, eq), manifest);
    merged = merged ? merge_spaces(*merged, space) : std::move(space);
  }
  save_vec(*merged, a.out, a.precision);
  manifest.outputs["merged"] = a.out;
  manifest.config = {{"languages", merged->language_tag()}, {"precision", a.precision}};
  finish_manifest(manifest, diag, sibling(a.out, ".manifest.json"));
  std::cout << "merged " << merged->size() << " words (" << merged->language_tag()
            << ") -> " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- debias

struct DebiasArgs {
  std::string embedding, lang, lexicon, out, subspace_out;
  std::string variant = "mono";
  std::string method = "pca";
  std::string scope = "all";
  std::string mono_lang;
  std::size_t k = kDefaultK;
  std::uint64_t seed = 0;
  std::size_t train_count = kDefaultTrainPairs;
  bool center = false;
  bool renormalize = false;
  std::size_t ppa_starts = 32;
  int precision = 8;
};

int run_debias(const DebiasArgs& a, const std::string& cmdline) {
  RunManifest manifest;
  manifest.command_line = cmdline;
  Diagnostics diag;
  EmbeddingSpace space = normalize(load_space(a.embedding, a.lang, manifest));
  GenderLexicon lexicon = load_lex(a.lexicon, manifest);

  DebiasConfig config;
  config.variant = parse_variant(a.variant);
  config.method = parse_method(a.method);
  config.scope = parse_scope(a.scope);
  config.k = a.k;
  config.seed = a.seed;
  config.center = a.center;
  config.renormalize_after = a.renormalize;
  config.mono_language = a.mono_lang;
  config.ppa.starts = a.ppa_starts;

  auto langs = present_languages(space, lexicon);
  if (langs.empty()) {
    throw ValidationError("no lexicon language matches the embedding tag '" +
                          a.lang + "'");
  }
  if (config.variant != Variant::kMono) config.validate(langs.size());
  auto splits = make_splits(lexicon, langs, a.train_count, a.seed, &diag);
  VariantResult result = run_variant(space, lexicon, config, splits, &diag);

  save_vec(result.space, a.out, a.precision);
  const fs::path subspace_path =
      a.subspace_out.empty() ? sibling(a.out, ".subspace.json") : fs::path(a.subspace_out);
  const fs::path manifest_path = sibling(a.out, ".manifest.json");
  json subspace_doc = subspace_to_json(result.subspace);
  subspace_doc["manifest"] = manifest_path.filename().string();
  write_json(subspace_doc, subspace_path);

  manifest.config = result.provenance;
  manifest.config["train_count"] = a.train_count;
  manifest.seeds["seed"] = a.seed;
  manifest.outputs["embedding"] = a.out;
  manifest.outputs["subspace"] = subspace_path.string();
  finish_manifest(manifest, diag, manifest_path);
  std::cout << "LP_" << to_string(config.variant) << " (" << to_string(config.method)
            << ", k=" << config.k << ") over " << join(langs, ",") << " -> "
            << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string embedding, lang, out, subspace, lexicon, gender_lang;
  SynthSpec spec;
  std::uint64_t seed = 0;
};

int run_synth(SynthArgs a, const std::string& cmdline) {
  RunManifest manifest;
  manifest.command_line = cmdline;
  Diagnostics diag;
  EmbeddingSpace space = normalize(load_space(a.embedding, a.lang, manifest));
  if (!a.subspace.empty()) {
    manifest.inputs[a.subspace] = file_fingerprint(a.subspace);
    a.spec.gender_direction = subspace_from_json(read_json(a.subspace)).vector(0);
  } else if (!a.lexicon.empty()) {
    GenderLexicon lexicon = load_lex(a.lexicon, manifest);
    const std::string lang = a.gender_lang.empty() ? a.lang : a.gender_lang;
    a.spec.gender_direction = gender_direction(space, lexicon.at(lang).pairs, &diag);
  } else {
    throw ValidationError("synth needs --subspace or --lexicon for the gender axis");
  }
  auto records = synthesize_corpus(space, a.spec, a.seed);
  save_corpus(records, a.out);
  manifest.config = a.spec.to_json();
  manifest.seeds["seed"] = a.seed;
  manifest.outputs["corpus"] = a.out;
  finish_manifest(manifest, diag, sibling(a.out, ".manifest.json"));
  std::cout << "wrote " << records.size() << " records -> " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  bool inbias = false, xscore = false, exbias = false;
  std::string lexicon, lang, before, corpus, before_result, after_result;
  std::vector<std::string> after, after_labels, languages;
  std::string json_out, table_out;
  std::uint64_t seed = 0;
  std::size_t train_count = kDefaultTrainPairs;
  bool static_seeds = false;
  double epsilon = kDefaultCrossEpsilon;
  std::size_t epochs = 300;
  double learning_rate = 0.0;
  std::size_t min_count = kDefaultMinOccupationCount;
  std::string label = "LP";
};

void emit(const ReportArgs& a, const std::string& table, json doc,
          RunManifest& manifest, const Diagnostics& diag) {
  std::cout << table;
  if (!a.table_out.empty()) {
    write_text(table, a.table_out);
    manifest.outputs["table"] = a.table_out;
  }
  if (!a.json_out.empty()) {
    const fs::path manifest_path = sibling(a.json_out, ".manifest.json");
    doc["manifest"] = manifest_path.filename().string();
    write_json(doc, a.json_out);
    manifest.outputs["json"] = a.json_out;
    finish_manifest(manifest, diag, manifest_path);
  } else {
    for (const auto& w : diag.warnings()) std::cerr << "warning: " << w << "\n";
  }
}

std::vector<std::string> eval_languages(const ReportArgs& a,
                                        const EmbeddingSpace& space,
                                        const GenderLexicon& lexicon) {
  if (!a.languages.empty()) return a.languages;
  auto langs = present_languages(space, lexicon);
  if (langs.empty()) {
    throw ValidationError("no lexicon language matches the embedding tag '" +
                          space.language_tag() + "'");
  }
  return langs;
}

int report_inbias(const ReportArgs& a, RunManifest& manifest) {
  if (a.lexicon.empty() || a.before.empty()) {
    throw ValidationError("--inbias needs --lexicon and --before");
  }
  Diagnostics diag;
  GenderLexicon lexicon = load_lex(a.lexicon, manifest);
  std::vector<std::pair<std::string, std::string>> inputs = {{"Orig", a.before}};
  for (std::size_t i = 0; i < a.after.size(); ++i) {
    std::string label = i < a.after_labels.size()
                            ? a.after_labels[i]
                            : fs::path(a.after[i]).stem().string();
    inputs.emplace_back(label, a.after[i]);
  }

  std::vector<std::string> langs;
  std::vector<InBiasColumn> columns;
  json doc = {{"metric", "inbias"},
              {"seed", a.seed},
              {"train_count", a.train_count},
              {"seed_source", a.static_seeds ? "lexicon" : "test_pairs"},
              {"columns", json::array()}};
  for (const auto& [label, path] : inputs) {
    EmbeddingSpace space = load_space(path, a.lang, manifest);
    if (langs.empty()) langs = eval_languages(a, space, lexicon);
    SeedSets seeds = a.static_seeds
                         ? seeds_from_lexicon(lexicon, langs)
                         : seeds_from_test_pairs(
                               make_splits(lexicon, langs, a.train_count, a.seed, &diag),
                               langs);
    InBiasColumn col{label, {}};
    json col_doc = {{"label", label}, {"path", path}, {"by_language", json::object()}};
    for (const auto& lang : langs) {
      col.by_language[lang] = inbias(space, lexicon, {lang}, seeds, &diag);
      col_doc["by_language"][lang] = to_json(col.by_language[lang]);
    }
    if (langs.size() > 1) {
      InBiasResult all = inbias(space, lexicon, langs, seeds, nullptr);
      col.by_language["all"] = all;
      col_doc["all"] = to_json(all);
    }
    columns.push_back(std::move(col));
    doc["columns"].push_back(col_doc);
  }
  auto rows = langs;
  if (langs.size() > 1) rows.push_back("all");
  manifest.seeds["seed"] = a.seed;
  emit(a, inbias_table(rows, columns), doc, manifest, diag);
  return kExitOk;
}

int report_xscore(const ReportArgs& a, RunManifest& manifest) {
  if (a.lexicon.empty() || a.before.empty()) {
    throw ValidationError("--xscore needs --lexicon and --before (the embedding)");
  }
  Diagnostics diag;
  GenderLexicon lexicon = load_lex(a.lexicon, manifest);
  EmbeddingSpace space = load_space(a.before, a.lang, manifest);
  auto langs = eval_languages(a, space, lexicon);
  CrossScoreMatrix m = cross_score_matrix(space, lexicon, langs, a.epsilon, &diag);
  json doc = to_json(m);
  doc["metric"] = "cross_score";
  emit(a, cross_score_table(m), doc, manifest, diag);
  if (!m.ok()) {
    for (std::size_t i = 0; i < langs.size(); ++i) {
      for (std::size_t j = 0; j < langs.size(); ++j) {
        if (!m.errors[i][j].empty()) {
          std::cerr << "error: S(" << langs[i] << "," << langs[j]
                    << "): " << m.errors[i][j] << "\n";
        }
      }
    }
    return kExitValidation;
  }
  return kExitOk;
}

int report_exbias(const ReportArgs& a, RunManifest& manifest) {
  Diagnostics diag;
  ExtrinsicResult before;
  ExtrinsicResult after;
  if (!a.before_result.empty() || !a.after_result.empty()) {
    if (a.before_result.empty() || a.after_result.empty()) {
      throw ValidationError("--exbias comparison needs --before-result and --after-result");
    }
    manifest.inputs[a.before_result] = file_fingerprint(a.before_result);
    manifest.inputs[a.after_result] = file_fingerprint(a.after_result);
    before = extrinsic_from_json(read_json(a.before_result).value("before", read_json(a.before_result)));
    after = extrinsic_from_json(read_json(a.after_result).value("after", read_json(a.after_result)));
  } else {
    if (a.corpus.empty() || a.before.empty() || a.after.size() != 1) {
      throw ValidationError("--exbias needs --corpus, --before and one --after");
    }
    manifest.inputs[a.corpus] = file_fingerprint(a.corpus);
    auto records = load_corpus(a.corpus, a.min_count, &diag);
    ClassifierHyper hyper;
    hyper.seed = a.seed;
    hyper.epochs = a.epochs;
    hyper.learning_rate = a.learning_rate;
    auto before_space = std::make_shared<const EmbeddingSpace>(
        load_space(a.before, a.lang, manifest));
    auto after_space = std::make_shared<const EmbeddingSpace>(
        load_space(a.after[0], a.lang, manifest));
    before = run_extrinsic(before_space, records, hyper, &diag);
    after = run_extrinsic(after_space, records, hyper, &diag);
    manifest.seeds["seed"] = a.seed;
    manifest.config = {{"epochs", a.epochs},
                       {"learning_rate", a.learning_rate},
                       {"min_count", a.min_count},
                       {"test_fraction", 0.2}};
  }
  GapComparison cmp = compare_runs(before, after);
  const std::string lang = a.lang.empty() ? "-" : a.lang;
  std::string table = exbias_table({{lang, "orig", before, std::nullopt},
                                    {lang, a.label, after, cmp.f_i}});
  json doc = {{"metric", "exbias"},
              {"before", to_json(before)},
              {"after", to_json(after)},
              {"comparison", to_json(cmp)}};
  emit(a, table, doc, manifest, diag);
  return kExitOk;
}

int run_report(const ReportArgs& a, const std::string& cmdline) {
  RunManifest manifest;
  manifest.command_line = cmdline;
  if (a.inbias + a.xscore + a.exbias != 1) {
    throw ValidationError("report needs exactly one of --inbias, --xscore, --exbias");
  }
  if (a.inbias) return report_inbias(a, manifest);
  if (a.xscore) return report_xscore(a, manifest);
  return report_exbias(a, manifest);
}


int dispatch(int argc, char** argv) {
  CLI::App app{"Language-aware debiasing of multilingual word embeddings"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "JSON file with option values; flags win");
  app.require_subcommand(1);

  AlignArgs align;
  auto* align_cmd = app.add_subcommand("align", "Fit an orthogonal map from --src onto --tgt");
  align_cmd->add_option("--src", align.src, "Source .vec file")->required();
  align_cmd->add_option("--tgt", align.tgt, "Target .vec file")->required();
  align_cmd->add_option("--dict", align.dict, "Bilingual dictionary")->required();
  align_cmd->add_option("--out", align.out, "Aligned source .vec")->required();
  align_cmd->add_option("--src-lang", align.src_lang, "Source language tag");
  align_cmd->add_option("--tgt-lang", align.tgt_lang, "Target language tag");
  align_cmd->add_option("--merged-out", align.merged_out, "Also write the merged space");
  align_cmd->add_flag("--no-normalize", align.no_normalize, "Keep raw vector norms");
  align_cmd->add_option("--precision", align.precision, "Digits after the point")
      ->check(CLI::Range(1, 17));

  MergeArgs merge;
  auto* merge_cmd = app.add_subcommand("merge", "Join aligned spaces into one vocabulary");
  merge_cmd->add_option("--input", merge.inputs, "lang=path, repeatable")->required();
  merge_cmd->add_option("--out", merge.out, "Merged .vec")->required();
  merge_cmd->add_option("--precision", merge.precision)->check(CLI::Range(1, 17));

  DebiasArgs debias;
  auto* debias_cmd = app.add_subcommand("debias", "Project the gender subspace out of a space");
  debias_cmd->add_option("--embedding", debias.embedding, ".vec file")->required();
  debias_cmd->add_option("--lang", debias.lang, "Language tag, e.g. en or en+hi")->required();
  debias_cmd->add_option("--lexicon", debias.lexicon, "Lexicon JSON")->required();
  debias_cmd->add_option("--out", debias.out, "Debiased .vec")->required();
  debias_cmd->add_option("--subspace-out", debias.subspace_out,
                         "Subspace JSON (default <out>.subspace.json)");
  debias_cmd->add_option("--variant", debias.variant, "mono | multi | eqr")
      ->check(CLI::IsMember({"mono", "multi", "eqr"}));
  debias_cmd->add_option("--method", debias.method, "pca | ppa")
      ->check(CLI::IsMember({"pca", "ppa"}));
  debias_cmd->add_option("--scope", debias.scope, "all | neutral")
      ->check(CLI::IsMember({"all", "neutral"}));
  debias_cmd->add_option("--k", debias.k, "Subspace dimension")->check(CLI::PositiveNumber);
  debias_cmd->add_option("--seed", debias.seed, "Pair split and PPA seed");
  debias_cmd->add_option("--train-count", debias.train_count, "Training pairs per language");
  debias_cmd->add_option("--mono-lang", debias.mono_lang, "Pair language for mono");
  debias_cmd->add_option("--ppa-starts", debias.ppa_starts)->check(CLI::PositiveNumber);
  debias_cmd->add_flag("--center", debias.center, "Center difference vectors");
  debias_cmd->add_flag("--renormalize", debias.renormalize, "Unit-normalize after projection");
  debias_cmd->add_option("--precision", debias.precision)->check(CLI::Range(1, 17));

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic bio corpus with planted bias");
  synth_cmd->add_option("--embedding", synth.embedding, ".vec file")->required();
  synth_cmd->add_option("--lang", synth.lang, "Language tag")->required();
  synth_cmd->add_option("--out", synth.out, "Corpus TSV")->required();
  synth_cmd->add_option("--subspace", synth.subspace, "Use this subspace's first vector");
  synth_cmd->add_option("--lexicon", synth.lexicon, "Or derive the axis from gender pairs");
  synth_cmd->add_option("--gender-lang", synth.gender_lang, "Pair language for --lexicon");
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--occupations", synth.spec.occupations);
  synth_cmd->add_option("--records", synth.spec.records);
  synth_cmd->add_option("--rho", synth.spec.rho)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--words-per-occupation", synth.spec.words_per_occupation);
  synth_cmd->add_option("--content-tokens", synth.spec.content_tokens);
  synth_cmd->add_option("--marker-tokens", synth.spec.marker_tokens);
  synth_cmd->add_option("--marker-words", synth.spec.marker_words);
  synth_cmd->add_option("--confusion", synth.spec.confusion)->check(CLI::Range(0.0, 1.0));

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Print bias metric tables");
  report_cmd->add_flag("--inbias", report.inbias, "Occupation-pair intrinsic bias");
  report_cmd->add_flag("--xscore", report.xscore, "Cross-language transfer matrix");
  report_cmd->add_flag("--exbias", report.exbias, "Classifier gender gap");
  report_cmd->add_option("--lexicon", report.lexicon, "Lexicon JSON");
  report_cmd->add_option("--lang", report.lang, "Language tag of the embeddings");
  report_cmd->add_option("--before,--embedding", report.before, "Original embedding");
  report_cmd->add_option("--after", report.after, "Debiased embedding, repeatable");
  report_cmd->add_option("--label", report.after_labels, "Column label per --after");
  report_cmd->add_option("--languages", report.languages, "Languages to score")
      ->delimiter(',');
  report_cmd->add_option("--seed", report.seed, "Pair split seed (match debias)");
  report_cmd->add_option("--train-count", report.train_count);
  report_cmd->add_flag("--static-seeds", report.static_seeds,
                       "Use the lexicon seed words instead of held-out pairs");
  report_cmd->add_option("--epsilon", report.epsilon, "Cross score projection guard");
  report_cmd->add_option("--corpus", report.corpus, "Bio corpus TSV");
  report_cmd->add_option("--min-count", report.min_count, "Minimum records per occupation");
  report_cmd->add_option("--epochs", report.epochs);
  report_cmd->add_option("--learning-rate", report.learning_rate, "<= 0 picks automatically");
  report_cmd->add_option("--before-result", report.before_result, "Saved extrinsic JSON");
  report_cmd->add_option("--after-result", report.after_result, "Saved extrinsic JSON");
  report_cmd->add_option("--emb-label", report.label, "Emb column text for --exbias");
  report_cmd->add_option("--json-out", report.json_out, "Also write JSON");
  report_cmd->add_option("--table-out", report.table_out, "Also write the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::string cmdline = command_line(argc, argv);
  try {
    if (*align_cmd) return run_align(align, cmdline);
    if (*merge_cmd) return run_merge(merge, cmdline);
    if (*debias_cmd) return run_debias(debias, cmdline);
    if (*synth_cmd) return run_synth(synth, cmdline);
    if (*report_cmd) return run_report(report, cmdline);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace
}  // namespace lpdebias

int main(int argc, char** argv) { return lpdebias::dispatch(argc, argv); }
