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

// Python bindings. Matrices cross the boundary as float64 numpy arrays;
// JSON documents become plain dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lpdebias/align.hpp"
#include "lpdebias/common.hpp"
#include "lpdebias/debias.hpp"
#include "lpdebias/embedding.hpp"
#include "lpdebias/extrinsic.hpp"
#include "lpdebias/intrinsic.hpp"
#include "lpdebias/lexicon.hpp"
#include "lpdebias/report.hpp"
#include "lpdebias/subspace.hpp"

namespace py = pybind11;
using namespace lpdebias;

namespace {

py::object to_py(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json from_py(const py::handle& obj) {
  return nlohmann::json::parse(
      py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

// Runs `fn` with a fresh sink and forwards its warnings to the warnings
// module once the GIL is back.
template <typename Fn>
auto with_warnings(Fn&& fn) {
  Diagnostics diag;
  auto flush = [&] {
    for (const auto& w : diag.warnings()) {
      PyErr_WarnEx(PyExc_RuntimeWarning, w.c_str(), 2);
    }
  };
  try {
    auto result = fn(&diag);
    flush();
    return result;
  } catch (...) {
    flush();
    throw;
  }
}

std::map<std::string, PairSplit> splits_for(const GenderLexicon& lexicon,
                                            const std::vector<std::string>& langs,
                                            std::size_t train_count, std::uint64_t seed,
                                            Diagnostics* diag) {
  std::map<std::string, PairSplit> splits;
  for (const auto& lang : langs) splits[lang] = split_pairs(lexicon, lang, train_count, seed, diag);
  return splits;
}

std::vector<std::string> languages_or_present(const EmbeddingSpace& space,
                                              const GenderLexicon& lexicon,
                                              std::vector<std::string> langs) {
  if (!langs.empty()) return langs;
  langs = present_languages(space, lexicon);
  if (langs.empty()) {
    throw ValidationError("no lexicon language matches the embedding tag '" +
                          space.language_tag() + "'");
  }
  return langs;
}

py::tuple pair_tuple(const GenderPair& p) {
  return py::make_tuple(p.male_word, p.female_word, p.language);
}

py::dict record_dict(const BioRecord& r) {
  py::dict d;
  d["gender"] = r.gender == Gender::kMale ? "M" : "F";
  d["occupation"] = r.occupation;
  d["tokens"] = r.tokens;
  return d;
}

BioRecord record_from(const py::handle& obj) {
  BioRecord r;
  py::dict d = py::reinterpret_borrow<py::dict>(obj);
  std::string g = d["gender"].cast<std::string>();
  if (g != "M" && g != "F") throw ValidationError("gender must be 'M' or 'F', got '" + g + "'");
  r.gender = g == "M" ? Gender::kMale : Gender::kFemale;
  r.occupation = d["occupation"].cast<std::string>();
  r.tokens = d["tokens"].cast<std::vector<std::string>>();
  return r;
}

std::vector<BioRecord> records_from(const py::iterable& items) {
  std::vector<BioRecord> out;
  for (auto item : items) out.push_back(record_from(item));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multilingual embedding debiasing and bias metrics.";
  m.attr("__version__") = kToolVersion;

  auto validation = py::register_exception<ValidationError>(m, "ValidationError",
                                                              PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  (void)validation;

  py::class_<EmbeddingSpace>(m, "EmbeddingSpace")
      .def(py::init([](std::string tag, std::vector<std::string> words, const Matrix& vectors,
                       bool normalized) {
             return EmbeddingSpace(std::move(tag), std::move(words), vectors, normalized);
           }),
           py::arg("tag"), py::arg("words"), py::arg("vectors"), py::arg("normalized") = false)
      .def_property_readonly("tag", &EmbeddingSpace::language_tag)
      .def_property_readonly("words", &EmbeddingSpace::vocab)
      .def_property_readonly("vectors", [](const EmbeddingSpace& s) { return s.matrix(); })
      .def_property_readonly("dim", &EmbeddingSpace::dim)
      .def_property_readonly("normalized", &EmbeddingSpace::normalized)
      .def_property_readonly("languages", &EmbeddingSpace::languages)
      .def("fingerprint", &EmbeddingSpace::fingerprint)
      .def("index", [](const EmbeddingSpace& s, const std::string& w) { return s.index_of(w); })
      .def("vector",
           [](const EmbeddingSpace& s, const std::string& w) -> Vector {
             auto i = s.index_of(w);
             if (!i) throw py::key_error(w);
             return s.row(*i);
           })
      .def("__len__", &EmbeddingSpace::size)
      .def("__contains__",
           [](const EmbeddingSpace& s, const std::string& w) { return s.index_of(w).has_value(); })
      .def("__repr__", [](const EmbeddingSpace& s) {
        return "EmbeddingSpace(tag='" + s.language_tag() + "', size=" +
               std::to_string(s.size()) + ", dim=" + std::to_string(s.dim()) + ")";
      });

  m.def("load_vec", &load_vec, py::arg("path"), py::arg("tag"));
  m.def("parse_vec", [](const std::string& text, std::string tag) {
    return parse_vec(text, std::move(tag));
  }, py::arg("text"), py::arg("tag"));
  m.def("normalize", &normalize, py::arg("space"));
  m.def("save_vec", &save_vec, py::arg("space"), py::arg("path"), py::arg("precision") = 8);
  m.def("format_vec", &format_vec, py::arg("space"), py::arg("precision") = 8);

  py::class_<GenderLexicon>(m, "Lexicon")
      .def_static("from_dict", [](const py::dict& d) { return lexicon_from_json(from_py(d)); })
      .def("to_dict", [](const GenderLexicon& l) { return to_py(lexicon_to_json(l)); })
      .def_property_readonly("languages", &GenderLexicon::tags)
      .def("__contains__", &GenderLexicon::has)
      .def("pairs", [](const GenderLexicon& l, const std::string& lang) {
        py::list out;
        for (const auto& p : l.at(lang).pairs) out.append(pair_tuple(p));
        return out;
      }, py::arg("language"))
      .def("neutral_words", [](const GenderLexicon& l, const std::string& lang) {
        return l.at(lang).neutral.all();
      }, py::arg("language"));
  m.def("load_lexicon", &load_lexicon, py::arg("path"));

  m.def("split_pairs", [](const GenderLexicon& lex, const std::string& lang,
                          std::size_t train_count, std::uint64_t seed) {
    PairSplit s = with_warnings([&](Diagnostics* d) {
      return split_pairs(lex, lang, train_count, seed, d);
    });
    py::list train, test;
    for (const auto& p : s.train) train.append(pair_tuple(p));
    for (const auto& p : s.test) test.append(pair_tuple(p));
    return py::make_tuple(train, test);
  }, py::arg("lexicon"), py::arg("language"), py::arg("train_count") = kDefaultTrainPairs,
     py::arg("seed") = 0);

  m.def("procrustes", &procrustes_solve, py::arg("source"), py::arg("target"),
        "Orthogonal W minimizing ||W x_i - y_i|| over paired rows.");

  m.def("align", [](const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                    const std::filesystem::path& dictionary) {
    return with_warnings([&](Diagnostics* d) {
      auto dict = load_dictionary(dictionary, src.language_tag(), tgt.language_tag(), d);
      OrthogonalMap map = procrustes_fit(src, tgt, dict, d);
      EmbeddingSpace aligned = apply_map(map, src);
      return py::make_tuple(map.matrix, aligned, merge_spaces(aligned, tgt));
    });
  }, py::arg("source"), py::arg("target"), py::arg("dictionary"),
     "Returns (W, aligned source, merged space).");
  m.def("merge", &merge_spaces, py::arg("aligned_source"), py::arg("target"));

  py::class_<BiasSubspace>(m, "BiasSubspace")
      .def_readonly("basis", &BiasSubspace::basis)
      .def_readonly("scores", &BiasSubspace::scores)
      .def_readonly("orientation", &BiasSubspace::orientation_labels)
      .def_readonly("centered", &BiasSubspace::centered)
      .def_property_readonly("method",
                             [](const BiasSubspace& s) { return to_string(s.method); })
      .def_property_readonly("k", &BiasSubspace::k)
      .def("to_dict", [](const BiasSubspace& s) { return to_py(subspace_to_json(s)); })
      .def_static("from_dict", [](const py::dict& d) { return subspace_from_json(from_py(d)); });

  m.def("pca", [](const Matrix& rows, std::size_t k, bool center) {
    DifferenceMatrix q;
    q.rows = rows;
    q.row_languages.assign(static_cast<std::size_t>(rows.rows()), "");
    return pca_basis(q, k, center);
  }, py::arg("rows"), py::arg("k"), py::arg("center") = false);
  m.def("ppa", [](const Matrix& rows, std::size_t k, std::uint64_t seed, std::size_t starts) {
    DifferenceMatrix q;
    q.rows = rows;
    q.row_languages.assign(static_cast<std::size_t>(rows.rows()), "");
    PpaOptions opts;
    opts.seed = seed;
    opts.starts = starts;
    return ppa_basis(q, k, opts);
  }, py::arg("rows"), py::arg("k"), py::arg("seed") = 0, py::arg("starts") = 32);

  m.def("project_out", [](const EmbeddingSpace& space, const BiasSubspace& sub,
                          bool renormalize) {
    return with_warnings([&](Diagnostics* d) {
      return debias_space(space, sub, {Scope::kAllWords, renormalize}, {}, d);
    });
  }, py::arg("space"), py::arg("subspace"), py::arg("renormalize") = false);

  m.def("debias", [](const EmbeddingSpace& space, const GenderLexicon& lexicon,
                     const std::string& variant, std::size_t k, const std::string& method,
                     const std::string& scope, std::uint64_t seed, std::size_t train_count,
                     const std::string& mono_language, bool center, bool renormalize) {
    DebiasConfig config;
    config.variant = parse_variant(variant);
    config.k = k;
    config.method = parse_method(method);
    config.scope = parse_scope(scope);
    config.seed = seed;
    config.ppa.seed = seed;
    config.mono_language = mono_language;
    config.center = center;
    config.renormalize_after = renormalize;
    return with_warnings([&](Diagnostics* d) {
      auto langs = languages_or_present(space, lexicon, {});
      VariantResult r =
          run_variant(space, lexicon, config, splits_for(lexicon, langs, train_count, seed, d), d);
      return py::make_tuple(r.space, r.subspace, to_py(r.provenance));
    });
  }, py::arg("space"), py::arg("lexicon"), py::arg("variant") = "mono",
     py::arg("k") = kDefaultK, py::arg("method") = "pca", py::arg("scope") = "all",
     py::arg("seed") = 0, py::arg("train_count") = kDefaultTrainPairs,
     py::arg("mono_language") = "", py::arg("center") = false,
     py::arg("renormalize") = false,
     "Returns (debiased space, subspace, provenance dict).");

  m.def("inbias", [](const EmbeddingSpace& space, const GenderLexicon& lexicon,
                     std::vector<std::string> languages, bool static_seeds,
                     std::uint64_t seed, std::size_t train_count) {
    return with_warnings([&](Diagnostics* d) {
      auto langs = languages_or_present(space, lexicon, std::move(languages));
      SeedSets seeds = static_seeds ? seeds_from_lexicon(lexicon, langs)
                                    : seeds_from_test_pairs(
                                          splits_for(lexicon, langs, train_count, seed, d), langs);
      return to_py(to_json(inbias(space, lexicon, langs, seeds, d)));
    });
  }, py::arg("space"), py::arg("lexicon"), py::arg("languages") = std::vector<std::string>{},
     py::arg("static_seeds") = false, py::arg("seed") = 0,
     py::arg("train_count") = kDefaultTrainPairs);

  m.def("cross_scores", [](const EmbeddingSpace& space, const GenderLexicon& lexicon,
                           std::vector<std::string> languages, double epsilon) {
    return with_warnings([&](Diagnostics* d) {
      auto langs = languages_or_present(space, lexicon, std::move(languages));
      CrossScoreMatrix cs = cross_score_matrix(space, lexicon, langs, epsilon, d);
      return py::make_tuple(cs.values, to_py(to_json(cs)));
    });
  }, py::arg("space"), py::arg("lexicon"), py::arg("languages") = std::vector<std::string>{},
     py::arg("epsilon") = kDefaultCrossEpsilon,
     "Returns (matrix, report dict); failed cells are NaN.");

  m.def("gender_direction", [](const EmbeddingSpace& space, const GenderLexicon& lexicon,
                               const std::string& language) {
    return with_warnings([&](Diagnostics* d) {
      return gender_direction(space, lexicon.at(language).pairs, d);
    });
  }, py::arg("space"), py::arg("lexicon"), py::arg("language"));

  m.def("synthesize_corpus", [](const EmbeddingSpace& space, const Vector& direction,
                                std::uint64_t seed, std::size_t occupations,
                                std::size_t records, double rho) {
    SynthSpec spec;
    spec.gender_direction = direction;
    spec.occupations = occupations;
    spec.records = records;
    spec.rho = rho;
    py::list out;
    for (const auto& r : synthesize_corpus(space, spec, seed)) out.append(record_dict(r));
    return out;
  }, py::arg("space"), py::arg("direction"), py::arg("seed") = 0,
     py::arg("occupations") = 4, py::arg("records") = 2000, py::arg("rho") = 1.0);

  m.def("load_corpus", [](const std::filesystem::path& path, std::size_t min_count) {
    return with_warnings([&](Diagnostics* d) {
      py::list out;
      for (const auto& r : load_corpus(path, min_count, d)) out.append(record_dict(r));
      return out;
    });
  }, py::arg("path"), py::arg("min_count") = kDefaultMinOccupationCount);

  m.def("extrinsic", [](const EmbeddingSpace& space, const py::iterable& records,
                        std::uint64_t seed, std::size_t epochs, double learning_rate,
                        const std::string& language) {
    auto recs = records_from(records);
    ClassifierHyper hyper;
    hyper.seed = seed;
    hyper.epochs = epochs;
    hyper.learning_rate = learning_rate;
    hyper.language = language;
    auto shared = std::make_shared<const EmbeddingSpace>(space);
    return with_warnings([&](Diagnostics* d) {
      return to_py(to_json(run_extrinsic(shared, recs, hyper, d)));
    });
  }, py::arg("space"), py::arg("records"), py::arg("seed") = 0, py::arg("epochs") = 300,
     py::arg("learning_rate") = 0.0, py::arg("language") = "",
     "Trains on a stratified split and returns per-occupation accuracy gaps.");
}
