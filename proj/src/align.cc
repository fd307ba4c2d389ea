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

#include "lpdebias/align.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lpdebias {

BilingualDictionary parse_dictionary(std::string_view text,
                                     std::string source_tag,
                                     std::string target_tag,
                                     Diagnostics* diag) {
  BilingualDictionary dict{{}, std::move(source_tag), std::move(target_tag)};
  std::set<std::pair<std::string, std::string>> seen;
  char sep = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (sep == 0) sep = line.find('\t') != std::string_view::npos ? '\t' : ' ';
    auto fields = split(line, sep);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ValidationError("dictionary line " + std::to_string(line_no) +
                            ": expected 'source" +
                            (sep == '\t' ? "<TAB>" : " ") + "target', got " +
                            std::to_string(fields.size()) + " fields");
    }
    if (!seen.emplace(fields[0], fields[1]).second) {
      warn(diag, "dictionary line " + std::to_string(line_no) +
                     ": duplicate pair (" + fields[0] + ", " + fields[1] +
                     ") dropped");
      continue;
    }
    dict.entries.emplace_back(std::move(fields[0]), std::move(fields[1]));
  }
  if (dict.entries.empty()) throw ValidationError("dictionary is empty");
  return dict;
}

BilingualDictionary load_dictionary(const std::filesystem::path& path,
                                    std::string source_tag,
                                    std::string target_tag,
                                    Diagnostics* diag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dictionary(buf.str(), std::move(source_tag),
                            std::move(target_tag), diag);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

OrthogonalMap OrthogonalMap::transpose() const {
  return {matrix.transpose(), target_tag, source_tag, fit_pair_count};
}

double OrthogonalMap::orthogonality_error() const {
  const auto n = matrix.cols();
  return (matrix.transpose() * matrix - Matrix::Identity(n, n)).norm();
}

Matrix procrustes_solve(const Matrix& source, const Matrix& target) {
  // With rows as samples, X R ~ Y is solved by R = U V^T where
  // X^T Y = U S V^T. The column-vector map is W = R^T.
  Eigen::MatrixXd cross = source.transpose() * target;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
  return rotation.transpose();
}

OrthogonalMap procrustes_fit(const EmbeddingSpace& source,
                             const EmbeddingSpace& target,
                             const BilingualDictionary& dict,
                             Diagnostics* diag) {
  if (source.dim() != target.dim()) {
    throw ValidationError("dimension mismatch: source has d=" +
                          std::to_string(source.dim()) + ", target has d=" +
                          std::to_string(target.dim()));
  }
  const std::size_t d = source.dim();
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  std::size_t dropped = 0;
  for (const auto& [s, t] : dict.entries) {
    auto si = source.resolve(dict.source_tag, s);
    if (!si) si = source.index_of(s);
    auto ti = target.resolve(dict.target_tag, t);
    if (!ti) ti = target.index_of(t);
    if (si && ti) {
      rows.emplace_back(*si, *ti);
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) {
    warn(diag, std::to_string(dropped) +
                   " dictionary pairs dropped (word missing on one side)");
  }
  if (rows.empty()) {
    throw ValidationError("no dictionary pair resolves in both vocabularies");
  }
  if (rows.size() < d) {
    warn(diag, "only " + std::to_string(rows.size()) +
                   " resolvable dictionary pairs for dimension " +
                   std::to_string(d) + "; the map is underdetermined");
  }
  if (!source.normalized() || !target.normalized()) {
    warn(diag, "procrustes fit on spaces that are not normalized");
  }
  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = source.row(rows[i].first).transpose();
    y.row(static_cast<Eigen::Index>(i)) = target.row(rows[i].second).transpose();
  }
  OrthogonalMap map{procrustes_solve(x, y), dict.source_tag, dict.target_tag,
                    rows.size()};
  if (map.orthogonality_error() > 1e-6) {
    throw std::logic_error("procrustes map is not orthogonal");
  }
  return map;
}

EmbeddingSpace apply_map(const OrthogonalMap& map, const EmbeddingSpace& space) {
  if (static_cast<std::size_t>(map.matrix.cols()) != space.dim()) {
    throw ValidationError("dimension mismatch: map is " +
                          std::to_string(map.matrix.cols()) +
                          "-dimensional, space has d=" +
                          std::to_string(space.dim()));
  }
  // Rows are x^T, so x^T W^T gives (W x)^T.
  Matrix mapped = space.matrix() * map.matrix.transpose();
  if (space.normalized()) {
    // Orthogonal maps keep unit norms up to rounding; snap them back so the
    // normalized flag stays truthful.
    for (Eigen::Index i = 0; i < mapped.rows(); ++i) {
      mapped.row(i).normalize();
    }
  }
  return EmbeddingSpace(space.language_tag(), space.vocab(), std::move(mapped),
                        space.normalized());
}

EmbeddingSpace merge_spaces(const EmbeddingSpace& aligned_source,
                            const EmbeddingSpace& target) {
  if (aligned_source.dim() != target.dim()) {
    throw ValidationError("dimension mismatch: source has d=" +
                          std::to_string(aligned_source.dim()) +
                          ", target has d=" + std::to_string(target.dim()));
  }
  if (aligned_source.language_tag().empty() || target.language_tag().empty()) {
    throw ValidationError("merging requires language-tagged spaces");
  }
  auto langs = aligned_source.languages();
  for (const auto& l : target.languages()) {
    if (std::find(langs.begin(), langs.end(), l) != langs.end()) {
      throw ValidationError("language '" + l + "' appears in both spaces");
    }
    langs.push_back(l);
  }
  std::vector<std::string> vocab;
  vocab.reserve(aligned_source.size() + target.size());
  auto add_words = [&vocab](const EmbeddingSpace& s) {
    for (const auto& w : s.vocab()) {
      vocab.push_back(s.multilingual() ? w : tagged_word(s.language_tag(), w));
    }
  };
  add_words(aligned_source);
  add_words(target);
  Matrix m(static_cast<Eigen::Index>(vocab.size()),
           static_cast<Eigen::Index>(target.dim()));
  m.topRows(aligned_source.matrix().rows()) = aligned_source.matrix();
  m.bottomRows(target.matrix().rows()) = target.matrix();
  return EmbeddingSpace(join(langs, std::string(1, kLanguageSeparator)),
                        std::move(vocab), std::move(m),
                        aligned_source.normalized() && target.normalized());
}

}  // namespace lpdebias
