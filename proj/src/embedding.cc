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

#include "lpdebias/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lpdebias {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

// Splits a line on runs of whitespace.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string at_line(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string tagged_word(std::string_view language, std::string_view word) {
  std::string out;
  out.reserve(language.size() + 1 + word.size());
  out.append(language);
  out.push_back(kWordPrefixSeparator);
  out.append(word);
  return out;
}

EmbeddingSpace::EmbeddingSpace(std::string language_tag,
                               std::vector<std::string> vocab, Matrix matrix,
                               bool normalized)
    : language_tag_(std::move(language_tag)),
      vocab_(std::move(vocab)),
      matrix_(std::move(matrix)),
      normalized_(normalized) {
  if (static_cast<std::size_t>(matrix_.rows()) != vocab_.size()) {
    throw ValidationError("embedding has " + std::to_string(vocab_.size()) +
                          " words but " + std::to_string(matrix_.rows()) +
                          " rows");
  }
  if (!vocab_.empty() && matrix_.cols() < 1) {
    throw ValidationError("embedding dimension must be positive");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw ValidationError("duplicate word '" + vocab_[i] + "'");
    }
  }
  if (!matrix_.allFinite()) {
    throw ValidationError("embedding contains non-finite values");
  }
  if (normalized_) {
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
      if (std::abs(matrix_.row(i).norm() - 1.0) > 1e-9) {
        throw ValidationError("row for '" + vocab_[i] +
                              "' is not unit norm in a normalized space");
      }
    }
  }
}

std::vector<std::string> EmbeddingSpace::languages() const {
  return split(language_tag_, kLanguageSeparator);
}

bool EmbeddingSpace::multilingual() const {
  return language_tag_.find(kLanguageSeparator) != std::string::npos;
}

std::optional<std::size_t> EmbeddingSpace::index_of(
    std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> EmbeddingSpace::resolve(
    std::string_view language, std::string_view word) const {
  if (multilingual()) {
    auto langs = languages();
    if (std::find(langs.begin(), langs.end(), language) == langs.end()) {
      return std::nullopt;
    }
    return index_of(tagged_word(language, word));
  }
  if (!language_tag_.empty() && language_tag_ != language) return std::nullopt;
  return index_of(word);
}

std::string EmbeddingSpace::fingerprint() const {
  Fingerprint fp;
  fp.add(language_tag_);
  fp.add(static_cast<std::uint64_t>(vocab_.size()));
  fp.add(static_cast<std::uint64_t>(matrix_.cols()));
  for (const auto& w : vocab_) {
    fp.add(w);
    fp.add(std::string_view("\n"));
  }
  const double* data = matrix_.data();
  for (Eigen::Index i = 0; i < matrix_.size(); ++i) fp.add(data[i]);
  return fp.hex();
}

EmbeddingSpace parse_vec(std::string_view text, std::string language_tag) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ValidationError("line 1: missing header");
  auto header = tokenize(line);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], count) ||
      !parse_number(header[1], dim) || dim == 0) {
    throw ValidationError(at_line(1, "expected header '<count> <dim>'"));
  }

  std::vector<std::string> vocab;
  vocab.reserve(count);
  std::vector<double> values;
  values.reserve(count * dim);
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(count);

  while (next_line(line)) {
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (vocab.size() == count) {
      throw ValidationError(at_line(
          line_no, "more rows than the header count " + std::to_string(count)));
    }
    if (tokens.size() != dim + 1) {
      throw ValidationError(
          at_line(line_no, "expected " + std::to_string(dim) +
                               " values, found " +
                               std::to_string(tokens.size() - 1)));
    }
    std::string word(tokens[0]);
    if (auto [it, inserted] = seen.emplace(word, line_no); !inserted) {
      throw ValidationError(at_line(line_no, "duplicate word '" + word +
                                                 "' (first seen at line " +
                                                 std::to_string(it->second) +
                                                 ")"));
    }
    for (std::size_t j = 1; j <= dim; ++j) {
      double v = 0.0;
      if (!parse_number(tokens[j], v)) {
        throw ValidationError(at_line(
            line_no, "cannot parse value '" + std::string(tokens[j]) + "'"));
      }
      if (!std::isfinite(v)) {
        throw ValidationError(at_line(line_no, "non-finite value for '" +
                                                   word + "'"));
      }
      values.push_back(v);
    }
    vocab.push_back(std::move(word));
  }
  if (vocab.size() != count) {
    throw ValidationError("header declares " + std::to_string(count) +
                          " words but the file has " +
                          std::to_string(vocab.size()));
  }

  Matrix matrix(static_cast<Eigen::Index>(count),
                static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), matrix.data());
  return EmbeddingSpace(std::move(language_tag), std::move(vocab),
                        std::move(matrix));
}

EmbeddingSpace load_vec(const std::filesystem::path& path,
                        std::string language_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  try {
    return parse_vec(buf.str(), std::move(language_tag));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

EmbeddingSpace normalize(const EmbeddingSpace& space) {
  if (space.normalized()) return space;
  Matrix m = space.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double n = m.row(i).norm();
    if (n == 0.0) {
      throw ValidationError("cannot normalize zero vector for '" +
                            space.vocab()[i] + "'");
    }
    m.row(i) /= n;
  }
  return EmbeddingSpace(space.language_tag(), space.vocab(), std::move(m),
                        true);
}

std::string format_vec(const EmbeddingSpace& space, int precision) {
  if (precision < 1) throw ValidationError("precision must be >= 1");
  std::string out;
  out += std::to_string(space.size()) + " " + std::to_string(space.dim()) +
         "\n";
  char buf[64];
  const Matrix& m = space.matrix();
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space.vocab()[i];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(static_cast<Eigen::Index>(i), j);
      // Significant digits grow with the magnitude so the absolute error
      // stays below 0.5 * 10^-precision.
      int digits = precision;
      if (v != 0.0 && std::abs(v) >= 1.0) {
        digits += static_cast<int>(std::floor(std::log10(std::abs(v)))) + 1;
      }
      digits = std::min(digits, 17);
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                     std::chars_format::general, digits);
      out.push_back(' ');
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void save_vec(const EmbeddingSpace& space, const std::filesystem::path& path,
              int precision) {
  std::string text = format_vec(space, precision);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

LookupResult lookup(const EmbeddingSpace& space,
                    std::span<const std::string> words) {
  LookupResult result;
  for (const auto& w : words) {
    if (auto idx = space.index_of(w)) {
      result.found.push_back({w, Vector(space.row(*idx))});
    } else {
      result.missing.push_back(w);
    }
  }
  return result;
}

}  // namespace lpdebias
