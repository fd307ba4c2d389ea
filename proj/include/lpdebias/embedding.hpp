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

// Word-embedding spaces: the fasttext text format, normalization and
// vocabulary lookups.
//
// A space carries a language tag. Multilingual (merged) spaces use a tag of
// the form "en+hi" and store every word as "<lang>:<word>"; resolve() hides
// that convention from callers.

#ifndef LPDEBIAS_EMBEDDING_HPP_
#define LPDEBIAS_EMBEDDING_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpdebias/common.hpp"

namespace lpdebias {

inline constexpr char kLanguageSeparator = '+';
inline constexpr char kWordPrefixSeparator = ':';

// "<lang>:<word>", the vocabulary entry of `word` inside a merged space.
std::string tagged_word(std::string_view language, std::string_view word);

struct WordVector {
  std::string word;
  Vector vector;
};

class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  // Throws ValidationError on duplicate words, non-finite entries, a row
  // count that differs from vocab, or (when normalized) non-unit rows.
  EmbeddingSpace(std::string language_tag, std::vector<std::string> vocab,
                 Matrix matrix, bool normalized = false);

  const std::string& language_tag() const { return language_tag_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  bool normalized() const { return normalized_; }

  // Languages covered by this space, in tag order.
  std::vector<std::string> languages() const;
  bool multilingual() const;

  std::optional<std::size_t> index_of(std::string_view word) const;
  // Looks up `word` of `language`, applying the merged-space prefix when
  // needed. Returns nullopt if the language is not part of this space.
  std::optional<std::size_t> resolve(std::string_view language,
                                     std::string_view word) const;

  Eigen::Ref<const Vector> row(std::size_t i) const {
    return matrix_.row(static_cast<Eigen::Index>(i)).transpose();
  }

  // Hash of the tag, the vocabulary and the exact bit pattern of the matrix.
  std::string fingerprint() const;

 private:
  std::string language_tag_;
  std::vector<std::string> vocab_;
  Matrix matrix_;
  bool normalized_ = false;
  std::unordered_map<std::string, std::size_t> index_;
};

// Reads the fasttext .vec text format: a "<count> <dim>" header followed by
// one "<word> <x_1> ... <x_dim>" line per word. Errors carry 1-based line
// numbers.
EmbeddingSpace load_vec(const std::filesystem::path& path,
                        std::string language_tag);
EmbeddingSpace parse_vec(std::string_view text, std::string language_tag);

// Scales every row to unit norm. A zero row is an error naming the word.
// Spaces already flagged as normalized are returned unchanged.
EmbeddingSpace normalize(const EmbeddingSpace& space);

// Writes the .vec format. Every coordinate is within 0.5 * 10^-precision of
// its stored value; precision >= 17 round-trips bit-exactly.
void save_vec(const EmbeddingSpace& space, const std::filesystem::path& path,
              int precision = 8);
std::string format_vec(const EmbeddingSpace& space, int precision = 8);

struct LookupResult {
  std::vector<WordVector> found;
  std::vector<std::string> missing;
};

// Order-preserving partition of `words` into found vectors and missing words.
LookupResult lookup(const EmbeddingSpace& space,
                    std::span<const std::string> words);

}  // namespace lpdebias

#endif  // LPDEBIAS_EMBEDDING_HPP_
