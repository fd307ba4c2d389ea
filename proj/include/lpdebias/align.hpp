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

// Orthogonal (Procrustes) alignment of one embedding space into another
// using a bilingual dictionary, and merging of aligned spaces.

#ifndef LPDEBIAS_ALIGN_HPP_
#define LPDEBIAS_ALIGN_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lpdebias/common.hpp"
#include "lpdebias/embedding.hpp"

namespace lpdebias {

struct BilingualDictionary {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string source_tag;
  std::string target_tag;
};

// Lines are "source<TAB>target" or "source target"; the separator is
// detected from the first non-empty line. Duplicate entries are dropped with
// a warning.
BilingualDictionary parse_dictionary(std::string_view text,
                                     std::string source_tag,
                                     std::string target_tag,
                                     Diagnostics* diag = nullptr);
BilingualDictionary load_dictionary(const std::filesystem::path& path,
                                    std::string source_tag,
                                    std::string target_tag,
                                    Diagnostics* diag = nullptr);

// Column-vector convention: a source row x maps to matrix * x.
struct OrthogonalMap {
  Matrix matrix;
  std::string source_tag;
  std::string target_tag;
  std::size_t fit_pair_count = 0;

  OrthogonalMap transpose() const;
  // ||M^T M - I||_F.
  double orthogonality_error() const;
};

// Orthogonal W minimizing sum_i ||W x_i - y_i||^2 over dictionary pairs
// resolvable in both vocabularies. Entries with an OOV side are dropped and
// counted in the diagnostics.
OrthogonalMap procrustes_fit(const EmbeddingSpace& source,
                             const EmbeddingSpace& target,
                             const BilingualDictionary& dict,
                             Diagnostics* diag = nullptr);

// Same fit from already paired rows (row i of `source` pairs with row i of
// `target`).
Matrix procrustes_solve(const Matrix& source, const Matrix& target);

EmbeddingSpace apply_map(const OrthogonalMap& map, const EmbeddingSpace& space);

// Union of two spaces in a shared vector space. Monolingual inputs get
// their words prefixed with "<tag>:"; already-merged inputs keep theirs.
// The result's tag joins the input languages with '+'.
EmbeddingSpace merge_spaces(const EmbeddingSpace& aligned_source,
                            const EmbeddingSpace& target);

}  // namespace lpdebias

#endif  // LPDEBIAS_ALIGN_HPP_
