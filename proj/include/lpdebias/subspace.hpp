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

// Gender subspaces built from gender-defining pair difference vectors.
//
// Two constructions are provided: PCA (top right-singular vectors of the
// stacked differences) and PPA, a deflationary projection pursuit that
// maximizes the excess kurtosis of the projected differences. Multilingual
// subspaces can label each basis vector with the language whose mean
// difference vector it is most aligned with, and select an equal number of
// vectors per language.

#ifndef LPDEBIAS_SUBSPACE_HPP_
#define LPDEBIAS_SUBSPACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/common.hpp"
#include "lpdebias/embedding.hpp"
#include "lpdebias/lexicon.hpp"

namespace lpdebias {

// Row i is vec(male_i) - vec(female_i).
struct DifferenceMatrix {
  Matrix rows;
  std::vector<std::string> row_languages;
  std::vector<GenderPair> pairs;

  std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows.cols()); }
};

enum class SubspaceMethod { kPca, kPpa };

std::string to_string(SubspaceMethod method);
SubspaceMethod parse_method(const std::string& name);

struct BiasSubspace {
  // k x d, one orthonormal basis vector per row.
  Matrix basis;
  SubspaceMethod method = SubspaceMethod::kPca;
  // Explained-variance fraction (PCA) or excess kurtosis (PPA).
  std::vector<double> scores;
  // Empty until language_orientation() runs.
  std::vector<std::string> orientation_labels;
  bool centered = false;
  std::uint64_t seed = 0;
  std::string pairs_fingerprint;
  std::string source_fingerprint;

  std::size_t k() const { return static_cast<std::size_t>(basis.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
  Eigen::Ref<const Vector> vector(std::size_t j) const {
    return basis.row(static_cast<Eigen::Index>(j)).transpose();
  }
  // max |<b_i, b_j> - delta_ij|.
  double orthonormality_error() const;
};

inline constexpr double kOrthonormalTolerance = 1e-8;
inline constexpr double kRankTolerance = 1e-10;

// Pairs with an OOV word or identical vectors are skipped with a warning.
// Throws ValidationError when no pair survives.
DifferenceMatrix difference_matrix(const EmbeddingSpace& space,
                                   const std::vector<GenderPair>& pairs,
                                   Diagnostics* diag = nullptr);

// Numerical rank of the (optionally centered) difference matrix: singular
// values below 1e-10 times the largest count as zero.
std::size_t difference_rank(const DifferenceMatrix& q, bool center);

BiasSubspace pca_basis(const DifferenceMatrix& q, std::size_t k,
                       bool center = false);

struct PpaOptions {
  std::uint64_t seed = 0;
  std::size_t starts = 32;
  std::size_t max_iterations = 1000;
  double gradient_tolerance = 1e-9;
};

BiasSubspace ppa_basis(const DifferenceMatrix& q, std::size_t k,
                       const PpaOptions& options = {});

// Excess kurtosis of a sample, m4 / m2^2 - 3 with mean-centered population
// moments.
double excess_kurtosis(std::span<const double> values);

// Labels every basis vector with argmax_l |cos(b, mean of rows of l)|.
// Ties go to the earliest language in `languages`.
BiasSubspace language_orientation(const BiasSubspace& subspace,
                                  const DifferenceMatrix& q,
                                  const std::vector<std::string>& languages,
                                  Diagnostics* diag = nullptr);

// Keeps the k/L highest-ranked pool vectors for each of the L languages,
// preserving pool order.
BiasSubspace select_equal_rep(const BiasSubspace& pool, std::size_t k,
                              const std::vector<std::string>& languages);

// Modified Gram-Schmidt over the rows, in order.
Matrix orthonormalize_rows(const Matrix& rows);

// Flips v so its first non-negligible coordinate is positive.
void canonicalize_sign(Eigen::Ref<Vector> v);

nlohmann::json subspace_to_json(const BiasSubspace& subspace);
BiasSubspace subspace_from_json(const nlohmann::json& doc);

}  // namespace lpdebias

#endif  // LPDEBIAS_SUBSPACE_HPP_
