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

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lpdebias/random.hpp"
#include "lpdebias/subspace.hpp"
#include "oracles.hpp"
#include "testing.hpp"

namespace lpdebias {
namespace {

using testing::space_of;
using testing::to_rows;

DifferenceMatrix rows_of(std::initializer_list<std::initializer_list<double>> rows,
                         std::vector<std::string> langs = {}) {
  DifferenceMatrix q;
  q.rows = space_of("x", [&] {
             std::vector<std::string> w;
             for (std::size_t i = 0; i < rows.size(); ++i) w.push_back("r" + std::to_string(i));
             return w;
           }(), rows).matrix();
  if (langs.empty()) langs.assign(rows.size(), "en");
  q.row_languages = std::move(langs);
  return q;
}

BiasSubspace axes(std::size_t k, std::size_t d, std::vector<std::string> labels = {}) {
  BiasSubspace s;
  s.basis = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))
                .topRows(static_cast<Eigen::Index>(k));
  s.orientation_labels = std::move(labels);
  return s;
}

TEST(DifferenceMatrix, SubtractsPairVectors) {
  EmbeddingSpace s = space_of("en", {"he", "she"}, {{1, 0}, {0, 1}});
  DifferenceMatrix q = difference_matrix(s, {{"he", "she", "en"}});
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q.rows(0, 0), 1.0);
  EXPECT_EQ(q.rows(0, 1), -1.0);
  EXPECT_EQ(q.row_languages[0], "en");
}

TEST(DifferenceMatrix, OovSkippedAllOovFails) {
  EmbeddingSpace s = space_of("en", {"he", "she", "man"}, {{1, 0}, {0, 1}, {1, 1}});
  Diagnostics diag;
  DifferenceMatrix q = difference_matrix(s, {{"he", "she", "en"}, {"man", "woman", "en"}}, &diag);
  EXPECT_EQ(q.size(), 1u);
  EXPECT_EQ(diag.warnings().size(), 1u);
  EXPECT_THROW(difference_matrix(s, {{"king", "queen", "en"}}), ValidationError);
}

TEST(DifferenceMatrix, IdenticalVectorsSkipped) {
  EmbeddingSpace s = space_of("en", {"a", "b", "c", "d"}, {{1, 0}, {1, 0}, {1, 0}, {0, 1}});
  Diagnostics diag;
  DifferenceMatrix q = difference_matrix(s, {{"a", "b", "en"}, {"c", "d", "en"}}, &diag);
  EXPECT_EQ(q.size(), 1u);
  EXPECT_EQ(diag.warnings().size(), 1u);
}

TEST(DifferenceMatrix, MergedSpaceUsesPairLanguage) {
  EmbeddingSpace s = space_of("en+hi", {"en:a", "en:b", "hi:a", "hi:b"},
                              {{1, 0}, {0, 1}, {2, 0}, {0, 2}});
  DifferenceMatrix q = difference_matrix(s, {{"a", "b", "hi"}, {"a", "b", "en"}});
  EXPECT_EQ(q.rows(0, 0), 2.0);
  EXPECT_EQ(q.row_languages, (std::vector<std::string>{"hi", "en"}));
}

TEST(Pca, RankOneRows) {
  BiasSubspace b = pca_basis(rows_of({{2, 0, 0}, {2, 0, 0}, {2, 0, 0}}), 1);
  EXPECT_NEAR(b.basis(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(b.basis.row(0).tail(2).norm(), 0.0, 1e-12);
}

TEST(Pca, ThreeByTwoMatchesClosedForm) {
  DifferenceMatrix q = rows_of({{1, 0}, {0, 1}, {1, 1}});
  BiasSubspace b = pca_basis(q, 2);
  // Q^T Q = [[2, 1], [1, 2]].
  auto [values, vectors] = oracle::eigen_2x2(2, 1, 2);
  EXPECT_DOUBLE_EQ(values[0], 3.0);
  EXPECT_LT(oracle::max_principal_sine(to_rows(b.basis), vectors), 1e-8);
  // Each direction on its own, too.
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(std::abs(b.basis.row(static_cast<Eigen::Index>(j)).dot(
                    Eigen::RowVector2d(vectors[j][0], vectors[j][1]))),
                1.0, 1e-12);
  }
  EXPECT_LT(b.orthonormality_error(), kOrthonormalTolerance);
  EXPECT_NEAR(b.scores[0], 0.75, 1e-12);
}

TEST(Pca, RankErrorReportsAchievableK) {
  DifferenceMatrix q = rows_of({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  try {
    pca_basis(q, 3);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("k <= 2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(difference_rank(q, false), 2u);
  EXPECT_THROW(pca_basis(q, 0), ValidationError);
}

TEST(Pca, RandomMatricesMatchJacobiOracle) {
  Rng rng(21);
  int checked = 0;
  while (checked < 40) {
    const auto n = static_cast<Eigen::Index>(2 + rng.below(9));
    const auto d = static_cast<Eigen::Index>(2 + rng.below(9));
    DifferenceMatrix q;
    q.rows.resize(n, d);
    for (Eigen::Index i = 0; i < q.rows.size(); ++i) q.rows.data()[i] = rng.normal();
    q.row_languages.assign(static_cast<std::size_t>(n), "en");
    auto [values, vectors] = oracle::jacobi_eigen(oracle::gram(to_rows(q.rows), d));
    const std::size_t k = 1 + rng.below(static_cast<std::uint64_t>(std::min(n, d)));
    // Singular values are sqrt of the eigenvalues; require a clean gap.
    const double gap = std::sqrt(std::max(0.0, values[k - 1])) -
                       (k < values.size() ? std::sqrt(std::max(0.0, values[k])) : 0.0);
    if (gap <= 1e-3) continue;
    BiasSubspace b = pca_basis(q, k);
    oracle::Mat top(vectors.begin(), vectors.begin() + static_cast<long>(k));
    EXPECT_LT(std::asin(std::min(1.0, oracle::max_principal_sine(to_rows(b.basis), top))), 1e-8);
    ++checked;
  }
}

TEST(Pca, CenteringRemovesMean) {
  DifferenceMatrix q = rows_of({{5, 1}, {5, -1}, {5, 2}, {5, -2}});
  BiasSubspace centered = pca_basis(q, 1, true);
  EXPECT_NEAR(std::abs(centered.basis(0, 1)), 1.0, 1e-12);
  EXPECT_TRUE(centered.centered);
  BiasSubspace raw = pca_basis(q, 1, false);
  EXPECT_NEAR(std::abs(raw.basis(0, 0)), 1.0, 1e-12);
}

TEST(Pca, SignCanonical) {
  BiasSubspace a = pca_basis(rows_of({{-3, 1}, {-3, 1}}), 1);
  BiasSubspace b = pca_basis(rows_of({{3, -1}, {3, -1}}), 1);
  EXPECT_GT(a.basis(0, 0), 0.0);
  EXPECT_EQ(a.basis, b.basis);
}

TEST(Ppa, HeavyTailedAxisMatchesGridOracle) {
  DifferenceMatrix q = rows_of({{-3, -1}, {-1, 1}, {1, -1}, {3, 1}, {10, 0}});
  BiasSubspace b = ppa_basis(q, 1, {.seed = 9});
  const auto [grid_best, grid_angle] = oracle::grid_best_kurtosis(to_rows(q.rows));
  const oracle::Vec dir = {b.basis(0, 0), b.basis(0, 1)};
  EXPECT_GE(oracle::excess_kurtosis(to_rows(q.rows), dir), grid_best - 1e-6);
  EXPECT_NEAR(b.scores[0], oracle::excess_kurtosis(to_rows(q.rows), dir), 1e-9);
  // The found axis sits where the grid says. For these five points that is
  // the 135 degree diagonal (n m4 / m2^2 = 2.5), not axis 1 (2.402).
  const double found_angle = std::atan2(b.basis(0, 1), b.basis(0, 0));
  double delta = std::fmod(std::abs(found_angle - grid_angle), std::numbers::pi);
  delta = std::min(delta, std::numbers::pi - delta);
  EXPECT_LT(delta, 1e-3);
  EXPECT_NEAR(grid_angle, 0.75 * std::numbers::pi, 1e-3);
}

TEST(Ppa, OneDimensionalForced) {
  BiasSubspace b = ppa_basis(rows_of({{1}, {-2}, {3}, {7}}), 1);
  EXPECT_EQ(std::abs(b.basis(0, 0)), 1.0);
}

TEST(Ppa, SampleSizeError) {
  EXPECT_THROW(ppa_basis(rows_of({{1, 0}, {0, 1}, {1, 1}}), 1), ValidationError);
}

TEST(Ppa, DeflatedBasisOrthonormalAndDeterministic) {
  Rng rng(4);
  DifferenceMatrix q;
  q.rows.resize(30, 5);
  for (Eigen::Index i = 0; i < q.rows.size(); ++i) {
    const double g = rng.normal();
    q.rows.data()[i] = g * g * g;  // heavy tails
  }
  q.row_languages.assign(30, "en");
  BiasSubspace a = ppa_basis(q, 3, {.seed = 5});
  BiasSubspace b = ppa_basis(q, 3, {.seed = 5});
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_LT(a.orthonormality_error(), kOrthonormalTolerance);
  EXPECT_EQ(a.scores.size(), 3u);
}

TEST(Kurtosis, KnownSamples) {
  // Two-point symmetric distribution: m4 / m2^2 = 1.
  std::vector<double> two = {-1, 1, -1, 1};
  EXPECT_NEAR(excess_kurtosis(two), -2.0, 1e-15);
}

TEST(Orientation, SelfMatchAndTies) {
  DifferenceMatrix q = rows_of({{1, 0, 0}, {1, 0, 0}, {0, 1, 1}, {0, 1, -1}},
                               {"en", "en", "hi", "hi"});
  // hi mean is (0, 1, 0).
  BiasSubspace s;
  s.basis = Matrix(2, 3);
  s.basis << 0, 1, 0, 0, 0, 1;
  Diagnostics diag;
  BiasSubspace out = language_orientation(s, q, {"en", "hi"}, &diag);
  EXPECT_EQ(out.orientation_labels[0], "hi");
  // (0, 0, 1) is orthogonal to both means: first language wins, warned.
  EXPECT_EQ(out.orientation_labels[1], "en");
  EXPECT_EQ(diag.warnings().size(), 1u);
}

TEST(Orientation, IdenticalMeansFollowOrder) {
  DifferenceMatrix q = rows_of({{1, 2}, {1, 2}}, {"te", "be"});
  BiasSubspace s = axes(1, 2);
  EXPECT_EQ(language_orientation(s, q, {"be", "te"}).orientation_labels[0], "be");
  EXPECT_EQ(language_orientation(s, q, {"te", "be"}).orientation_labels[0], "te");
}

TEST(Orientation, InvariantToRowRescaling) {
  DifferenceMatrix q = rows_of({{1, 0.2}, {0.3, 1}, {0.9, 0.1}}, {"en", "hi", "en"});
  BiasSubspace s;
  s.basis = Matrix(1, 2);
  s.basis << std::sqrt(0.5), std::sqrt(0.5);
  auto before = language_orientation(s, q, {"en", "hi"}).orientation_labels;
  q.rows.row(0) *= 7.0;
  q.rows.row(2) *= 7.0;
  q.rows.row(1) *= 0.01;
  EXPECT_EQ(language_orientation(s, q, {"en", "hi"}).orientation_labels, before);
}

TEST(EqualRep, PicksFirstPerLanguage) {
  BiasSubspace pool = axes(7, 7, {"be", "hi", "te", "hi", "en", "be", "te"});
  BiasSubspace out = select_equal_rep(pool, 4, {"en", "hi", "be", "te"});
  ASSERT_EQ(out.k(), 4u);
  // Pool positions 0, 1, 2, 4 in pool order.
  EXPECT_EQ(out.orientation_labels, (std::vector<std::string>{"be", "hi", "te", "en"}));
  for (Eigen::Index j : {0, 1, 2}) EXPECT_EQ(out.basis(j, j), 1.0);
  EXPECT_EQ(out.basis(3, 4), 1.0);
}

TEST(EqualRep, DivisibilityAndDeficit) {
  BiasSubspace pool = axes(7, 7, {"be", "hi", "te", "hi", "en", "be", "te"});
  EXPECT_THROW(select_equal_rep(pool, 5, {"en", "hi", "be", "te"}), ValidationError);
  BiasSubspace no_en = axes(6, 7, {"be", "hi", "te", "hi", "be", "te"});
  try {
    select_equal_rep(no_en, 4, {"en", "hi", "be", "te"});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'en'"), std::string::npos) << e.what();
  }
}

TEST(EqualRep, ExactlyKOverLPerLanguage) {
  BiasSubspace pool = axes(8, 8, {"en", "hi", "en", "hi", "hi", "en", "hi", "en"});
  BiasSubspace out = select_equal_rep(pool, 4, {"en", "hi"});
  int en = 0;
  for (const auto& l : out.orientation_labels) en += l == "en";
  EXPECT_EQ(en, 2);
  EXPECT_LT(out.orthonormality_error(), kOrthonormalTolerance);
}

TEST(Orthonormalize, GramSchmidt) {
  Matrix m(2, 3);
  m << 1, 1, 1, 1, 0, 0;
  Matrix q = orthonormalize_rows(m);
  EXPECT_NEAR(q.row(0).dot(q.row(1)), 0.0, 1e-15);
  EXPECT_NEAR(q.row(1).norm(), 1.0, 1e-15);
  Matrix dep(2, 2);
  dep << 1, 1, 2, 2;
  EXPECT_THROW(orthonormalize_rows(dep), ValidationError);
}

TEST(SubspaceJson, RoundTrip) {
  BiasSubspace b = pca_basis(rows_of({{1, 0.5, 0}, {0.2, 1, 0.1}, {0.3, 0.3, 1}}), 2);
  b.seed = 17;
  b.orientation_labels = {"en", "hi"};
  BiasSubspace back = subspace_from_json(subspace_to_json(b));
  EXPECT_EQ(back.basis, b.basis);
  EXPECT_EQ(back.scores, b.scores);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(back.orientation_labels, b.orientation_labels);
  EXPECT_EQ(subspace_to_json(back), subspace_to_json(b));
}

TEST(Methods, ParseNames) {
  EXPECT_EQ(parse_method("pca"), SubspaceMethod::kPca);
  EXPECT_EQ(parse_method("ppa"), SubspaceMethod::kPpa);
  EXPECT_THROW(parse_method("ica"), ValidationError);
}

}  // namespace
}  // namespace lpdebias
