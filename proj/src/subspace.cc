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

#include "lpdebias/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpdebias/random.hpp"

namespace lpdebias {
namespace {

void check_k(std::size_t k, const DifferenceMatrix& q) {
  if (k < 1) throw ValidationError("k must be at least 1");
  const std::size_t limit = std::min(q.size(), q.dim());
  if (k > limit) {
    throw ValidationError("k=" + std::to_string(k) + " exceeds min(n, d)=" +
                          std::to_string(limit) + " for " +
                          std::to_string(q.size()) + " difference vectors");
  }
}

std::size_t numerical_rank(const Vector& singular_values) {
  if (singular_values.size() == 0 || singular_values(0) == 0.0) return 0;
  const double cutoff = kRankTolerance * singular_values(0);
  std::size_t r = 0;
  while (r < static_cast<std::size_t>(singular_values.size()) &&
         singular_values(static_cast<Eigen::Index>(r)) >= cutoff) {
    ++r;
  }
  return r;
}

void check_rank(std::size_t k, std::size_t rank) {
  if (k > rank) {
    throw ValidationError("k=" + std::to_string(k) +
                          " exceeds the numerical rank of the difference "
                          "matrix; achievable k <= " +
                          std::to_string(rank));
  }
}

struct Ascent {
  Vector direction;
  double value = -std::numeric_limits<double>::infinity();
};

// Kurtosis ratio n * sum p^4 / (sum p^2)^2 for p = y c and its gradient with
// respect to c. Columns of y are mean-free.
double kurtosis_ratio(const Eigen::MatrixXd& y, const Vector& c, Vector* grad) {
  const Vector p = y * c;
  const double s2 = p.squaredNorm();
  if (s2 <= std::numeric_limits<double>::min()) {
    if (grad) grad->setZero(c.size());
    return -std::numeric_limits<double>::infinity();
  }
  const Vector p3 = p.array().cube().matrix();
  const double s4 = p.array().square().square().sum();
  const double n = static_cast<double>(y.rows());
  if (grad) {
    *grad = (4.0 * n / (s2 * s2)) * (y.transpose() * (p3 - (s4 / s2) * p));
    // Scale invariance makes the gradient tangent already; remove rounding.
    *grad -= grad->dot(c) * c;
  }
  return n * s4 / (s2 * s2);
}

// Projected gradient ascent on the unit sphere with backtracking.
Ascent ascend(const Eigen::MatrixXd& y, Vector c, const PpaOptions& options) {
  c.normalize();
  Vector grad(c.size());
  double value = kurtosis_ratio(y, c, &grad);
  double step = 1.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const double gnorm2 = grad.squaredNorm();
    if (!std::isfinite(value) || std::sqrt(gnorm2) < options.gradient_tolerance) {
      break;
    }
    step *= 2.0;
    bool moved = false;
    while (step > 1e-18) {
      Vector trial = (c + step * grad).normalized();
      Vector trial_grad(c.size());
      double trial_value = kurtosis_ratio(y, trial, &trial_grad);
      if (trial_value >= value + 1e-4 * step * gnorm2 * 0.5 ||
          (trial_value > value && step < 1e-8)) {
        c = std::move(trial);
        grad = std::move(trial_grad);
        value = trial_value;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {c, value};
}

// Orthonormal basis (columns) of the complement of span(taken) in R^r.
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& taken, Eigen::Index r) {
  if (taken.cols() == 0) return Eigen::MatrixXd::Identity(r, r);
  Eigen::MatrixXd projector = Eigen::MatrixXd::Identity(r, r) -
                              taken * taken.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projector);
  // Eigenvalues ascend; the trailing ones equal 1.
  const Eigen::Index m = r - taken.cols();
  return eig.eigenvectors().rightCols(m);
}

}  // namespace

std::string to_string(SubspaceMethod method) {
  return method == SubspaceMethod::kPca ? "pca" : "ppa";
}

SubspaceMethod parse_method(const std::string& name) {
  if (name == "pca" || name == "PCA") return SubspaceMethod::kPca;
  if (name == "ppa" || name == "PPA") return SubspaceMethod::kPpa;
  throw ValidationError("unknown subspace method '" + name +
                        "' (expected pca or ppa)");
}

double BiasSubspace::orthonormality_error() const {
  Eigen::MatrixXd gram = basis * basis.transpose();
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
      .cwiseAbs()
      .maxCoeff();
}

DifferenceMatrix difference_matrix(const EmbeddingSpace& space,
                                   const std::vector<GenderPair>& pairs,
                                   Diagnostics* diag) {
  std::vector<Vector> rows;
  DifferenceMatrix q;
  for (const auto& p : pairs) {
    auto m = space.resolve(p.language, p.male_word);
    auto f = space.resolve(p.language, p.female_word);
    if (!m || !f) {
      warn(diag, "gender pair (" + p.male_word + ", " + p.female_word +
                     ") of '" + p.language + "' skipped: out of vocabulary");
      continue;
    }
    Vector delta = space.row(*m) - space.row(*f);
    if (delta.norm() == 0.0) {
      warn(diag, "gender pair (" + p.male_word + ", " + p.female_word +
                     ") skipped: identical vectors");
      continue;
    }
    rows.push_back(std::move(delta));
    q.row_languages.push_back(p.language);
    q.pairs.push_back(p);
  }
  if (rows.empty()) {
    throw ValidationError("no gender pair resolves in the embedding");
  }
  q.rows.resize(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    q.rows.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return q;
}

std::size_t difference_rank(const DifferenceMatrix& q, bool center) {
  Eigen::MatrixXd data = q.rows;
  if (center) data.rowwise() -= data.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(data);
  return numerical_rank(svd.singularValues());
}

BiasSubspace pca_basis(const DifferenceMatrix& q, std::size_t k, bool center) {
  check_k(k, q);
  Eigen::MatrixXd data = q.rows;
  if (center) data.rowwise() -= data.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  check_rank(k, numerical_rank(s));

  BiasSubspace out;
  out.method = SubspaceMethod::kPca;
  out.centered = center;
  out.pairs_fingerprint = pairs_fingerprint(q.pairs);
  out.basis.resize(static_cast<Eigen::Index>(k), data.cols());
  const double total = s.squaredNorm();
  for (std::size_t j = 0; j < k; ++j) {
    Vector v = svd.matrixV().col(static_cast<Eigen::Index>(j));
    canonicalize_sign(v);
    out.basis.row(static_cast<Eigen::Index>(j)) = v.transpose();
    const double sj = s(static_cast<Eigen::Index>(j));
    out.scores.push_back(sj * sj / total);
  }
  return out;
}

double excess_kurtosis(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  m2 /= static_cast<double>(values.size());
  m4 /= static_cast<double>(values.size());
  return m4 / (m2 * m2) - 3.0;
}

BiasSubspace ppa_basis(const DifferenceMatrix& q, std::size_t k,
                       const PpaOptions& options) {
  if (q.size() < 4) {
    throw ValidationError("PPA needs at least 4 difference vectors, got " +
                          std::to_string(q.size()));
  }
  check_k(k, q);
  if (options.starts < 1) throw ValidationError("PPA needs at least one start");

  Eigen::MatrixXd centered = q.rows;
  centered.rowwise() -= centered.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const std::size_t rank = numerical_rank(svd.singularValues());
  check_rank(k, rank);
  const auto r = static_cast<Eigen::Index>(rank);

  // Search inside the span of the centered data, where every direction has
  // positive variance. Coordinates are the principal axes.
  const Eigen::MatrixXd axes = svd.matrixV().leftCols(r);
  const Eigen::MatrixXd coords = centered * axes;

  BiasSubspace out;
  out.method = SubspaceMethod::kPpa;
  out.centered = true;
  out.seed = options.seed;
  out.pairs_fingerprint = pairs_fingerprint(q.pairs);
  out.basis.resize(static_cast<Eigen::Index>(k), q.rows.cols());

  Eigen::MatrixXd taken(r, 0);
  for (std::size_t j = 0; j < k; ++j) {
    const Eigen::MatrixXd comp = complement_basis(taken, r);
    const Eigen::MatrixXd y = coords * comp;
    const Eigen::Index m = comp.cols();

    Ascent best;
    if (m == 1) {
      Vector c = Vector::Ones(1);
      best = {c, kurtosis_ratio(y, c, nullptr)};
    } else {
      // Starts: the leading axes of the remaining space, then seeded random
      // directions. Each start is independent; the reduction below is in
      // start order so the result does not depend on scheduling.
      std::vector<Vector> starts;
      for (Eigen::Index a = 0;
           a < m && starts.size() < (options.starts + 1) / 2; ++a) {
        starts.push_back(Vector::Unit(m, a));
      }
      Rng rng(options.seed ^ (0x9e3779b97f4a7c15ULL * (j + 1)));
      while (starts.size() < options.starts) {
        Vector v(m);
        for (Eigen::Index a = 0; a < m; ++a) v(a) = rng.normal();
        if (v.norm() > 0.0) starts.push_back(v.normalized());
      }
      std::vector<Ascent> results(starts.size());
      parallel_rows(
          starts.size(),
          [&](std::size_t b, std::size_t e) {
            for (std::size_t s = b; s < e; ++s) {
              results[s] = ascend(y, starts[s], options);
            }
          },
          1);
      for (const auto& res : results) {
        if (res.value > best.value) best = res;
      }
    }

    Vector in_rank = comp * best.direction;
    in_rank.normalize();
    taken.conservativeResize(r, taken.cols() + 1);
    taken.col(taken.cols() - 1) = in_rank;

    Vector b = axes * in_rank;
    b.normalize();
    canonicalize_sign(b);
    out.basis.row(static_cast<Eigen::Index>(j)) = b.transpose();
    out.scores.push_back(best.value - 3.0);
  }
  if (out.orthonormality_error() > kOrthonormalTolerance * 1e-2) {
    out.basis = orthonormalize_rows(out.basis);
  }
  return out;
}

BiasSubspace language_orientation(const BiasSubspace& subspace,
                                  const DifferenceMatrix& q,
                                  const std::vector<std::string>& languages,
                                  Diagnostics* diag) {
  if (languages.empty()) throw ValidationError("no languages to label with");
  if (q.dim() != subspace.dim()) {
    throw ValidationError("dimension mismatch between subspace and pairs");
  }
  std::vector<Vector> means;
  for (const auto& lang : languages) {
    Vector sum = Vector::Zero(static_cast<Eigen::Index>(q.dim()));
    std::size_t count = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q.row_languages[i] == lang) {
        sum += q.rows.row(static_cast<Eigen::Index>(i)).transpose();
        ++count;
      }
    }
    if (count == 0) {
      throw ValidationError("language '" + lang +
                            "' has no gender pairs to orient against");
    }
    means.push_back(sum / static_cast<double>(count));
  }

  BiasSubspace out = subspace;
  out.orientation_labels.clear();
  for (std::size_t j = 0; j < subspace.k(); ++j) {
    const Vector b = subspace.vector(j);
    std::vector<double> cosines;
    for (const auto& mean : means) {
      const double denom = b.norm() * mean.norm();
      cosines.push_back(denom > 0.0 ? std::abs(b.dot(mean)) / denom : 0.0);
    }
    const double top = *std::max_element(cosines.begin(), cosines.end());
    std::size_t winner = 0;
    std::size_t tied = 0;
    for (std::size_t l = 0; l < cosines.size(); ++l) {
      if (top - cosines[l] <= 1e-12) {
        if (tied == 0) winner = l;
        ++tied;
      }
    }
    if (tied > 1) {
      warn(diag, "basis vector " + std::to_string(j + 1) + ": orientation tie (" +
                     std::to_string(tied) + " languages at |cos|=" +
                     std::to_string(top) + "), labeled '" +
                     languages[winner] + "' by language order");
    }
    out.orientation_labels.push_back(languages[winner]);
  }
  return out;
}

BiasSubspace select_equal_rep(const BiasSubspace& pool, std::size_t k,
                              const std::vector<std::string>& languages) {
  if (languages.empty()) throw ValidationError("no languages given");
  if (k == 0 || k % languages.size() != 0) {
    throw ValidationError("k=" + std::to_string(k) +
                          " is not divisible by the language count " +
                          std::to_string(languages.size()));
  }
  if (pool.orientation_labels.size() != pool.k()) {
    throw ValidationError("candidate pool has no orientation labels");
  }
  const std::size_t per_language = k / languages.size();
  std::vector<std::size_t> chosen;
  for (const auto& lang : languages) {
    std::size_t found = 0;
    for (std::size_t i = 0; i < pool.k() && found < per_language; ++i) {
      if (pool.orientation_labels[i] == lang) {
        chosen.push_back(i);
        ++found;
      }
    }
    if (found < per_language) {
      throw ValidationError("candidate pool has " + std::to_string(found) +
                            " components oriented to '" + lang + "', need " +
                            std::to_string(per_language) + " (deficit " +
                            std::to_string(per_language - found) + ")");
    }
  }
  std::sort(chosen.begin(), chosen.end());

  BiasSubspace out = pool;
  out.basis.resize(static_cast<Eigen::Index>(k), pool.basis.cols());
  out.scores.clear();
  out.orientation_labels.clear();
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    out.basis.row(static_cast<Eigen::Index>(j)) =
        pool.basis.row(static_cast<Eigen::Index>(chosen[j]));
    if (chosen[j] < pool.scores.size()) out.scores.push_back(pool.scores[chosen[j]]);
    out.orientation_labels.push_back(pool.orientation_labels[chosen[j]]);
  }
  if (out.orthonormality_error() > kOrthonormalTolerance * 1e-2) {
    out.basis = orthonormalize_rows(out.basis);
  }
  return out;
}

Matrix orthonormalize_rows(const Matrix& rows) {
  Matrix out = rows;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      out.row(i) -= out.row(i).dot(out.row(j)) * out.row(j);
    }
    const double n = out.row(i).norm();
    if (n < kRankTolerance) {
      throw ValidationError("basis vectors are linearly dependent");
    }
    out.row(i) /= n;
  }
  return out;
}

void canonicalize_sign(Eigen::Ref<Vector> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

nlohmann::json subspace_to_json(const BiasSubspace& subspace) {
  nlohmann::json basis = nlohmann::json::array();
  for (std::size_t j = 0; j < subspace.k(); ++j) {
    const Vector b = subspace.vector(j);
    basis.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  return {{"method", to_string(subspace.method)},
          {"k", subspace.k()},
          {"dim", subspace.dim()},
          {"seed", subspace.seed},
          {"centered", subspace.centered},
          {"basis", basis},
          {"scores", subspace.scores},
          {"orientation_labels", subspace.orientation_labels},
          {"pairs_fingerprint", subspace.pairs_fingerprint},
          {"source_fingerprint", subspace.source_fingerprint}};
}

BiasSubspace subspace_from_json(const nlohmann::json& doc) {
  try {
    BiasSubspace out;
    out.method = parse_method(doc.at("method").get<std::string>());
    const auto& basis = doc.at("basis");
    const std::size_t k = basis.size();
    const std::size_t d = doc.at("dim").get<std::size_t>();
    if (k == 0 || k != doc.at("k").get<std::size_t>()) {
      throw ValidationError("subspace: basis size does not match k");
    }
    out.basis.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < k; ++j) {
      auto row = basis[j].get<std::vector<double>>();
      if (row.size() != d) {
        throw ValidationError("subspace: basis vector " + std::to_string(j) +
                              " has the wrong dimension");
      }
      for (std::size_t c = 0; c < d; ++c) {
        out.basis(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) =
            row[c];
      }
    }
    out.seed = doc.value("seed", std::uint64_t{0});
    out.centered = doc.value("centered", false);
    out.scores = doc.value("scores", std::vector<double>{});
    out.orientation_labels =
        doc.value("orientation_labels", std::vector<std::string>{});
    out.pairs_fingerprint = doc.value("pairs_fingerprint", std::string());
    out.source_fingerprint = doc.value("source_fingerprint", std::string());
    if (out.orthonormality_error() > kOrthonormalTolerance) {
      throw ValidationError("subspace: basis is not orthonormal");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("subspace: ") + e.what());
  }
}

}  // namespace lpdebias
