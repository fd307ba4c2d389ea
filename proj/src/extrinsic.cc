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

#include "lpdebias/extrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lpdebias/random.hpp"

namespace lpdebias {
namespace {

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

const char* gender_code(Gender g) { return g == Gender::kMale ? "M" : "F"; }

std::string occupation_label(std::size_t i, std::size_t count) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(count - 1).size();
  return "occupation_" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

std::vector<BioRecord> parse_corpus(std::string_view text, std::size_t min_count,
                                    Diagnostics* diag) {
  std::vector<BioRecord> records;
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
    const std::string where = "corpus line " + std::to_string(line_no) + ": ";
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw ValidationError(where + "expected 'gender<TAB>occupation<TAB>text'");
    }
    BioRecord rec;
    std::string_view gender = line.substr(0, t1);
    if (gender == "M") {
      rec.gender = Gender::kMale;
    } else if (gender == "F") {
      rec.gender = Gender::kFemale;
    } else {
      throw ValidationError(where + "unknown gender token '" +
                            std::string(gender) + "' (expected M or F)");
    }
    rec.occupation = std::string(line.substr(t1 + 1, t2 - t1 - 1));
    if (rec.occupation.empty()) throw ValidationError(where + "empty occupation");
    rec.tokens = split_tokens(line.substr(t2 + 1));
    if (rec.tokens.empty()) throw ValidationError(where + "empty text");
    records.push_back(std::move(rec));
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[r.occupation];
  std::set<std::string> dropped;
  for (const auto& [occ, n] : counts) {
    if (n < min_count) {
      dropped.insert(occ);
      warn(diag, "occupation '" + occ + "' dropped: " + std::to_string(n) +
                     " records, minimum is " + std::to_string(min_count));
    }
  }
  if (!dropped.empty()) {
    std::erase_if(records, [&](const BioRecord& r) {
      return dropped.count(r.occupation) > 0;
    });
  }
  return records;
}

std::vector<BioRecord> load_corpus(const std::filesystem::path& path,
                                   std::size_t min_count, Diagnostics* diag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_corpus(buf.str(), min_count, diag);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string format_corpus(const std::vector<BioRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += gender_code(r.gender);
    out += '\t';
    out += r.occupation;
    out += '\t';
    out += join(r.tokens, " ");
    out += '\n';
  }
  return out;
}

void save_corpus(const std::vector<BioRecord>& records,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_corpus(records);
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json SynthSpec::to_json() const {
  return {{"occupations", occupations},
          {"records", records},
          {"rho", rho},
          {"words_per_occupation", words_per_occupation},
          {"content_tokens", content_tokens},
          {"marker_tokens", marker_tokens},
          {"marker_words", marker_words},
          {"confusion", confusion}};
}

std::vector<BioRecord> synthesize_corpus(const EmbeddingSpace& space,
                                         const SynthSpec& spec,
                                         std::uint64_t seed) {
  if (spec.occupations < 2) throw ValidationError("need at least 2 occupations");
  if (spec.rho < 0.0 || spec.rho > 1.0) {
    throw ValidationError("rho must lie in [0, 1]");
  }
  if (spec.confusion < 0.0 || spec.confusion >= 1.0) {
    throw ValidationError("confusion must lie in [0, 1)");
  }
  if (spec.content_tokens == 0 || spec.words_per_occupation == 0 ||
      spec.marker_words == 0) {
    throw ValidationError("synthetic corpus sizes must be positive");
  }
  if (static_cast<std::size_t>(spec.gender_direction.size()) != space.dim() ||
      spec.gender_direction.norm() == 0.0) {
    throw ValidationError("gender direction must be a nonzero vector of the "
                          "space's dimension");
  }
  const Vector g = spec.gender_direction.normalized();

  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double n = space.row(i).norm();
    if (n > 0.0) scored.emplace_back(space.row(i).dot(g) / n, i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  const std::size_t needed = 2 * spec.marker_words +
                             spec.occupations * spec.words_per_occupation;
  if (scored.size() < needed) {
    throw ValidationError("vocabulary too small: " + std::to_string(scored.size()) +
                          " usable words, the corpus needs " +
                          std::to_string(needed));
  }
  std::vector<std::size_t> male_markers;
  std::vector<std::size_t> female_markers;
  for (std::size_t i = 0; i < spec.marker_words; ++i) {
    if (scored[i].first <= 0.0 || scored[scored.size() - 1 - i].first >= 0.0) {
      throw ValidationError(
          "vocabulary too small: not enough words on each side of the gender "
          "axis for the requested markers");
    }
    male_markers.push_back(scored[i].second);
    female_markers.push_back(scored[scored.size() - 1 - i].second);
  }

  // Content words split at the median projection into male- and
  // female-leaning halves.
  std::vector<std::size_t> content;
  for (std::size_t i = spec.marker_words; i + spec.marker_words < scored.size(); ++i) {
    content.push_back(scored[i].second);
  }
  const std::size_t half = content.size() / 2;
  std::vector<std::size_t> sides[2] = {
      {content.begin(), content.begin() + static_cast<std::ptrdiff_t>(half)},
      {content.begin() + static_cast<std::ptrdiff_t>(half), content.end()}};

  Rng rng(seed);
  auto take = [&rng](std::vector<std::size_t>& from) {
    const std::size_t j = rng.below(from.size());
    const std::size_t word = from[j];
    from[j] = from.back();
    from.pop_back();
    return word;
  };

  std::vector<std::vector<std::size_t>> pools(spec.occupations);
  for (std::size_t o = 0; o < spec.occupations; ++o) {
    const int stereotype = static_cast<int>(o % 2);  // 0 male, 1 female
    for (std::size_t s = 0; s < spec.words_per_occupation; ++s) {
      int side = stereotype;
      if (rng.uniform() >= spec.rho) {
        const double total = static_cast<double>(sides[0].size() + sides[1].size());
        side = rng.uniform() * total < static_cast<double>(sides[0].size()) ? 0 : 1;
      }
      if (sides[side].empty()) side = 1 - side;
      if (sides[side].empty()) {
        throw ValidationError("vocabulary too small for the occupation pools");
      }
      pools[o].push_back(take(sides[side]));
    }
  }

  std::vector<BioRecord> records;
  records.reserve(spec.records);
  for (std::size_t r = 0; r < spec.records; ++r) {
    BioRecord rec;
    const std::size_t occ = rng.below(spec.occupations);
    rec.gender = rng.below(2) == 0 ? Gender::kMale : Gender::kFemale;
    rec.occupation = occupation_label(occ, spec.occupations);
    for (std::size_t t = 0; t < spec.content_tokens; ++t) {
      std::size_t source = occ;
      if (rng.uniform() < spec.confusion) {
        source = (occ + 1 + rng.below(spec.occupations - 1)) % spec.occupations;
      }
      const auto& pool = pools[source];
      rec.tokens.push_back(space.vocab()[pool[rng.below(pool.size())]]);
    }
    const auto& markers = rec.gender == Gender::kMale ? male_markers : female_markers;
    for (std::size_t t = 0; t < spec.marker_tokens; ++t) {
      rec.tokens.push_back(space.vocab()[markers[rng.below(markers.size())]]);
    }
    rng.shuffle(rec.tokens);
    records.push_back(std::move(rec));
  }
  return records;
}

StratifiedSplit stratified_split(const std::vector<BioRecord>& records,
                                 double test_fraction, std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw ValidationError("test fraction must lie in [0, 1)");
  }
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < records.size(); ++i) {
    strata[{records[i].occupation, static_cast<int>(records[i].gender)}].push_back(i);
  }
  Rng rng(seed);
  std::vector<char> is_test(records.size(), 0);
  for (auto& [key, idx] : strata) {
    rng.shuffle(idx);
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(idx.size())));
    for (std::size_t j = 0; j < n_test; ++j) is_test[idx[j]] = 1;
  }
  StratifiedSplit out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (is_test[i] ? out.test : out.train).push_back(records[i]);
  }
  return out;
}

double softmax_loss(const Matrix& params, const Matrix& x,
                    const std::vector<int>& labels, Matrix* grad) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::Index c = params.rows();
  if (params.cols() != d + 1 || static_cast<Eigen::Index>(labels.size()) != n) {
    throw ValidationError("softmax_loss: shape mismatch");
  }
  Eigen::MatrixXd logits = x * params.leftCols(d).transpose();
  logits.rowwise() += params.col(d).transpose();
  double loss = 0.0;
  Eigen::MatrixXd residual(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double top = logits.row(i).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(i).array() - top).exp();
    const double z = e.sum();
    residual.row(i) = e / z;
    loss += std::log(z) + top - logits(i, labels[static_cast<std::size_t>(i)]);
    residual(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
  }
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  if (grad) {
    grad->resize(c, d + 1);
    grad->leftCols(d) = residual.transpose() * x * inv_n;
    grad->col(d) = residual.colwise().sum().transpose() * inv_n;
  }
  return loss * inv_n;
}

FeatureBatch Classifier::featurize(const std::vector<BioRecord>& records,
                                   Diagnostics* diag) const {
  const EmbeddingSpace& space = *space_;
  const std::string lang = language_.empty() ? space.language_tag() : language_;
  FeatureBatch batch;
  std::vector<Vector> rows;
  std::size_t low_coverage = 0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    Vector sum = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
    std::size_t hits = 0;
    for (const auto& tok : rec.tokens) {
      auto idx = space.resolve(lang, tok);
      if (!idx) idx = space.index_of(tok);
      if (idx) {
        sum += space.row(*idx);
        ++hits;
      }
    }
    if (hits == 0 || 2 * hits < rec.tokens.size()) {
      ++low_coverage;
      continue;
    }
    Vector feature = sum / static_cast<double>(hits);
    if (mean_.size() > 0) {
      feature = ((feature - mean_).array() / scale_.array()).matrix();
    }
    rows.push_back(std::move(feature));
    auto it = std::find(labels_.begin(), labels_.end(), rec.occupation);
    batch.labels.push_back(it == labels_.end()
                               ? -1
                               : static_cast<int>(it - labels_.begin()));
    batch.records.push_back(r);
  }
  if (low_coverage > 0) {
    warn(diag, std::to_string(low_coverage) +
                   " records dropped: fewer than half of their tokens are in "
                   "the vocabulary");
  }
  batch.x.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    batch.x.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return batch;
}

int Classifier::predict(const Eigen::Ref<const Vector>& feature) const {
  const Eigen::Index d = params_.cols() - 1;
  Vector scores = params_.leftCols(d) * feature + params_.col(d);
  int best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = static_cast<int>(k);
  }
  return best;
}

Classifier train_classifier(std::shared_ptr<const EmbeddingSpace> space,
                            const std::vector<BioRecord>& train,
                            const ClassifierHyper& hyper, Diagnostics* diag) {
  if (!space) throw ValidationError("classifier needs an embedding");
  Classifier clf;
  clf.space_ = std::move(space);
  clf.language_ = hyper.language;
  std::set<std::string> labels;
  for (const auto& r : train) labels.insert(r.occupation);
  if (labels.size() < 2) {
    throw ValidationError("classifier needs at least 2 occupation labels, got " +
                          std::to_string(labels.size()));
  }
  clf.labels_.assign(labels.begin(), labels.end());

  FeatureBatch batch = clf.featurize(train, diag);
  if (batch.x.rows() == 0) {
    throw ValidationError("no training record has usable token coverage");
  }
  std::set<int> covered(batch.labels.begin(), batch.labels.end());
  if (covered.size() < 2) {
    throw ValidationError("fewer than 2 labels survive token-coverage filtering");
  }

  // Standardize with training statistics.
  const Eigen::Index n = batch.x.rows();
  const Eigen::Index d = batch.x.cols();
  clf.mean_ = batch.x.colwise().mean().transpose();
  Matrix centered = batch.x.rowwise() - clf.mean_.transpose();
  clf.scale_ = (centered.colwise().squaredNorm() / static_cast<double>(n))
                   .cwiseSqrt()
                   .transpose();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (clf.scale_(j) < 1e-12) clf.scale_(j) = 1.0;
  }
  Matrix x = (centered.array().rowwise() / clf.scale_.transpose().array()).matrix();

  double lr = hyper.learning_rate;
  if (lr <= 0.0) {
    // The mean cross-entropy Hessian is bounded by 1/2 (Z^T Z / n) per class
    // block, with Z = [x, 1]; a step of 1/L never increases the loss.
    Eigen::MatrixXd z(n, d + 1);
    z.leftCols(d) = x;
    z.col(d).setOnes();
    Eigen::MatrixXd gram = z.transpose() * z / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    lr = 1.0 / (0.5 * eig.eigenvalues().maxCoeff());
  }
  clf.learning_rate_ = lr;

  const auto c = static_cast<Eigen::Index>(clf.labels_.size());
  Rng rng(hyper.seed);
  clf.params_.resize(c, d + 1);
  for (Eigen::Index i = 0; i < c; ++i) {
    for (Eigen::Index j = 0; j <= d; ++j) clf.params_(i, j) = 0.01 * rng.normal();
  }
  Matrix grad;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    clf.loss_history_.push_back(softmax_loss(clf.params_, x, batch.labels, &grad));
    clf.params_ -= lr * grad;
  }
  clf.loss_history_.push_back(softmax_loss(clf.params_, x, batch.labels, nullptr));
  return clf;
}

ExtrinsicResult summarize_gaps(std::vector<OccupationAccuracy> per_occupation,
                               std::uint64_t seed) {
  ExtrinsicResult result;
  result.seed = seed;
  double gap_sum = 0.0;
  double male_hits = 0.0;
  double female_hits = 0.0;
  std::size_t male_n = 0;
  std::size_t female_n = 0;
  for (auto& o : per_occupation) {
    o.gap = std::abs(o.male_accuracy - o.female_accuracy);
    gap_sum += o.gap;
    male_hits += o.male_accuracy * static_cast<double>(o.male_count);
    female_hits += o.female_accuracy * static_cast<double>(o.female_count);
    male_n += o.male_count;
    female_n += o.female_count;
  }
  if (!per_occupation.empty()) {
    result.diff = gap_sum / static_cast<double>(per_occupation.size());
  }
  result.male_accuracy = male_n ? male_hits / static_cast<double>(male_n) : 0.0;
  result.female_accuracy =
      female_n ? female_hits / static_cast<double>(female_n) : 0.0;
  result.per_occupation = std::move(per_occupation);
  return result;
}

ExtrinsicResult evaluate_gap(const Classifier& classifier,
                             const std::vector<BioRecord>& test,
                             Diagnostics* diag) {
  if (test.empty()) throw ValidationError("empty test set");
  FeatureBatch batch = classifier.featurize(test, diag);
  if (batch.x.rows() == 0) {
    throw ValidationError("no test record has usable token coverage");
  }
  struct Tally {
    std::size_t hits[2] = {0, 0};
    std::size_t total[2] = {0, 0};
  };
  std::map<std::string, Tally> tallies;
  for (Eigen::Index i = 0; i < batch.x.rows(); ++i) {
    const auto& rec = test[batch.records[static_cast<std::size_t>(i)]];
    const int g = rec.gender == Gender::kMale ? 0 : 1;
    const int truth = batch.labels[static_cast<std::size_t>(i)];
    Tally& t = tallies[rec.occupation];
    ++t.total[g];
    if (truth >= 0 && classifier.predict(batch.x.row(i).transpose()) == truth) {
      ++t.hits[g];
    }
  }
  std::vector<OccupationAccuracy> per;
  for (const auto& [occ, t] : tallies) {
    if (t.total[0] == 0 || t.total[1] == 0) {
      warn(diag, "occupation '" + occ + "' excluded: test set lacks " +
                     (t.total[0] == 0 ? "male" : "female") + " records");
      continue;
    }
    OccupationAccuracy o;
    o.occupation = occ;
    o.male_count = t.total[0];
    o.female_count = t.total[1];
    o.male_accuracy = static_cast<double>(t.hits[0]) / static_cast<double>(t.total[0]);
    o.female_accuracy = static_cast<double>(t.hits[1]) / static_cast<double>(t.total[1]);
    per.push_back(o);
  }
  if (per.empty()) {
    throw ValidationError("no occupation has test records of both genders");
  }
  return summarize_gaps(std::move(per), 0);
}

GapComparison compare_runs(const ExtrinsicResult& before,
                           const ExtrinsicResult& after) {
  std::map<std::string, double> after_gaps;
  for (const auto& o : after.per_occupation) after_gaps[o.occupation] = o.gap;
  std::set<std::string> before_set;
  for (const auto& o : before.per_occupation) before_set.insert(o.occupation);
  std::set<std::string> after_set;
  for (const auto& [occ, gap] : after_gaps) after_set.insert(occ);
  if (before_set != after_set || before_set.empty()) {
    std::vector<std::string> only;
    for (const auto& o : before_set) {
      if (!after_set.count(o)) only.push_back(o + " (before only)");
    }
    for (const auto& o : after_set) {
      if (!before_set.count(o)) only.push_back(o + " (after only)");
    }
    throw ValidationError("occupation sets differ: " + join(only, ", "));
  }
  GapComparison out;
  std::size_t reduced = 0;
  for (const auto& o : before.per_occupation) {
    GapDelta delta{o.occupation, o.gap, after_gaps[o.occupation], false};
    delta.reduced = delta.gap_after < delta.gap_before;
    reduced += delta.reduced ? 1 : 0;
    out.per_occupation.push_back(delta);
  }
  out.f_i = static_cast<double>(reduced) /
            static_cast<double>(out.per_occupation.size());
  return out;
}

ExtrinsicResult run_extrinsic(std::shared_ptr<const EmbeddingSpace> space,
                              const std::vector<BioRecord>& records,
                              const ClassifierHyper& hyper, Diagnostics* diag) {
  StratifiedSplit split = stratified_split(records, 0.2, hyper.seed);
  Classifier clf = train_classifier(std::move(space), split.train, hyper, diag);
  ExtrinsicResult result = evaluate_gap(clf, split.test, diag);
  result.seed = hyper.seed;
  return result;
}

nlohmann::json to_json(const ExtrinsicResult& result) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& o : result.per_occupation) {
    per.push_back({{"occupation", o.occupation},
                   {"male_accuracy", o.male_accuracy},
                   {"female_accuracy", o.female_accuracy},
                   {"gap", o.gap},
                   {"male_count", o.male_count},
                   {"female_count", o.female_count}});
  }
  return {{"per_occupation", per},
          {"diff", result.diff},
          {"male_accuracy", result.male_accuracy},
          {"female_accuracy", result.female_accuracy},
          {"seed", result.seed}};
}

ExtrinsicResult extrinsic_from_json(const nlohmann::json& doc) {
  try {
    std::vector<OccupationAccuracy> per;
    for (const auto& o : doc.at("per_occupation")) {
      OccupationAccuracy a;
      a.occupation = o.at("occupation").get<std::string>();
      a.male_accuracy = o.at("male_accuracy").get<double>();
      a.female_accuracy = o.at("female_accuracy").get<double>();
      a.male_count = o.value("male_count", std::size_t{0});
      a.female_count = o.value("female_count", std::size_t{0});
      for (double acc : {a.male_accuracy, a.female_accuracy}) {
        if (acc < 0.0 || acc > 1.0) {
          throw ValidationError("accuracy outside [0, 1] for '" + a.occupation + "'");
        }
      }
      per.push_back(a);
    }
    return summarize_gaps(std::move(per), doc.value("seed", std::uint64_t{0}));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("extrinsic result: ") + e.what());
  }
}

nlohmann::json to_json(const GapComparison& comparison) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& d : comparison.per_occupation) {
    per.push_back({{"occupation", d.occupation},
                   {"gap_before", d.gap_before},
                   {"gap_after", d.gap_after},
                   {"reduced", d.reduced}});
  }
  return {{"f_i", comparison.f_i}, {"per_occupation", per}};
}

}  // namespace lpdebias
