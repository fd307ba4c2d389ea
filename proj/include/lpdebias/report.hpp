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

// Plain-text report tables and run manifests.

#ifndef LPDEBIAS_REPORT_HPP_
#define LPDEBIAS_REPORT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpdebias/extrinsic.hpp"
#include "lpdebias/intrinsic.hpp"

namespace lpdebias {

inline constexpr const char* kToolVersion = "0.1.0";

// Left-aligned first column, right-aligned remaining columns, separated by
// " | ", with a dashed rule under the header.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string format_number(double value, int decimals);

// Rows: one per language; columns: one per embedding (first is the
// original).
struct InBiasColumn {
  std::string label;
  std::map<std::string, InBiasResult> by_language;
};
std::string inbias_table(const std::vector<std::string>& languages,
                         const std::vector<InBiasColumn>& columns);

// Rows b_<l1>, columns N_<l2>.
std::string cross_score_table(const CrossScoreMatrix& matrix);

struct ExBiasRow {
  std::string language;
  std::string embedding;
  ExtrinsicResult result;
  // Absent for the reference row.
  std::optional<double> f_i;
};
// Columns l, Emb, M, F, |Diff|, f_i with accuracies in percent.
std::string exbias_table(const std::vector<ExBiasRow>& rows);

struct RunManifest {
  std::string command_line;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> inputs;   // path -> fingerprint
  std::map<std::string, std::string> outputs;  // role -> path
  std::vector<std::string> warnings;

  // The only time-dependent key is "timestamp".
  nlohmann::json to_json() const;
};

// Fingerprint of a file's bytes; IoError if unreadable.
std::string file_fingerprint(const std::filesystem::path& path);

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace lpdebias

#endif  // LPDEBIAS_REPORT_HPP_
