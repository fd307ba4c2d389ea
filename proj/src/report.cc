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

#include "lpdebias/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace lpdebias {
namespace {

// Display width in code points so non-Latin scripts still line up.
std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xc0) != 0x80) ++n;
  }
  return n;
}

std::string pad(const std::string& s, std::size_t width, bool left) {
  const std::size_t w = display_width(s);
  if (w >= width) return s;
  std::string fill(width - w, ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

std::string format_number(double value, int decimals) {
  if (std::isnan(value)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) widths[c] = display_width(header[c]);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
      widths[c] = std::max(widths[c], display_width(row[c]));
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < widths.size(); ++c) {
      if (c > 0) out += " | ";
      out += pad(c < cells.size() ? cells[c] : "", widths[c], c == 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  std::size_t total = 0;
  for (auto w : widths) total += w;
  total += 3 * (widths.empty() ? 0 : widths.size() - 1);
  out += std::string(total, '-') + "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

std::string inbias_table(const std::vector<std::string>& languages,
                         const std::vector<InBiasColumn>& columns) {
  std::vector<std::string> header = {"lang"};
  for (const auto& c : columns) header.push_back(c.label);
  std::vector<std::vector<std::string>> rows;
  for (const auto& lang : languages) {
    std::vector<std::string> row = {lang};
    for (const auto& c : columns) {
      auto it = c.by_language.find(lang);
      row.push_back(it == c.by_language.end() ? "n/a"
                                              : format_number(it->second.value, 3));
    }
    rows.push_back(row);
  }
  return format_table(header, rows);
}

std::string cross_score_table(const CrossScoreMatrix& matrix) {
  std::vector<std::string> header = {"Lang"};
  for (const auto& l : matrix.languages) header.push_back("N_" + l);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < matrix.languages.size(); ++i) {
    std::vector<std::string> row = {"b_" + matrix.languages[i]};
    for (std::size_t j = 0; j < matrix.languages.size(); ++j) {
      row.push_back(matrix.errors[i][j].empty()
                        ? format_number(matrix.values(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(j)),
                                        3)
                        : "error");
    }
    rows.push_back(row);
  }
  return format_table(header, rows);
}

std::string exbias_table(const std::vector<ExBiasRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  std::string last_lang;
  for (const auto& r : rows) {
    cells.push_back({r.language == last_lang ? "" : r.language, r.embedding,
                     format_number(100.0 * r.result.male_accuracy, 2),
                     format_number(100.0 * r.result.female_accuracy, 2),
                     format_number(100.0 * r.result.diff, 2),
                     r.f_i ? format_number(*r.f_i, 3) : ""});
    last_lang = r.language;
  }
  return format_table({"l", "Emb", "M", "F", "|Diff|", "f_i"}, cells);
}

nlohmann::json RunManifest::to_json() const {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {{"tool", "lpdebias"},
          {"tool_version", kToolVersion},
          {"command_line", command_line},
          {"config", config},
          {"seeds", seeds},
          {"inputs", inputs},
          {"outputs", outputs},
          {"warnings", warnings},
          {"timestamp", stamp}};
}

std::string file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Fingerprint fp;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    fp.add(std::string_view(buf, static_cast<std::size_t>(in.gcount())));
  }
  return fp.hex();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  write_text(doc.dump(2) + "\n", path);
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace lpdebias
