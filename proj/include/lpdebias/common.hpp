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

#ifndef LPDEBIAS_COMMON_HPP_
#define LPDEBIAS_COMMON_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lpdebias {

// Word vectors are stored one per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Bad input data or arguments. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system failures. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Collects non-fatal warnings (skipped words, dropped records, ...) so callers
// can surface them in reports and manifests. Passing nullptr discards them.
class Diagnostics {
 public:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void merge(const Diagnostics& other) {
    warnings_.insert(warnings_.end(), other.warnings_.begin(),
                     other.warnings_.end());
  }

 private:
  std::vector<std::string> warnings_;
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

// 64-bit FNV-1a. Stable across platforms, used for input fingerprints.
class Fingerprint {
 public:
  void add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
  }
  void add(double value);
  void add(std::uint64_t value);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// Number of worker threads for row-parallel loops. Reads
// DEBIAS_EMBED_THREADS; defaults to the hardware concurrency.
unsigned worker_threads();

// Runs fn(begin, end) over disjoint contiguous chunks of [0, n), using at
// most one thread per `grain` items.
template <typename Fn>
void parallel_rows(std::size_t n, Fn&& fn, std::size_t grain = 256);

std::string join(std::span<const std::string> parts, std::string_view sep);
std::vector<std::string> split(std::string_view text, char sep);

}  // namespace lpdebias

#include "lpdebias/detail/parallel.hpp"

#endif  // LPDEBIAS_COMMON_HPP_
