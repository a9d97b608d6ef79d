/* Copyright 2026 The condmetrics Authors. All Rights Reserved.

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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace condmetrics {

// Malformed or out-of-contract input (shape, range, empty class, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A matrix that must be positive semidefinite has an eigenvalue below the
// round-off floor.
class NotPsdError : public std::domain_error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : std::domain_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// Command-line or run-configuration problem.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TensorErrc {
  io,
  bad_magic,
  bad_version,
  bad_dtype,
  bad_rank,
  truncated,
  trailing_bytes,
  non_finite,
  out_of_range,
  row_sum,
  bad_csv,
  wrong_kind,
};

inline const char* to_string(TensorErrc code) {
  switch (code) {
    case TensorErrc::io: return "io";
    case TensorErrc::bad_magic: return "bad_magic";
    case TensorErrc::bad_version: return "bad_version";
    case TensorErrc::bad_dtype: return "bad_dtype";
    case TensorErrc::bad_rank: return "bad_rank";
    case TensorErrc::truncated: return "truncated";
    case TensorErrc::trailing_bytes: return "trailing_bytes";
    case TensorErrc::non_finite: return "non_finite";
    case TensorErrc::out_of_range: return "out_of_range";
    case TensorErrc::row_sum: return "row_sum";
    case TensorErrc::bad_csv: return "bad_csv";
    case TensorErrc::wrong_kind: return "wrong_kind";
  }
  return "unknown";
}

// Failure while decoding a tensor file. Carries the byte offset (binary) or
// the row index (CSV / validation) where the problem was found.
class TensorFormatError : public std::runtime_error {
 public:
  TensorFormatError(TensorErrc code, const std::string& what,
                    std::optional<std::uint64_t> byte_offset = std::nullopt,
                    std::optional<std::uint64_t> row = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        byte_offset_(byte_offset),
        row_(row) {}

  TensorErrc code() const noexcept { return code_; }
  std::optional<std::uint64_t> byte_offset() const noexcept { return byte_offset_; }
  std::optional<std::uint64_t> row() const noexcept { return row_; }

 private:
  TensorErrc code_;
  std::optional<std::uint64_t> byte_offset_;
  std::optional<std::uint64_t> row_;
};

}  // namespace condmetrics
