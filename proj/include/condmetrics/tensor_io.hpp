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

// TensorFile reading and writing.
//
// Binary layout (all integers little-endian):
//   offset 0   'C' 'F' 'M' '1'
//   offset 4   u32 version = 1
//   offset 8   u8 dtype (1 = float64, 2 = int64)
//   offset 9   u8 rank (1 or 2)
//   offset 10  two zero bytes
//   offset 12  u64 dims[rank]
//   then       row-major payload, product(dims) elements of the dtype
//
// Text files without the magic are parsed as CSV: comma
// separated, '.' decimal point, optional header row.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "condmetrics/error.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

enum class DType : std::uint8_t { float64 = 1, int64 = 2 };

inline constexpr char kTensorMagic[4] = {'C', 'F', 'M', '1'};
inline constexpr std::uint32_t kTensorVersion = 1;

struct Tensor {
  DType dtype = DType::float64;
  std::vector<std::uint64_t> dims;
  std::vector<double> f64;
  std::vector<std::int64_t> i64;

  std::uint64_t element_count() const {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
  std::size_t rank() const noexcept { return dims.size(); }
};

namespace detail {

inline constexpr std::size_t kFixedHeaderBytes = 12;

template <typename T>
void put_le(std::string& out, T value) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::string_view bytes, std::size_t offset) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

inline bool has_magic(std::string_view bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kTensorMagic, 4) == 0;
}

// Text files never contain NUL or other control bytes besides whitespace;
// anything that does is decoded as binary so a damaged magic is reported as
// such rather than as a CSV parse error.
inline bool looks_binary(std::string_view bytes) {
  if (has_magic(bytes)) return true;
  for (unsigned char ch : bytes.substr(0, 4096)) {
    if (ch < 0x20 && ch != '\n' && ch != '\r' && ch != '\t') return true;
  }
  return false;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline std::string encode_tensor(const Tensor& t) {
  if (t.rank() < 1 || t.rank() > 2) throw InvalidArgument("encode_tensor: rank must be 1 or 2");
  const auto n = t.element_count();
  if ((t.dtype == DType::float64 && t.f64.size() != n) || (t.dtype == DType::int64 && t.i64.size() != n)) {
    throw InvalidArgument("encode_tensor: payload size does not match dims");
  }
  std::string out(kTensorMagic, 4);
  detail::put_le<std::uint32_t>(out, kTensorVersion);
  out.push_back(static_cast<char>(t.dtype));
  out.push_back(static_cast<char>(t.rank()));
  out.push_back('\0');
  out.push_back('\0');
  for (auto d : t.dims) detail::put_le<std::uint64_t>(out, d);
  if (t.dtype == DType::float64) {
    for (double v : t.f64) detail::put_le<double>(out, v);
  } else {
    for (auto v : t.i64) detail::put_le<std::int64_t>(out, v);
  }
  return out;
}

inline Tensor decode_tensor(std::string_view bytes) {
  using detail::kFixedHeaderBytes;
  if (!detail::has_magic(bytes)) {
    throw TensorFormatError(TensorErrc::bad_magic, "file does not start with 'CFM1'", 0);
  }
  if (bytes.size() < kFixedHeaderBytes) {
    throw TensorFormatError(TensorErrc::truncated,
                            "header needs " + std::to_string(kFixedHeaderBytes) + " bytes, file has " +
                                std::to_string(bytes.size()),
                            bytes.size());
  }
  const auto version = detail::get_le<std::uint32_t>(bytes, 4);
  if (version != kTensorVersion) {
    throw TensorFormatError(TensorErrc::bad_version, "unsupported version " + std::to_string(version), 4);
  }
  const auto dtype_code = static_cast<std::uint8_t>(bytes[8]);
  if (dtype_code != 1 && dtype_code != 2) {
    throw TensorFormatError(TensorErrc::bad_dtype, "unknown dtype code " + std::to_string(dtype_code), 8);
  }
  const auto rank = static_cast<std::uint8_t>(bytes[9]);
  if (rank != 1 && rank != 2) {
    throw TensorFormatError(TensorErrc::bad_rank, "rank " + std::to_string(rank) + " is not 1 or 2", 9);
  }
  if (bytes[10] != '\0' || bytes[11] != '\0') {
    throw TensorFormatError(TensorErrc::bad_magic, "padding bytes must be zero", 10);
  }
  const std::size_t header = kFixedHeaderBytes + 8u * rank;
  if (bytes.size() < header) {
    throw TensorFormatError(TensorErrc::truncated,
                            "header needs " + std::to_string(header) + " bytes, file has " +
                                std::to_string(bytes.size()),
                            bytes.size());
  }
  Tensor t;
  t.dtype = static_cast<DType>(dtype_code);
  for (std::size_t i = 0; i < rank; ++i) t.dims.push_back(detail::get_le<std::uint64_t>(bytes, kFixedHeaderBytes + 8 * i));

  // Element counts beyond 2^60 cannot fit any file; treat them as truncated.
  std::uint64_t n = 1;
  bool overflow = false;
  for (auto d : t.dims) {
    if (d != 0 && n > (std::uint64_t{1} << 60) / d) overflow = true;
    n = overflow ? n : n * d;
  }
  const std::uint64_t expected = overflow ? 0 : header + 8 * n;
  if (overflow || bytes.size() < expected) {
    throw TensorFormatError(TensorErrc::truncated,
                            "expected " + (overflow ? std::string("more than 2^63") : std::to_string(expected)) +
                                " bytes, file has " + std::to_string(bytes.size()),
                            bytes.size());
  }
  if (bytes.size() > expected) {
    throw TensorFormatError(TensorErrc::trailing_bytes,
                            "expected " + std::to_string(expected) + " bytes, file has " +
                                std::to_string(bytes.size()),
                            expected);
  }
  if (t.dtype == DType::float64) {
    t.f64.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) t.f64[i] = detail::get_le<double>(bytes, header + 8 * i);
  } else {
    t.i64.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) t.i64[i] = detail::get_le<std::int64_t>(bytes, header + 8 * i);
  }
  return t;
}

// CSV into a float64 rank-2 tensor. A first line with any non-numeric field
// is taken as a header; blank lines are skipped. Error rows are 0-based
// indices of data rows.
inline Tensor parse_csv(std::string_view text) {
  Tensor t;
  std::size_t cols = 0;
  std::uint64_t rows = 0;
  bool first_line = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line);
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (auto f : fields) {
      const auto v = detail::parse_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (first_line) {
        first_line = false;
        continue;
      }
      throw TensorFormatError(TensorErrc::bad_csv, "row " + std::to_string(rows) + " has a non-numeric field",
                              std::nullopt, rows);
    }
    first_line = false;
    if (rows == 0) {
      cols = values.size();
    } else if (values.size() != cols) {
      throw TensorFormatError(TensorErrc::bad_csv,
                              "row " + std::to_string(rows) + " has " + std::to_string(values.size()) +
                                  " fields, expected " + std::to_string(cols),
                              std::nullopt, rows);
    }
    t.f64.insert(t.f64.end(), values.begin(), values.end());
    ++rows;
  }
  if (rows == 0) throw TensorFormatError(TensorErrc::bad_csv, "no data rows");
  t.dtype = DType::float64;
  t.dims = {rows, static_cast<std::uint64_t>(cols)};
  return t;
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TensorFormatError(TensorErrc::io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw TensorFormatError(TensorErrc::io, "read failed for " + path.string());
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TensorFormatError(TensorErrc::io, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw TensorFormatError(TensorErrc::io, "write failed for " + path.string());
}

// Binary when the magic (or any control byte) is present, CSV otherwise.
inline Tensor load_tensor(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return detail::looks_binary(bytes) ? decode_tensor(bytes) : parse_csv(bytes);
}

inline void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file_bytes(path, encode_tensor(t));
}

namespace detail {

inline std::size_t payload_offset(const Tensor& t) { return kFixedHeaderBytes + 8 * t.rank(); }

// Rank-2 float64 tensor as a matrix, rejecting NaN/Inf with the position.
inline Matrix float_matrix(const Tensor& t, bool from_binary, const char* kind) {
  if (t.dtype != DType::float64) {
    throw TensorFormatError(TensorErrc::wrong_kind, std::string(kind) + " must be float64");
  }
  if (t.rank() != 2) {
    throw TensorFormatError(TensorErrc::wrong_kind, std::string(kind) + " must be rank 2");
  }
  const auto rows = static_cast<Eigen::Index>(t.dims[0]);
  const auto cols = static_cast<Eigen::Index>(t.dims[1]);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto flat = static_cast<std::size_t>(i * cols + j);
      const double v = t.f64[flat];
      if (!std::isfinite(v)) {
        const auto row = static_cast<std::uint64_t>(i);
        throw TensorFormatError(TensorErrc::non_finite,
                                "non-finite value at row " + std::to_string(row) + ", column " + std::to_string(j),
                                from_binary ? std::optional<std::uint64_t>(payload_offset(t) + 8 * flat)
                                            : std::nullopt,
                                row);
      }
      m(i, j) = v;
    }
  }
  return m;
}

}  // namespace detail

inline FeatureMatrix features_from_tensor(const Tensor& t, bool from_binary = true) {
  auto m = detail::float_matrix(t, from_binary, "features");
  if (m.rows() == 0 || m.cols() == 0) throw TensorFormatError(TensorErrc::wrong_kind, "features are empty");
  return FeatureMatrix(std::move(m));
}

inline ProbabilityMatrix probabilities_from_tensor(const Tensor& t, bool from_binary = true) {
  auto m = detail::float_matrix(t, from_binary, "probabilities");
  if (m.rows() == 0 || m.cols() < 2) {
    throw TensorFormatError(TensorErrc::wrong_kind, "probabilities need at least one row and two columns");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto row = static_cast<std::uint64_t>(i);
    if (m.row(i).minCoeff() < 0.0 || m.row(i).maxCoeff() > 1.0) {
      throw TensorFormatError(TensorErrc::out_of_range, "row " + std::to_string(row) + " has entries outside [0, 1]",
                              std::nullopt, row);
    }
    const double sum = m.row(i).sum();
    if (std::abs(sum - 1.0) > ProbabilityMatrix::kRowSumTolerance) {
      throw TensorFormatError(TensorErrc::row_sum,
                              "row " + std::to_string(row) + " sums to " + std::to_string(sum), std::nullopt, row);
    }
  }
  return ProbabilityMatrix(std::move(m));
}

// Binary labels must be int64 rank 1. CSV labels may be a single column or a
// single row of integral values.
inline std::vector<std::int64_t> label_values(const Tensor& t, bool from_binary) {
  if (from_binary) {
    if (t.dtype != DType::int64 || t.rank() != 1) {
      throw TensorFormatError(TensorErrc::wrong_kind, "labels must be int64 rank 1");
    }
    return t.i64;
  }
  if (t.rank() == 2 && t.dims[0] != 1 && t.dims[1] != 1) {
    throw TensorFormatError(TensorErrc::wrong_kind, "CSV labels must be a single column");
  }
  std::vector<std::int64_t> out;
  out.reserve(t.f64.size());
  for (std::size_t i = 0; i < t.f64.size(); ++i) {
    const double v = t.f64[i];
    if (!std::isfinite(v)) {
      throw TensorFormatError(TensorErrc::non_finite, "non-finite label at row " + std::to_string(i), std::nullopt, i);
    }
    if (v != std::floor(v) || std::abs(v) > 9.0e15) {
      throw TensorFormatError(TensorErrc::out_of_range, "label at row " + std::to_string(i) + " is not an integer",
                              std::nullopt, i);
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

// class_count <= 0 infers K as the largest label plus one.
inline LabelVector labels_from_values(const std::vector<std::int64_t>& values, int class_count) {
  if (values.empty()) throw TensorFormatError(TensorErrc::wrong_kind, "labels are empty");
  std::int64_t k = class_count;
  if (k <= 0) k = *std::max_element(values.begin(), values.end()) + 1;
  std::vector<int> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] >= k) {
      throw TensorFormatError(TensorErrc::out_of_range,
                              "label " + std::to_string(values[i]) + " at row " + std::to_string(i) +
                                  " is outside [0, " + std::to_string(k) + ")",
                              std::nullopt, i);
    }
    out.push_back(static_cast<int>(values[i]));
  }
  return LabelVector(std::move(out), static_cast<int>(k));
}

inline FeatureMatrix load_features(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const bool binary = detail::looks_binary(bytes);
  return features_from_tensor(binary ? decode_tensor(bytes) : parse_csv(bytes), binary);
}

inline ProbabilityMatrix load_probabilities(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const bool binary = detail::looks_binary(bytes);
  return probabilities_from_tensor(binary ? decode_tensor(bytes) : parse_csv(bytes), binary);
}

inline LabelVector load_labels(const std::filesystem::path& path, int class_count = 0) {
  const auto bytes = read_file_bytes(path);
  const bool binary = detail::looks_binary(bytes);
  return labels_from_values(label_values(binary ? decode_tensor(bytes) : parse_csv(bytes), binary), class_count);
}

inline Tensor to_tensor(const Matrix& m) {
  Tensor t;
  t.dtype = DType::float64;
  t.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  t.f64.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.f64.push_back(m(i, j));
  }
  return t;
}

inline Tensor to_tensor(const LabelVector& labels) {
  Tensor t;
  t.dtype = DType::int64;
  t.dims = {static_cast<std::uint64_t>(labels.size())};
  for (int v : labels.labels()) t.i64.push_back(v);
  return t;
}

inline void save_features(const std::filesystem::path& path, const FeatureMatrix& f) {
  save_tensor(path, to_tensor(f.data()));
}
inline void save_probabilities(const std::filesystem::path& path, const ProbabilityMatrix& p) {
  save_tensor(path, to_tensor(p.data()));
}
inline void save_labels(const std::filesystem::path& path, const LabelVector& l) { save_tensor(path, to_tensor(l)); }

}  // namespace condmetrics
