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

// MetricReport and its canonical serialisations.
//
// JSON: fixed key order, doubles printed with 17 significant digits in
// general notation, absent or non-finite values as null. CSV rows use the
// same number formatting. Equal reports therefore serialise to identical
// bytes.

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace condmetrics {

enum class PairingMode { identity, hungarian };

inline const char* to_string(PairingMode m) {
  return m == PairingMode::identity ? "identity" : "hungarian";
}

struct MetricReport {
  std::optional<double> is, bcis, wcis;
  std::optional<double> fid, bcfid, wcfid, cfid_sum;
  std::optional<double> accuracy;
  std::vector<double> per_class_fid;
  std::vector<double> per_class_is;
  std::vector<double> per_class_accuracy;
  // Feature dimensions each FID-family score was measured over. Full-space
  // scores are raw; subsampled scores are already divided by this.
  std::optional<std::size_t> dims_used;
  PairingMode pairing = PairingMode::identity;
  std::vector<int> mapping;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> warnings;
};

// Column order of the scalar part of a report, shared by sweep CSVs.
inline constexpr std::array<std::string_view, 9> kScalarColumns = {
    "is", "bcis", "wcis", "fid", "bcfid", "wcfid", "cfid_sum", "accuracy", "dims_used"};

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("null");
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          static constexpr char hex[] = "0123456789abcdef";
          out += "\\u00";
          out.push_back(hex[(ch >> 4) & 0xf]);
          out.push_back(hex[ch & 0xf]);
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
  return out;
}

namespace detail {

inline std::string json_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out + "]";
}

inline std::string json_int_array(std::span<const int> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out + "]";
}

}  // namespace detail

inline std::string to_json(const MetricReport& r) {
  std::string out = "{\n";
  auto field = [&](std::string_view key, const std::string& value, bool last = false) {
    out += "  ";
    out += json_escape(key);
    out += ": ";
    out += value;
    out += last ? "\n" : ",\n";
  };
  field("is", format_number(r.is));
  field("bcis", format_number(r.bcis));
  field("wcis", format_number(r.wcis));
  field("fid", format_number(r.fid));
  field("bcfid", format_number(r.bcfid));
  field("wcfid", format_number(r.wcfid));
  field("cfid_sum", format_number(r.cfid_sum));
  field("accuracy", format_number(r.accuracy));
  field("per_class_fid", detail::json_array(r.per_class_fid));
  field("per_class_is", detail::json_array(r.per_class_is));
  field("per_class_accuracy", detail::json_array(r.per_class_accuracy));
  field("dims_used", r.dims_used ? std::to_string(*r.dims_used) : "null");
  field("pairing", std::string("{\"mode\": ") + json_escape(to_string(r.pairing)) +
                       ", \"mapping\": " + detail::json_int_array(r.mapping) + "}");
  field("seed", r.seed ? std::to_string(*r.seed) : "null");
  std::string warnings = "[";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    if (i) warnings += ", ";
    warnings += json_escape(r.warnings[i]);
  }
  field("warnings", warnings + "]", true);
  out += "}\n";
  return out;
}

inline std::string csv_header(std::string_view parameter) {
  std::string out(parameter);
  for (auto col : kScalarColumns) {
    out += ',';
    out += col;
  }
  return out + "\n";
}

// Missing values are written as empty fields.
inline std::string csv_row(const std::string& parameter, const MetricReport& r) {
  auto cell = [](const std::optional<double>& v) {
    return v && std::isfinite(*v) ? format_number(*v) : std::string();
  };
  std::string out = parameter;
  for (const auto& v : {r.is, r.bcis, r.wcis, r.fid, r.bcfid, r.wcfid, r.cfid_sum, r.accuracy}) {
    out += ',';
    out += cell(v);
  }
  out += ',';
  if (r.dims_used) out += std::to_string(*r.dims_used);
  return out + "\n";
}

}  // namespace condmetrics
