// Copyright 2026 The Credist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CREDIST_SRC_TEXT_IO_HPP_
#define CREDIST_SRC_TEXT_IO_HPP_

// Line-oriented tab/space separated record reading shared by the loaders.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "credist/errors.hpp"

namespace credist::detail {

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path.string());
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path.string());
  return out;
}

inline void split_fields(std::string_view line,
                         std::vector<std::string_view>& fields) {
  fields.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r') {
      ++j;
    }
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Calls fn(line_number, fields) for every non-blank, non-comment line that
// has exactly `arity` fields; anything else raises ParseError.
template <typename Fn>
void for_each_record(const std::filesystem::path& path, std::size_t arity,
                     Fn&& fn) {
  std::ifstream in = open_input(path);
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    split_fields(line, fields);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != arity) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(arity) + " fields, got " +
                           std::to_string(fields.size()));
    }
    fn(line_no, fields);
  }
}

template <typename T>
T field_as(const std::filesystem::path& path, std::size_t line_no,
           std::string_view field) {
  T value{};
  if (!parse_number(field, value)) {
    throw ParseError(path.string(), line_no,
                     "malformed number '" + std::string(field) + "'");
  }
  return value;
}

// Shortest representation that reads back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace credist::detail

#endif  // CREDIST_SRC_TEXT_IO_HPP_
