// Copyright 2026 The resalloc Authors.
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

#ifndef RESALLOC_CSV_HPP_
#define RESALLOC_CSV_HPP_

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace resalloc {

// Shortest round-trip decimal form, independent of the C locale. Infinities
// print as "inf"/"-inf", NaN as "nan".
std::string format_double(double value);
// Blank when empty.
std::string format_optional(const std::optional<double>& value);

// RFC 4180 style writer with '\n' line endings. Metadata goes in leading
// "# key=value" lines, which most CSV readers skip as comments.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void comment(std::string_view key, std::string_view value);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string csv_escape(std::string_view field);

}  // namespace resalloc

#endif  // RESALLOC_CSV_HPP_
