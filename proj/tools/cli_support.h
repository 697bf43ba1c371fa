// Copyright 2026 The lmn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMN_TOOLS_CLI_SUPPORT_H_
#define LMN_TOOLS_CLI_SUPPORT_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lmn_cli {

/// Bad flag values; the CLI exits with status 2.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Failure reported by the library; the CLI exits with status 1.
class RuntimeFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

double parse_double(std::string_view text);
int64_t parse_int(std::string_view text);
uint64_t parse_u64(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::vector<double> parse_double_list(std::string_view text);
std::vector<int64_t> parse_int_list(std::string_view text);

/// "start:stop:step" (inclusive of stop) or a comma list. Values are snapped
/// to twelve significant digits so 0.1 + 2 * 0.05 reads as 0.2.
std::vector<double> parse_grid(std::string_view text);
/// Sorted union without duplicates.
std::vector<double> merge_grids(std::vector<double> a, const std::vector<double> &b);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view data);
std::string sha256_hex(std::string_view data);

/// UTC, second resolution.
std::string utc_timestamp();

}  // namespace lmn_cli

#endif  // LMN_TOOLS_CLI_SUPPORT_H_
