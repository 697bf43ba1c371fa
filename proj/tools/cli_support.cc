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

#include "cli_support.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

namespace lmn_cli {

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) {
        throw RuntimeFailure("cannot format number");
    }
    return std::string(buf, end);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <class T>
T parse_number(std::string_view text, const char *what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    T value{};
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
        throw UsageError(std::string("expected ") + what + ", got '" + std::string(text) + "'");
    }
    return value;
}

double snap(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    double out = x;
    std::from_chars(buf, end, out);
    return out == 0.0 ? 0.0 : out;
}

}  // namespace

double parse_double(std::string_view text) {
    const double v = parse_number<double>(text, "a number");
    if (!std::isfinite(v)) {
        throw UsageError("number must be finite");
    }
    return v;
}

int64_t parse_int(std::string_view text) {
    return parse_number<int64_t>(text, "an integer");
}

uint64_t parse_u64(std::string_view text) {
    return parse_number<uint64_t>(text, "a non-negative integer");
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        const size_t pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (const std::string &item : split(text, ',')) {
        out.push_back(parse_double(item));
    }
    return out;
}

std::vector<int64_t> parse_int_list(std::string_view text) {
    std::vector<int64_t> out;
    for (const std::string &item : split(text, ',')) {
        out.push_back(parse_int(item));
    }
    return out;
}

std::vector<double> parse_grid(std::string_view text) {
    if (text.find(':') == std::string_view::npos) {
        std::vector<double> out;
        for (double v : parse_double_list(text)) {
            out.push_back(snap(v));
        }
        return out;
    }
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) {
        throw UsageError("grid must read start:stop:step");
    }
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (step <= 0.0 || stop < start) {
        throw UsageError("grid needs step > 0 and stop >= start");
    }
    const double span = (stop - start) / step;
    if (span > 1e6) {
        throw UsageError("grid has too many points");
    }
    const auto count = static_cast<int64_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (int64_t i = 0; i < count; ++i) {
        out.push_back(snap(start + static_cast<double>(i) * step));
    }
    return out;
}

std::vector<double> merge_grids(std::vector<double> a, const std::vector<double> &b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw RuntimeFailure("cannot open '" + path + "'");
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string &path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.close();
    if (!out) {
        throw RuntimeFailure("cannot write '" + path + "'");
    }
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw RuntimeFailure("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 15]);
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace lmn_cli
