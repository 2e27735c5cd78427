// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace itb {

// Status values shared with the C API and the CLI exit-code contract:
// 0 pass, 1 assertion failure, 2 usage/schema, 3 blocked/absent, 4 sequencing.
enum class Status : int {
    Ok = 0,
    Fail = 1,
    Usage = 2,
    Absent = 3,
    Sequence = 4,
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}
    Status status() const { return status_; }

private:
    Status status_;
};

namespace text {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char delim);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string to_lower(std::string s);
bool all_digits(const std::string& s);
bool is_ipv4(const std::string& s);
std::string pad_int(long long value, int width);

std::string hex_encode(const std::string& bytes);
std::string hex_decode(const std::string& hex);  // throws Error(Usage) on odd/bad input

// "k=v;k=v" payload codec used for every non-XML message on the bus.
// Values must not contain ';'; build() enforces this.
using KvPairs = std::vector<std::pair<std::string, std::string>>;
std::string kv_build(const KvPairs& pairs);
KvPairs kv_parse(const std::string& payload);
std::optional<std::string> kv_get(const KvPairs& pairs, const std::string& key);
// kv_get that throws Error(Usage) when the key is missing.
std::string kv_need(const KvPairs& pairs, const std::string& key);
std::string kv_or(const KvPairs& pairs, const std::string& key, const std::string& fallback);

// Space-separated k=v tokens with optional double quotes around values,
// e.g.:  to=MERCHANT field=reason equals="Merchant cannot accept this ..."
// Bare tokens (no '=') are returned with an empty value.
KvPairs token_parse(const std::string& line);

// Sectioned key/value text, the on-disk idiom shared by case files,
// campaign files and scenario files:
//
//   [section name]
//   key = value
//   # comment
//
// Repeated keys are preserved in order.
struct Entry {
    std::string key;
    std::string value;
    int line;
};
struct Section {
    std::string name;
    int line;
    std::vector<Entry> entries;
};
std::vector<Section> parse_sections(const std::string& content,
                                    const std::string& origin);
// Same line grammar without section headers.
std::vector<Entry> parse_entries(const std::string& content, const std::string& origin);

std::string read_file(const std::string& path);  // throws Error(Usage)
void write_file(const std::string& path, const std::string& content);

}  // namespace text
}  // namespace itb
