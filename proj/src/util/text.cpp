// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "util/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace itb::text {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool is_ipv4(const std::string& s) {
    auto parts = split(s, '.');
    if (parts.size() != 4) return false;
    for (const auto& p : parts) {
        if (!all_digits(p) || p.size() > 3) return false;
        int v = std::stoi(p);
        if (v < 0 || v > 255) return false;
        if (p.size() > 1 && p[0] == '0') return false;  // no leading zeros
    }
    return true;
}

std::string pad_int(long long value, int width) {
    std::ostringstream os;
    os << value;
    std::string s = os.str();
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

std::string hex_encode(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string hex_decode(const std::string& hex) {
    if (hex.size() % 2 != 0) throw Error(Status::Usage, "hex string has odd length");
    std::string out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_val(hex[i]);
        int lo = hex_val(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(Status::Usage, "invalid hex digit");
        out.push_back(static_cast<char>((hi << 4) | lo));
    }
    return out;
}

std::string kv_build(const KvPairs& pairs) {
    std::string out;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].second.find(';') != std::string::npos)
            throw Error(Status::Usage, "kv payload value contains ';': " + pairs[i].second);
        if (i) out += ';';
        out += pairs[i].first;
        out += '=';
        out += pairs[i].second;
    }
    return out;
}

KvPairs kv_parse(const std::string& payload) {
    KvPairs out;
    if (payload.empty()) return out;
    for (const auto& field : split(payload, ';')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) {
            out.emplace_back(field, "");
        } else {
            out.emplace_back(field.substr(0, eq), field.substr(eq + 1));
        }
    }
    return out;
}

std::optional<std::string> kv_get(const KvPairs& pairs, const std::string& key) {
    for (const auto& [k, v] : pairs)
        if (k == key) return v;
    return std::nullopt;
}

std::string kv_need(const KvPairs& pairs, const std::string& key) {
    auto v = kv_get(pairs, key);
    if (!v) throw Error(Status::Usage, "payload missing key '" + key + "'");
    return *v;
}

std::string kv_or(const KvPairs& pairs, const std::string& key, const std::string& fallback) {
    auto v = kv_get(pairs, key);
    return v ? *v : fallback;
}

KvPairs token_parse(const std::string& line) {
    KvPairs out;
    size_t i = 0;
    const size_t n = line.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= n) break;
        std::string key;
        while (i < n && line[i] != '=' && !std::isspace(static_cast<unsigned char>(line[i])))
            key.push_back(line[i++]);
        std::string value;
        if (i < n && line[i] == '=') {
            ++i;
            if (i < n && line[i] == '"') {
                ++i;
                while (i < n && line[i] != '"') value.push_back(line[i++]);
                if (i >= n) throw Error(Status::Usage, "unterminated quote in: " + line);
                ++i;
            } else {
                while (i < n && !std::isspace(static_cast<unsigned char>(line[i])))
                    value.push_back(line[i++]);
            }
        }
        out.emplace_back(key, value);
    }
    return out;
}

std::vector<Section> parse_sections(const std::string& content,
                                    const std::string& origin) {
    std::vector<Section> sections;
    std::istringstream in(content);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(Status::Usage,
                            origin + ":" + std::to_string(line_no) + ": unterminated section header");
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Status::Usage,
                        origin + ":" + std::to_string(line_no) + ": expected 'key = value', got: " + line);
        if (sections.empty())
            throw Error(Status::Usage,
                        origin + ":" + std::to_string(line_no) + ": entry before any [section]");
        Entry e;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

std::vector<Entry> parse_entries(const std::string& content, const std::string& origin) {
    std::vector<Entry> entries;
    std::istringstream in(content);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Status::Usage,
                        origin + ":" + std::to_string(line_no) + ": expected 'key = value', got: " + line);
        Entry e;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Status::Absent, "cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Status::Usage, "cannot write file: " + path);
    out << content;
}

}  // namespace itb::text
