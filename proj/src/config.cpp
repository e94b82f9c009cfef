// Copyright 2026 The Vidalign Authors
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

#include "vidalign/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vidalign {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

IniFile IniFile::parse_string(std::string_view text) {
  IniFile ini;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated section header");
      }
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (section.empty()) {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": empty section name");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key");
    }
    ini.entries_[section + "." + key] = value;
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  return entries_.count(section + "." + key) > 0;
}

std::string IniFile::get_string(const std::string& section,
                                const std::string& key,
                                const std::string& fallback) const {
  const std::string full = section + "." + key;
  const auto it = entries_.find(full);
  const std::string value = it == entries_.end() ? fallback : it->second;
  resolved_[full] = value;
  return value;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
  const std::string raw = get_string(section, key, "");
  if (raw.empty()) {
    std::ostringstream os;
    os << fallback;
    resolved_[section + "." + key] = os.str();
    return fallback;
  }
  std::size_t pos = 0;
  const double value = std::stod(raw, &pos);
  if (pos != raw.size()) {
    throw std::invalid_argument("config " + section + "." + key +
                                ": not a number: " + raw);
  }
  return value;
}

int IniFile::get_int(const std::string& section, const std::string& key,
                     int fallback) const {
  const std::string raw = get_string(section, key, "");
  if (raw.empty()) {
    resolved_[section + "." + key] = std::to_string(fallback);
    return fallback;
  }
  std::size_t pos = 0;
  const int value = std::stoi(raw, &pos);
  if (pos != raw.size()) {
    throw std::invalid_argument("config " + section + "." + key +
                                ": not an integer: " + raw);
  }
  return value;
}

std::uint64_t IniFile::get_u64(const std::string& section,
                               const std::string& key,
                               std::uint64_t fallback) const {
  const std::string raw = get_string(section, key, "");
  if (raw.empty()) {
    resolved_[section + "." + key] = std::to_string(fallback);
    return fallback;
  }
  std::size_t pos = 0;
  const unsigned long long value = std::stoull(raw, &pos);
  if (pos != raw.size()) {
    throw std::invalid_argument("config " + section + "." + key +
                                ": not an unsigned integer: " + raw);
  }
  return static_cast<std::uint64_t>(value);
}

bool IniFile::get_bool(const std::string& section, const std::string& key,
                       bool fallback) const {
  std::string raw = get_string(section, key, "");
  if (raw.empty()) {
    resolved_[section + "." + key] = fallback ? "true" : "false";
    return fallback;
  }
  std::transform(raw.begin(), raw.end(), raw.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
  if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
  throw std::invalid_argument("config " + section + "." + key +
                              ": not a boolean: " + raw);
}

std::string IniFile::dump_resolved() const {
  std::map<std::string, std::string> merged = entries_;
  for (const auto& [k, v] : resolved_) merged[k] = v;
  std::ostringstream os;
  for (const auto& [k, v] : merged) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace vidalign
