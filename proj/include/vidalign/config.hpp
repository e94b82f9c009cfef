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

#ifndef VIDALIGN_CONFIG_HPP_
#define VIDALIGN_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace vidalign {

// INI-style configuration: `[section]` headers, `key = value` lines, `#`
// or `;` comments, whitespace trimmed. Every lookup (including ones that
// fall back to the default) is recorded, so dump_resolved() captures the
// full effective configuration of a run.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(std::string_view text);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;

  // "section.key=value" lines, sorted; covers every key ever looked up
  // plus all keys present in the file.
  std::string dump_resolved() const;

 private:
  std::map<std::string, std::string> entries_;  // "section.key" -> raw value
  mutable std::map<std::string, std::string> resolved_;
};

}  // namespace vidalign

#endif  // VIDALIGN_CONFIG_HPP_
