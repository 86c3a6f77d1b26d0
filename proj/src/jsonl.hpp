// Copyright 2026 The actdet Authors
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

#pragma once

// Shared JSON Lines plumbing for the file readers and writers.

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "actdet/errors.hpp"

namespace actdet::jsonl {

using json = nlohmann::ordered_json;

struct Location {
  std::string_view source;
  std::size_t line;

  std::string prefix() const { return std::string(source) + ":" + std::to_string(line) + ": "; }
};

/// Calls fn(record, location) for every non-blank line.
template <typename Fn>
void for_each_record(std::istream& in, std::string_view source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Location loc{source, line_no};
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(loc.prefix() + "malformed record: " + e.what());
    }
    if (!record.is_object()) throw ValidationError(loc.prefix() + "record is not an object");
    fn(record, loc);
  }
  if (in.bad()) throw IoError(std::string(source) + ": read failure");
}

inline const json& field(const json& record, const char* name, const Location& loc) {
  const auto it = record.find(name);
  if (it == record.end()) {
    throw ValidationError(loc.prefix() + "missing field '" + name + "'");
  }
  return *it;
}

inline std::string get_string(const json& record, const char* name, const Location& loc) {
  const auto& v = field(record, name, loc);
  if (!v.is_string()) throw ValidationError(loc.prefix() + "field '" + name + "' must be a string");
  return v.get<std::string>();
}

inline double get_number(const json& record, const char* name, const Location& loc) {
  const auto& v = field(record, name, loc);
  if (!v.is_number()) throw ValidationError(loc.prefix() + "field '" + name + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(loc.prefix() + "field '" + name + "' is not finite");
  return d;
}

inline int get_int(const json& record, const char* name, const Location& loc) {
  const auto& v = field(record, name, loc);
  if (!v.is_number_integer()) {
    throw ValidationError(loc.prefix() + "field '" + name + "' must be an integer");
  }
  return v.get<int>();
}

inline void write_record(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

}  // namespace actdet::jsonl
