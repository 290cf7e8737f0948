#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace osq::toml {

// Minimal TOML subset: top-level and [section] tables of key = value pairs,
// values being strings, booleans, integers, floats (with optional digit
// underscores) or flat homogeneous arrays of those; '#' comments. No nested
// tables, no dotted keys, no dates, no multi-line strings. Errors carry
// line numbers and key names.

struct Value {
  std::variant<bool, long long, double, std::string,
               std::vector<std::string>, std::vector<double>>
      data;
  int line = 0;

  bool is_number() const;
  double as_number() const;  // int or float, widened
  bool as_bool() const;
  const std::string& as_string() const;
  std::vector<double> as_number_array() const;
  std::vector<std::string> as_string_array() const;
};

struct Table {
  std::map<std::string, Value> entries;

  bool has(const std::string& key) const;
  const Value* find(const std::string& key) const;
};

struct Document {
  Table root;
  std::map<std::string, Table> sections;

  const Table* section(const std::string& name) const;
};

// Throws Error(config_error) with "line N: ..." diagnostics.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace osq::toml
