#include "optosqueeze/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "optosqueeze/errors.hpp"

namespace osq::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::config_error,
              "line " + std::to_string(line) + ": " + what);
}

bool is_bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

size_t skip_ws(const std::string& s, size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

bool at_end(const std::string& s, size_t i) {
  i = skip_ws(s, i);
  return i >= s.size() || s[i] == '#';
}

// Quoted string starting at s[i] == '"'; returns the position past the
// closing quote.
size_t parse_string(const std::string& s, size_t i, int line,
                    std::string& out) {
  out.clear();
  for (++i; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') return i + 1;
    if (c == '\\') {
      if (++i >= s.size()) break;
      switch (s[i]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: fail(line, "unsupported escape in string");
      }
    } else {
      out += c;
    }
  }
  fail(line, "unterminated string");
}

bool parse_number_token(const std::string& tok, long long& iv, double& dv,
                        bool& is_int) {
  if (tok.empty()) return false;
  if (tok.front() == '_' || tok.back() == '_' ||
      tok.find("__") != std::string::npos)
    return false;
  std::string t;
  t.reserve(tok.size());
  for (char c : tok)
    if (c != '_') t += c;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  auto ir = std::from_chars(b, e, iv);
  if (ir.ec == std::errc() && ir.ptr == e) {
    is_int = true;
    return true;
  }
  auto dr = std::from_chars(b, e, dv);
  if (dr.ec == std::errc() && dr.ptr == e) {
    is_int = false;
    return true;
  }
  return false;
}

// Scalar value at s[i]; returns the position past it.
size_t parse_scalar(const std::string& s, size_t i, int line, Value& out) {
  out.line = line;
  if (s[i] == '"') {
    std::string str;
    size_t j = parse_string(s, i, line, str);
    out.data = std::move(str);
    return j;
  }
  size_t j = i;
  while (j < s.size() && s[j] != ',' && s[j] != ']' && s[j] != '#' &&
         s[j] != ' ' && s[j] != '\t')
    ++j;
  std::string tok = s.substr(i, j - i);
  if (tok == "true") {
    out.data = true;
    return j;
  }
  if (tok == "false") {
    out.data = false;
    return j;
  }
  long long iv = 0;
  double dv = 0.0;
  bool is_int = false;
  if (!parse_number_token(tok, iv, dv, is_int))
    fail(line, "cannot parse value '" + tok + "'");
  if (is_int)
    out.data = iv;
  else
    out.data = dv;
  return j;
}

size_t parse_array(const std::string& s, size_t i, int line, Value& out) {
  out.line = line;
  std::vector<double> nums;
  std::vector<std::string> strs;
  bool any_string = false, any_number = false;
  ++i;  // past '['
  while (true) {
    i = skip_ws(s, i);
    if (i >= s.size() || s[i] == '#') fail(line, "unterminated array");
    if (s[i] == ']') {
      ++i;
      break;
    }
    Value elem;
    i = parse_scalar(s, i, line, elem);
    if (std::holds_alternative<std::string>(elem.data)) {
      any_string = true;
      strs.push_back(std::get<std::string>(elem.data));
    } else if (elem.is_number()) {
      any_number = true;
      nums.push_back(elem.as_number());
    } else {
      fail(line, "arrays hold numbers or strings");
    }
    if (any_string && any_number) fail(line, "mixed array element types");
    i = skip_ws(s, i);
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    if (i < s.size() && s[i] == ']') {
      ++i;
      break;
    }
    fail(line, "expected ',' or ']' in array");
  }
  if (any_string)
    out.data = std::move(strs);
  else
    out.data = std::move(nums);
  return i;
}

}  // namespace

bool Value::is_number() const {
  return std::holds_alternative<long long>(data) ||
         std::holds_alternative<double>(data);
}

double Value::as_number() const {
  if (std::holds_alternative<long long>(data))
    return double(std::get<long long>(data));
  if (std::holds_alternative<double>(data)) return std::get<double>(data);
  fail(line, "expected a number");
}

bool Value::as_bool() const {
  if (std::holds_alternative<bool>(data)) return std::get<bool>(data);
  fail(line, "expected a boolean");
}

const std::string& Value::as_string() const {
  if (std::holds_alternative<std::string>(data))
    return std::get<std::string>(data);
  fail(line, "expected a string");
}

std::vector<double> Value::as_number_array() const {
  if (std::holds_alternative<std::vector<double>>(data))
    return std::get<std::vector<double>>(data);
  fail(line, "expected an array of numbers");
}

std::vector<std::string> Value::as_string_array() const {
  if (std::holds_alternative<std::vector<std::string>>(data))
    return std::get<std::vector<std::string>>(data);
  fail(line, "expected an array of strings");
}

bool Table::has(const std::string& key) const {
  return entries.find(key) != entries.end();
}

const Value* Table::find(const std::string& key) const {
  auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

const Table* Document::section(const std::string& name) const {
  auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

Document parse(const std::string& text) {
  Document doc;
  Table* current = &doc.root;
  std::string current_name;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    size_t i = skip_ws(raw, 0);
    if (i >= raw.size() || raw[i] == '#') continue;

    if (raw[i] == '[') {
      size_t close = raw.find(']', i);
      if (close == std::string::npos) fail(line, "unterminated section header");
      std::string name = raw.substr(i + 1, close - i - 1);
      size_t b = name.find_first_not_of(" \t");
      size_t e = name.find_last_not_of(" \t");
      name = b == std::string::npos ? "" : name.substr(b, e - b + 1);
      if (name.empty()) fail(line, "empty section name");
      for (char c : name)
        if (!is_bare_char(c)) fail(line, "invalid section name '" + name + "'");
      if (!at_end(raw, close + 1))
        fail(line, "unexpected text after section header");
      if (doc.sections.count(name))
        fail(line, "duplicate section [" + name + "]");
      current = &doc.sections[name];
      current_name = name;
      continue;
    }

    size_t kb = i;
    while (i < raw.size() && is_bare_char(raw[i])) ++i;
    std::string key = raw.substr(kb, i - kb);
    if (key.empty()) fail(line, "expected a key");
    i = skip_ws(raw, i);
    if (i >= raw.size() || raw[i] != '=')
      fail(line, "expected '=' after key '" + key + "'");
    i = skip_ws(raw, i + 1);
    if (i >= raw.size() || raw[i] == '#')
      fail(line, "missing value for key '" + key + "'");

    Value v;
    if (raw[i] == '[')
      i = parse_array(raw, i, line, v);
    else
      i = parse_scalar(raw, i, line, v);
    if (!at_end(raw, i))
      fail(line, "unexpected text after value for key '" + key + "'");
    if (current->entries.count(key)) {
      std::string where =
          current_name.empty() ? "" : " in [" + current_name + "]";
      fail(line, "duplicate key '" + key + "'" + where);
    }
    current->entries.emplace(key, std::move(v));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io_error, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace osq::toml
