#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "starset/errors.hpp"

namespace starset {

// Flat key = value configuration with optional [section] grouping.
// '#' starts a comment.  Keys and values are trimmed; serialization is
// sorted, so parse(serialize(c)) == c (lossless round-trip).
struct config {
  // sections[""] holds top-level keys
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const {
    auto s = sections.find(section);
    if (s == sections.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
  }
  void set(const std::string& section, const std::string& key, const std::string& value) {
    sections[section][key] = value;
  }

  friend bool operator==(const config& a, const config& b) { return a.sections == b.sections; }
};

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return s.substr(b, e - b);
}
}  // namespace detail

inline config parse_config(const std::string& text) {
  config c;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']' && line.size() > 2, errc::config_invalid,
              "bad section header at line " + std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      require(!section.empty(), errc::config_invalid,
              "empty section name at line " + std::to_string(lineno));
      c.sections[section];  // sections may be empty but must round-trip
      continue;
    }
    std::size_t eq = line.find('=');
    require(eq != std::string::npos, errc::config_invalid,
            "expected key = value at line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    require(!key.empty(), errc::config_invalid, "empty key at line " + std::to_string(lineno));
    require(c.sections[section].count(key) == 0, errc::config_invalid,
            "duplicate key '" + key + "' at line " + std::to_string(lineno));
    c.sections[section][key] = val;
  }
  return c;
}

inline std::string serialize_config(const config& c) {
  std::string out;
  auto dump_section = [&](const std::map<std::string, std::string>& kv) {
    for (auto& [k, v] : kv) out += k + " = " + v + "\n";
  };
  auto top = c.sections.find("");
  if (top != c.sections.end()) dump_section(top->second);
  for (auto& [name, kv] : c.sections) {
    if (name.empty()) continue;
    out += "[" + name + "]\n";
    dump_section(kv);
  }
  return out;
}

inline config load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::config_invalid, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace starset
