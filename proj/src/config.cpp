#include "merodiff/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "merodiff/errors.hpp"

namespace merodiff {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrorCode::ConfigError, "bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigError, "expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrorCode::ConfigError, "empty key at line " + std::to_string(lineno));
    if (!section.empty()) key = section + "." + key;
    if (cfg.kv_.count(key)) fail(ErrorCode::ConfigError, "duplicate key: " + key);
    cfg.kv_[key] = val;
  }
  return cfg;
}

std::string Config::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) fail(ErrorCode::ConfigError, "missing required key: " + key);
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

long Config::get_long(const std::string& key) const {
  try {
    return std::stol(get_string(key));
  } catch (const std::logic_error&) {
    fail(ErrorCode::ConfigError, "key is not an integer: " + key);
  }
}

long Config::get_long(const std::string& key, long def) const {
  return has(key) ? get_long(key) : def;
}

double Config::get_double(const std::string& key) const {
  try {
    return std::stod(get_string(key));
  } catch (const std::logic_error&) {
    fail(ErrorCode::ConfigError, "key is not a number: " + key);
  }
}

double Config::get_double(const std::string& key, double def) const {
  return has(key) ? get_double(key) : def;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) const {
  if (!has(key)) return def;
  try {
    return std::stoull(get_string(key));
  } catch (const std::logic_error&) {
    fail(ErrorCode::ConfigError, "key is not an unsigned integer: " + key);
  }
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      fail(ErrorCode::ConfigError, "bad number '" + tok + "' in key " + key);
    }
  }
  if (out.empty()) fail(ErrorCode::ConfigError, "empty list for key " + key);
  return out;
}

std::vector<long> Config::get_longs(const std::string& key) const {
  std::vector<long> out;
  for (double d : get_doubles(key)) out.push_back(static_cast<long>(d));
  return out;
}

void Config::check_known(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : kv_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      fail(ErrorCode::ConfigError, "unknown config key: " + k);
  }
}

}  // namespace merodiff
