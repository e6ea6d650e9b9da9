#include "mfirl/harness/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfirl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                               ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

std::string Config::get(const std::string& key,
                        const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: " +
                             it->second);
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not an integer: " +
                             it->second);
  }
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not an integer: " +
                             it->second);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key " + key + ": not a boolean: " + v);
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_int_list(it->second);
}

std::vector<std::string> Config::get_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_string_list(it->second);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in list: " + text);
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad integer in list: " + item);
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in list: " + text);
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

}  // namespace mfirl
