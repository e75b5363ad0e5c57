#include "sqg/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sqg/errors.hpp"

namespace sqg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok) return false;
  }
  return k.find("..") == std::string::npos;
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string loc = source + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(loc + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(loc + "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(loc + "key '" + key + "' has no value");
    if (cfg.entries_.count(key)) {
      throw ConfigError(loc + "duplicate key '" + key + "' (first set on line " +
                        std::to_string(cfg.entries_[key].line) + ")");
    }
    cfg.entries_[key] = Entry{value, line_no};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string KeyValueConfig::where(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return source_ + ": ";
  return source_ + ":" + std::to_string(it->second.line) + ": ";
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
  return it->second.value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  const auto d = to_double(v);
  if (!d) throw ConfigError(where(key) + "key '" + key + "': expected a finite number, got '" + v + "'");
  return *d;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::optional<double> KeyValueConfig::get_optional_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError(where(key) + "key '" + key + "': expected an integer, got '" + v + "'");
  }
  return i;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  const std::string v = get_string(key);
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  int index = 0;
  while (std::getline(in, item, ',')) {
    const auto d = to_double(trim(item));
    if (!d) {
      throw ConfigError(where(key) + "key '" + key + "': item " + std::to_string(index) + " ('" + trim(item) +
                        "') is not a finite number");
    }
    out.push_back(*d);
    ++index;
  }
  if (!v.empty() && v.back() == ',') throw ConfigError(where(key) + "key '" + key + "': trailing comma");
  return out;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : entries_) {
    if (!known.count(key)) {
      throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> KeyValueConfig::values() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, e] : entries_) out[k] = e.value;
  return out;
}

}  // namespace sqg
