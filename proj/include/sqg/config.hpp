#pragma once

// Flat "key = value" configuration files with dotted section prefixes:
//
//   # comment
//   alpha = 0.1
//   integrator.courant = 0.5
//   sweep.alphas = 0.1, 0.05, 0.025
//
// Every lookup error names the source and line of the offending entry.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sqg {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& source = "<config>");
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;

  /// Throws ConfigError for the first key not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

  /// Keys and values in key order; used to echo configs into outputs.
  std::map<std::string, std::string> values() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string where(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace sqg
