#ifndef MERODIFF_CONFIG_HPP
#define MERODIFF_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace merodiff {

// Key-value experiment configuration with [section] headers; keys flatten to
// "section.key". '#' starts a comment. Unknown keys are rejected against the
// experiment's schema at run time.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long def) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  std::vector<double> get_doubles(const std::string& key) const;   // space-separated
  std::vector<long> get_longs(const std::string& key) const;

  // Throws ConfigError when a stored key is not in `allowed`.
  void check_known(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace merodiff

#endif
