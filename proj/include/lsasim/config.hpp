#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lsasim/types.hpp"

namespace lsasim {

// Minimal sectioned key = value configuration format:
//
//   # comment -- '#' starts a comment anywhere on a line
//   [section]
//   key = value            # scalars, or comma-separated lists
//
// Keys are unique within a section (a duplicate is an error). Typed getters
// mark keys as consumed; requireAllConsumed() then rejects anything left
// over, which catches misspelled keys with a line-anchored message.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
  static ConfigFile load(const std::string& path);  // ConfigError if unreadable

  bool hasSection(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  // Each getter returns the fallback when the key is absent and throws
  // ConfigError (naming key and line) when the value does not parse.
  std::string getString(const std::string& section, const std::string& key,
                        const std::string& fallback);
  double getReal(const std::string& section, const std::string& key, double fallback);
  std::int64_t getInt(const std::string& section, const std::string& key, std::int64_t fallback);
  std::uint64_t getUint(const std::string& section, const std::string& key,
                        std::uint64_t fallback);
  std::vector<double> getRealList(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback);

  // Throws ConfigError on the first unconsumed key or unknown section.
  void requireAllConsumed(const std::vector<std::string>& known_sections) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
  };

  const Entry* find(const std::string& section, const std::string& key) const;
  Entry* consume(const std::string& section, const std::string& key);
  [[noreturn]] void fail(const std::string& key, const Entry& entry,
                         const std::string& reason) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace lsasim
