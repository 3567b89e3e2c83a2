#include "lsasim/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lsasim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parseReal(const std::string& text, bool& ok) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  ok = end == text.c_str() + text.size() && !text.empty() && errno != ERANGE;
  return value;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile config;
  config.origin_ = origin;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_number = 0;
  while (std::getline(stream, raw)) {
    ++line_number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(origin + ":" + std::to_string(line_number) +
                          ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      config.sections_[section];  // a section may be empty but must be known
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_number) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_number) + ": empty key");
    }
    auto& entries = config.sections_[section];
    if (entries.count(key) != 0) {
      throw ConfigError(origin + ":" + std::to_string(line_number) + ": duplicate key '" + key +
                        "' in [" + section + "]");
    }
    entries[key] = Entry{value, line_number, false};
  }
  return config;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

bool ConfigFile::hasSection(const std::string& section) const {
  return sections_.count(section) != 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return nullptr;
  const auto entry = sec->second.find(key);
  return entry == sec->second.end() ? nullptr : &entry->second;
}

ConfigFile::Entry* ConfigFile::consume(const std::string& section, const std::string& key) {
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return nullptr;
  const auto entry = sec->second.find(key);
  if (entry == sec->second.end()) return nullptr;
  entry->second.consumed = true;
  return &entry->second;
}

void ConfigFile::fail(const std::string& key, const Entry& entry,
                      const std::string& reason) const {
  throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": key '" + key + "': " +
                    reason + " (got '" + entry.value + "')");
}

std::string ConfigFile::getString(const std::string& section, const std::string& key,
                                  const std::string& fallback) {
  const Entry* entry = consume(section, key);
  return entry ? entry->value : fallback;
}

double ConfigFile::getReal(const std::string& section, const std::string& key,
                           double fallback) {
  const Entry* entry = consume(section, key);
  if (!entry) return fallback;
  bool ok = false;
  const double value = parseReal(entry->value, ok);
  if (!ok) fail(key, *entry, "expected a real number");
  return value;
}

std::int64_t ConfigFile::getInt(const std::string& section, const std::string& key,
                                std::int64_t fallback) {
  const Entry* entry = consume(section, key);
  if (!entry) return fallback;
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(entry->value.c_str(), &end, 10);
  if (end != entry->value.c_str() + entry->value.size() || entry->value.empty() ||
      errno == ERANGE) {
    fail(key, *entry, "expected an integer");
  }
  return value;
}

std::uint64_t ConfigFile::getUint(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) {
  const Entry* entry = consume(section, key);
  if (!entry) return fallback;
  const std::string& text = entry->value;
  if (text.empty() || text.front() == '-') fail(key, *entry, "expected a non-negative integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    fail(key, *entry, "expected a non-negative integer");
  }
  return value;
}

std::vector<double> ConfigFile::getRealList(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) {
  const Entry* entry = consume(section, key);
  if (!entry) return fallback;
  std::vector<double> values;
  std::string item;
  std::istringstream stream(entry->value);
  while (std::getline(stream, item, ',')) {
    const std::string token = trim(item);
    if (token.empty()) fail(key, *entry, "expected a comma-separated list of real numbers");
    bool ok = false;
    const double value = parseReal(token, ok);
    if (!ok) fail(key, *entry, "expected a comma-separated list of real numbers");
    values.push_back(value);
  }
  if (values.empty()) fail(key, *entry, "expected a non-empty list");
  return values;
}

void ConfigFile::requireAllConsumed(const std::vector<std::string>& known_sections) const {
  for (const auto& [section, entries] : sections_) {
    const bool known =
        std::find(known_sections.begin(), known_sections.end(), section) != known_sections.end();
    if (!known) {
      if (section.empty()) {
        throw ConfigError(origin_ + ": keys must appear inside a [section] header");
      }
      throw ConfigError(origin_ + ": unknown section [" + section + "]");
    }
    for (const auto& [key, entry] : entries) {
      if (!entry.consumed) {
        throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": unknown key '" + key +
                          "' in [" + section + "]");
      }
    }
  }
}

}  // namespace lsasim
