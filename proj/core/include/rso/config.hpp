#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rso {

/// Flat key=value configuration: one entry per line, '#' starts a comment.
/// Lookups report "source:line: field 'key': ..." on malformed values.
class Config {
 public:
  Config() = default;
  static Config parse(std::istream& in, const std::string& source = "<stream>");
  static Config parse_string(std::string_view text, const std::string& source = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  std::string str(const std::string& key, const std::string& fallback) const;
  std::optional<std::string> str(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  std::optional<double> real(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::optional<std::int64_t> integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  std::vector<double> reals(const std::string& key) const;

  /// Throws ConfigError naming the first key outside `known`.
  void require_known(const std::vector<std::string>& known) const;
  /// Field diagnostic prefix "source:line: field 'key'".
  std::string where(const std::string& key) const;

  /// FNV-1a over the sorted "key=value\n" lines.
  std::uint64_t hash() const;
  std::string hash_hex() const;
  const std::string& source() const noexcept { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries_;
  std::string source_ = "<empty>";
};

}  // namespace rso
