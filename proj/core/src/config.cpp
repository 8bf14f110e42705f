#include "rso/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "rso/errors.hpp"

namespace rso {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": invalid key '" +
                        std::string(key) + "'");
    }
    const std::string k(key);
    if (auto it = cfg.entries_.find(k); it != cfg.entries_.end()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": field '" + k +
                        "' repeats line " + std::to_string(it->second.line));
    }
    cfg.entries_[k] = Entry{std::string(value), line_no};
  }
  return cfg;
}

Config Config::parse_string(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  return parse(in, source);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'");
  entries_[key] = Entry{value, 0};
}

std::string Config::where(const std::string& key) const {
  const auto it = entries_.find(key);
  const std::string line =
      it != entries_.end() && it->second.line > 0 ? ":" + std::to_string(it->second.line) : "";
  return source_ + line + ": field '" + key + "'";
}

std::optional<std::string> Config::str(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return str(key).value_or(fallback);
}

std::optional<double> Config::real(const std::string& key) const {
  const auto s = str(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const char* b = s->data();
  const char* e = b + s->size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ConfigError(where(key) + ": expected a number, got '" + *s + "'");
  return v;
}

double Config::real(const std::string& key, double fallback) const {
  return real(key).value_or(fallback);
}

std::optional<std::int64_t> Config::integer(const std::string& key) const {
  const auto s = str(key);
  if (!s) return std::nullopt;
  std::int64_t v = 0;
  const char* b = s->data();
  const char* e = b + s->size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) {
    throw ConfigError(where(key) + ": expected an integer, got '" + *s + "'");
  }
  return v;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
  return integer(key).value_or(fallback);
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) const {
  const auto s = str(key);
  if (!s) return fallback;
  std::uint64_t v = 0;
  const char* b = s->data();
  const char* e = b + s->size();
  int base = 10;
  if (s->size() > 2 && (*s)[0] == '0' && ((*s)[1] == 'x' || (*s)[1] == 'X')) {
    b += 2;
    base = 16;
  }
  const auto [p, ec] = std::from_chars(b, e, v, base);
  if (ec != std::errc() || p != e || b == e) {
    throw ConfigError(where(key) + ": expected an unsigned 64-bit integer, got '" + *s + "'");
  }
  return v;
}

bool Config::flag(const std::string& key, bool fallback) const {
  const auto s = str(key);
  if (!s) return fallback;
  if (*s == "true" || *s == "1" || *s == "yes" || *s == "on") return true;
  if (*s == "false" || *s == "0" || *s == "no" || *s == "off") return false;
  throw ConfigError(where(key) + ": expected true or false, got '" + *s + "'");
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  const auto s = str(key);
  if (!s) return out;
  std::string_view rest = *s;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    double v = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size()) {
      throw ConfigError(where(key) + ": bad list item '" + std::string(item) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void Config::require_known(const std::vector<std::string>& known) const {
  for (const auto& [k, e] : entries_) {
    bool found = false;
    for (const auto& name : known) found = found || name == k;
    if (!found) throw ConfigError(where(k) + ": unknown key");
  }
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, e] : entries_) {
    feed(k);
    feed("=");
    feed(e.value);
    feed("\n");
  }
  return h;
}

std::string Config::hash_hex() const {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace rso
