#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace siren {

//! Error naming the offending key path (and line, when read from text).
class ConfigError : public std::runtime_error
{
public:
  ConfigError(const std::string& key, const std::string& what)
    : std::runtime_error(key.empty() ? what : key + ": " + what)
    , key_(key)
  {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

//! Flat typed key/value configuration read from a TOML subset:
//!   key = value   with strings, numbers, booleans and numeric arrays,
//!   [section]     prefixing the following keys as "section.key",
//!   # comments.
class Config
{
public:
  enum class Type
  {
    string,
    number,
    boolean,
    array
  };

  struct Value
  {
    Type type;
    std::string text;           // string payload, or the literal
    double number = 0.0;
    bool boolean = false;
    std::vector<double> array;
  };

  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  //! "key=value"; the value follows the file syntax, bare words are strings.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, Value value) { values_[key] = std::move(value); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, Value>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_array(const std::string& key, const std::vector<double>& fallback) const;

  //! Keys not in the allowed list; used to reject typos.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& allowed) const;

private:
  std::map<std::string, Value> values_;
};

//! Parses one value literal; throws ConfigError(key, ...).
Config::Value parse_config_value(const std::string& key, const std::string& literal,
                                 bool bare_word_is_string);

//! Replaces (or appends) a top-level `key = value` line in a config file,
//! leaving all other lines untouched.
void persist_config_value(const std::string& path, const std::string& key,
                          const std::string& literal);

} // namespace siren
