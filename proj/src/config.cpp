#include "siren/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace siren {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line)
{
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\'))
      in_string = !in_string;
    else if (line[i] == '#' && !in_string)
      return line.substr(0, i);
  }
  return line;
}

std::optional<double> to_number(const std::string& s)
{
  if (s.empty())
    return std::nullopt;
  if (s == "inf" || s == "+inf")
    return HUGE_VAL;
  if (s == "-inf")
    return -HUGE_VAL;
  std::string cleaned;
  for (char c : s)
    if (c != '_')
      cleaned.push_back(c);
  char* end = nullptr;
  const double v = std::strtod(cleaned.c_str(), &end);
  if (end != cleaned.c_str() + cleaned.size() || std::isnan(v))
    return std::nullopt;
  return v;
}

bool valid_key(const std::string& key)
{
  if (key.empty())
    return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

} // namespace

Config::Value parse_config_value(const std::string& key, const std::string& literal,
                                 bool bare_word_is_string)
{
  const std::string v = trim(literal);
  Config::Value out;
  out.type = Config::Type::string;
  out.text = v;
  if (v.empty())
    throw ConfigError(key, "missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError(key, "unterminated string");
    std::string s;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char c = v[++i];
        s.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
      } else {
        s.push_back(v[i]);
      }
    }
    out.text = s;
    return out;
  }
  if (v == "true" || v == "false") {
    out.type = Config::Type::boolean;
    out.boolean = v == "true";
    return out;
  }
  if (v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError(key, "unterminated array");
    out.type = Config::Type::array;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty())
        continue;
      auto num = to_number(item);
      if (!num)
        throw ConfigError(key, "array element '" + item + "' is not a number");
      out.array.push_back(*num);
    }
    return out;
  }
  if (auto num = to_number(v)) {
    out.type = Config::Type::number;
    out.number = *num;
    return out;
  }
  if (bare_word_is_string)
    return out;
  throw ConfigError(key, "cannot parse value '" + v + "' (quote strings)");
}

Config Config::parse(std::istream& in)
{
  Config cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty())
      continue;
    const std::string where = "line " + std::to_string(lineno);
    if (s.front() == '[') {
      if (s.back() != ']' || !valid_key(trim(s.substr(1, s.size() - 2))))
        throw ConfigError(where, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where, "expected key = value");
    const std::string local = trim(s.substr(0, eq));
    if (!valid_key(local))
      throw ConfigError(where, "invalid key '" + local + "'");
    const std::string key = section.empty() ? local : section + "." + local;
    try {
      cfg.values_[key] = parse_config_value(key, s.substr(eq + 1), false);
    } catch (const ConfigError& e) {
      throw ConfigError(key, std::string(e.what()).substr(key.size() + 2) + " (" + where + ")");
    }
  }
  return cfg;
}

Config Config::parse_string(const std::string& text)
{
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", "cannot open config file '" + path + "'");
  return parse(in);
}

void Config::apply_override(const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError(assignment, "override must look like key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key))
    throw ConfigError(key, "invalid key");
  values_[key] = parse_config_value(key, assignment.substr(eq + 1), true);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  if (it->second.type != Type::string)
    throw ConfigError(key, "expected a string");
  return it->second.text;
}

double Config::get_double(const std::string& key, double fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  if (it->second.type != Type::number)
    throw ConfigError(key, "expected a number");
  return it->second.number;
}

long long Config::get_int(const std::string& key, long long fallback) const
{
  const double v = get_double(key, static_cast<double>(fallback));
  if (v != std::floor(v) || std::abs(v) > 9e15)
    throw ConfigError(key, "expected an integer");
  return static_cast<long long>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  if (it->second.type != Type::boolean)
    throw ConfigError(key, "expected true or false");
  return it->second.boolean;
}

std::vector<double> Config::get_array(const std::string& key,
                                      const std::vector<double>& fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  if (it->second.type == Type::number)
    return { it->second.number };
  if (it->second.type != Type::array)
    throw ConfigError(key, "expected a numeric array");
  return it->second.array;
}

std::vector<std::string> Config::unknown_keys(const std::vector<std::string>& allowed) const
{
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      out.push_back(key);
  return out;
}

void persist_config_value(const std::string& path, const std::string& key,
                          const std::string& literal)
{
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line))
      lines.push_back(line);
  }
  bool replaced = false;
  std::size_t first_section = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string s = trim(strip_comment(lines[i]));
    if (!s.empty() && s.front() == '[') {
      first_section = std::min(first_section, i);
      continue;
    }
    if (i > first_section)
      continue;
    const auto eq = s.find('=');
    if (eq != std::string::npos && trim(s.substr(0, eq)) == key) {
      lines[i] = key + " = " + literal;
      replaced = true;
    }
  }
  if (!replaced)
    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(first_section),
                 key + " = " + literal);
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw ConfigError(key, "cannot write config file '" + path + "'");
  for (const auto& l : lines)
    out << l << '\n';
}

} // namespace siren
