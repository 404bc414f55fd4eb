#include "common.hpp"

#include <cctype>

namespace sps::enc::detail {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("malformed description: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field '") + key + "'");
  return j.at(key);
}

bool has(const json& j, const char* key) { return j.is_object() && j.contains(key); }

std::string get_string(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) invalid(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) invalid(std::string("field '") + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) invalid(std::string("field '") + key + "' must be a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::size_t get_size(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    invalid(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double get_number(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) invalid(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  static const std::set<std::string> words{"if", "then", "else", "and", "where"};
  return words.count(s) == 0;
}

Names::Names(std::set<std::string> reserved) : taken_(std::move(reserved)) {
  for (const char* b : {"true", "false", "undefined", "Bool", "Real", "Probability", "RuleC",
                        "DerivationC", "AssertionC", "Reified", "Pr"})
    taken_.insert(b);
}

void Names::claim(const std::string& name, const std::string& what) {
  if (!is_identifier(name)) invalid(what + " '" + name + "' is not an identifier");
  if (!taken_.insert(name).second) invalid(what + " '" + name + "' clashes with another name");
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

}  // namespace sps::enc::detail
