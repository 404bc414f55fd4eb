#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sps/error.hpp"

namespace sps::enc::detail {

using nlohmann::json;

[[noreturn]] inline void invalid(const std::string& msg) {
  throw Error(ErrorCode::InvalidDescription, msg);
}

json parse_json(std::string_view text);

// Typed field access; missing or mistyped fields are description errors.
const json& field(const json& j, const char* key);
bool has(const json& j, const char* key);
std::string get_string(const json& j, const char* key);
std::vector<std::string> get_strings(const json& j, const char* key);
std::size_t get_size(const json& j, const char* key);
double get_number(const json& j, const char* key);

bool is_identifier(const std::string& s);

// Tracks the names an emitted document declares so clashes are reported as
// description errors instead of surfacing later as DSL resolution failures.
class Names {
 public:
  explicit Names(std::set<std::string> reserved);
  void claim(const std::string& name, const std::string& what);

 private:
  std::set<std::string> taken_;
};

std::string join(const std::vector<std::string>& xs, const char* sep);

}  // namespace sps::enc::detail
