#pragma once

#include <string>
#include <string_view>

#include "sps/dsl/ast.hpp"

namespace sps::dsl {

// Throws sps::Error(Parse) with a "name:line:col: message" diagnostic.
Document parse(std::string_view text, const std::string& source_name = "<input>");

std::string print(const Document& doc);
std::string print_expr(const Expr& e);
std::string print_assertion(const AssertionExpr& a);

}  // namespace sps::dsl
