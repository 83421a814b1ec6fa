#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "goalrec/pddl.hpp"

namespace goalrec::sexpr {

/// One node of a parsed s-expression: either an atom token or a list.
struct Node {
  bool is_list = false;
  std::string token;  // lower-cased; empty for lists
  std::vector<Node> children;
  SourcePos pos;

  bool is_token(std::string_view t) const { return !is_list && token == t; }
};

/// Parses every top-level expression in `text`. Comments start with ';'.
std::vector<Node> parse_all(std::string_view text);

/// Parses exactly one top-level expression.
Node parse_one(std::string_view text);

[[noreturn]] void fail(const SourcePos& pos, const std::string& message);

}  // namespace goalrec::sexpr
