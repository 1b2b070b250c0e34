// Lexer and recursive-descent parser for .gtfl source programs.
//
// Grammar sketch (see README for the full table):
//   program  := def* term
//   def      := "def" IDENT ("(" IDENT ":" type ")")+ ":" type "=" term "in"
//   term     := "if" t "then" t "else" t | "let" x [":" type] "=" t "in" t
//             | "\" params "." t | asc
//   asc      := eq ("::" type)*
//   eq       := add ["==" add]
//   add      := app ("+" app)*
//   app      := postfix+
//   postfix  := atom ("." label)*
//   atom     := int | "true" | "false" | ident | "(" t ")" | "{" l "=" t, ... "}"
// Types: Int | Bool | ? | T -> T (right-assoc) | {l: T, ...} | {l: T, ..., ?}
// Comments run from '#' to end of line. Negative integer literals are a
// '-' immediately followed by digits.
#pragma once

#include <optional>
#include <string>

#include "gtfl/ast.hpp"

namespace gtfl {

struct ParseResult {
  TermPtr term;  // null on error
  std::string error;
  int line = 0, col = 0;
  bool ok() const { return term != nullptr; }
};

ParseResult parse_program(const std::string& src);

// Parses a type in isolation (tests, CLI helpers).
std::optional<GT> parse_type_string(const std::string& src);

}  // namespace gtfl
