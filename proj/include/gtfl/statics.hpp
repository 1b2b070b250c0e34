// Static semantics: static subtyping and its extrema, consistent subtyping,
// gradual destructors, consistent subtype extrema, gradual meet, and the
// source type checker.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "gtfl/ast.hpp"
#include "gtfl/types.hpp"

namespace gtfl {

// Width + depth record subtyping, contravariant arrows.
bool static_subtype(const ST& a, const ST& b);
std::optional<ST> static_join(const ST& a, const ST& b);
std::optional<ST> static_meet(const ST& a, const ST& b);

bool consistent_subtype(const GT& a, const GT& b);

// Gradual destructors (partial).
std::optional<GT> cdom(const GT& s);
std::optional<GT> ccod(const GT& s);
std::optional<GT> cproj(const GT& s, const Label& l);

// Consistent subtype join/meet (partial).
std::optional<GT> csub_join(const GT& a, const GT& b);
std::optional<GT> csub_meet(const GT& a, const GT& b);

// Gradual meet: greatest lower bound in the precision order (partial).
std::optional<GT> gradual_meet(const GT& a, const GT& b);

// ---------------------------------------------------------------------------
// Type checking

using TypeEnv = std::map<std::string, GT>;

struct TypeError {
  std::string msg;
  int line = 0, col = 0;
};

struct TypeResult {
  GT type;  // null on error
  std::optional<TypeError> error;
  bool ok() const { return type != nullptr; }
};

TypeResult typecheck(const TermPtr& t, const TypeEnv& env = {});

}  // namespace gtfl
