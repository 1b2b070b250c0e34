// Source-level abstract syntax.
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gtfl/types.hpp"

namespace gtfl {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K {
    Var,     // name
    IntLit,  // ival
    BoolLit, // bval
    Lam,     // name, ann (param type), a (body)
    App,     // a b
    Add,     // a b
    Eq,      // a b   (extension: integer equality)
    If,      // a b c
    Rec,     // fields
    Proj,    // a, name (label)
    Asc,     // a, ann
    Let,     // name, ann (may be null = unannotated), a (bound), b (body)
  };
  K k;
  int line = 0, col = 0;
  std::string name;
  long ival = 0;
  bool bval = false;
  GT ann;
  TermPtr a, b, c;
  std::vector<std::pair<Label, TermPtr>> fields;
};

TermPtr mk_term(Term t);
std::string pretty(const TermPtr& t);

}  // namespace gtfl
