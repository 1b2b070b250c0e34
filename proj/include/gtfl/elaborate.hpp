// Type-directed elaboration from source terms to the evidence-decorated
// runtime term language consumed by both interpreters.
#pragma once

#include <memory>
#include <vector>

#include "gtfl/ast.hpp"
#include "gtfl/evidence.hpp"
#include "gtfl/statics.hpp"

namespace gtfl {

struct RTerm;
using RT = std::shared_ptr<const RTerm>;

// A subterm in an elimination/ascription position together with the evidence
// that witnesses its consistent-subtyping premise.
struct EvTerm {
  Evidence ev;
  RT term;
};

// Runtime terms carry no source types beyond the evidence slots; lambda
// parameter types in particular are erased.
struct RTerm {
  enum class K { Num, Bool, Var, Lam, App, Add, Eq, If, Rec, Proj, Asc, Let };
  K k;
  int line = 0, col = 0;
  long ival = 0;
  bool bval = false;
  std::string name;  // Var name, Lam/Let binder, Proj label
  RT body;           // Lam body, Let body
  std::vector<EvTerm> sub;  // evidence-carrying operands, in evaluation order
  std::vector<std::pair<Label, RT>> fields;  // Rec
};

struct ElabResult {
  RT term;  // null on error
  GT type;
  std::optional<TypeError> error;
  bool ok() const { return term != nullptr; }
};

ElabResult elaborate(const TermPtr& t, BackendKind backend);

// Rendering of the elaborated term with evidence annotations (--emit rl).
std::string show_rl(const RT& t);

// All evidence objects appearing in the term, in syntactic order.
std::vector<Evidence> collect_evidence(const RT& t);

}  // namespace gtfl
