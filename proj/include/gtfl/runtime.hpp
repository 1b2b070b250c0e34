// Two interpreters over RTerm: the standard semantics RL, where pending
// ascriptions wait on the stack, and the space-efficient semantics RL+, which
// merges adjacent ascriptions eagerly and defers failures via a bottom
// element. Plus space accounting and the empirical bisimulation comparator.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gtfl/elaborate.hpp"

namespace gtfl {

struct Value;
using VPtr = std::shared_ptr<const Value>;

struct EnvNode {
  std::string name;
  VPtr v;
  std::shared_ptr<const EnvNode> next;
};
using EnvPtr = std::shared_ptr<const EnvNode>;

struct Closure {
  std::string param;
  RT body;
  EnvPtr env;
};

struct RecordVal {
  std::vector<std::pair<Label, VPtr>> fields;
};

// A raw value with at most one pending evidence wrapper.
struct Value {
  std::variant<long, bool, Closure, RecordVal> raw;
  std::optional<Evidence> wrap;
};

struct Outcome {
  enum class K { Val, RuntimeError, Diverged };
  K k = K::Diverged;
  VPtr value;         // K::Val
  std::string error;  // K::RuntimeError
  int line = 0, col = 0;
};

struct SpaceMetrics {
  long steps = 0;
  long max_evidence_size = 0;
  // Deepest chain of adjacent pending ascription frames seen on the stack.
  long max_pending_ascriptions = 0;
};

struct TraceEvent {
  long step;
  std::string rule;
  std::string redex;
  SpaceMetrics metrics;
};

struct EvalResult {
  Outcome outcome;
  SpaceMetrics metrics;
  std::vector<TraceEvent> trace;
};

EvalResult eval_rl(const RT& e, long budget, bool trace = false);
EvalResult eval_rlplus(const RT& e, long budget, bool trace = false);

// Space consumption of a program, parameterized by the cost of one evidence
// object; counts one unit per term node plus f on every evidence slot.
long space_of(const std::function<long(const Evidence&)>& f, const RT& e);

// 2 * (3 + dom_l)^(1 + h) where dom_l is the number of distinct labels in the
// program's evidence and h the maximum evidence height.
long compute_bound_B(const RT& e);

struct BisimVerdict {
  bool related = false;
  std::string detail;
  Outcome rl;
  Outcome rlplus;
};

// Runs the term under both semantics and relates the outcomes: same outcome
// category, and values equal raw-for-raw with equal composed wrappers.
BisimVerdict bisim_compare(const RT& e, long budget);

std::string show_value(const VPtr& v);

}  // namespace gtfl
