// Finite-universe brute-force semantics: static-type enumeration,
// concretization/abstraction for both evidence flavors, lifted operators and
// relational composition of subtyping fragments. Ground truth for the
// property suites driven by `gtfl verify`.
#pragma once

#include <boost/dynamic_bitset.hpp>
#include <map>
#include <vector>

#include "gtfl/evidence.hpp"
#include "gtfl/statics.hpp"

namespace gtfl {

struct StLess {
  bool operator()(const ST& a, const ST& b) const { return st_cmp(a, b) < 0; }
};

struct Universe {
  int depth = 0;
  std::vector<Label> labels;
  std::vector<ST> members;  // all static types of height <= depth, sorted
  std::map<ST, int, StLess> index;
  // sub[i][j] iff members[i] <: members[j]; filled for depth <= 3 (fragment
  // operations over deeper universes are not tractable).
  std::vector<boost::dynamic_bitset<>> sub;
};

// Throws std::invalid_argument for depth < 1, depth > 4 or more than 3 labels.
Universe enumerate_universe(int depth, const std::vector<Label>& labels);

// Abstract-type enumerations used by the property suites.
std::vector<GT> enumerate_gradual(int depth, const std::vector<Label>& labels);
std::vector<BT> enumerate_brr(int depth, const std::vector<Label>& labels);

// Membership in the concretization.
bool in_gamma(const ST& t, const GT& s);
bool in_gamma(const ST& t, const BT& s);
boost::dynamic_bitset<> gamma_gr(const GT& s, const Universe& u);
boost::dynamic_bitset<> gamma_brr(const BT& s, const Universe& u);

// Abstraction of a non-empty set of static types; most precise sound cover.
GT alpha_gr(const std::vector<ST>& c);
BT alpha_brr(const std::vector<ST>& c);

// A subset of the static subtyping relation over a universe.
struct SubtypeFragment {
  std::vector<boost::dynamic_bitset<>> rows;  // rows[i] = right partners of i
  bool empty() const;
  bool operator==(const SubtypeFragment& o) const { return rows == o.rows; }
};

SubtypeFragment gamma_ev(const Evidence& e, const Universe& u);
SubtypeFragment rel_compose(const SubtypeFragment& r1,
                            const SubtypeFragment& r2);

// alpha of the relational composition of the two concretizations; nullopt
// when the composed fragment is empty (the composition is undefined).
std::optional<Evidence> oracle_compose(BackendKind backend, const Evidence& e1,
                                       const Evidence& e2, const Universe& u);

struct FcVerdict {
  bool ok = false;
  std::string witness;
};

// Forward completeness of compose_ev on (e1, e2): the concretization of the
// composition must equal the relational composition of the concretizations.
// Middles range over all of u; endpoint pairs are restricted to types of
// height <= endpoint_depth.
FcVerdict check_forward_complete(const Evidence& e1, const Evidence& e2,
                                 const Universe& u, int endpoint_depth);

struct SuiteReport {
  std::string suite;
  std::string backend;  // empty when flavor-independent
  long cases = 0;
  long failures = 0;
  std::vector<std::string> witnesses;  // first few failure descriptions
};

SuiteReport run_galois_suite(int depth, const std::vector<Label>& labels);
SuiteReport run_fc_suite(BackendKind b, int depth,
                         const std::vector<Label>& labels, int margin);
SuiteReport run_assoc_suite(BackendKind b, int depth,
                            const std::vector<Label>& labels);
SuiteReport run_csub_suite(int depth, const std::vector<Label>& labels,
                           int margin);
SuiteReport run_cod_suite(int depth, const std::vector<Label>& labels,
                          int margin);

}  // namespace gtfl
