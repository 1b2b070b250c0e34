// Evidence backends: well-formedness, initial evidence (interior), consistent
// transitivity (composition), inversion operators, and the bottom-lifted
// total composition used by the space-efficient interpreter.
#pragma once

#include <optional>
#include <string>
#include <variant>

#include "gtfl/types.hpp"

namespace gtfl {

enum class BackendKind { GR, BRR };

struct GrEvidence {
  GT l, r;
};
struct BrrEvidence {
  BT l, r;
};
using Evidence = std::variant<GrEvidence, BrrEvidence>;

// --------------------------------- GR --------------------------------------

bool wf_gr(const GrEvidence& e);
std::optional<GrEvidence> interior_gr(const GT& a, const GT& b);
// Direct recursive definition (record case derived from the abstraction
// semantics) and the interior/meet route; compose_gr cross-asserts both.
std::optional<GrEvidence> compose_gr_direct(const GrEvidence& a,
                                            const GrEvidence& b);
std::optional<GrEvidence> compose_gr_route(const GrEvidence& a,
                                           const GrEvidence& b);
std::optional<GrEvidence> compose_gr(const GrEvidence& a, const GrEvidence& b);

// --------------------------------- BRR -------------------------------------

bool wf_brr(const BrrEvidence& e);
std::optional<BrrEvidence> interior_brr(const BT& a, const BT& b);
std::optional<BT> gradual_meet_brr(const BT& a, const BT& b);
std::optional<BT> csub_join_brr(const BT& a, const BT& b);
std::optional<BT> csub_meet_brr(const BT& a, const BT& b);
std::optional<BrrEvidence> compose_brr(const BrrEvidence& a,
                                       const BrrEvidence& b);

// ------------------------------- generic ------------------------------------

bool wf_ev(const Evidence& e);
std::optional<Evidence> interior_ev(BackendKind backend, const GT& a,
                                    const GT& b);
// Evidence for an if-branch: Si against the join of the branch types,
// computed in the backend's own lattice.
std::optional<Evidence> branch_evidence(BackendKind backend, const GT& si,
                                        const GT& s2, const GT& s3);
std::optional<Evidence> compose_ev(const Evidence& a, const Evidence& b);
std::optional<Evidence> idom_ev(const Evidence& e);
std::optional<Evidence> icod_ev(const Evidence& e);
std::optional<Evidence> iproj_ev(const Evidence& e, const Label& l);
bool ev_eq(const Evidence& a, const Evidence& b);
std::string show(const Evidence& e);
long ev_size(const Evidence& e);
long ev_height(const Evidence& e);
long ev_dom_labels(const Evidence& e);

// TotalEvidence: nullopt models the latent failure.
struct TotalEvidence {
  std::optional<Evidence> ev;
  bool bottom() const { return !ev.has_value(); }
};

TotalEvidence compose_total(const TotalEvidence& a, const TotalEvidence& b);

}  // namespace gtfl
