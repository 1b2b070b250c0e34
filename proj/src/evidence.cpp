// Backend-generic evidence operations: dispatch, inversion operators,
// measures, and total composition.
#include <algorithm>

#include "gtfl/evidence.hpp"
#include "gtfl/statics.hpp"

namespace gtfl {

namespace {

std::optional<BT> bdom(const BT& t) {
  if (t->k == BType::K::Unknown) return bt_unknown();
  if (t->k == BType::K::Arrow) return t->dom;
  return std::nullopt;
}

std::optional<BT> bcod(const BT& t) {
  if (t->k == BType::K::Unknown) return bt_unknown();
  if (t->k == BType::K::Arrow) return t->cod;
  return std::nullopt;
}

std::optional<BT> bproj(const BT& t, const Label& l) {
  if (t->k == BType::K::Unknown) return bt_unknown();
  if (t->k != BType::K::Rec) return std::nullopt;
  auto it = t->fields.find(l);
  if (it == t->fields.end()) {
    if (t->row) return bt_unknown();
    return std::nullopt;  // absent by default in a record
  }
  if (it->second.k == Mapping::K::Absent) return std::nullopt;
  return it->second.bound;  // required or optional: project the bound
}

}  // namespace

bool wf_ev(const Evidence& e) {
  if (auto* g = std::get_if<GrEvidence>(&e)) return wf_gr(*g);
  return wf_brr(std::get<BrrEvidence>(e));
}

std::optional<Evidence> interior_ev(BackendKind backend, const GT& a,
                                    const GT& b) {
  if (backend == BackendKind::GR) {
    auto i = interior_gr(a, b);
    if (!i) return std::nullopt;
    return Evidence{*i};
  }
  auto i = interior_brr(bt_of_gt(a), bt_of_gt(b));
  if (!i) return std::nullopt;
  return Evidence{*i};
}

std::optional<Evidence> branch_evidence(BackendKind backend, const GT& si,
                                        const GT& s2, const GT& s3) {
  if (backend == BackendKind::GR) {
    auto j = csub_join(s2, s3);
    if (!j) return std::nullopt;
    auto i = interior_gr(si, *j);
    if (!i) return std::nullopt;
    return Evidence{*i};
  }
  auto j = csub_join_brr(bt_of_gt(s2), bt_of_gt(s3));
  if (!j) return std::nullopt;
  auto i = interior_brr(bt_of_gt(si), *j);
  if (!i) return std::nullopt;
  return Evidence{*i};
}

std::optional<Evidence> compose_ev(const Evidence& a, const Evidence& b) {
  if (auto* ga = std::get_if<GrEvidence>(&a)) {
    auto* gb = std::get_if<GrEvidence>(&b);
    if (!gb) return std::nullopt;
    auto c = compose_gr(*ga, *gb);
    if (!c) return std::nullopt;
    return Evidence{*c};
  }
  auto* bb = std::get_if<BrrEvidence>(&b);
  if (!bb) return std::nullopt;
  auto c = compose_brr(std::get<BrrEvidence>(a), *bb);
  if (!c) return std::nullopt;
  return Evidence{*c};
}

std::optional<Evidence> idom_ev(const Evidence& e) {
  if (auto* g = std::get_if<GrEvidence>(&e)) {
    auto d2 = cdom(g->r);
    auto d1 = cdom(g->l);
    if (!d2 || !d1) return std::nullopt;
    return Evidence{GrEvidence{*d2, *d1}};  // contravariant swap
  }
  auto& b = std::get<BrrEvidence>(e);
  auto d2 = bdom(b.r);
  auto d1 = bdom(b.l);
  if (!d2 || !d1) return std::nullopt;
  return Evidence{BrrEvidence{*d2, *d1}};
}

std::optional<Evidence> icod_ev(const Evidence& e) {
  if (auto* g = std::get_if<GrEvidence>(&e)) {
    auto c1 = ccod(g->l);
    auto c2 = ccod(g->r);
    if (!c1 || !c2) return std::nullopt;
    return Evidence{GrEvidence{*c1, *c2}};
  }
  auto& b = std::get<BrrEvidence>(e);
  auto c1 = bcod(b.l);
  auto c2 = bcod(b.r);
  if (!c1 || !c2) return std::nullopt;
  return Evidence{BrrEvidence{*c1, *c2}};
}

std::optional<Evidence> iproj_ev(const Evidence& e, const Label& l) {
  if (auto* g = std::get_if<GrEvidence>(&e)) {
    auto p1 = cproj(g->l, l);
    auto p2 = cproj(g->r, l);
    if (!p1 || !p2) return std::nullopt;
    return Evidence{GrEvidence{*p1, *p2}};
  }
  auto& b = std::get<BrrEvidence>(e);
  auto p1 = bproj(b.l, l);
  auto p2 = bproj(b.r, l);
  if (!p1 || !p2) return std::nullopt;
  return Evidence{BrrEvidence{*p1, *p2}};
}

bool ev_eq(const Evidence& a, const Evidence& b) {
  if (a.index() != b.index()) return false;
  if (auto* ga = std::get_if<GrEvidence>(&a)) {
    auto& gb = std::get<GrEvidence>(b);
    return gt_eq(ga->l, gb.l) && gt_eq(ga->r, gb.r);
  }
  auto& ba = std::get<BrrEvidence>(a);
  auto& bb = std::get<BrrEvidence>(b);
  return bt_eq(ba.l, bb.l) && bt_eq(ba.r, bb.r);
}

std::string show(const Evidence& e) {
  if (auto* g = std::get_if<GrEvidence>(&e))
    return "<" + show(g->l) + ", " + show(g->r) + ">";
  auto& b = std::get<BrrEvidence>(e);
  return "<" + show(b.l) + ", " + show(b.r) + ">";
}

long ev_size(const Evidence& e) {
  if (auto* g = std::get_if<GrEvidence>(&e))
    return type_size(g->l) + type_size(g->r);
  auto& b = std::get<BrrEvidence>(e);
  return type_size(b.l) + type_size(b.r);
}

long ev_height(const Evidence& e) {
  if (auto* g = std::get_if<GrEvidence>(&e))
    return std::max(type_height(g->l), type_height(g->r));
  auto& b = std::get<BrrEvidence>(e);
  return std::max(type_height(b.l), type_height(b.r));
}

long ev_dom_labels(const Evidence& e) {
  std::map<Label, bool> ls;
  if (auto* g = std::get_if<GrEvidence>(&e)) {
    collect_labels(g->l, ls);
    collect_labels(g->r, ls);
  } else {
    auto& b = std::get<BrrEvidence>(e);
    collect_labels(b.l, ls);
    collect_labels(b.r, ls);
  }
  return (long)ls.size();
}

TotalEvidence compose_total(const TotalEvidence& a, const TotalEvidence& b) {
  if (a.bottom() || b.bottom()) return TotalEvidence{};
  auto c = compose_ev(*a.ev, *b.ev);
  if (!c) return TotalEvidence{};
  return TotalEvidence{*c};
}

}  // namespace gtfl
