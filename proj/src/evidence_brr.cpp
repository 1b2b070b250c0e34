#include <set>

#include "gtfl/evidence.hpp"
#include "gtfl/statics.hpp"

namespace gtfl {

namespace {

using K = BType::K;
using MK = Mapping::K;

BT unknown_arrow_b() { return bt_arrow(bt_unknown(), bt_unknown()); }
BT unknown_row_b() { return bt_rec({}, true); }

Mapping field_mapping(const BT& rec, const Label& l) {
  auto it = rec->fields.find(l);
  return it != rec->fields.end() ? it->second : default_mapping(*rec);
}

std::set<Label> union_labels(const BT& a, const BT& b) {
  std::set<Label> s;
  for (auto& [l, m] : a->fields) s.insert(l);
  for (auto& [l, m] : b->fields) s.insert(l);
  return s;
}

}  // namespace

// --------------------------------- interior ---------------------------------

namespace {

struct MPair {
  Mapping l, r;
};

std::optional<MPair> interior_mapping(const Mapping& a, const Mapping& b) {
  if (b.k == MK::Absent) {
    // <M, absent> : the label is dropped by the supertype
    return MPair{a, m_absent()};
  }
  if (b.k == MK::Req) {
    if (a.k == MK::Absent) return std::nullopt;  // absence cannot provide l
    auto i = interior_brr(a.bound, b.bound);
    if (!i) return std::nullopt;
    return MPair{m_req(i->l), m_req(i->r)};
  }
  // optional on the right
  if (a.k == MK::Absent) {
    // Not in the figure, but forced by the worked compositions: an absent
    // field stays absent in every supertype.
    return MPair{m_absent(), m_absent()};
  }
  auto i = interior_brr(a.bound, b.bound);
  if (!i) return MPair{a, m_absent()};
  return MPair{a, m_opt(i->r)};
}

}  // namespace

std::optional<BrrEvidence> interior_brr(const BT& a, const BT& b) {
  if (a->k == K::Unknown && b->k == K::Unknown)
    return BrrEvidence{bt_unknown(), bt_unknown()};
  if (a->k == K::Int || a->k == K::Bool) {
    if (b->k == a->k || b->k == K::Unknown) return BrrEvidence{a, a};
    return std::nullopt;
  }
  if (a->k == K::Unknown && (b->k == K::Int || b->k == K::Bool))
    return BrrEvidence{b, b};
  if (a->k == K::Arrow || b->k == K::Arrow) {
    BT aa = a->k == K::Unknown ? unknown_arrow_b() : a;
    BT bb = b->k == K::Unknown ? unknown_arrow_b() : b;
    if (aa->k != K::Arrow || bb->k != K::Arrow) return std::nullopt;
    auto d = interior_brr(bb->dom, aa->dom);  // contravariant
    auto c = interior_brr(aa->cod, bb->cod);
    if (!d || !c) return std::nullopt;
    return BrrEvidence{bt_arrow(d->r, c->l), bt_arrow(d->l, c->r)};
  }
  if (a->k == K::Rec || b->k == K::Rec) {
    BT aa = a->k == K::Unknown ? unknown_row_b() : a;
    BT bb = b->k == K::Unknown ? unknown_row_b() : b;
    if (aa->k != K::Rec || bb->k != K::Rec) return std::nullopt;
    std::map<Label, Mapping> lf, rf;
    for (auto& l : union_labels(aa, bb)) {
      auto mp = interior_mapping(field_mapping(aa, l), field_mapping(bb, l));
      if (!mp) return std::nullopt;
      lf.emplace(l, mp->l);
      rf.emplace(l, mp->r);
    }
    bool right_row = aa->row && bb->row;
    return BrrEvidence{bt_rec(std::move(lf), aa->row),
                       bt_rec(std::move(rf), right_row)};
  }
  return std::nullopt;
}

// ------------------------------- gradual meet -------------------------------

namespace {

std::optional<Mapping> meet_mapping(const Mapping& a, const Mapping& b) {
  if (a.k == MK::Absent && b.k == MK::Absent) return m_absent();
  if (a.k == MK::Absent || b.k == MK::Absent) {
    const Mapping& other = a.k == MK::Absent ? b : a;
    if (other.k == MK::Opt) return m_absent();
    return std::nullopt;  // absent against required
  }
  auto m = gradual_meet_brr(a.bound, b.bound);
  if (a.k == MK::Req || b.k == MK::Req) {
    if (!m) return std::nullopt;
    return m_req(*m);
  }
  return m ? m_opt(*m) : m_absent();
}

}  // namespace

std::optional<BT> gradual_meet_brr(const BT& a, const BT& b) {
  if (b->k == K::Unknown) return a;
  if (a->k == K::Unknown) return b;
  if (a->k != b->k) return std::nullopt;
  switch (a->k) {
    case K::Int:
    case K::Bool:
      return a;
    case K::Arrow: {
      auto d = gradual_meet_brr(a->dom, b->dom);
      auto c = gradual_meet_brr(a->cod, b->cod);
      if (!d || !c) return std::nullopt;
      return bt_arrow(*d, *c);
    }
    case K::Rec: {
      std::map<Label, Mapping> fs;
      for (auto& l : union_labels(a, b)) {
        auto m = meet_mapping(field_mapping(a, l), field_mapping(b, l));
        if (!m) return std::nullopt;
        fs.emplace(l, *m);
      }
      return bt_rec(std::move(fs), a->row && b->row);
    }
    default:
      return std::nullopt;
  }
}

// -------------------------- consistent subtype extrema -----------------------

namespace {

std::optional<Mapping> join_mapping(const Mapping& a, const Mapping& b) {
  if (a.k == MK::Absent || b.k == MK::Absent) return m_absent();
  if (a.k == MK::Req && b.k == MK::Req) {
    auto j = csub_join_brr(a.bound, b.bound);
    if (!j) return std::nullopt;
    return m_req(*j);
  }
  auto j = csub_join_brr(a.bound, b.bound);
  return j ? m_opt(*j) : m_absent();
}

std::optional<Mapping> meet_mapping_cs(const Mapping& a, const Mapping& b) {
  if (a.k == MK::Absent) return b;
  if (b.k == MK::Absent) return a;
  if (a.k == MK::Req || b.k == MK::Req) {
    auto m = csub_meet_brr(a.bound, b.bound);
    if (!m) return std::nullopt;
    return m_req(*m);
  }
  auto m = csub_meet_brr(a.bound, b.bound);
  return m ? m_opt(*m) : m_absent();
}

template <typename F>
std::optional<BT> extrema_rec(const BT& a, const BT& b, bool star_unknown,
                              F&& per_mapping) {
  std::map<Label, Mapping> fs;
  for (auto& l : union_labels(a, b)) {
    auto m = per_mapping(field_mapping(a, l), field_mapping(b, l));
    if (!m) return std::nullopt;
    fs.emplace(l, *m);
  }
  return bt_rec(std::move(fs), star_unknown);
}

}  // namespace

std::optional<BT> csub_join_brr(const BT& a, const BT& b) {
  if (a->k == K::Unknown && b->k != K::Unknown) return csub_join_brr(b, a);
  switch (a->k) {
    case K::Unknown:
      return bt_unknown();
    case K::Int:
    case K::Bool:
      if (b->k == a->k || b->k == K::Unknown) return a;
      return std::nullopt;
    case K::Arrow: {
      BT bb = b->k == K::Unknown ? unknown_arrow_b() : b;
      if (bb->k != K::Arrow) return std::nullopt;
      auto d = csub_meet_brr(a->dom, bb->dom);
      auto c = csub_join_brr(a->cod, bb->cod);
      if (!d || !c) return std::nullopt;
      return bt_arrow(*d, *c);
    }
    case K::Rec: {
      BT bb = b->k == K::Unknown ? unknown_row_b() : b;
      if (bb->k != K::Rec) return std::nullopt;
      return extrema_rec(a, bb, a->row && bb->row, join_mapping);
    }
  }
  return std::nullopt;
}

std::optional<BT> csub_meet_brr(const BT& a, const BT& b) {
  if (a->k == K::Unknown && b->k != K::Unknown) return csub_meet_brr(b, a);
  switch (a->k) {
    case K::Unknown:
      return bt_unknown();
    case K::Int:
    case K::Bool:
      if (b->k == a->k || b->k == K::Unknown) return a;
      return std::nullopt;
    case K::Arrow: {
      BT bb = b->k == K::Unknown ? unknown_arrow_b() : b;
      if (bb->k != K::Arrow) return std::nullopt;
      auto d = csub_join_brr(a->dom, bb->dom);
      auto c = csub_meet_brr(a->cod, bb->cod);
      if (!d || !c) return std::nullopt;
      return bt_arrow(*d, *c);
    }
    case K::Rec: {
      BT bb = b->k == K::Unknown ? unknown_row_b() : b;
      if (bb->k != K::Rec) return std::nullopt;
      return extrema_rec(a, bb, a->row || bb->row, meet_mapping_cs);
    }
  }
  return std::nullopt;
}

// ------------------------------ well-formedness -----------------------------

namespace {

bool wf_mapping(const Mapping& a, const Mapping& b) {
  if (b.k == MK::Absent) return true;
  if (b.k == MK::Req)
    return a.k == MK::Req && wf_brr({a.bound, b.bound});
  // optional right: some subtype of the left bound must pair with exactly
  // the right bound (the interior against the bound reproduces it)
  if (a.k == MK::Absent) return false;
  auto i = interior_brr(a.bound, b.bound);
  return i && bt_eq(i->r, b.bound);
}

}  // namespace

bool wf_brr(const BrrEvidence& e) {
  const BT& a = e.l;
  const BT& b = e.r;
  if (a->k == K::Unknown || b->k == K::Unknown) return a->k == b->k;
  if (a->k != b->k) return false;
  switch (a->k) {
    case K::Int:
    case K::Bool:
      return true;
    case K::Arrow:
      return wf_brr({b->dom, a->dom}) && wf_brr({a->cod, b->cod});
    case K::Rec: {
      if (!a->row && b->row) return false;
      for (auto& l : union_labels(a, b))
        if (!wf_mapping(field_mapping(a, l), field_mapping(b, l))) return false;
      return true;
    }
    default:
      return false;
  }
}

// ------------------------------- composition --------------------------------

std::optional<BrrEvidence> compose_brr(const BrrEvidence& e1,
                                       const BrrEvidence& e2) {
  auto mid = gradual_meet_brr(e1.r, e2.l);
  if (!mid) return std::nullopt;
  auto i1 = interior_brr(e1.l, *mid);
  if (!i1) return std::nullopt;
  auto i2 = interior_brr(*mid, e2.r);
  if (!i2) return std::nullopt;
  return interior_brr(i1->l, i2->r);
}

}  // namespace gtfl
