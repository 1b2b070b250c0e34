#include <cassert>
#include <set>

#include "gtfl/evidence.hpp"
#include "gtfl/statics.hpp"

namespace gtfl {

namespace {

using K = GType::K;

GT unknown_arrow() { return gt_arrow(gt_unknown(), gt_unknown()); }
GT unknown_row() { return gt_rec({}, true); }

std::set<Label> declared(const GT& t) {
  std::set<Label> s;
  for (auto& [l, unused] : t->fields) s.insert(l);
  return s;
}

}  // namespace

// ------------------------------ well-formedness -----------------------------

bool wf_gr(const GrEvidence& e) {
  const GT& a = e.l;
  const GT& b = e.r;
  if (a->k == K::Unknown || b->k == K::Unknown)
    return a->k == b->k;  // only <?,?> among unknown pairs
  if (a->k != b->k) return false;
  switch (a->k) {
    case K::Int:
    case K::Bool:
      return true;
    case K::Arrow:
      return wf_gr({b->dom, a->dom}) && wf_gr({a->cod, b->cod});
    case K::Rec: {
      // Right labels must be declared on the left, pointwise well-formed;
      // with equal label sets a plain left cannot face a row right.
      for (auto& [l, tb] : b->fields) {
        auto it = a->fields.find(l);
        if (it == a->fields.end()) return false;
        if (!wf_gr({it->second, tb})) return false;
      }
      if (a->fields.size() == b->fields.size() && !a->row && b->row)
        return false;
      return true;
    }
    default:
      return false;
  }
}

// --------------------------------- interior ---------------------------------

std::optional<GrEvidence> interior_gr(const GT& a, const GT& b) {
  // base types and fully unknown pairs
  if (a->k == K::Unknown && b->k == K::Unknown)
    return GrEvidence{gt_unknown(), gt_unknown()};
  if (a->k == K::Int || a->k == K::Bool) {
    if (b->k == a->k || b->k == K::Unknown) return GrEvidence{a, a};
    return std::nullopt;
  }
  if (a->k == K::Unknown && (b->k == K::Int || b->k == K::Bool))
    return GrEvidence{b, b};
  // arrows: the unknown expands structurally
  if (a->k == K::Arrow || b->k == K::Arrow) {
    GT aa = a->k == K::Unknown ? unknown_arrow() : a;
    GT bb = b->k == K::Unknown ? unknown_arrow() : b;
    if (aa->k != K::Arrow || bb->k != K::Arrow) return std::nullopt;
    auto d = interior_gr(bb->dom, aa->dom);  // contravariant
    auto c = interior_gr(aa->cod, bb->cod);
    if (!d || !c) return std::nullopt;
    return GrEvidence{gt_arrow(d->r, c->l), gt_arrow(d->l, c->r)};
  }
  if (a->k == K::Rec && b->k == K::Unknown) {
    if (a->fields.empty()) return GrEvidence{a, a};  // {} or {?}
    return GrEvidence{a, unknown_row()};
  }
  if (a->k == K::Unknown && b->k == K::Rec)
    return interior_gr(unknown_row(), b);
  if (a->k != K::Rec || b->k != K::Rec) return std::nullopt;

  // record against record
  std::map<Label, GT> afields = a->fields;
  for (auto& [l, tb] : b->fields) {
    if (afields.count(l)) continue;
    if (!a->row) return std::nullopt;  // left cannot plausibly carry l
    afields.emplace(l, gt_unknown());
  }
  std::map<Label, GT> lf, rf;
  for (auto& [l, tb] : b->fields) {
    auto i = interior_gr(afields.at(l), tb);
    if (!i) return std::nullopt;
    lf.emplace(l, i->l);
    rf.emplace(l, i->r);
  }
  bool extra = false;  // left-only labels, kept verbatim
  for (auto& [l, ta] : afields) {
    if (b->fields.count(l)) continue;
    extra = true;
    lf.emplace(l, ta);
  }
  if (!extra && !a->row)
    return GrEvidence{gt_rec(std::move(lf), false), gt_rec(std::move(rf), false)};
  return GrEvidence{gt_rec(std::move(lf), a->row),
                    gt_rec(std::move(rf), b->row)};
}

// ------------------------------- composition --------------------------------

std::optional<GrEvidence> compose_gr_direct(const GrEvidence& e1,
                                            const GrEvidence& e2) {
  const GT &a = e1.l, &b = e1.r, &c = e2.l, &d = e2.r;
  // fully unknown operands expand to match the other side's structure
  auto both_unknown = [](const GrEvidence& e) {
    return e.l->k == K::Unknown && e.r->k == K::Unknown;
  };
  if (both_unknown(e1) && both_unknown(e2))
    return GrEvidence{gt_unknown(), gt_unknown()};
  if (both_unknown(e1)) {
    if (c->k == K::Int || c->k == K::Bool) return e2;
    if (c->k == K::Arrow || d->k == K::Arrow)
      return compose_gr_direct({unknown_arrow(), unknown_arrow()}, e2);
    if (c->k == K::Rec || d->k == K::Rec)
      return compose_gr_direct({unknown_row(), unknown_row()}, e2);
    return std::nullopt;
  }
  if (both_unknown(e2)) {
    if (a->k == K::Int || a->k == K::Bool) return e1;
    if (a->k == K::Arrow || b->k == K::Arrow)
      return compose_gr_direct(e1, {unknown_arrow(), unknown_arrow()});
    if (a->k == K::Rec || b->k == K::Rec)
      return compose_gr_direct(e1, {unknown_row(), unknown_row()});
    return std::nullopt;
  }
  if (a->k == K::Int || a->k == K::Bool) {
    if (c->k != a->k) return std::nullopt;
    return e1;
  }
  if (a->k == K::Arrow) {
    if (c->k != K::Arrow || b->k != K::Arrow || d->k != K::Arrow)
      return std::nullopt;
    auto dm = compose_gr_direct({d->dom, c->dom}, {b->dom, a->dom});
    auto cd = compose_gr_direct({a->cod, b->cod}, {c->cod, d->cod});
    if (!dm || !cd) return std::nullopt;
    return GrEvidence{gt_arrow(dm->r, cd->l), gt_arrow(dm->l, cd->r)};
  }
  if (a->k != K::Rec || b->k != K::Rec || c->k != K::Rec || d->k != K::Rec)
    return std::nullopt;

  // Record case, label by label. For each label the two per-label evidence
  // fragments are composed; presence constraints flow right to left (a
  // label required downstream must be present upstream).
  std::set<Label> all = declared(a);
  for (auto& l : declared(c)) all.insert(l);
  for (auto& l : declared(d)) all.insert(l);

  std::map<Label, GT> lf, rf;
  for (auto& l : all) {
    bool in_a = a->fields.count(l), in_b = b->fields.count(l);
    bool in_c = c->fields.count(l), in_d = d->fields.count(l);
    // presence requirements on the middle and outer types
    if (!in_a && !a->row) return std::nullopt;   // l ∈ c∪d, left must carry it
    if (!in_b && (in_c || in_d) && !b->row) return std::nullopt;
    if (in_b && !in_c && !c->row) return std::nullopt;
    if (!in_c && in_d && !c->row) return std::nullopt;

    std::optional<GrEvidence> p1, p2;
    if (in_b)
      p1 = GrEvidence{a->fields.at(l), b->fields.at(l)};
    else if (in_a)
      p1 = interior_gr(a->fields.at(l), gt_unknown());
    else
      p1 = GrEvidence{gt_unknown(), gt_unknown()};
    if (in_c && in_d)
      p2 = GrEvidence{c->fields.at(l), d->fields.at(l)};
    else if (in_c)
      p2 = interior_gr(c->fields.at(l), gt_unknown());
    else if (in_d)
      p2 = interior_gr(gt_unknown(), d->fields.at(l));
    else
      p2 = GrEvidence{gt_unknown(), gt_unknown()};
    if (!p1 || !p2) return std::nullopt;
    auto comp = compose_gr_direct(*p1, *p2);
    if (!comp) return std::nullopt;
    lf.emplace(l, comp->l);
    if (in_d) rf.emplace(l, comp->r);
  }
  // Extra labels beyond d's in the final supertype are possible only when
  // the result's right side is a row and a label can actually flow there,
  // i.e. each of a, b and c either declares it or is itself a row.
  auto flows = [&](const Label& l) {
    return (a->fields.count(l) || a->row) && (b->fields.count(l) || b->row) &&
           (c->fields.count(l) || c->row);
  };
  bool middle_extra = a->row && b->row && c->row;
  for (auto& l : all)
    if (!d->fields.count(l) && flows(l)) middle_extra = true;
  bool right_row = d->row && middle_extra;
  return GrEvidence{gt_rec(std::move(lf), a->row),
                    gt_rec(std::move(rf), right_row)};
}

std::optional<GrEvidence> compose_gr_route(const GrEvidence& e1,
                                           const GrEvidence& e2) {
  auto mid = gradual_meet(e1.r, e2.l);
  if (!mid) return std::nullopt;
  auto i1 = interior_gr(e1.l, *mid);
  if (!i1) return std::nullopt;
  auto i2 = interior_gr(*mid, e2.r);
  if (!i2) return std::nullopt;
  return interior_gr(i1->l, i2->r);
}

std::optional<GrEvidence> compose_gr(const GrEvidence& a, const GrEvidence& b) {
  auto direct = compose_gr_direct(a, b);
#ifndef NDEBUG
  auto route = compose_gr_route(a, b);
  assert(direct.has_value() == route.has_value());
  if (direct && route)
    assert(gt_eq(direct->l, route->l) && gt_eq(direct->r, route->r));
#endif
  return direct;
}

}  // namespace gtfl
