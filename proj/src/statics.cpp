#include "gtfl/statics.hpp"

#include <set>

namespace gtfl {

// ------------------------------ static subtyping ----------------------------

bool static_subtype(const ST& a, const ST& b) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case SType::K::Int:
    case SType::K::Bool:
      return true;
    case SType::K::Arrow:
      return static_subtype(b->dom, a->dom) && static_subtype(a->cod, b->cod);
    case SType::K::Rec:
      // width: a may declare more labels; depth: covariant fields
      for (auto& [l, tb] : b->fields) {
        auto it = a->fields.find(l);
        if (it == a->fields.end()) return false;
        if (!static_subtype(it->second, tb)) return false;
      }
      return true;
  }
  return false;
}

std::optional<ST> static_join(const ST& a, const ST& b) {
  if (a->k != b->k) return std::nullopt;
  switch (a->k) {
    case SType::K::Int:
    case SType::K::Bool:
      return a;
    case SType::K::Arrow: {
      auto d = static_meet(a->dom, b->dom);
      auto c = static_join(a->cod, b->cod);
      if (!d || !c) return std::nullopt;
      return st_arrow(*d, *c);
    }
    case SType::K::Rec: {
      // Join keeps only the shared labels; all shared joins must be defined.
      std::map<Label, ST> fs;
      for (auto& [l, ta] : a->fields) {
        auto it = b->fields.find(l);
        if (it == b->fields.end()) continue;
        auto j = static_join(ta, it->second);
        if (!j) return std::nullopt;
        fs.emplace(l, *j);
      }
      return st_rec(std::move(fs));
    }
  }
  return std::nullopt;
}

std::optional<ST> static_meet(const ST& a, const ST& b) {
  if (a->k != b->k) return std::nullopt;
  switch (a->k) {
    case SType::K::Int:
    case SType::K::Bool:
      return a;
    case SType::K::Arrow: {
      auto d = static_join(a->dom, b->dom);
      auto c = static_meet(a->cod, b->cod);
      if (!d || !c) return std::nullopt;
      return st_arrow(*d, *c);
    }
    case SType::K::Rec: {
      // Meet takes the union of labels; shared fields are met.
      std::map<Label, ST> fs = a->fields;
      for (auto& [l, tb] : b->fields) {
        auto it = fs.find(l);
        if (it == fs.end()) {
          fs.emplace(l, tb);
        } else {
          auto m = static_meet(it->second, tb);
          if (!m) return std::nullopt;
          it->second = *m;
        }
      }
      return st_rec(std::move(fs));
    }
  }
  return std::nullopt;
}

// --------------------------- consistent subtyping ---------------------------

bool consistent_subtype(const GT& a, const GT& b) {
  if (a->k == GType::K::Unknown || b->k == GType::K::Unknown) return true;
  if (a->k != b->k) return false;
  switch (a->k) {
    case GType::K::Int:
    case GType::K::Bool:
      return true;
    case GType::K::Arrow:
      return consistent_subtype(b->dom, a->dom) &&
             consistent_subtype(a->cod, b->cod);
    case GType::K::Rec:
      for (auto& [l, tb] : b->fields) {
        auto it = a->fields.find(l);
        if (it == a->fields.end()) {
          if (!a->row) return false;  // a row may plausibly carry l
        } else if (!consistent_subtype(it->second, tb)) {
          return false;
        }
      }
      return true;
    default:
      return false;
  }
}

// ------------------------------ destructors --------------------------------

std::optional<GT> cdom(const GT& s) {
  if (s->k == GType::K::Unknown) return gt_unknown();
  if (s->k == GType::K::Arrow) return s->dom;
  return std::nullopt;
}

std::optional<GT> ccod(const GT& s) {
  if (s->k == GType::K::Unknown) return gt_unknown();
  if (s->k == GType::K::Arrow) return s->cod;
  return std::nullopt;
}

std::optional<GT> cproj(const GT& s, const Label& l) {
  if (s->k == GType::K::Unknown) return gt_unknown();
  if (s->k != GType::K::Rec) return std::nullopt;
  auto it = s->fields.find(l);
  if (it != s->fields.end()) return it->second;
  if (s->row) return gt_unknown();
  return std::nullopt;
}

// ------------------------- consistent subtype extrema ------------------------

std::optional<GT> csub_join(const GT& a, const GT& b) {
  using K = GType::K;
  if (a->k == K::Unknown && b->k != K::Unknown) return csub_join(b, a);
  switch (a->k) {
    case K::Unknown:
      return gt_unknown();  // ? v ?
    case K::Int:
      if (b->k == K::Int || b->k == K::Unknown) return gt_int();
      return std::nullopt;
    case K::Bool:
      if (b->k == K::Bool || b->k == K::Unknown) return gt_bool();
      return std::nullopt;
    case K::Arrow: {
      GT bb = b->k == K::Unknown ? gt_arrow(gt_unknown(), gt_unknown()) : b;
      if (bb->k != K::Arrow) return std::nullopt;
      auto d = csub_meet(a->dom, bb->dom);
      auto c = csub_join(a->cod, bb->cod);
      if (!d || !c) return std::nullopt;
      return gt_arrow(*d, *c);
    }
    case K::Rec: {
      GT bb = b->k == K::Unknown ? gt_rec({}, true) : b;
      if (bb->k != K::Rec) return std::nullopt;
      auto shared_joins = [&](std::map<Label, GT>& out) -> bool {
        for (auto& [l, ta] : a->fields) {
          auto it = bb->fields.find(l);
          if (it == bb->fields.end()) continue;
          auto j = csub_join(ta, it->second);
          if (!j) return false;
          out.emplace(l, *j);
        }
        return true;
      };
      auto subset = [](const GType& x, const GType& y) {
        for (auto& [l, t] : x.fields)
          if (!y.fields.count(l)) return false;
        return true;
      };
      if (!a->row && !bb->row) {
        // plain v plain: shared labels only, plain result
        std::map<Label, GT> fs;
        if (!shared_joins(fs)) return std::nullopt;
        return gt_rec(std::move(fs), false);
      }
      // At least one side is a row; orient so the row is on the right.
      const GT& l = bb->row ? a : bb;
      const GT& r = bb->row ? bb : a;
      std::map<Label, GT> fs;
      if (!shared_joins(fs)) return std::nullopt;
      if (subset(*l, *r)) {
        // the non-row side's labels are all covered: keep its designator
        return gt_rec(std::move(fs), l->row);
      }
      // the left side has extra labels the row may or may not carry
      return gt_rec(std::move(fs), true);
    }
  }
  return std::nullopt;
}

std::optional<GT> csub_meet(const GT& a, const GT& b) {
  using K = GType::K;
  if (a->k == K::Unknown && b->k != K::Unknown) return csub_meet(b, a);
  switch (a->k) {
    case K::Unknown:
      return gt_unknown();
    case K::Int:
      if (b->k == K::Int || b->k == K::Unknown) return gt_int();
      return std::nullopt;
    case K::Bool:
      if (b->k == K::Bool || b->k == K::Unknown) return gt_bool();
      return std::nullopt;
    case K::Arrow: {
      GT bb = b->k == K::Unknown ? gt_arrow(gt_unknown(), gt_unknown()) : b;
      if (bb->k != K::Arrow) return std::nullopt;
      auto d = csub_join(a->dom, bb->dom);
      auto c = csub_meet(a->cod, bb->cod);
      if (!d || !c) return std::nullopt;
      return gt_arrow(*d, *c);
    }
    case K::Rec: {
      GT bb = b->k == K::Unknown ? gt_rec({}, true) : b;
      if (bb->k != K::Rec) return std::nullopt;
      std::map<Label, GT> fs;
      // shared labels are met
      for (auto& [l, ta] : a->fields) {
        auto it = bb->fields.find(l);
        if (it == bb->fields.end()) continue;
        auto m = csub_meet(ta, it->second);
        if (!m) return std::nullopt;
        fs.emplace(l, *m);
      }
      auto add_only = [&](const GT& self, const GT& other) -> bool {
        for (auto& [l, t] : self->fields) {
          if (other->fields.count(l)) continue;
          if (other->row) {
            // the other side might also carry l, at any type
            auto m = csub_meet(t, gt_unknown());
            if (!m) return false;
            fs.emplace(l, *m);
          } else {
            fs.emplace(l, t);
          }
        }
        return true;
      };
      if (!add_only(a, bb) || !add_only(bb, a)) return std::nullopt;
      return gt_rec(std::move(fs), a->row || bb->row);
    }
  }
  return std::nullopt;
}

// ------------------------------ gradual meet --------------------------------

std::optional<GT> gradual_meet(const GT& a, const GT& b) {
  using K = GType::K;
  if (b->k == K::Unknown) return a;
  if (a->k == K::Unknown) return b;
  if (a->k != b->k) return std::nullopt;
  switch (a->k) {
    case K::Int:
    case K::Bool:
      return a;
    case K::Arrow: {
      auto d = gradual_meet(a->dom, b->dom);
      auto c = gradual_meet(a->cod, b->cod);
      if (!d || !c) return std::nullopt;
      return gt_arrow(*d, *c);
    }
    case K::Rec: {
      // Missing labels on one side may only be supplied by the other side's
      // row designator (expansion at ?).
      std::map<Label, GT> fs;
      std::set<Label> labels;
      for (auto& [l, t] : a->fields) labels.insert(l);
      for (auto& [l, t] : b->fields) labels.insert(l);
      for (auto& l : labels) {
        auto ia = a->fields.find(l);
        auto ib = b->fields.find(l);
        GT ta = ia != a->fields.end() ? ia->second
                : a->row              ? gt_unknown()
                                      : nullptr;
        GT tb = ib != b->fields.end() ? ib->second
                : b->row              ? gt_unknown()
                                      : nullptr;
        if (!ta || !tb) return std::nullopt;
        auto m = gradual_meet(ta, tb);
        if (!m) return std::nullopt;
        fs.emplace(l, *m);
      }
      return gt_rec(std::move(fs), a->row && b->row);
    }
    default:
      return std::nullopt;
  }
}

// ------------------------------ type checking -------------------------------

namespace {

struct Check {
  std::optional<TypeError> err;

  GT fail(const Term& t, std::string msg) {
    if (!err) err = TypeError{std::move(msg), t.line, t.col};
    return nullptr;
  }

  GT go(const TermPtr& tp, const TypeEnv& env) {
    const Term& t = *tp;
    switch (t.k) {
      case Term::K::Var: {
        auto it = env.find(t.name);
        if (it == env.end()) return fail(t, "unbound variable '" + t.name + "'");
        return it->second;
      }
      case Term::K::IntLit:
        return gt_int();
      case Term::K::BoolLit:
        return gt_bool();
      case Term::K::Lam: {
        TypeEnv env2 = env;
        env2[t.name] = t.ann;
        GT body = go(t.a, env2);
        if (!body) return nullptr;
        return gt_arrow(t.ann, body);
      }
      case Term::K::App: {
        GT tf = go(t.a, env);
        if (!tf) return nullptr;
        GT ta = go(t.b, env);
        if (!ta) return nullptr;
        auto d = cdom(tf);
        auto c = ccod(tf);
        if (!d || !c)
          return fail(t, "cannot apply non-function type " + show(tf));
        if (!consistent_subtype(ta, *d))
          return fail(t, "argument type " + show(ta) +
                             " is not a consistent subtype of " + show(*d));
        return *c;
      }
      case Term::K::Add:
      case Term::K::Eq: {
        GT l = go(t.a, env);
        if (!l) return nullptr;
        GT r = go(t.b, env);
        if (!r) return nullptr;
        if (!consistent_subtype(l, gt_int()))
          return fail(t, "left operand type " + show(l) + " is not Int-like");
        if (!consistent_subtype(r, gt_int()))
          return fail(t, "right operand type " + show(r) + " is not Int-like");
        return t.k == Term::K::Add ? gt_int() : gt_bool();
      }
      case Term::K::If: {
        GT c = go(t.a, env);
        if (!c) return nullptr;
        if (!consistent_subtype(c, gt_bool()))
          return fail(t, "condition type " + show(c) + " is not Bool-like");
        GT th = go(t.b, env);
        if (!th) return nullptr;
        GT el = go(t.c, env);
        if (!el) return nullptr;
        auto j = csub_join(th, el);
        if (!j)
          return fail(t, "branch types " + show(th) + " and " + show(el) +
                             " have no consistent join");
        return *j;
      }
      case Term::K::Rec: {
        std::map<Label, GT> fs;
        for (auto& [l, sub] : t.fields) {
          GT ft = go(sub, env);
          if (!ft) return nullptr;
          fs.emplace(l, ft);
        }
        return gt_rec(std::move(fs), false);
      }
      case Term::K::Proj: {
        GT tr = go(t.a, env);
        if (!tr) return nullptr;
        auto p = cproj(tr, t.name);
        if (!p)
          return fail(t, "type " + show(tr) + " has no field '" + t.name + "'");
        return *p;
      }
      case Term::K::Asc: {
        GT ti = go(t.a, env);
        if (!ti) return nullptr;
        if (!consistent_subtype(ti, t.ann))
          return fail(t, "ascription: " + show(ti) +
                             " is not a consistent subtype of " + show(t.ann));
        return t.ann;
      }
      case Term::K::Let: {
        GT tb = go(t.a, env);
        if (!tb) return nullptr;
        GT bound = tb;
        if (t.ann) {
          if (!consistent_subtype(tb, t.ann))
            return fail(t, "let binding: " + show(tb) +
                               " is not a consistent subtype of " + show(t.ann));
          bound = t.ann;
        }
        TypeEnv env2 = env;
        env2[t.name] = bound;
        return go(t.b, env2);
      }
    }
    return nullptr;
  }
};

}  // namespace

TypeResult typecheck(const TermPtr& t, const TypeEnv& env) {
  Check c;
  GT ty = c.go(t, env);
  return TypeResult{ty, c.err};
}

}  // namespace gtfl
