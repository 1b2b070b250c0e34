#include "gtfl/elaborate.hpp"

#include <sstream>

namespace gtfl {

namespace {

RT mk(RTerm t) { return std::make_shared<RTerm>(std::move(t)); }

// Elaboration re-runs the (syntax-directed) typing premises and turns each
// consistent-subtyping judgment into its interior evidence.
struct Elab {
  BackendKind backend;
  std::optional<TypeError> err;

  struct Out {
    RT term;
    GT type;
  };

  Out fail(const Term& t, std::string msg) {
    if (!err) err = TypeError{std::move(msg), t.line, t.col};
    return {nullptr, nullptr};
  }

  std::optional<Evidence> interior(const GT& a, const GT& b) {
    return interior_ev(backend, a, b);
  }

  RTerm base(const Term& t, RTerm::K k) {
    RTerm r;
    r.k = k;
    r.line = t.line;
    r.col = t.col;
    return r;
  }

  Out go(const TermPtr& tp, const TypeEnv& env) {
    const Term& t = *tp;
    switch (t.k) {
      case Term::K::Var: {
        auto it = env.find(t.name);
        if (it == env.end()) return fail(t, "unbound variable '" + t.name + "'");
        RTerm r = base(t, RTerm::K::Var);
        r.name = t.name;
        return {mk(std::move(r)), it->second};
      }
      case Term::K::IntLit: {
        RTerm r = base(t, RTerm::K::Num);
        r.ival = t.ival;
        return {mk(std::move(r)), gt_int()};
      }
      case Term::K::BoolLit: {
        RTerm r = base(t, RTerm::K::Bool);
        r.bval = t.bval;
        return {mk(std::move(r)), gt_bool()};
      }
      case Term::K::Lam: {
        TypeEnv env2 = env;
        env2[t.name] = t.ann;
        Out body = go(t.a, env2);
        if (!body.term) return body;
        RTerm r = base(t, RTerm::K::Lam);
        r.name = t.name;
        r.body = body.term;
        return {mk(std::move(r)), gt_arrow(t.ann, body.type)};
      }
      case Term::K::App: {
        Out f = go(t.a, env);
        if (!f.term) return f;
        Out a = go(t.b, env);
        if (!a.term) return a;
        auto d = cdom(f.type);
        auto c = ccod(f.type);
        if (!d || !c)
          return fail(t, "cannot apply non-function type " + show(f.type));
        auto e1 = interior(f.type, gt_arrow(*d, *c));
        if (!e1)
          return fail(t, "cannot apply non-function type " + show(f.type));
        auto e2 = interior(a.type, *d);
        if (!e2)
          return fail(t, "argument type " + show(a.type) +
                             " is not a consistent subtype of " + show(*d));
        RTerm r = base(t, RTerm::K::App);
        r.sub = {{*e1, f.term}, {*e2, a.term}};
        return {mk(std::move(r)), *c};
      }
      case Term::K::Add:
      case Term::K::Eq: {
        Out l = go(t.a, env);
        if (!l.term) return l;
        Out rr = go(t.b, env);
        if (!rr.term) return rr;
        auto e1 = interior(l.type, gt_int());
        if (!e1)
          return fail(t, "left operand type " + show(l.type) + " is not Int-like");
        auto e2 = interior(rr.type, gt_int());
        if (!e2)
          return fail(t,
                      "right operand type " + show(rr.type) + " is not Int-like");
        RTerm r = base(t, t.k == Term::K::Add ? RTerm::K::Add : RTerm::K::Eq);
        r.sub = {{*e1, l.term}, {*e2, rr.term}};
        return {mk(std::move(r)),
                t.k == Term::K::Add ? gt_int() : gt_bool()};
      }
      case Term::K::If: {
        Out c = go(t.a, env);
        if (!c.term) return c;
        auto e1 = interior(c.type, gt_bool());
        if (!e1)
          return fail(t, "condition type " + show(c.type) + " is not Bool-like");
        Out th = go(t.b, env);
        if (!th.term) return th;
        Out el = go(t.c, env);
        if (!el.term) return el;
        auto j = csub_join(th.type, el.type);
        if (!j)
          return fail(t, "branch types " + show(th.type) + " and " +
                             show(el.type) + " have no consistent join");
        auto e2 = branch_evidence(backend, th.type, th.type, el.type);
        auto e3 = branch_evidence(backend, el.type, th.type, el.type);
        if (!e2 || !e3)
          return fail(t, "branch types " + show(th.type) + " and " +
                             show(el.type) + " have no consistent join");
        RTerm r = base(t, RTerm::K::If);
        r.sub = {{*e1, c.term}, {*e2, th.term}, {*e3, el.term}};
        return {mk(std::move(r)), *j};
      }
      case Term::K::Rec: {
        RTerm r = base(t, RTerm::K::Rec);
        std::map<Label, GT> fs;
        for (auto& [l, sub] : t.fields) {
          Out f = go(sub, env);
          if (!f.term) return f;
          r.fields.emplace_back(l, f.term);
          fs.emplace(l, f.type);
        }
        return {mk(std::move(r)), gt_rec(std::move(fs), false)};
      }
      case Term::K::Proj: {
        Out a = go(t.a, env);
        if (!a.term) return a;
        auto p = cproj(a.type, t.name);
        if (!p)
          return fail(t,
                      "type " + show(a.type) + " has no field '" + t.name + "'");
        auto e = interior(a.type, gt_rec({{t.name, *p}}, false));
        if (!e)
          return fail(t,
                      "type " + show(a.type) + " has no field '" + t.name + "'");
        RTerm r = base(t, RTerm::K::Proj);
        r.name = t.name;
        r.sub = {{*e, a.term}};
        return {mk(std::move(r)), *p};
      }
      case Term::K::Asc: {
        Out a = go(t.a, env);
        if (!a.term) return a;
        auto e = interior(a.type, t.ann);
        if (!e)
          return fail(t, "ascription: " + show(a.type) +
                             " is not a consistent subtype of " + show(t.ann));
        RTerm r = base(t, RTerm::K::Asc);
        r.sub = {{*e, a.term}};
        return {mk(std::move(r)), t.ann};
      }
      case Term::K::Let: {
        Out a = go(t.a, env);
        if (!a.term) return a;
        GT bound = t.ann ? t.ann : a.type;
        auto e = interior(a.type, bound);
        if (!e)
          return fail(t, "let binding: " + show(a.type) +
                             " is not a consistent subtype of " + show(bound));
        TypeEnv env2 = env;
        env2[t.name] = bound;
        Out b = go(t.b, env2);
        if (!b.term) return b;
        RTerm r = base(t, RTerm::K::Let);
        r.name = t.name;
        r.sub = {{*e, a.term}};
        r.body = b.term;
        return {mk(std::move(r)), b.type};
      }
    }
    return {nullptr, nullptr};
  }
};

}  // namespace

ElabResult elaborate(const TermPtr& t, BackendKind backend) {
  Elab e{backend, std::nullopt};
  auto out = e.go(t, {});
  if (!out.term) {
    if (!e.err) e.err = TypeError{"elaboration failed", t->line, t->col};
    return {nullptr, nullptr, e.err};
  }
  return {out.term, out.type, std::nullopt};
}

// ------------------------------ rendering -----------------------------------

namespace {

void show_rt(std::ostringstream& out, const RT& tp);

void show_ev_term(std::ostringstream& out, const EvTerm& et) {
  out << show(et.ev) << "(";
  show_rt(out, et.term);
  out << ")";
}

void show_rt(std::ostringstream& out, const RT& tp) {
  const RTerm& t = *tp;
  switch (t.k) {
    case RTerm::K::Num:
      out << t.ival;
      break;
    case RTerm::K::Bool:
      out << (t.bval ? "true" : "false");
      break;
    case RTerm::K::Var:
      out << t.name;
      break;
    case RTerm::K::Lam:
      out << "\\" << t.name << ". ";
      show_rt(out, t.body);
      break;
    case RTerm::K::App:
      show_ev_term(out, t.sub[0]);
      out << " ";
      show_ev_term(out, t.sub[1]);
      break;
    case RTerm::K::Add:
    case RTerm::K::Eq:
      show_ev_term(out, t.sub[0]);
      out << (t.k == RTerm::K::Add ? " + " : " == ");
      show_ev_term(out, t.sub[1]);
      break;
    case RTerm::K::If:
      out << "if ";
      show_ev_term(out, t.sub[0]);
      out << " then ";
      show_ev_term(out, t.sub[1]);
      out << " else ";
      show_ev_term(out, t.sub[2]);
      break;
    case RTerm::K::Rec: {
      out << "{";
      bool first = true;
      for (auto& [l, sub] : t.fields) {
        if (!first) out << ", ";
        first = false;
        out << l << " = ";
        show_rt(out, sub);
      }
      out << "}";
      break;
    }
    case RTerm::K::Proj:
      show_ev_term(out, t.sub[0]);
      out << "." << t.name;
      break;
    case RTerm::K::Asc:
      show_ev_term(out, t.sub[0]);
      break;
    case RTerm::K::Let:
      out << "let " << t.name << " = ";
      show_ev_term(out, t.sub[0]);
      out << " in ";
      show_rt(out, t.body);
      break;
  }
}

void collect(const RT& tp, std::vector<Evidence>& out) {
  const RTerm& t = *tp;
  for (auto& et : t.sub) {
    out.push_back(et.ev);
    collect(et.term, out);
  }
  if (t.body) collect(t.body, out);
  for (auto& [l, sub] : t.fields) collect(sub, out);
}

}  // namespace

std::string show_rl(const RT& t) {
  std::ostringstream out;
  show_rt(out, t);
  return out.str();
}

std::vector<Evidence> collect_evidence(const RT& t) {
  std::vector<Evidence> out;
  collect(t, out);
  return out;
}

}  // namespace gtfl
