#include "gtfl/runtime.hpp"

#include <cassert>
#include <map>
#include <sstream>

namespace gtfl {

namespace {

VPtr mkv(Value v) { return std::make_shared<Value>(std::move(v)); }

EnvPtr cons(std::string name, VPtr v, EnvPtr next) {
  return std::make_shared<EnvNode>(
      EnvNode{std::move(name), std::move(v), std::move(next)});
}

const VPtr* lookup(const EnvPtr& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return &n->v;
  return nullptr;
}

struct Frame {
  enum class K { Asc, AppFun, AppArg, BinL, BinR, IfSel, Rec, Proj, Let };
  K k;
  TotalEvidence ev;             // Asc
  long run = 0;                 // Asc: length of the adjacent-Asc chain
  int line = 0, col = 0;        // Asc: span of the originating slot
  VPtr v;                       // AppArg: function; BinR: left operand
  const RTerm* node = nullptr;  // source node for operands, labels, spans
  EnvPtr env;                   // environment for pending operands
  size_t idx = 0;               // Rec: index of the field being evaluated
  std::vector<std::pair<Label, VPtr>> done;  // Rec: evaluated fields
};

struct Machine {
  bool plus;  // false = RL, true = RL+
  long budget;
  bool tracing;

  EvalResult res;
  std::vector<Frame> stack;

  // Current configuration: either evaluating a term or returning a value.
  const RTerm* cur = nullptr;
  EnvPtr env;
  VPtr ret;
  bool done = false;

  void note_ev(const Evidence& e) {
    res.metrics.max_evidence_size =
        std::max(res.metrics.max_evidence_size, ev_size(e));
  }

  void trace(const char* rule, const std::string& redex) {
    if (!tracing) return;
    res.trace.push_back(
        TraceEvent{res.metrics.steps, rule, redex, res.metrics});
  }

  void error(std::string msg, int line, int col) {
    res.outcome.k = Outcome::K::RuntimeError;
    res.outcome.error = std::move(msg);
    res.outcome.line = line;
    res.outcome.col = col;
    done = true;
  }

  // Push the pending ascription for an evidence slot. RL stacks the frame;
  // RL+ merges it into an adjacent ascription frame immediately (inner
  // evidence composes before the outer frame's), deferring failure as bottom.
  void push_asc(TotalEvidence ev, int line, int col) {
    if (ev.ev) note_ev(*ev.ev);
    if (plus && !stack.empty() && stack.back().k == Frame::K::Asc) {
      Frame& top = stack.back();
      top.ev = compose_total(ev, top.ev);
      if (top.ev.ev) note_ev(*top.ev.ev);
      top.node = nullptr;
      return;
    }
    Frame f;
    f.k = Frame::K::Asc;
    f.ev = std::move(ev);
    f.run = (!stack.empty() && stack.back().k == Frame::K::Asc)
                ? stack.back().run + 1
                : 1;
    f.line = line;
    f.col = col;
    stack.push_back(std::move(f));
    res.metrics.max_pending_ascriptions =
        std::max(res.metrics.max_pending_ascriptions, stack.back().run);
  }

  void push_operand(const EvTerm& et, const EnvPtr& e, int line, int col) {
    push_asc(TotalEvidence{et.ev}, line, col);
    cur = et.term.get();
    env = e;
  }

  void eval_step() {
    const RTerm& t = *cur;
    switch (t.k) {
      case RTerm::K::Num:
        trace("lit", std::to_string(t.ival));
        ret = mkv(Value{t.ival, std::nullopt});
        cur = nullptr;
        return;
      case RTerm::K::Bool:
        trace("lit", t.bval ? "true" : "false");
        ret = mkv(Value{t.bval, std::nullopt});
        cur = nullptr;
        return;
      case RTerm::K::Var: {
        const VPtr* v = lookup(env, t.name);
        if (!v) return error("unbound variable '" + t.name + "'", t.line, t.col);
        trace("var", t.name);
        ret = *v;
        cur = nullptr;
        return;
      }
      case RTerm::K::Lam:
        trace("lam", t.name);
        ret = mkv(Value{Closure{t.name, t.body, env}, std::nullopt});
        cur = nullptr;
        return;
      case RTerm::K::Rec: {
        trace("rec", "");
        if (t.fields.empty()) {
          ret = mkv(Value{RecordVal{}, std::nullopt});
          cur = nullptr;
          return;
        }
        Frame f;
        f.k = Frame::K::Rec;
        f.node = &t;
        f.env = env;
        f.idx = 0;
        stack.push_back(std::move(f));
        cur = t.fields[0].second.get();
        return;
      }
      case RTerm::K::App: {
        trace("app", "");
        Frame f;
        f.k = Frame::K::AppFun;
        f.node = &t;
        f.env = env;
        stack.push_back(std::move(f));
        push_operand(t.sub[0], env, t.line, t.col);
        return;
      }
      case RTerm::K::Add:
      case RTerm::K::Eq: {
        trace(t.k == RTerm::K::Add ? "add" : "eq", "");
        Frame f;
        f.k = Frame::K::BinL;
        f.node = &t;
        f.env = env;
        stack.push_back(std::move(f));
        push_operand(t.sub[0], env, t.line, t.col);
        return;
      }
      case RTerm::K::If: {
        trace("if", "");
        Frame f;
        f.k = Frame::K::IfSel;
        f.node = &t;
        f.env = env;
        stack.push_back(std::move(f));
        push_operand(t.sub[0], env, t.line, t.col);
        return;
      }
      case RTerm::K::Proj: {
        trace("proj", t.name);
        Frame f;
        f.k = Frame::K::Proj;
        f.node = &t;
        f.env = env;
        stack.push_back(std::move(f));
        push_operand(t.sub[0], env, t.line, t.col);
        return;
      }
      case RTerm::K::Asc:
        trace("asc", "");
        push_operand(t.sub[0], env, t.line, t.col);
        return;
      case RTerm::K::Let: {
        trace("let", t.name);
        Frame f;
        f.k = Frame::K::Let;
        f.node = &t;
        f.env = env;
        stack.push_back(std::move(f));
        push_operand(t.sub[0], env, t.line, t.col);
        return;
      }
    }
  }

  void apply(const VPtr& fn, const VPtr& arg, const RTerm* site) {
    int line = site ? site->line : 0, col = site ? site->col : 0;
    const Closure* cl = std::get_if<Closure>(&fn->raw);
    if (!cl) {
      assert(false && "application of a non-closure");
      return error("cannot apply a non-function value", line, col);
    }
    if (!fn->wrap) {
      trace("beta", cl->param);
      cur = cl->body.get();
      env = cons(cl->param, arg, cl->env);
      return;
    }
    auto d = idom_ev(*fn->wrap);
    auto c = icod_ev(*fn->wrap);
    if (!d || !c)
      return error("evidence " + show(*fn->wrap) + " does not justify a function",
                   line, col);
    std::optional<Evidence> e3 = *d;
    if (arg->wrap) {
      e3 = compose_ev(*arg->wrap, *d);
      if (!e3)
        return error("composition of " + show(*arg->wrap) + " and " + show(*d) +
                         " is undefined",
                     line, col);
    }
    note_ev(*e3);
    note_ev(*c);
    trace("beta", cl->param);
    push_asc(TotalEvidence{*c}, line, col);
    cur = cl->body.get();
    env = cons(cl->param, mkv(Value{arg->raw, e3}), cl->env);
  }

  void return_step() {
    if (stack.empty()) {
      res.outcome.k = Outcome::K::Val;
      res.outcome.value = ret;
      done = true;
      return;
    }
    Frame f = std::move(stack.back());
    stack.pop_back();
    const RTerm* n = f.node;
    switch (f.k) {
      case Frame::K::Asc: {
        int line = f.line, col = f.col;
        if (f.ev.bottom()) {
          return error("pending evidence composition is undefined", line, col);
        }
        const Evidence& e2 = *f.ev.ev;
        std::optional<Evidence> merged = e2;
        if (ret->wrap) {
          merged = compose_ev(*ret->wrap, e2);
          if (!merged)
            return error("composition of " + show(*ret->wrap) + " and " +
                             show(e2) + " is undefined",
                         line, col);
        }
        note_ev(*merged);
        trace("merge", show(*merged));
        ret = mkv(Value{ret->raw, merged});
        return;
      }
      case Frame::K::AppFun: {
        Frame g;
        g.k = Frame::K::AppArg;
        g.v = ret;
        g.node = n;
        stack.push_back(std::move(g));
        push_operand(n->sub[1], f.env, n->line, n->col);
        return;
      }
      case Frame::K::AppArg:
        apply(f.v, ret, n);
        return;
      case Frame::K::BinL: {
        Frame g;
        g.k = Frame::K::BinR;
        g.v = ret;
        g.node = n;
        stack.push_back(std::move(g));
        push_operand(n->sub[1], f.env, n->line, n->col);
        return;
      }
      case Frame::K::BinR: {
        const long* l = std::get_if<long>(&f.v->raw);
        const long* r = std::get_if<long>(&ret->raw);
        if (!l || !r) {
          assert(false && "arithmetic on non-integers");
          return error("arithmetic on non-integer values", n->line, n->col);
        }
        if (n->k == RTerm::K::Add) {
          long out;
          if (__builtin_add_overflow(*l, *r, &out))
            return error("integer overflow in +", n->line, n->col);
          trace("delta", std::to_string(out));
          ret = mkv(Value{out, std::nullopt});
        } else {
          trace("delta", *l == *r ? "true" : "false");
          ret = mkv(Value{*l == *r, std::nullopt});
        }
        return;
      }
      case Frame::K::IfSel: {
        const bool* b = std::get_if<bool>(&ret->raw);
        if (!b) {
          assert(false && "if on a non-boolean");
          return error("condition is not a boolean", n->line, n->col);
        }
        trace(*b ? "if-true" : "if-false", "");
        push_operand(n->sub[*b ? 1 : 2], f.env, n->line, n->col);
        return;
      }
      case Frame::K::Rec: {
        f.done.emplace_back(n->fields[f.idx].first, ret);
        f.idx++;
        if (f.idx < n->fields.size()) {
          size_t i = f.idx;
          EnvPtr e = f.env;
          stack.push_back(std::move(f));
          cur = n->fields[i].second.get();
          env = e;
          return;
        }
        trace("rec-done", "");
        ret = mkv(Value{RecordVal{std::move(f.done)}, std::nullopt});
        return;
      }
      case Frame::K::Proj: {
        const RecordVal* rv = std::get_if<RecordVal>(&ret->raw);
        if (!rv) {
          assert(false && "projection from a non-record");
          return error("projection from a non-record value", n->line, n->col);
        }
        const VPtr* fv = nullptr;
        for (auto& [l, v] : rv->fields)
          if (l == n->name) fv = &v;
        std::optional<Evidence> p;
        if (ret->wrap) {
          p = iproj_ev(*ret->wrap, n->name);
          if (!p)
            return error("evidence " + show(*ret->wrap) +
                             " does not justify field '" + n->name + "'",
                         n->line, n->col);
          note_ev(*p);
        }
        if (!fv)
          return error("record value has no field '" + n->name + "'", n->line,
                       n->col);
        std::optional<Evidence> w = p;
        if ((*fv)->wrap) {
          if (p) {
            w = compose_ev(*(*fv)->wrap, *p);
            if (!w)
              return error("composition of " + show(*(*fv)->wrap) + " and " +
                               show(*p) + " is undefined",
                           n->line, n->col);
            note_ev(*w);
          } else {
            w = (*fv)->wrap;
          }
        }
        trace("proj-done", n->name);
        ret = mkv(Value{(*fv)->raw, w});
        return;
      }
      case Frame::K::Let:
        trace("bind", n->name);
        cur = n->body.get();
        env = cons(n->name, ret, f.env);
        return;
    }
  }

  EvalResult run(const RT& e) {
    // Seed the evidence-size metric with the program's own evidence.
    for (auto& ev : collect_evidence(e)) note_ev(ev);
    cur = e.get();
    env = nullptr;
    while (!done) {
      if (res.metrics.steps >= budget) {
        res.outcome.k = Outcome::K::Diverged;
        break;
      }
      res.metrics.steps++;
      if (cur)
        eval_step();
      else
        return_step();
    }
    return std::move(res);
  }
};

}  // namespace

EvalResult eval_rl(const RT& e, long budget, bool trace) {
  Machine m{false, budget, trace, {}, {}, nullptr, nullptr, nullptr, false};
  return m.run(e);
}

EvalResult eval_rlplus(const RT& e, long budget, bool trace) {
  Machine m{true, budget, trace, {}, {}, nullptr, nullptr, nullptr, false};
  return m.run(e);
}

// ------------------------------ space accounting -----------------------------

long space_of(const std::function<long(const Evidence&)>& f, const RT& e) {
  long total = 1;
  for (auto& et : e->sub) total += f(et.ev) + space_of(f, et.term);
  if (e->body) total += space_of(f, e->body);
  for (auto& [l, sub] : e->fields) total += space_of(f, sub);
  return total;
}

long compute_bound_B(const RT& e) {
  long h = 1;
  std::map<Label, bool> labels;
  for (auto& ev : collect_evidence(e)) {
    h = std::max(h, ev_height(ev));
    if (auto* g = std::get_if<GrEvidence>(&ev)) {
      collect_labels(g->l, labels);
      collect_labels(g->r, labels);
    } else {
      auto& b = std::get<BrrEvidence>(ev);
      collect_labels(b.l, labels);
      collect_labels(b.r, labels);
    }
  }
  long base = 3 + (long)labels.size();
  long out = 2;
  for (long i = 0; i <= h; ++i) out *= base;
  return out;
}

// ------------------------------- bisimulation -------------------------------

namespace {

bool values_related(const VPtr& a, const VPtr& b);

bool raw_related(const Value& a, const Value& b) {
  if (a.raw.index() != b.raw.index()) return false;
  if (auto* la = std::get_if<long>(&a.raw))
    return *la == *std::get_if<long>(&b.raw);
  if (auto* ba = std::get_if<bool>(&a.raw))
    return *ba == *std::get_if<bool>(&b.raw);
  if (auto* ca = std::get_if<Closure>(&a.raw)) {
    auto* cb = std::get_if<Closure>(&b.raw);
    return ca->param == cb->param && ca->body == cb->body;
  }
  auto* ra = std::get_if<RecordVal>(&a.raw);
  auto* rb = std::get_if<RecordVal>(&b.raw);
  if (ra->fields.size() != rb->fields.size()) return false;
  for (size_t i = 0; i < ra->fields.size(); ++i) {
    if (ra->fields[i].first != rb->fields[i].first) return false;
    if (!values_related(ra->fields[i].second, rb->fields[i].second))
      return false;
  }
  return true;
}

bool values_related(const VPtr& a, const VPtr& b) {
  if (a->wrap.has_value() != b->wrap.has_value()) return false;
  if (a->wrap && !ev_eq(*a->wrap, *b->wrap)) return false;
  return raw_related(*a, *b);
}

}  // namespace

BisimVerdict bisim_compare(const RT& e, long budget) {
  BisimVerdict v;
  v.rl = eval_rl(e, budget).outcome;
  v.rlplus = eval_rlplus(e, budget).outcome;
  if (v.rl.k != v.rlplus.k) {
    v.related = false;
    v.detail = "outcome categories differ";
    return v;
  }
  if (v.rl.k == Outcome::K::Val && !values_related(v.rl.value, v.rlplus.value)) {
    v.related = false;
    v.detail = "result values are not related";
    return v;
  }
  v.related = true;
  return v;
}

// -------------------------------- rendering ---------------------------------

std::string show_value(const VPtr& v) {
  std::ostringstream out;
  if (auto* l = std::get_if<long>(&v->raw)) {
    out << *l;
  } else if (auto* b = std::get_if<bool>(&v->raw)) {
    out << (*b ? "true" : "false");
  } else if (std::get_if<Closure>(&v->raw)) {
    out << "<function>";
  } else {
    auto& r = std::get<RecordVal>(v->raw);
    out << "{";
    bool first = true;
    for (auto& [l, fv] : r.fields) {
      if (!first) out << ", ";
      first = false;
      out << l << " = " << show_value(fv);
    }
    out << "}";
  }
  return out.str();
}

}  // namespace gtfl
