// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "gtfl/oracle.hpp"
#include "gtfl/parser.hpp"
#include "gtfl/runtime.hpp"

using namespace gtfl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int n, const std::string& what, bool ok, double secs,
            const std::string& detail = "") {
  std::printf("criterion %2d: %s (%.2fs) %s%s%s\n", n, ok ? "PASS" : "FAIL",
              secs, what.c_str(), detail.empty() ? "" : " — ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void run_criterion(int n, const std::string& what, double limit_secs,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  auto t0 = Clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (ok && limit_secs > 0 && secs > limit_secs) {
    ok = false;
    detail = "time limit exceeded";
  }
  report(n, what, ok, secs, detail);
}

GT ty(const std::string& s) { return *parse_type_string(s); }

std::string corpus(const std::string& name) {
  std::ifstream in(fs::path(CORPUS_DIR) / name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RT elab(const std::string& src, BackendKind b) {
  auto p = parse_program(src);
  if (!p.ok()) throw std::runtime_error("parse: " + p.error);
  auto e = elaborate(p.term, b);
  if (!e.ok()) throw std::runtime_error("elaborate: " + e.error->msg);
  return e.term;
}

bool gr_is(const Evidence& e, const GT& l, const GT& r) {
  auto* g = std::get_if<GrEvidence>(&e);
  return g && gt_eq(g->l, l) && gt_eq(g->r, r);
}

// ---------------------------------------------------------------------------
// Criteria 1-3: the let-q worked example.

void criterion_letq_gr() {
  run_criterion(1, "plain-rows trace of the let-q program", 1.0,
                [](std::string& detail) {
    auto e1 = interior_ev(BackendKind::GR, ty("{x: Int, y: Bool}"), ty("{x: Int}"));
    auto e2 = interior_ev(BackendKind::GR, ty("{x: Int}"), ty("?"));
    auto e3 = interior_ev(BackendKind::GR, ty("?"), ty("{x: Int, y: Bool}"));
    auto e4 = interior_ev(BackendKind::GR, ty("{x: Int, y: Bool}"), ty("{y: Bool}"));
    if (!e1 || !e2 || !e3 || !e4) { detail = "an interior is undefined"; return false; }
    if (!gr_is(*e1, ty("{x: Int, y: Bool}"), ty("{x: Int}")) ||
        !gr_is(*e2, ty("{x: Int}"), ty("{?}")) ||
        !gr_is(*e3, ty("{x: Int, y: Bool, ?}"), ty("{x: Int, y: Bool}")) ||
        !gr_is(*e4, ty("{x: Int, y: Bool}"), ty("{y: Bool}"))) {
      detail = "an interior differs from the expected evidence";
      return false;
    }
    auto c12 = compose_ev(*e1, *e2);
    if (!c12 || !gr_is(*c12, ty("{x: Int, y: Bool}"), ty("{?}"))) {
      detail = "e1;e2 wrong"; return false;
    }
    auto c123 = compose_ev(*c12, *e3);
    if (!c123 || !gr_is(*c123, ty("{x: Int, y: Bool}"), ty("{x: Int, y: Bool}"))) {
      detail = "(e1;e2);e3 wrong"; return false;
    }
    auto c1234 = compose_ev(*c123, *e4);
    if (!c1234 || !gr_is(*c1234, ty("{x: Int, y: Bool}"), ty("{y: Bool}"))) {
      detail = "((e1;e2);e3);e4 wrong"; return false;
    }
    // The elaborated program carries exactly these evidence objects, and
    // both interpreters deliver true.
    RT t = elab(corpus("let_q.gtfl"), BackendKind::GR);
    auto evs = collect_evidence(t);
    for (auto& want : {*e1, *e2, *e3, *e4}) {
      bool found = false;
      for (auto& have : evs) found = found || ev_eq(have, want);
      if (!found) { detail = "missing evidence " + show(want); return false; }
    }
    auto r = eval_rl(t, 100000);
    if (r.outcome.k != Outcome::K::Val) { detail = "did not produce a value"; return false; }
    auto* b = std::get_if<bool>(&r.outcome.value->raw);
    if (!b || !*b) { detail = "result is not true"; return false; }
    return true;
  });
}

void criterion_letq_brr() {
  run_criterion(2, "bounded-rows rejection of the let-q program", 1.0,
                [](std::string& detail) {
    RT t = elab(corpus("let_q.gtfl"), BackendKind::BRR);
    for (bool plus : {false, true}) {
      auto r = plus ? eval_rlplus(t, 100000) : eval_rl(t, 100000);
      if (r.outcome.k != Outcome::K::RuntimeError) {
        detail = plus ? "merged semantics did not fail" : "standard semantics did not fail";
        return false;
      }
    }
    return true;
  });
}

void criterion_nonassoc() {
  run_criterion(3, "composition over plain rows is not associative", 0,
                [](std::string& detail) {
    auto e1 = *interior_ev(BackendKind::GR, ty("{x: Int, y: Bool}"), ty("{x: Int}"));
    auto e2 = *interior_ev(BackendKind::GR, ty("{x: Int}"), ty("?"));
    auto e3 = *interior_ev(BackendKind::GR, ty("?"), ty("{x: Int, y: Bool}"));
    auto left = compose_ev(*compose_ev(e1, e2), e3);
    auto right = compose_ev(e2, e3);
    if (!left) { detail = "left-associated composition undefined"; return false; }
    if (right) { detail = "e2;e3 unexpectedly defined"; return false; }
    detail = "witness: (e1;e2);e3 = " + show(*left) + " but e2;e3 undefined";
    return true;
  });
}

// ---------------------------------------------------------------------------
// Criteria 4-6, 9: property suites against the finite-universe oracle.

void criterion_assoc() {
  run_criterion(4, "bounded-rows composition is associative (exhaustive)", 600,
                [](std::string& detail) {
    auto rep = run_assoc_suite(BackendKind::BRR, 2, {"x", "y"});
    detail = std::to_string(rep.cases) + " triples";
    if (rep.failures) detail = rep.witnesses.empty() ? "failures" : rep.witnesses[0];
    return rep.failures == 0;
  });
}

void criterion_fc() {
  run_criterion(5, "forward completeness holds for bounded rows only", 600,
                [](std::string& detail) {
    auto brr = run_fc_suite(BackendKind::BRR, 2, {"x", "y"}, 1);
    if (brr.failures) {
      detail = "bounded rows violated forward completeness: " +
               (brr.witnesses.empty() ? std::string() : brr.witnesses[0]);
      return false;
    }
    auto grr = run_fc_suite(BackendKind::GR, 2, {"x", "y"}, 1);
    if (grr.failures == 0) { detail = "plain rows showed no violation"; return false; }
    // The specific pair from the worked example must be among the violations.
    auto u = enumerate_universe(3, {"x", "y"});
    auto e1 = *interior_ev(BackendKind::GR, ty("{x: Int, y: Bool}"), ty("{x: Int}"));
    auto e2 = *interior_ev(BackendKind::GR, ty("{x: Int}"), ty("?"));
    auto v = check_forward_complete(e1, e2, u, 2);
    if (v.ok) { detail = "the let-q pair is unexpectedly complete"; return false; }
    detail = std::to_string(brr.cases) + " bounded pairs clean; plain-rows witness: " + v.witness;
    return true;
  });
}

void criterion_galois() {
  run_criterion(6, "abstraction/concretization laws", 600,
                [](std::string& detail) {
    auto rep = run_galois_suite(2, {"x", "y"});
    detail = std::to_string(rep.cases) + " checks";
    if (rep.failures) detail = rep.witnesses.empty() ? "failures" : rep.witnesses[0];
    return rep.failures == 0;
  });
}

void criterion_csub_cod() {
  run_criterion(9, "consistent subtyping and codomain vs. brute force", 60,
                [](std::string& detail) {
    auto cs = run_csub_suite(2, {"x", "y"}, 1);
    auto cd = run_cod_suite(2, {"x", "y"}, 1);
    detail = std::to_string(cs.cases) + " subtyping pairs, " +
             std::to_string(cd.cases) + " codomain cases";
    if (cs.failures) detail = cs.witnesses.empty() ? "csub failures" : cs.witnesses[0];
    if (cd.failures) detail = cd.witnesses.empty() ? "cod failures" : cd.witnesses[0];
    return cs.failures == 0 && cd.failures == 0;
  });
}

// ---------------------------------------------------------------------------
// Criterion 7: space behavior of the recursive parity programs.

void criterion_space() {
  run_criterion(7, "pending ascriptions: bounded in merged semantics only", 5.0,
                [](std::string& detail) {
    std::vector<long> rl_pending, rlplus_pending;
    for (int n : {3, 7, 15, 31}) {
      RT t = elab(corpus("parity_" + std::to_string(n) + ".gtfl"),
                  BackendKind::BRR);
      long bound = compute_bound_B(t);
      for (bool plus : {false, true}) {
        auto r = plus ? eval_rlplus(t, 1000000) : eval_rl(t, 1000000);
        if (r.outcome.k != Outcome::K::Val) { detail = "parity did not finish"; return false; }
        if (r.metrics.max_evidence_size > bound) {
          detail = "evidence size " + std::to_string(r.metrics.max_evidence_size) +
                   " exceeds bound " + std::to_string(bound);
          return false;
        }
        (plus ? rlplus_pending : rl_pending).push_back(r.metrics.max_pending_ascriptions);
      }
    }
    for (size_t i = 1; i < rlplus_pending.size(); ++i)
      if (rlplus_pending[i] != rlplus_pending[0]) {
        detail = "merged semantics pending chain grew with n";
        return false;
      }
    for (size_t i = 1; i < rl_pending.size(); ++i)
      if (rl_pending[i] <= rl_pending[i - 1]) {
        detail = "standard semantics pending chain did not grow with n";
        return false;
      }
    detail = "standard " + std::to_string(rl_pending.front()) + ".." +
             std::to_string(rl_pending.back()) + ", merged constant " +
             std::to_string(rlplus_pending[0]);
    return true;
  });
}

// ---------------------------------------------------------------------------
// Criterion 8: both semantics agree on every corpus program.

void criterion_bisim() {
  run_criterion(8, "standard and merged semantics agree on the corpus", 600,
                [](std::string& detail) {
    int programs = 0;
    for (auto& entry : fs::directory_iterator(CORPUS_DIR)) {
      if (entry.path().extension() != ".gtfl") continue;
      ++programs;
      std::ifstream in(entry.path());
      std::ostringstream ss;
      ss << in.rdbuf();
      RT t = elab(ss.str(), BackendKind::BRR);
      auto v = bisim_compare(t, 100000);
      if (!v.related) {
        detail = entry.path().filename().string() + ": " + v.detail;
        return false;
      }
    }
    detail = std::to_string(programs) + " programs";
    return programs >= 20;
  });
}

// ---------------------------------------------------------------------------
// Criterion 10: fuzzing. Generates well-typed closed terms type-directedly
// and checks that both interpreters always deliver a value, a runtime error,
// or budget exhaustion -- never an internal stuck state.

struct Fuzzer {
  std::mt19937 rng{20260826};
  using Env = std::vector<std::pair<std::string, GT>>;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  GT rand_type(int fuel) {
    switch (pick(fuel > 0 ? 7 : 4)) {
      case 0: return gt_int();
      case 1: return gt_bool();
      case 2: return gt_unknown();
      case 3: return gt_rec({}, pick(2) == 1);
      case 4: return gt_arrow(rand_type(fuel - 1), rand_type(fuel - 1));
      case 5: return gt_rec({{"x", rand_type(fuel - 1)}}, pick(2) == 1);
      default:
        return gt_rec({{"x", rand_type(fuel - 1)}, {"y", rand_type(fuel - 1)}},
                      false);
    }
  }

  static Term node(Term::K k) {
    Term t;
    t.k = k;
    return t;
  }
  TermPtr lit(long n) {
    Term t = node(Term::K::IntLit);
    t.ival = n;
    return mk_term(std::move(t));
  }
  TermPtr blit(bool b) {
    Term t = node(Term::K::BoolLit);
    t.bval = b;
    return mk_term(std::move(t));
  }
  TermPtr asc(TermPtr e, GT ty) {
    Term t = node(Term::K::Asc);
    t.ann = std::move(ty);
    t.a = std::move(e);
    return mk_term(std::move(t));
  }

  // A canonical inhabitant whose synthesized type is exactly t.
  TermPtr base(const GT& t, const Env& env, int fuel) {
    switch (t->k) {
      case GType::K::Int: return lit(pick(10));
      case GType::K::Bool: return blit(pick(2) == 1);
      case GType::K::Unknown:
        return asc(pick(2) ? lit(pick(10)) : blit(true), gt_unknown());
      case GType::K::Arrow: {
        std::string x = "v" + std::to_string(pick(1000));
        Env inner = env;
        inner.emplace_back(x, t->dom);
        Term lam = node(Term::K::Lam);
        lam.name = x;
        lam.ann = t->dom;
        lam.a = gen(t->cod, inner, fuel - 1);
        return mk_term(std::move(lam));
      }
      case GType::K::Rec: {
        Term r = node(Term::K::Rec);
        for (auto& [l, ft] : t->fields)
          r.fields.emplace_back(l, gen(ft, env, fuel - 1));
        auto rec = mk_term(std::move(r));
        // A record literal synthesizes a plain record type; reach row types
        // through an ascription.
        return t->row ? asc(rec, t) : rec;
      }
    }
    return lit(0);
  }

  TermPtr gen(const GT& t, const Env& env, int fuel) {
    if (fuel <= 0) return base(t, env, 0);
    // Variables of exactly this type are always fair game.
    std::vector<const std::pair<std::string, GT>*> hits;
    for (auto& b : env)
      if (gt_eq(b.second, t)) hits.push_back(&b);
    if (!hits.empty() && pick(3) == 0) {
      Term v = node(Term::K::Var);
      v.name = hits[pick((int)hits.size())]->first;
      return mk_term(std::move(v));
    }

    switch (pick(7)) {
      case 0: {  // conditional
        Term ite = node(Term::K::If);
        ite.a = gen(gt_bool(), env, fuel - 1);
        ite.b = gen(t, env, fuel - 1);
        ite.c = gen(t, env, fuel - 1);
        return mk_term(std::move(ite));
      }
      case 1: {  // let
        GT bt = rand_type(1);
        std::string x = "v" + std::to_string(pick(1000));
        Env inner = env;
        inner.emplace_back(x, bt);
        Term let = node(Term::K::Let);
        let.name = x;
        let.ann = bt;
        let.a = gen(bt, env, fuel - 1);
        let.b = gen(t, inner, fuel - 1);
        return mk_term(std::move(let));
      }
      case 2: {  // application
        GT dom = rand_type(1);
        Term app = node(Term::K::App);
        app.a = gen(gt_arrow(dom, t), env, fuel - 1);
        app.b = gen(dom, env, fuel - 1);
        return mk_term(std::move(app));
      }
      case 3:  // widen to ? and narrow back: exercises evidence composition
        return asc(asc(gen(t, env, fuel - 1), gt_unknown()), t);
      case 4: {  // projection
        Term prj = node(Term::K::Proj);
        prj.name = "x";
        prj.a = gen(gt_rec({{"x", t}}, false), env, fuel - 1);
        return mk_term(std::move(prj));
      }
      case 5:
        if (t->k == GType::K::Int) {
          Term add = node(Term::K::Add);
          add.a = gen(gt_int(), env, fuel - 1);
          add.b = gen(gt_int(), env, fuel - 1);
          return mk_term(std::move(add));
        }
        return base(t, env, fuel);
      default:
        return base(t, env, fuel);
    }
  }
};

void criterion_fuzz() {
  run_criterion(10, "10000 fuzzed well-typed terms never get stuck", 600,
                [](std::string& detail) {
    static const char* kStuck[] = {
        "cannot apply a non-function value", "arithmetic on non-integer values",
        "condition is not a boolean", "projection from a non-record value",
        "unbound variable"};
    Fuzzer fz;
    for (int i = 0; i < 10000; ++i) {
      TermPtr t = fz.gen(fz.rand_type(2), {}, 3);
      auto tc = typecheck(t);
      if (!tc.ok()) {
        detail = "generated an ill-typed term: " + tc.error->msg + " in " + pretty(t);
        return false;
      }
      for (auto b : {BackendKind::GR, BackendKind::BRR}) {
        auto e = elaborate(t, b);
        if (!e.ok()) {
          detail = "elaboration failed on a well-typed term: " + e.error->msg;
          return false;
        }
        for (bool plus : {false, true}) {
          auto r = plus ? eval_rlplus(e.term, 3000) : eval_rl(e.term, 3000);
          if (r.outcome.k == Outcome::K::RuntimeError)
            for (auto* s : kStuck)
              if (r.outcome.error.find(s) != std::string::npos) {
                detail = "stuck: " + r.outcome.error + " in " + pretty(t);
                return false;
              }
        }
      }
    }
    detail = "10000 terms x 2 backends x 2 semantics";
    return true;
  });
}

}  // namespace

int main() {
  criterion_letq_gr();
  criterion_letq_brr();
  criterion_nonassoc();
  criterion_assoc();
  criterion_fc();
  criterion_galois();
  criterion_space();
  criterion_bisim();
  criterion_csub_cod();
  criterion_fuzz();
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures ? 1 : 0;
}
