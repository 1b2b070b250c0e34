#include "gtfl/types.hpp"

#include <sstream>

namespace gtfl {

// ------------------------------ static types ------------------------------

ST st_int() {
  static ST t = std::make_shared<SType>(SType{SType::K::Int, {}, {}, {}});
  return t;
}
ST st_bool() {
  static ST t = std::make_shared<SType>(SType{SType::K::Bool, {}, {}, {}});
  return t;
}
ST st_arrow(ST dom, ST cod) {
  return std::make_shared<SType>(
      SType{SType::K::Arrow, std::move(dom), std::move(cod), {}});
}
ST st_rec(std::map<Label, ST> fields) {
  return std::make_shared<SType>(SType{SType::K::Rec, {}, {}, std::move(fields)});
}

int st_cmp(const ST& a, const ST& b) {
  if (a->k != b->k) return a->k < b->k ? -1 : 1;
  switch (a->k) {
    case SType::K::Int:
    case SType::K::Bool:
      return 0;
    case SType::K::Arrow: {
      int c = st_cmp(a->dom, b->dom);
      return c != 0 ? c : st_cmp(a->cod, b->cod);
    }
    case SType::K::Rec: {
      auto ia = a->fields.begin(), ib = b->fields.begin();
      for (; ia != a->fields.end() && ib != b->fields.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int c = st_cmp(ia->second, ib->second);
        if (c != 0) return c;
      }
      if (ia != a->fields.end()) return 1;
      if (ib != b->fields.end()) return -1;
      return 0;
    }
  }
  return 0;
}
bool st_eq(const ST& a, const ST& b) { return st_cmp(a, b) == 0; }

std::string show(const ST& t) {
  switch (t->k) {
    case SType::K::Int:
      return "Int";
    case SType::K::Bool:
      return "Bool";
    case SType::K::Arrow: {
      std::string d = show(t->dom);
      if (t->dom->k == SType::K::Arrow) d = "(" + d + ")";
      return d + " -> " + show(t->cod);
    }
    case SType::K::Rec: {
      std::string s = "{";
      bool first = true;
      for (auto& [l, ft] : t->fields) {
        if (!first) s += ", ";
        first = false;
        s += l + ": " + show(ft);
      }
      return s + "}";
    }
  }
  return "?";
}

// ------------------------------ gradual types ------------------------------

GT gt_unknown() {
  static GT t = std::make_shared<GType>(GType{GType::K::Unknown, {}, {}, {}, false});
  return t;
}
GT gt_int() {
  static GT t = std::make_shared<GType>(GType{GType::K::Int, {}, {}, {}, false});
  return t;
}
GT gt_bool() {
  static GT t = std::make_shared<GType>(GType{GType::K::Bool, {}, {}, {}, false});
  return t;
}
GT gt_arrow(GT dom, GT cod) {
  return std::make_shared<GType>(
      GType{GType::K::Arrow, std::move(dom), std::move(cod), {}, false});
}
GT gt_rec(std::map<Label, GT> fields, bool row) {
  return std::make_shared<GType>(
      GType{GType::K::Rec, {}, {}, std::move(fields), row});
}

int gt_cmp(const GT& a, const GT& b) {
  if (a->k != b->k) return a->k < b->k ? -1 : 1;
  switch (a->k) {
    case GType::K::Unknown:
    case GType::K::Int:
    case GType::K::Bool:
      return 0;
    case GType::K::Arrow: {
      int c = gt_cmp(a->dom, b->dom);
      return c != 0 ? c : gt_cmp(a->cod, b->cod);
    }
    case GType::K::Rec: {
      if (a->row != b->row) return a->row < b->row ? -1 : 1;
      auto ia = a->fields.begin(), ib = b->fields.begin();
      for (; ia != a->fields.end() && ib != b->fields.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int c = gt_cmp(ia->second, ib->second);
        if (c != 0) return c;
      }
      if (ia != a->fields.end()) return 1;
      if (ib != b->fields.end()) return -1;
      return 0;
    }
  }
  return 0;
}
bool gt_eq(const GT& a, const GT& b) { return gt_cmp(a, b) == 0; }

std::string show(const GT& t) {
  switch (t->k) {
    case GType::K::Unknown:
      return "?";
    case GType::K::Int:
      return "Int";
    case GType::K::Bool:
      return "Bool";
    case GType::K::Arrow: {
      std::string d = show(t->dom);
      if (t->dom->k == GType::K::Arrow) d = "(" + d + ")";
      return d + " -> " + show(t->cod);
    }
    case GType::K::Rec: {
      std::string s = "{";
      bool first = true;
      for (auto& [l, ft] : t->fields) {
        if (!first) s += ", ";
        first = false;
        s += l + ": " + show(ft);
      }
      if (t->row) {
        if (!first) s += ", ";
        s += "?";
      }
      return s + "}";
    }
  }
  return "?";
}

GT gt_of_static(const ST& t) {
  switch (t->k) {
    case SType::K::Int:
      return gt_int();
    case SType::K::Bool:
      return gt_bool();
    case SType::K::Arrow:
      return gt_arrow(gt_of_static(t->dom), gt_of_static(t->cod));
    case SType::K::Rec: {
      std::map<Label, GT> fs;
      for (auto& [l, ft] : t->fields) fs.emplace(l, gt_of_static(ft));
      return gt_rec(std::move(fs), false);
    }
  }
  return gt_unknown();
}

std::optional<ST> static_of_gt(const GT& t) {
  switch (t->k) {
    case GType::K::Unknown:
      return std::nullopt;
    case GType::K::Int:
      return st_int();
    case GType::K::Bool:
      return st_bool();
    case GType::K::Arrow: {
      auto d = static_of_gt(t->dom);
      auto c = static_of_gt(t->cod);
      if (!d || !c) return std::nullopt;
      return st_arrow(*d, *c);
    }
    case GType::K::Rec: {
      if (t->row) return std::nullopt;
      std::map<Label, ST> fs;
      for (auto& [l, ft] : t->fields) {
        auto f = static_of_gt(ft);
        if (!f) return std::nullopt;
        fs.emplace(l, *f);
      }
      return st_rec(std::move(fs));
    }
  }
  return std::nullopt;
}

// a <= b in precision: b is at least as unknown as a.
bool precision_le(const GT& a, const GT& b) {
  if (b->k == GType::K::Unknown) return true;
  if (a->k != b->k) return false;
  switch (a->k) {
    case GType::K::Unknown:
    case GType::K::Int:
    case GType::K::Bool:
      return true;
    case GType::K::Arrow:
      return precision_le(a->dom, b->dom) && precision_le(a->cod, b->cod);
    case GType::K::Rec: {
      // Rows are above records/rows with more declared labels; a record is
      // never below a row-less record with different labels, and a row is
      // never below a plain record.
      if (a->row && !b->row) return false;
      for (auto& [l, bt] : b->fields) {
        auto it = a->fields.find(l);
        if (it == a->fields.end()) return false;
        if (!precision_le(it->second, bt)) return false;
      }
      if (!b->row) {
        // exact same label set required
        if (a->fields.size() != b->fields.size()) return false;
      }
      return true;
    }
  }
  return false;
}

// ------------------------------ bounded types ------------------------------

Mapping m_absent() { return Mapping{Mapping::K::Absent, nullptr}; }
Mapping m_req(BT t) { return Mapping{Mapping::K::Req, std::move(t)}; }
Mapping m_opt(BT t) { return Mapping{Mapping::K::Opt, std::move(t)}; }

int mapping_cmp(const Mapping& a, const Mapping& b) {
  if (a.k != b.k) return a.k < b.k ? -1 : 1;
  if (a.k == Mapping::K::Absent) return 0;
  return bt_cmp(a.bound, b.bound);
}
bool mapping_eq(const Mapping& a, const Mapping& b) {
  return mapping_cmp(a, b) == 0;
}

BT bt_unknown() {
  static BT t = std::make_shared<BType>(BType{BType::K::Unknown, {}, {}, {}, false});
  return t;
}
BT bt_int() {
  static BT t = std::make_shared<BType>(BType{BType::K::Int, {}, {}, {}, false});
  return t;
}
BT bt_bool() {
  static BT t = std::make_shared<BType>(BType{BType::K::Bool, {}, {}, {}, false});
  return t;
}
BT bt_arrow(BT dom, BT cod) {
  return std::make_shared<BType>(
      BType{BType::K::Arrow, std::move(dom), std::move(cod), {}, false});
}
BT bt_rec(std::map<Label, Mapping> fields, bool row) {
  // Canonical form: a record's default for undeclared labels is Absent, a
  // row's default is Opt(?); drop fields equal to the default.
  for (auto it = fields.begin(); it != fields.end();) {
    bool drop;
    if (row)
      drop = it->second.k == Mapping::K::Opt &&
             it->second.bound->k == BType::K::Unknown;
    else
      drop = it->second.k == Mapping::K::Absent;
    it = drop ? fields.erase(it) : std::next(it);
  }
  return std::make_shared<BType>(
      BType{BType::K::Rec, {}, {}, std::move(fields), row});
}

int bt_cmp(const BT& a, const BT& b) {
  if (a->k != b->k) return a->k < b->k ? -1 : 1;
  switch (a->k) {
    case BType::K::Unknown:
    case BType::K::Int:
    case BType::K::Bool:
      return 0;
    case BType::K::Arrow: {
      int c = bt_cmp(a->dom, b->dom);
      return c != 0 ? c : bt_cmp(a->cod, b->cod);
    }
    case BType::K::Rec: {
      if (a->row != b->row) return a->row < b->row ? -1 : 1;
      auto ia = a->fields.begin(), ib = b->fields.begin();
      for (; ia != a->fields.end() && ib != b->fields.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int c = mapping_cmp(ia->second, ib->second);
        if (c != 0) return c;
      }
      if (ia != a->fields.end()) return 1;
      if (ib != b->fields.end()) return -1;
      return 0;
    }
  }
  return 0;
}
bool bt_eq(const BT& a, const BT& b) { return bt_cmp(a, b) == 0; }

std::string show(const Mapping& m) {
  switch (m.k) {
    case Mapping::K::Absent:
      return "-:";
    case Mapping::K::Req:
      return "R: " + show(m.bound);
    case Mapping::K::Opt:
      return "O: " + show(m.bound);
  }
  return "-:";
}

std::string show(const BT& t) {
  switch (t->k) {
    case BType::K::Unknown:
      return "?";
    case BType::K::Int:
      return "Int";
    case BType::K::Bool:
      return "Bool";
    case BType::K::Arrow: {
      std::string d = show(t->dom);
      if (t->dom->k == BType::K::Arrow) d = "(" + d + ")";
      return d + " -> " + show(t->cod);
    }
    case BType::K::Rec: {
      std::string s = "[";
      bool first = true;
      for (auto& [l, m] : t->fields) {
        if (!first) s += ", ";
        first = false;
        s += l + " " + show(m);
      }
      if (t->row) {
        if (!first) s += ", ";
        s += "?";
      }
      return s + "]";
    }
  }
  return "?";
}

BT bt_of_gt(const GT& t) {
  switch (t->k) {
    case GType::K::Unknown:
      return bt_unknown();
    case GType::K::Int:
      return bt_int();
    case GType::K::Bool:
      return bt_bool();
    case GType::K::Arrow:
      return bt_arrow(bt_of_gt(t->dom), bt_of_gt(t->cod));
    case GType::K::Rec: {
      std::map<Label, Mapping> fs;
      for (auto& [l, ft] : t->fields) fs.emplace(l, m_req(bt_of_gt(ft)));
      return bt_rec(std::move(fs), t->row);
    }
  }
  return bt_unknown();
}

Mapping default_mapping(const BType& rec) {
  return rec.row ? m_opt(bt_unknown()) : m_absent();
}

static bool mapping_precision_le(const Mapping& a, const Mapping& b) {
  switch (b.k) {
    case Mapping::K::Absent:
      return a.k == Mapping::K::Absent;
    case Mapping::K::Req:
      return a.k == Mapping::K::Req && precision_le(a.bound, b.bound);
    case Mapping::K::Opt:
      // Opt(T) covers both absence and presence below T.
      return a.k == Mapping::K::Absent ||
             (a.k != Mapping::K::Absent && precision_le(a.bound, b.bound));
  }
  return false;
}

bool precision_le(const BT& a, const BT& b) {
  if (b->k == BType::K::Unknown) return true;
  if (a->k != b->k) return false;
  switch (a->k) {
    case BType::K::Unknown:
    case BType::K::Int:
    case BType::K::Bool:
      return true;
    case BType::K::Arrow:
      return precision_le(a->dom, b->dom) && precision_le(a->cod, b->cod);
    case BType::K::Rec: {
      if (a->row && !b->row) return false;
      // Compare over the union of declared labels, using defaults elsewhere.
      std::map<Label, bool> labels;
      for (auto& [l, m] : a->fields) labels[l] = true;
      for (auto& [l, m] : b->fields) labels[l] = true;
      for (auto& [l, unused] : labels) {
        (void)unused;
        auto ia = a->fields.find(l);
        auto ib = b->fields.find(l);
        Mapping ma = ia != a->fields.end() ? ia->second : default_mapping(*a);
        Mapping mb = ib != b->fields.end() ? ib->second : default_mapping(*b);
        if (!mapping_precision_le(ma, mb)) return false;
      }
      return true;
    }
  }
  return false;
}

// ------------------------------ measures ------------------------------

long type_size(const GT& t) {
  switch (t->k) {
    case GType::K::Unknown:
    case GType::K::Int:
    case GType::K::Bool:
      return 1;
    case GType::K::Arrow:
      return 1 + type_size(t->dom) + type_size(t->cod);
    case GType::K::Rec: {
      long s = 1;
      for (auto& [l, ft] : t->fields) s += type_size(ft);
      return s;
    }
  }
  return 1;
}

long type_height(const GT& t) {
  switch (t->k) {
    case GType::K::Unknown:
    case GType::K::Int:
    case GType::K::Bool:
      return 1;
    case GType::K::Arrow:
      return 1 + std::max(type_height(t->dom), type_height(t->cod));
    case GType::K::Rec: {
      long h = 0;
      for (auto& [l, ft] : t->fields) h = std::max(h, type_height(ft));
      return 1 + h;
    }
  }
  return 1;
}

long type_size(const BT& t) {
  switch (t->k) {
    case BType::K::Unknown:
    case BType::K::Int:
    case BType::K::Bool:
      return 1;
    case BType::K::Arrow:
      return 1 + type_size(t->dom) + type_size(t->cod);
    case BType::K::Rec: {
      long s = 1;
      for (auto& [l, m] : t->fields)
        s += m.k == Mapping::K::Absent ? 1 : type_size(m.bound);
      return s;
    }
  }
  return 1;
}

long type_height(const BT& t) {
  switch (t->k) {
    case BType::K::Unknown:
    case BType::K::Int:
    case BType::K::Bool:
      return 1;
    case BType::K::Arrow:
      return 1 + std::max(type_height(t->dom), type_height(t->cod));
    case BType::K::Rec: {
      long h = 0;
      for (auto& [l, m] : t->fields)
        if (m.k != Mapping::K::Absent) h = std::max(h, type_height(m.bound));
      return 1 + h;
    }
  }
  return 1;
}

void collect_labels(const GT& t, std::map<Label, bool>& out) {
  switch (t->k) {
    case GType::K::Arrow:
      collect_labels(t->dom, out);
      collect_labels(t->cod, out);
      break;
    case GType::K::Rec:
      for (auto& [l, ft] : t->fields) {
        out[l] = true;
        collect_labels(ft, out);
      }
      break;
    default:
      break;
  }
}

void collect_labels(const BT& t, std::map<Label, bool>& out) {
  switch (t->k) {
    case BType::K::Arrow:
      collect_labels(t->dom, out);
      collect_labels(t->cod, out);
      break;
    case BType::K::Rec:
      for (auto& [l, m] : t->fields) {
        out[l] = true;
        if (m.k != Mapping::K::Absent) collect_labels(m.bound, out);
      }
      break;
    default:
      break;
  }
}

long dom_labels(const GT& t) {
  std::map<Label, bool> ls;
  collect_labels(t, ls);
  return (long)ls.size();
}

long dom_labels(const BT& t) {
  std::map<Label, bool> ls;
  collect_labels(t, ls);
  return (long)ls.size();
}

}  // namespace gtfl
