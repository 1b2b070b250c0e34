// Core type representations: static types, gradual types with rows, and
// bounded record/row types whose fields carry presence mappings.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gtfl {

using Label = std::string;

// ---------------------------------------------------------------------------
// Static types: Int | Bool | T -> T | {l: T, ...}

struct SType;
using ST = std::shared_ptr<const SType>;

struct SType {
  enum class K { Int, Bool, Arrow, Rec };
  K k;
  ST dom, cod;                 // Arrow
  std::map<Label, ST> fields;  // Rec
};

ST st_int();
ST st_bool();
ST st_arrow(ST dom, ST cod);
ST st_rec(std::map<Label, ST> fields);

bool st_eq(const ST& a, const ST& b);
int st_cmp(const ST& a, const ST& b);
std::string show(const ST& t);

// ---------------------------------------------------------------------------
// Gradual types: ? | Int | Bool | G -> G | {l: G, ...} | {l: G, ..., ?}
// A record with row=true admits unknown extra fields.

struct GType;
using GT = std::shared_ptr<const GType>;

struct GType {
  enum class K { Unknown, Int, Bool, Arrow, Rec };
  K k;
  GT dom, cod;
  std::map<Label, GT> fields;
  bool row = false;  // only meaningful for Rec
};

GT gt_unknown();
GT gt_int();
GT gt_bool();
GT gt_arrow(GT dom, GT cod);
GT gt_rec(std::map<Label, GT> fields, bool row);

bool gt_eq(const GT& a, const GT& b);
int gt_cmp(const GT& a, const GT& b);
std::string show(const GT& t);

GT gt_of_static(const ST& t);
// Defined iff t mentions no ? and no row.
std::optional<ST> static_of_gt(const GT& t);

// Precision g1 <= g2: g1 is less (or equally) unknown than g2.
bool precision_le(const GT& a, const GT& b);

// ---------------------------------------------------------------------------
// Bounded record/row types. Fields map labels to presence mappings:
//   Absent       -- the label is known not to occur
//   Req(T)       -- the label occurs, at a subtype of T
//   Opt(T)       -- the label may occur; if it does, at a subtype of T
// A bounded record (row=false) fixes the label set exactly; a bounded row
// (row=true) additionally admits any undeclared label optionally at ?.
// Canonical form: records omit Absent entries, rows omit Opt(?) entries.

struct BType;
using BT = std::shared_ptr<const BType>;

struct Mapping {
  enum class K { Absent, Req, Opt };
  K k = K::Absent;
  BT bound;  // null iff Absent
};

Mapping m_absent();
Mapping m_req(BT t);
Mapping m_opt(BT t);
bool mapping_eq(const Mapping& a, const Mapping& b);
int mapping_cmp(const Mapping& a, const Mapping& b);

struct BType {
  enum class K { Unknown, Int, Bool, Arrow, Rec };
  K k;
  BT dom, cod;
  std::map<Label, Mapping> fields;
  bool row = false;
};

BT bt_unknown();
BT bt_int();
BT bt_bool();
BT bt_arrow(BT dom, BT cod);
// Canonicalizes: drops Absent fields from records and Opt(?) fields from rows.
BT bt_rec(std::map<Label, Mapping> fields, bool row);

bool bt_eq(const BT& a, const BT& b);
int bt_cmp(const BT& a, const BT& b);
std::string show(const BT& t);
std::string show(const Mapping& m);

BT bt_of_gt(const GT& t);  // embed: every declared field becomes Req
bool precision_le(const BT& a, const BT& b);

// The default mapping a record/row assigns to an undeclared label:
// Absent for records, Opt(?) for rows.
Mapping default_mapping(const BType& rec);

// ---------------------------------------------------------------------------
// Size measures used by the space bounds.
// size: node count (record fields contribute their payload sizes plus one
// for the record itself); height: nesting depth; dom_labels: number of
// distinct labels mentioned anywhere in the type.

long type_size(const GT& t);
long type_height(const GT& t);
long type_size(const BT& t);
long type_height(const BT& t);
void collect_labels(const GT& t, std::map<Label, bool>& out);
void collect_labels(const BT& t, std::map<Label, bool>& out);
long dom_labels(const GT& t);
long dom_labels(const BT& t);

}  // namespace gtfl
