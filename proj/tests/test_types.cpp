#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gtfl/types.hpp"

using namespace gtfl;

TEST_CASE("static type equality and ordering") {
  ST a = st_arrow(st_int(), st_bool());
  ST b = st_arrow(st_int(), st_bool());
  CHECK(st_eq(a, b));
  CHECK(st_cmp(a, b) == 0);
  CHECK(st_cmp(st_int(), st_bool()) != 0);
  ST r = st_rec({{"x", st_int()}});
  CHECK_FALSE(st_eq(r, st_rec({{"x", st_bool()}})));
  CHECK(show(r) == "{x: Int}");
  CHECK(show(a) == "Int -> Bool");
}

TEST_CASE("gradual type embedding and erasure") {
  GT g = gt_arrow(gt_int(), gt_rec({{"x", gt_bool()}}, false));
  auto s = static_of_gt(g);
  REQUIRE(s.has_value());
  CHECK(gt_eq(gt_of_static(*s), g));
  CHECK_FALSE(static_of_gt(gt_unknown()).has_value());
  CHECK_FALSE(static_of_gt(gt_rec({}, true)).has_value());
}

TEST_CASE("gradual precision") {
  GT rx = gt_rec({{"x", gt_int()}}, false);
  GT rxq = gt_rec({{"x", gt_unknown()}}, false);
  GT row = gt_rec({{"x", gt_int()}}, true);
  CHECK(precision_le(rx, rxq));
  CHECK_FALSE(precision_le(rxq, rx));
  CHECK(precision_le(rx, row));
  CHECK(precision_le(rx, gt_unknown()));
  CHECK(precision_le(gt_unknown(), gt_unknown()));
  CHECK_FALSE(precision_le(gt_unknown(), rx));
}

TEST_CASE("bounded record canonicalization") {
  // Records drop Absent entries; rows drop Opt(?) entries.
  BT rec = bt_rec({{"x", m_req(bt_int())}, {"y", m_absent()}}, false);
  CHECK(rec->fields.size() == 1);
  BT row = bt_rec({{"x", m_req(bt_int())}, {"y", m_opt(bt_unknown())}}, true);
  CHECK(row->fields.size() == 1);
  // An Opt(?) entry in a record is meaningful and kept.
  BT rec2 = bt_rec({{"x", m_opt(bt_unknown())}}, false);
  CHECK(rec2->fields.size() == 1);
  CHECK(bt_eq(rec, bt_rec({{"x", m_req(bt_int())}}, false)));
}

TEST_CASE("bounded record embedding and precision") {
  GT g = gt_rec({{"x", gt_int()}}, true);
  BT b = bt_of_gt(g);
  REQUIRE(b->k == BType::K::Rec);
  CHECK(b->row);
  CHECK(b->fields.at("x").k == Mapping::K::Req);
  CHECK(precision_le(b, bt_unknown()));
  // Req(Int) is more precise than Opt(Int).
  BT opt = bt_rec({{"x", m_opt(bt_int())}}, false);
  BT req = bt_rec({{"x", m_req(bt_int())}}, false);
  CHECK(precision_le(req, opt));
  CHECK_FALSE(precision_le(opt, req));
}

TEST_CASE("default mappings") {
  BT rec = bt_rec({}, false);
  BT row = bt_rec({}, true);
  CHECK(default_mapping(*rec).k == Mapping::K::Absent);
  CHECK(default_mapping(*row).k == Mapping::K::Opt);
}

TEST_CASE("size, height and label measures") {
  GT g = gt_rec({{"x", gt_arrow(gt_int(), gt_int())}, {"y", gt_bool()}}, false);
  CHECK(type_height(g) == 3);
  CHECK(type_size(g) > 0);
  CHECK(dom_labels(g) == 2);
  GT nested = gt_rec({{"x", gt_rec({{"x", gt_int()}}, false)}}, false);
  CHECK(dom_labels(nested) == 1);
  CHECK(type_height(gt_int()) == 1);
}
