#include <catch2/catch_amalgamated.hpp>

#include "ups/json_io.hpp"
#include "ups/regions.hpp"

using namespace ups;

TEST_CASE("halfplane family endpoints and midpoint") {
  auto h0 = halfplane_t(Rat(0));
  REQUIRE(h0.pieces.size() == 1);
  REQUIRE(h0.pieces[0].size() == 1);
  CHECK(h0.pieces[0][0].a == Rat(0));  // {y <= 0}
  CHECK(h0.pieces[0][0].b == Rat(2));

  auto h1 = halfplane_t(Rat(1));       // {x + y <= 0}
  CHECK(h1.pieces[0][0].a == Rat(1));
  CHECK(h1.pieces[0][0].b == Rat(1));

  auto h2 = halfplane_t(Rat(2));       // {x <= 0}
  CHECK(h2.pieces[0][0].a == Rat(1));
  CHECK(h2.pieces[0][0].b == Rat(0));

  CHECK_THROWS(halfplane_t(Rat(-1, 2)));
  CHECK_THROWS(halfplane_t(Rat(5, 2)));
}

TEST_CASE("entry time of points under translation") {
  CHECK(entry_time(halfplane_t(Rat(1)), Rat(1), Rat(0)) == Rat(1, 2));
  // the family evaluates to (t/2)A + (1 - t/2)j
  for (auto t : {Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)}) {
    Rat A(3), j(-2);
    CHECK(entry_time(halfplane_t(t), A, j) == t / Rat(2) * A + (Rat(1) - t / Rat(2)) * j);
  }
}

TEST_CASE("union takes the earliest piece") {
  SouthWestRegion C{{{{Rat(1), Rat(0), Rat(0)}}, {{Rat(0), Rat(1), Rat(0)}}}};
  CHECK(entry_time(C, Rat(3), Rat(-5)) == Rat(-5));
  CHECK(entry_time(C, Rat(-3), Rat(5)) == Rat(-3));
}

TEST_CASE("normalization means the origin sits on the boundary") {
  for (auto t : {Rat(0), Rat(1), Rat(2)}) CHECK(is_normalized(halfplane_t(t)));
  SouthWestRegion shifted{{{{Rat(0), Rat(1), Rat(1)}}}};  // y <= 1
  CHECK_FALSE(is_normalized(shifted));
  SouthWestRegion uni{{{{Rat(0), Rat(1), Rat(0)}}, {{Rat(1), Rat(0), Rat(0)}}}};
  CHECK(is_normalized(uni));
}

TEST_CASE("entry time is monotone in both coordinates") {
  SouthWestRegion C{{{{Rat(1), Rat(2), Rat(1)}, {Rat(3), Rat(1), Rat(0)}},
                     {{Rat(0), Rat(1), Rat(-1)}}}};
  Rat base = entry_time(C, Rat(0), Rat(0));
  CHECK(entry_time(C, Rat(1), Rat(0)) >= base);
  CHECK(entry_time(C, Rat(0), Rat(1)) >= base);
  CHECK(entry_time(C, Rat(-1), Rat(0)) <= base);
  CHECK(entry_time(C, Rat(0), Rat(-1)) <= base);
}

TEST_CASE("degenerate half planes are rejected") {
  SouthWestRegion bad{{{{Rat(0), Rat(0), Rat(0)}}}};
  CHECK_THROWS(entry_time(bad, Rat(0), Rat(0)));
  SouthWestRegion neg{{{{Rat(-1), Rat(2), Rat(0)}}}};
  CHECK_THROWS(entry_time(neg, Rat(0), Rat(0)));
  SouthWestRegion empty{};
  CHECK_THROWS(entry_time(empty, Rat(0), Rat(0)));
}

TEST_CASE("region JSON round trip") {
  SouthWestRegion C{{{{Rat(1), Rat(2), Rat(1, 2)}, {Rat(3), Rat(1), Rat(0)}},
                     {{Rat(0), Rat(1), Rat(-1)}}}};
  auto j = region_to_json(C);
  auto D = region_from_json(json::parse(dump_deterministic(j)));
  REQUIRE(D.pieces.size() == 2);
  REQUIRE(D.pieces[0].size() == 2);
  CHECK(D.pieces[0][0].c == Rat(1, 2));
  CHECK(entry_time(D, Rat(5), Rat(7)) == entry_time(C, Rat(5), Rat(7)));
  CHECK(dump_deterministic(region_to_json(D)) == dump_deterministic(j));
}
