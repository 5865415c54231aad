#include <catch2/catch_amalgamated.hpp>

#include "ups/gf2.hpp"

using namespace ups;

namespace {
BitVec bv(std::size_t bits, std::initializer_list<std::size_t> ones) {
  BitVec v(bits);
  for (auto i : ones) v.set(i);
  return v;
}
}  // namespace

TEST_CASE("rank of simple column sets") {
  CHECK(gf2_rank({bv(3, {0}), bv(3, {1}), bv(3, {0, 1})}) == 2);
  CHECK(gf2_rank({bv(3, {0, 1, 2}), bv(3, {1, 2}), bv(3, {0})}) == 2);
  CHECK(gf2_rank({}) == 0);
  CHECK(gf2_rank({bv(4, {})}) == 0);
}

TEST_CASE("kernel basis spans exactly the null space") {
  // columns: c0 = e0, c1 = e1, c2 = e0+e1 -> kernel = span{(1,1,1)}
  auto ker = gf2_kernel({bv(2, {0}), bv(2, {1}), bv(2, {0, 1})}, 2);
  REQUIRE(ker.size() == 1);
  CHECK(ker[0].get(0));
  CHECK(ker[0].get(1));
  CHECK(ker[0].get(2));
}

TEST_CASE("solve finds coefficients or reports infeasible") {
  std::vector<BitVec> cols = {bv(3, {0, 1}), bv(3, {1, 2})};
  auto sol = gf2_solve(cols, 3, bv(3, {0, 2}));
  REQUIRE(sol.has_value());
  CHECK(sol->get(0));
  CHECK(sol->get(1));
  CHECK_FALSE(gf2_solve(cols, 3, bv(3, {0})).has_value());
  // zero target is always solvable with the empty coefficient set
  auto z = gf2_solve(cols, 3, bv(3, {}));
  REQUIRE(z.has_value());
  CHECK_FALSE(z->any());
}

TEST_CASE("basis membership") {
  Gf2Basis b;
  CHECK(b.insert(bv(4, {0, 2})));
  CHECK(b.insert(bv(4, {1})));
  CHECK_FALSE(b.insert(bv(4, {0, 1, 2})));
  CHECK(b.contains(bv(4, {0, 2})));
  CHECK(b.contains(bv(4, {0, 1, 2})));
  CHECK_FALSE(b.contains(bv(4, {3})));
  CHECK(b.rank() == 2);
}

TEST_CASE("large word-boundary vectors") {
  BitVec v(200);
  v.set(0);
  v.set(63);
  v.set(64);
  v.set(199);
  CHECK(v.lowest() == 0);
  v.flip(0);
  CHECK(v.lowest() == 63);
  BitVec w(200);
  w.set(63);
  v ^= w;
  CHECK(v.lowest() == 64);
  CHECK(gf2_rank({v, v}) == 1);
}
