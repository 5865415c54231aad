#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ups/upsilon.hpp"

using namespace ups;

namespace {

KnotComplex unknot() {
  KnotComplex K;
  K.generators.push_back({"z", Rat(0), Rat(0), std::nullopt});
  return K;
}

KnotComplex trefoil() {
  KnotComplex K;
  K.generators.push_back({"x1", Rat(1), Rat(0), std::nullopt});
  K.generators.push_back({"x2", Rat(0), Rat(-1), std::nullopt});
  K.generators.push_back({"x3", Rat(-1), Rat(-2), std::nullopt});
  K.arrows.push_back({"x2", "x3", 0});
  K.arrows.push_back({"x2", "x1", 1});
  return K;
}

PiecewiseLinear pl(std::initializer_list<std::pair<Rat, Rat>> pts) {
  PiecewiseLinear p;
  p.breakpoints.assign(pts.begin(), pts.end());
  return p;
}

// random acyclic box a -> b with u_exp in {0,1,2} glued at shifted gradings
KnotComplex random_acyclic_box(std::mt19937_64& rng, int tag) {
  std::uniform_int_distribution<int> u(0, 2), a(-2, 2), m(-3, 3);
  KnotComplex B;
  std::int64_t ue = u(rng);
  Rat Mb(m(rng)), Ab(a(rng));
  std::string sa = "bx" + std::to_string(tag) + "a";
  std::string sb = "bx" + std::to_string(tag) + "b";
  // the arrow laws force M(from) = M(to) - 2u + 1 and A(from) >= A(to) - u
  B.generators.push_back({sa, Ab - Rat(ue) + Rat(std::abs(a(rng))), Mb - Rat(2 * ue) + Rat(1), std::nullopt});
  B.generators.push_back({sb, Ab, Mb, std::nullopt});
  B.arrows.push_back({sa, sb, ue});
  return B;
}

}  // namespace

TEST_CASE("upsilon_region examples") {
  CHECK(upsilon_region(unknot(), halfplane_t(Rat(1))) == Rat(0));
  CHECK(upsilon_region(unknot(), halfplane_t(Rat(0))) == Rat(0));
  CHECK(upsilon_region(trefoil(), halfplane_t(Rat(1))) == Rat(1, 2));
  CHECK(upsilon_region(trefoil(), halfplane_t(Rat(0))) == Rat(0));
}

TEST_CASE("upsilon_function on the trefoil is the unit tent") {
  auto f = upsilon_function(trefoil());
  CHECK(f == pl({{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(2), Rat(0)}}));
  CHECK(f.eval(Rat(1, 2)) == Rat(-1, 2));
  CHECK(f.eval(Rat(3, 2)) == Rat(-1, 2));
}

TEST_CASE("upsilon_function on the unknot is zero") {
  auto f = upsilon_function(unknot());
  CHECK(f == pl({{Rat(0), Rat(0)}, {Rat(2), Rat(0)}}));
}

TEST_CASE("tensor square of the trefoil doubles the tent") {
  auto f = upsilon_function(tensor(trefoil(), trefoil()));
  CHECK(f == pl({{Rat(0), Rat(0)}, {Rat(1), Rat(-2)}, {Rat(2), Rat(0)}}));
}

TEST_CASE("tau on basic complexes") {
  CHECK(tau(trefoil()) == Rat(1));
  CHECK(tau(unknot()) == Rat(0));
  CHECK(tau(dual(trefoil())) == Rat(-1));
  CHECK(tau(tensor(trefoil(), trefoil())) == Rat(2));
}

TEST_CASE("duality negates the function pointwise") {
  auto f = upsilon_function(trefoil());
  auto g = upsilon_function(dual(trefoil()));
  for (auto t : {Rat(0), Rat(1, 3), Rat(1), Rat(7, 5), Rat(2)})
    CHECK(f.eval(t) == -g.eval(t));
}

TEST_CASE("trefoil tensor its dual has vanishing upsilon") {
  auto K = tensor(trefoil(), dual(trefoil()));
  auto f = upsilon_function(K);
  CHECK(f == pl({{Rat(0), Rat(0)}, {Rat(2), Rat(0)}}));
}

TEST_CASE("acyclic summands never move the invariant") {
  std::mt19937_64 rng(20260819);
  KnotComplex K = trefoil();
  auto base = upsilon_function(K);
  for (int i = 0; i < 8; ++i) {
    K = direct_sum(K, random_acyclic_box(rng, i));
    REQUIRE(validate(K).empty());
    CHECK(upsilon_function(K) == base);
  }
  CHECK(correction_term(K) == Rat(0));
}

TEST_CASE("oracle agrees with the solver") {
  for (auto t : {Rat(0), Rat(1, 2), Rat(1), Rat(4, 3), Rat(2)}) {
    auto C = halfplane_t(t);
    CHECK(upsilon_oracle(trefoil(), C) == upsilon_region(trefoil(), C));
    CHECK(upsilon_oracle(unknot(), C) == upsilon_region(unknot(), C));
    auto TT = tensor(trefoil(), trefoil());
    CHECK(upsilon_oracle(TT, C) == upsilon_region(TT, C));
  }
}

TEST_CASE("oracle cap") {
  // 17+ boundary dimensions exceed the exhaustive cap; build a big acyclic sum
  KnotComplex K = unknot();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 18; ++i) {
    KnotComplex B;
    std::string sa = "c" + std::to_string(i) + "a";
    std::string sb = "c" + std::to_string(i) + "b";
    B.generators.push_back({sa, Rat(0), Rat(1), std::nullopt});
    B.generators.push_back({sb, Rat(0), Rat(0), std::nullopt});
    B.arrows.push_back({sa, sb, 0});
    K = direct_sum(K, B);
  }
  CHECK_THROWS_AS(upsilon_oracle(K, halfplane_t(Rat(1))), CapExceeded);
  // the solver still runs fine
  CHECK(upsilon_region(K, halfplane_t(Rat(1))) == Rat(0));
}

TEST_CASE("piecewise-linear CSV export") {
  auto f = upsilon_function(tensor(trefoil(), trefoil()));
  CHECK(piecewise_to_csv(f) == "t,value\n0,0\n1,-2\n2,0\n");
}

TEST_CASE("general region evaluation: quadrant corner") {
  // corner {x <= 0, y <= 0}: entry time is max(A, j); trefoil coset both give 1
  SouthWestRegion corner{{{{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}}}};
  CHECK(is_normalized(corner));
  CHECK(upsilon_region(trefoil(), corner) == Rat(1));
  CHECK(upsilon_oracle(trefoil(), corner) == Rat(1));
  CHECK(upsilon_region(unknot(), corner) == Rat(0));
}
