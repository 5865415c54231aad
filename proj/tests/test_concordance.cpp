#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "ups/concordance.hpp"
#include "ups/grid.hpp"
#include "ups/oneone.hpp"
#include "ups/upsilon.hpp"

using namespace ups;

namespace {

PiecewiseLinear constant_fn(const Rat& v) {
  return PiecewiseLinear{{{Rat(0), v}, {Rat(2), v}}};
}

PiecewiseLinear zero_fn() { return constant_fn(Rat(0)); }

// Upsilon map of one grid, indexed over Z_p by the class label.
UpsilonMap grid_upsilon_map(int p) {
  TwistedGrid G = make_grid(p);
  std::map<GroupElement, PiecewiseLinear> fns;
  for (int h = 0; h <= (p - 1) / 2; ++h)
    fns[{h}] = upsilon_function(spinc_slice(G, h));
  return make_upsilon_map(make_group({p}), fns);
}

}  // namespace

TEST_CASE("laurent construction accumulates and prunes") {
  IntLaurentPoly P = laurent_from({{0, 2}, {0, -2}, {1, 1}, {-1, 1}});
  CHECK(P.coeffs == std::map<std::int64_t, std::int64_t>{{-1, 1}, {1, 1}});
  CHECK(laurent_is_symmetric(P));
  CHECK(!laurent_is_symmetric(laurent_from({{1, 1}})));
  CHECK(laurent_eval_unit(P, 1) == 2);
  CHECK(laurent_eval_unit(P, -1) == -2);
  CHECK_THROWS_AS(laurent_eval_unit(P, 2), std::invalid_argument);
}

TEST_CASE("knot polynomial constructor enforces the two axioms") {
  CHECK_THROWS_AS(knot_alexander({{1, 1}, {0, -1}}), std::invalid_argument);
  CHECK_THROWS_AS(knot_alexander({{-1, 1}, {0, 1}, {1, 1}}), std::invalid_argument);
  CHECK(knot_alexander({{-1, 1}, {0, -1}, {1, 1}}).coeffs.size() == 3);
}

TEST_CASE("alexander polynomials of the two families") {
  IntLaurentPoly tre = torus_alexander(1);
  CHECK(tre.coeffs ==
        std::map<std::int64_t, std::int64_t>{{-1, 1}, {0, -1}, {1, 1}});
  CHECK(twist_alexander(1) == tre);  // one clasp twist is the trefoil
  CHECK(twist_alexander(2).coeffs ==
        std::map<std::int64_t, std::int64_t>{{-1, -1}, {0, 3}, {1, -1}});
  for (int n = 0; n <= 10; ++n) {
    INFO("torus n = " << n);
    IntLaurentPoly P = torus_alexander(n);
    CHECK(laurent_eval_unit(P, 1) == 1);
    CHECK(std::abs(laurent_eval_unit(P, -1)) == 2 * n + 1);
  }
  for (int n = 1; n <= 10; ++n) {
    INFO("twist n = " << n);
    IntLaurentPoly P = twist_alexander(n);
    CHECK(laurent_eval_unit(P, 1) == 1);
    CHECK(std::abs(laurent_eval_unit(P, -1)) == 2 * n + 1);
  }
  CHECK_THROWS_AS(torus_alexander(-1), std::invalid_argument);
  CHECK_THROWS_AS(twist_alexander(0), std::invalid_argument);
}

TEST_CASE("det_m by resultants") {
  IntLaurentPoly tre = torus_alexander(1);
  CHECK(det_m(tre, 2) == 3);
  CHECK(det_m(tre, 3) == 4);
  CHECK(det_m(tre, 4) == 3);
  CHECK(det_m(torus_alexander(0), 8) == 1);  // unknot
  CHECK(det_m(twist_alexander(2), 2) == 5);
  for (int n = 1; n <= 10; ++n) {
    INFO("twist n = " << n);
    CHECK(det_m(twist_alexander(n), 2) == 2 * n + 1);
  }
  CHECK_THROWS_AS(det_m(tre, 6), std::invalid_argument);
  CHECK_THROWS_AS(det_m(tre, 1), std::invalid_argument);
  CHECK_THROWS_AS(det_m(IntLaurentPoly{}, 2), std::invalid_argument);
}

TEST_CASE("det_m at 2 equals |value at -1| times |value at 1| on the corpus") {
  std::vector<IntLaurentPoly> corpus;
  for (int n = 0; n <= 6; ++n) corpus.push_back(torus_alexander(n));
  for (int n = 1; n <= 10; ++n) corpus.push_back(twist_alexander(n));
  for (const auto& P : corpus)
    CHECK(det_m(P, 2) == std::abs(laurent_eval_unit(P, -1)) *
                             std::abs(laurent_eval_unit(P, 1)));
}

TEST_CASE("finite abelian group plumbing") {
  CHECK_THROWS_AS(make_group({3, 0}), std::invalid_argument);
  FiniteAbelianGroup H = make_group({2, 3});
  CHECK(group_order(H) == 6);
  CHECK(group_elements(H).size() == 6);
  CHECK(group_add(H, {1, 2}, {1, 2}) == GroupElement{0, 1});
  CHECK(group_neg(H, {1, 1}) == GroupElement{1, 2});
  CHECK(element_order(H, {1, 0}) == 2);
  CHECK(element_order(H, {1, 1}) == 6);
  CHECK(element_order(make_group({9}), {3}) == 3);
  CHECK(element_order(make_group({6}), {4}) == 3);
  CHECK_THROWS_AS(group_reduce(H, {1}), std::invalid_argument);
}

TEST_CASE("square-root subgroups") {
  SECTION("cyclic of order nine has exactly one") {
    SqrtSubgroups S = square_root_subgroups(make_group({9}));
    REQUIRE(!S.not_square);
    REQUIRE(S.subgroups.size() == 1);
    CHECK(S.subgroups[0] ==
          std::vector<GroupElement>{{0}, {3}, {6}});
  }
  SECTION("rank two over three primes: the four lines") {
    SqrtSubgroups S = square_root_subgroups(make_group({3, 3}));
    REQUIRE(!S.not_square);
    CHECK(S.subgroups.size() == 4);
    for (const auto& G : S.subgroups) CHECK(G.size() == 3);
  }
  SECTION("non-square orders are flagged") {
    SqrtSubgroups S = square_root_subgroups(make_group({3}));
    CHECK(S.not_square);
    CHECK(S.subgroups.empty());
  }
  SECTION("trivial group") {
    SqrtSubgroups S = square_root_subgroups(make_group({1}));
    REQUIRE(!S.not_square);
    REQUIRE(S.subgroups.size() == 1);
    CHECK(S.subgroups[0] == std::vector<GroupElement>{{0}});
  }
  SECTION("klein four-group has three order-two subgroups") {
    SqrtSubgroups S = square_root_subgroups(make_group({2, 2}));
    CHECK(S.subgroups.size() == 3);
  }
  SECTION("every subgroup is a subgroup and negation-closed") {
    FiniteAbelianGroup H = make_group({5, 5});
    SqrtSubgroups S = square_root_subgroups(H);
    CHECK(S.subgroups.size() == 6);
    for (const auto& G : S.subgroups) {
      std::set<GroupElement> set(G.begin(), G.end());
      CHECK(set.count(group_zero(H)) == 1);
      for (const auto& a : G) {
        CHECK(set.count(group_neg(H, a)) == 1);
        for (const auto& b : G) CHECK(set.count(group_add(H, a, b)) == 1);
      }
    }
  }
  SECTION("cap") {
    CHECK_THROWS_AS(square_root_subgroups(make_group({101, 101})), CapExceeded);
  }
}

TEST_CASE("upsilon maps enforce conjugation symmetry") {
  FiniteAbelianGroup H = make_group({5});
  PiecewiseLinear tent{{{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(2), Rat(0)}}};
  UpsilonMap U = make_upsilon_map(H, {{{0}, zero_fn()}, {{1}, tent}, {{2}, tent}});
  CHECK(upsilon_total(U));
  CHECK(piecewise_equal(upsilon_at(U, {4}), tent));   // filled from class 1
  CHECK(piecewise_equal(upsilon_at(U, {-2}), tent));  // key normalization
  CHECK_THROWS_AS(
      make_upsilon_map(H, {{{1}, tent}, {{4}, zero_fn()}}),
      std::invalid_argument);
  UpsilonMap partial = make_upsilon_map(H, {{{1}, tent}});
  CHECK(!upsilon_total(partial));
  CHECK_THROWS_AS(upsilon_at(partial, {0}), std::invalid_argument);
}

TEST_CASE("piecewise utilities") {
  PiecewiseLinear tent{{{Rat(0), Rat(0)}, {Rat(1), Rat(-2)}, {Rat(2), Rat(0)}}};
  PiecewiseLinear zero3{{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(2), Rat(0)}}};
  CHECK(piecewise_is_zero(zero3));
  CHECK(piecewise_is_zero(zero_fn()));
  CHECK(!piecewise_is_zero(tent));
  CHECK(piecewise_equal(zero3, zero_fn()));  // redundant node, same function
  CHECK(!piecewise_equal(tent, zero3));
  PiecewiseLinear sum = piecewise_add(tent, tent);
  CHECK(sum.eval(Rat(1)) == Rat(-4));
  CHECK(sum.eval(Rat(1, 2)) == Rat(-2));
  CHECK(piecewise_equal(piecewise_add(tent, piecewise_negate(tent)), zero_fn()));
  CHECK_THROWS_AS(
      piecewise_add(tent, PiecewiseLinear{{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}}),
      std::invalid_argument);
}

TEST_CASE("slice test on small data") {
  SECTION("trivial data passes with the trivial subgroup") {
    FiniteAbelianGroup H = make_group({1});
    UpsilonMap U = make_upsilon_map(H, {{{0}, zero_fn()}});
    ObstructionResult R = slice_obstruction(U, H);
    CHECK(!R.obstructed);
    CHECK(R.metabolizer == std::vector<GroupElement>{{0}});
  }
  SECTION("grid data for order five is obstructed by the non-square order") {
    UpsilonMap U = grid_upsilon_map(5);
    ObstructionResult R = slice_obstruction(U, make_group({5}));
    CHECK(R.obstructed);
    CHECK(R.reason == "group order is not a perfect square");
  }
  SECTION("everywhere-zero data over a square group passes") {
    FiniteAbelianGroup H = make_group({5, 5});
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H)) fns[g] = zero_fn();
    ObstructionResult R = slice_obstruction(make_upsilon_map(H, fns), H);
    CHECK(!R.obstructed);
    CHECK(R.metabolizer.size() == 5);
    std::set<GroupElement> set(R.metabolizer.begin(), R.metabolizer.end());
    for (const auto& a : R.metabolizer) CHECK(set.count(group_neg(H, a)) == 1);
  }
  SECTION("nonzero on every line obstructs despite a square order") {
    FiniteAbelianGroup H = make_group({3, 3});
    PiecewiseLinear tent{{{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(2), Rat(0)}}};
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H))
      fns[g] = (g == group_zero(H)) ? zero_fn() : tent;
    ObstructionResult R = slice_obstruction(make_upsilon_map(H, fns), H);
    CHECK(R.obstructed);
    CHECK(R.reason == "no square-root subgroup with vanishing upsilon");
  }
  SECTION("preconditions") {
    FiniteAbelianGroup H = make_group({5});
    UpsilonMap partial = make_upsilon_map(H, {{{0}, zero_fn()}});
    CHECK_THROWS_AS(slice_obstruction(partial, H), std::invalid_argument);
    CHECK_THROWS_AS(slice_obstruction(partial, make_group({7})),
                    std::invalid_argument);
  }
}

TEST_CASE("concordance test between labeled data sets") {
  UpsilonMap U5 = grid_upsilon_map(5);
  FiniteAbelianGroup H5 = make_group({5});
  SECTION("identical data passes") {
    ObstructionResult R = concordance_test(U5, U5, H5, H5);
    REQUIRE(!R.obstructed);
    REQUIRE(R.metabolizer.size() == 5);
    for (const auto& pair : R.metabolizer)
      CHECK(piecewise_equal(upsilon_at(U5, {pair[0]}), upsilon_at(U5, {pair[1]})));
  }
  SECTION("order five against the unknot fails on the determinant") {
    FiniteAbelianGroup H1 = make_group({1});
    UpsilonMap U1 = make_upsilon_map(H1, {{{0}, zero_fn()}});
    ObstructionResult R = concordance_test(U5, U1, H5, H1);
    CHECK(R.obstructed);
    CHECK(R.reason == "product group order is not a perfect square");
  }
  SECTION("perturbing one class defeats every alignment") {
    UpsilonMap U9 = grid_upsilon_map(9);
    FiniteAbelianGroup H9 = make_group({9});
    UpsilonMap P9 = U9;
    PiecewiseLinear deep{{{Rat(0), Rat(0)}, {Rat(1), Rat(-4)}, {Rat(2), Rat(0)}}};
    P9.functions[{4}] = deep;
    P9.functions[{5}] = deep;
    CHECK(!concordance_test(U9, U9, H9, H9).obstructed);
    ObstructionResult R = concordance_test(U9, P9, H9, H9);
    CHECK(R.obstructed);
    CHECK(R.reason == "no subgroup aligns the two upsilon maps");
  }
}

TEST_CASE("finite-order criterion") {
  SECTION("zero map is consistent with finite order") {
    FiniteAbelianGroup H = make_group({5});
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H)) fns[g] = zero_fn();
    FiniteOrderResult R = finite_order_S(make_upsilon_map(H, fns), 5, Rat(1));
    CHECK(R.zero);
    CHECK(!R.vacuous);
    CHECK(R.subgroup_sums == std::vector<Rat>{Rat(0)});
  }
  SECTION("no order-p subgroup is vacuous with a warning") {
    FiniteAbelianGroup H = make_group({5});
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H)) fns[g] = zero_fn();
    FiniteOrderResult R = finite_order_S(make_upsilon_map(H, fns), 3, Rat(1));
    CHECK(R.zero);
    CHECK(R.vacuous);
    CHECK(!R.warning.empty());
  }
  SECTION("same-sign sums witness infinite order") {
    FiniteAbelianGroup H = make_group({9});
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H)) fns[g] = zero_fn();
    fns[{3}] = constant_fn(Rat(-3, 4));
    fns[{6}] = constant_fn(Rat(-3, 4));
    FiniteOrderResult R = finite_order_S(make_upsilon_map(H, fns), 3, Rat(1));
    CHECK(!R.zero);
    CHECK(R.witness == Rat(3, 2));
  }
  SECTION("mixed signs allow a vanishing combination") {
    FiniteAbelianGroup H = make_group({3, 3});
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H)) fns[g] = zero_fn();
    fns[{0, 1}] = constant_fn(Rat(1));
    fns[{0, 2}] = constant_fn(Rat(1));
    fns[{1, 0}] = constant_fn(Rat(-1));
    fns[{2, 0}] = constant_fn(Rat(-1));
    FiniteOrderResult R = finite_order_S(make_upsilon_map(H, fns), 3, Rat(1));
    CHECK(R.zero);
    CHECK(R.subgroup_sums.size() == 4);  // the four lines
  }
  SECTION("p must be prime") {
    FiniteAbelianGroup H = make_group({5});
    std::map<GroupElement, PiecewiseLinear> fns;
    for (const auto& g : group_elements(H)) fns[g] = zero_fn();
    CHECK_THROWS_AS(finite_order_S(make_upsilon_map(H, fns), 4, Rat(1)),
                    std::invalid_argument);
  }
}

TEST_CASE("independence bookkeeping") {
  CHECK(independence_H({{1}, {0}}, {1}, {1}) == Rat(1));
  CHECK(independence_H({{0, 0}, {0}}, {2, 1}, {3}) == Rat(0));
  CHECK(independence_H({{1, 2}, {1}}, {2, 1}, {3}) == Rat(1));
  CHECK_THROWS_AS(independence_H({{1}, {}}, {1, 2}, {}), std::invalid_argument);
}

TEST_CASE("determinant bound for concordance to two-strand torus knots") {
  CHECK(!torus_det_bound(4, 1));
  CHECK(torus_det_bound(1, 3));
  CHECK(!torus_det_bound(12, 5));
  CHECK(torus_det_bound(2, 5));
  CHECK(!torus_det_bound(1, 5));  // square-free parts 5 vs 3
  CHECK(squarefree_part(8) == 2);
  CHECK(squarefree_part(36) == 1);
  CHECK(squarefree_part(12) == 3);
  CHECK_THROWS_AS(torus_det_bound(0, 1), std::invalid_argument);
}

TEST_CASE("independence driver rejects every candidate relation") {
  IndependenceReport rep = independence_driver({3, 5, 7}, 3);
  CHECK(rep.family_independent);
  CHECK(rep.candidates.size() == 7 * 7 * 7 - 1);
  std::size_t searched = 0;
  for (const auto& cand : rep.candidates) {
    bool all_even = true;
    for (int v : cand.coeffs) all_even = all_even && v % 2 == 0;
    CHECK(cand.det_square == all_even);
    if (cand.det_square) {
      ++searched;
      CHECK(cand.every_metabolizer_witnessed);
      CHECK(cand.metabolizer_count > 0);
      CHECK(cand.witness_value != Rat(0));
    }
  }
  CHECK(searched == 3 * 3 * 3 - 1);  // coefficients in {0, +-2}, not all zero

  // Spot checks: one active prime gives the four lines of Z_3^2; mixed signs
  // multiply the per-prime counts.
  auto find = [&](std::vector<int> c) {
    for (const auto& cand : rep.candidates)
      if (cand.coeffs == c) return cand;
    FAIL("candidate not found");
    return rep.candidates[0];
  };
  CHECK(find({2, 0, 0}).metabolizer_count == 4);
  CHECK(find({2, -2, 0}).metabolizer_count == 4 * 6);
  CHECK(find({2, 2, 2}).metabolizer_count == 4 * 6 * 8);
  CHECK(!find({1, 0, 0}).det_square);
  CHECK(!find({2, 1, 0}).det_square);

  CHECK_THROWS_AS(independence_driver({3, 5, 5}, 3), std::invalid_argument);
  CHECK_THROWS_AS(independence_driver({3, 4}, 3), std::invalid_argument);
}

TEST_CASE("upsilon is additive for tensor products of labeled slices") {
  TwistedGrid G3 = make_grid(3);
  TwistedGrid G5 = make_grid(5);
  for (int h1 = -1; h1 <= 1; ++h1) {
    for (int h2 = -2; h2 <= 2; ++h2) {
      INFO("h1 = " << h1 << ", h2 = " << h2);
      KnotComplex K1 = spinc_slice(G3, h1);
      KnotComplex K2 = spinc_slice(G5, h2);
      KnotComplex T = tensor(K1, K2);
      CHECK(validate(T).empty());
      CHECK(piecewise_equal(
          upsilon_function(T),
          piecewise_add(upsilon_function(K1), upsilon_function(K2))));
    }
  }
}
