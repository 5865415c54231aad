#pragma once
// Twisted doubly-pointed grids of odd order p: a 2 x 2p cylinder with a
// shear identification along the top edge, two O-markings and two
// X-markings. Rectangle counting gives a differential on the 2p^2
// generators; it splits over p spin-c classes of 2p generators each. Every
// class slice matches a fused pole/wire model, and shortening the poles
// reduces it to a torus-knot staircase carrying the lens-space correction
// term of its class.
//
// Conventions. A generator (x,u,v) or (y,u,v) with u,v in [0,p) occupies one
// point on each horizontal line of the cylinder: x-type at doubled
// coordinates (2u, row 0) and (2v+1, row 1), y-type at (2u+1, row 0) and
// (2v, row 1). Horizontal coordinates are mod 2p; crossing the top edge
// shifts by the identification (x, 2) ~ (x-2, 0). The markings sit at
// doubled centers O0 = (1,1), O1 = (3,3), X0 = (2p+1,1), X1 = (2p+3,3).
//
// Four generators per class have sporadic differentials (the starred rows of
// the tables): in class s they are x(0,s), x(s,0) (split V0/V1 rows) and
// y(half, (s-half) mod p), y((s-half-1) mod p, half+1) (empty rows), where
// half = (p-1)/2.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ups/complex_core.hpp"
#include "ups/models.hpp"
#include "ups/oneone.hpp"
#include "ups/rational.hpp"

namespace ups {

struct TwistedGrid {
  int p = 3;
};

inline TwistedGrid make_grid(int p) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("make_grid: p must be odd and >= 3");
  return {p};
}

struct GridGen {
  char kind = 'x';  // 'x' or 'y'
  int a = 0;
  int b = 0;
  friend auto operator<=>(const GridGen&, const GridGen&) = default;
};

inline std::string grid_gen_name(const GridGen& g) {
  return std::string(1, g.kind) + "(" + std::to_string(g.a) + "," +
         std::to_string(g.b) + ")";
}

// A differential term: target generator with its O0/O1 multiplicities.
using GridTerm = std::tuple<GridGen, int, int>;

struct DisconnectedSlice : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline int pmod(int v, int m) {
  int r = v % m;
  return r < 0 ? r + m : r;
}

// The two points of a generator as (doubled column, row).
inline std::array<std::pair<int, int>, 2> grid_comps(const GridGen& g, int p) {
  if (g.kind == 'x')
    return {{{pmod(2 * g.a, 2 * p), 0}, {pmod(2 * g.b + 1, 2 * p), 1}}};
  return {{{pmod(2 * g.a + 1, 2 * p), 0}, {pmod(2 * g.b, 2 * p), 1}}};
}

inline GridGen gen_from_comps(std::pair<int, int> c0, std::pair<int, int> c1,
                              int p) {
  auto [x0, y0] = c0;
  auto [x1, y1] = c1;
  if (y0 != 0 || y1 != 1)
    throw std::logic_error("gen_from_comps: components on wrong rows");
  if (x0 % 2 == 0) {
    if (x1 % 2 != 1) throw std::logic_error("gen_from_comps: parity mismatch");
    return {'x', pmod(x0 / 2, p), pmod((x1 - 1) / 2, p)};
  }
  if (x1 % 2 != 0) throw std::logic_error("gen_from_comps: parity mismatch");
  return {'y', pmod((x0 - 1) / 2, p), pmod(x1 / 2, p)};
}

struct Marking {
  const char* name;
  int cx2;
  int cy2;
};

inline std::array<Marking, 4> grid_markings(int p) {
  return {{{"O0", 1, 1}, {"O1", 3, 3}, {"X0", 2 * p + 1, 1}, {"X1", 2 * p + 3, 3}}};
}

// Multiplicity of the marking centered at (mx2/2, my2/2) inside the open
// rectangle (sx, sx+w) x (sy, sy+h). Lifts of the marking appear at
// half-integer levels with even vertical offset, displaced horizontally by
// the shear, with horizontal period 2p.
inline int rect_count_marking(int sx, int sy, int w, int h, int mx2, int my2,
                              int p) {
  int cnt = 0;
  for (int l = sy; l < sy + h; ++l) {
    int dl2 = (2 * l + 1) - my2;
    if (pmod(dl2, 4) != 0) continue;
    int x2 = mx2 + dl2;
    int off2 = pmod(x2 - 2 * sx, 4 * p);
    if (0 < off2 && off2 < 2 * w) ++cnt;
  }
  return cnt;
}

inline bool rect_contains_component(int sx, int sy, int w, int h, int cx,
                                    int cy, int p) {
  for (int l = sy + 1; l < sy + h; ++l) {
    int d = l - cy;
    if (d % 2 != 0) continue;
    int off = pmod(cx + d - sx, 2 * p);
    if (0 < off && off < w) return true;
  }
  return false;
}

// Empty X-avoiding rectangles from g: (target, O0 count, O1 count).
inline std::vector<GridTerm> rects_from(const GridGen& g, int p) {
  auto cs = grid_comps(g, p);
  int x0 = cs[0].first;
  int x1 = cs[1].first;

  struct Cand {
    int sx, sy, w, h;
    GridGen tgt;
  };
  std::vector<Cand> cands;
  // Case A: south-west corner on row 0; the north-east corner is a lift of
  // the row-1 component at height 1 + 2m.
  for (int m = 0; m < p; ++m) {
    int h = 1 + 2 * m;
    int w = pmod(x1 + 2 * m - x0, 2 * p);
    if (w % 2 != 1) throw std::logic_error("rects_from: even width");
    std::pair<int, int> nw_row1{pmod(x0 - 2 * m, 2 * p), 1};
    std::pair<int, int> se_row0{pmod(x0 + w, 2 * p), 0};
    cands.push_back({x0, 0, w, h, gen_from_comps(se_row0, nw_row1, p)});
  }
  // Case B: south-west corner on row 1; the north-east corner is a lift of
  // the row-0 component at height 2m.
  for (int m = 1; m <= p; ++m) {
    int h = 2 * m - 1;
    int w = pmod(x0 + 2 * m - x1, 2 * p);
    if (w % 2 != 1) throw std::logic_error("rects_from: even width");
    std::pair<int, int> nw_row0{pmod(x1 - 2 * m, 2 * p), 0};
    std::pair<int, int> se_row1{pmod(x1 + w, 2 * p), 1};
    cands.push_back({x1, 1, w, h, gen_from_comps(nw_row0, se_row1, p)});
  }

  std::vector<GridTerm> res;
  for (const auto& c : cands) {
    auto tcs = grid_comps(c.tgt, p);
    bool blocked = false;
    for (const auto& pt : {cs[0], cs[1], tcs[0], tcs[1]})
      if (rect_contains_component(c.sx, c.sy, c.w, c.h, pt.first, pt.second, p))
        blocked = true;
    if (blocked) continue;
    int counts[4];
    auto marks = grid_markings(p);
    for (int i = 0; i < 4; ++i)
      counts[i] =
          rect_count_marking(c.sx, c.sy, c.w, c.h, marks[i].cx2, marks[i].cy2, p);
    if (counts[2] || counts[3]) continue;  // X-markings must stay outside
    res.push_back({c.tgt, counts[0], counts[1]});
  }
  return res;
}

}  // namespace detail

inline std::vector<GridGen> grid_generators(int p) {
  make_grid(p);  // range check: odd, >= 3
  std::vector<GridGen> out;
  for (int u = 0; u < p; ++u) {
    for (int v = 0; v < p; ++v) {
      out.push_back({'x', u, v});
      out.push_back({'y', u, v});
    }
  }
  return out;
}

// Spin-c class of a generator, as the symmetric representative of a+b mod p.
inline int spinc_of(const GridGen& g, int p) { return symmetric_mod(g.a + g.b, p); }

// Differential of one generator by rectangle counting; rectangles
// contributing the same term cancel in pairs.
inline std::vector<GridTerm> rect_differential(const GridGen& g, int p) {
  std::map<GridTerm, int> parity;
  for (const auto& term : detail::rects_from(g, p)) parity[term] ^= 1;
  std::vector<GridTerm> out;
  for (const auto& [term, v] : parity)
    if (v) out.push_back(term);
  return out;
}

// Closed-form differential table. Rows are grouped by the position of (a,b)
// relative to half = (p-1)/2; four rows per class are sporadic (see header
// comment).
inline std::vector<GridTerm> closed_form_differential(const GridGen& g, int p) {
  const int half = (p - 1) / 2;
  const int a = g.a;
  const int b = g.b;
  auto P = [p](int v) { return detail::pmod(v, p); };
  std::set<GridTerm> out;
  if (g.kind == 'y') {
    if (a == half || b == P(half + 1)) return {};
    if (0 <= a && a <= half - 1 && P(b - 1) >= half + 1) {
      out.insert({{'x', P(a + 1), P(b - 1)}, 0, 1});
      out.insert({{'x', P(b - 1), P(a + 1)}, 0, 1});
    } else if (a >= half + 1 && 1 <= b && b <= half) {
      out.insert({{'x', a, b}, 1, 0});
      out.insert({{'x', b, a}, 1, 0});
    } else if (a == b) {
      out.insert({{'x', P(a + 1), P(b - 1)}, 0, 0});
      out.insert({{'x', P(b - 1), P(a + 1)}, 0, 0});
    } else if (a <= b || (b == 0 && a > half)) {
      out.insert({{'x', b, a}, 0, 0});
      out.insert({{'x', a, b}, 0, 0});
    } else {
      out.insert({{'x', P(a + 1), P(b - 1)}, 0, 0});
      out.insert({{'x', P(b - 1), P(a + 1)}, 0, 0});
    }
  } else {
    if (a == 0 && 0 <= b && b <= half) {
      out.insert({{'y', b, 0}, 1, 0});
      out.insert({{'y', p - 1, P(b + 1)}, 0, 1});
    } else if (b == 0 && 1 <= a && a <= half) {
      out.insert({{'y', a, 0}, 1, 0});
      out.insert({{'y', p - 1, P(a + 1)}, 0, 1});
    } else if (a >= half + 1 && b <= half) {
      out.insert({{'y', b, a}, 1, 0});
      out.insert({{'y', P(a - 1), P(b + 1)}, 0, 1});
    } else if (0 <= a && a <= half && b >= half + 1) {
      out.insert({{'y', a, b}, 1, 0});
      out.insert({{'y', P(b - 1), P(a + 1)}, 0, 1});
    } else if (a <= b) {
      out.insert({{'y', b, a}, 0, 0});
      out.insert({{'y', P(a - 1), P(b + 1)}, 0, 0});
    } else {
      out.insert({{'y', a, b}, 0, 0});
      out.insert({{'y', P(b - 1), P(a + 1)}, 0, 0});
    }
  }
  return {out.begin(), out.end()};
}

// Runs every structural check of the differential: the rectangle count
// agrees with the closed form on all 2p^2 generators, at most two outgoing
// arrows each, O-multiplicities in {(0,0),(1,0),(0,1)}, the spin-c class is
// preserved, and the differential squares to zero. Returns problem
// descriptions, empty when everything holds.
inline std::vector<std::string> check_differentials(int p) {
  make_grid(p);  // range check: odd, >= 3
  std::vector<std::string> problems;
  auto gens = grid_generators(p);
  std::map<GridGen, std::vector<GridTerm>> d;
  for (const auto& g : gens) {
    auto rect = rect_differential(g, p);
    d[g] = rect;
    auto closed = closed_form_differential(g, p);
    std::set<GridTerm> rs(rect.begin(), rect.end());
    std::set<GridTerm> cset(closed.begin(), closed.end());
    if (rs != cset)
      problems.push_back("closed form disagrees with rectangle count at " +
                         grid_gen_name(g));
    if (rect.size() > 2)
      problems.push_back(grid_gen_name(g) + " has more than two outgoing arrows");
    for (const auto& [t, o0, o1] : rect) {
      if (spinc_of(t, p) != spinc_of(g, p))
        problems.push_back("arrow leaves the spin-c class at " + grid_gen_name(g));
      bool tag_ok = (o0 == 0 && o1 == 0) || (o0 == 1 && o1 == 0) || (o0 == 0 && o1 == 1);
      if (!tag_ok)
        problems.push_back("unexpected O-multiplicities on arrow from " +
                           grid_gen_name(g));
    }
  }
  for (const auto& g : gens) {
    std::map<std::tuple<GridGen, int, int>, int> acc;
    for (const auto& [t1, a0, a1] : d[g])
      for (const auto& [t2, b0, b1] : d[t1]) acc[{t2, a0 + b0, a1 + b1}] ^= 1;
    for (const auto& [key, v] : acc)
      if (v)
        problems.push_back("differential does not square to zero at " +
                           grid_gen_name(g));
  }
  return problems;
}

// Relative (A, M) gradings on a slice, anchored at the first generator and
// propagated along arrows: an arrow of total O-multiplicity u steps M by
// -1 + 2u and A by u. Throws DisconnectedSlice when the arrows do not reach
// every generator.
inline std::pair<std::map<GridGen, int>, std::map<GridGen, int>> assign_gradings(
    const std::vector<GridGen>& G,
    const std::vector<std::tuple<GridGen, GridGen, int, int>>& arrows) {
  if (G.empty()) throw std::invalid_argument("assign_gradings: empty slice");
  std::map<GridGen, std::vector<std::tuple<GridGen, int, int>>> adj;
  for (const auto& [g, t, o0, o1] : arrows) {
    adj[g].push_back({t, o0 + o1, +1});
    adj[t].push_back({g, o0 + o1, -1});
  }
  std::map<GridGen, int> M, A;
  M[G[0]] = 0;
  A[G[0]] = 0;
  std::vector<GridGen> frontier{G[0]};
  while (!frontier.empty()) {
    GridGen g = frontier.back();
    frontier.pop_back();
    for (const auto& [t, u, sgn] : adj[g]) {
      int dm = (-1 + 2 * u) * sgn;
      int da = u * sgn;
      auto it = M.find(t);
      if (it != M.end()) {
        if (it->second != M[g] + dm || A[t] != A[g] + da)
          throw std::runtime_error("assign_gradings: inconsistent relative gradings");
      } else {
        M[t] = M[g] + dm;
        A[t] = A[g] + da;
        frontier.push_back(t);
      }
    }
  }
  if (M.size() != G.size())
    throw DisconnectedSlice("slice splits into several arrow components");
  return {A, M};
}

inline Rat lens_d(int p, int h) {
  int hh = std::abs(symmetric_mod(h, p));
  std::int64_t t = p - 2 * hh;
  return Rat(-(t * t - p), 4 * p);
}

// Independent recursion for the same correction terms, descending through
// the continued-fraction expansion of the surgery coefficient.
inline Rat lens_space_d(std::int64_t p, std::int64_t q, std::int64_t i) {
  if (p == 1 && q == 0) return Rat(0);
  if (p <= 0 || q <= 0 || i < 0 || i >= p)
    throw std::invalid_argument("lens_space_d: need p > q > 0 and 0 <= i < p");
  std::int64_t t = 2 * i + 1 - p - q;
  return Rat(t * t - p * q, 4 * p * q) - lens_space_d(q, detail::pmod(static_cast<int>(p % q), static_cast<int>(q)), i % q);
}

inline Rat lens_d_recursive(int p, int h) {
  return -lens_space_d(p, 1, detail::pmod(h, p));
}

// One spin-c slice of the grid before reduction: the bivariate complex in
// model form (relative gradings rebased to zero) plus the U-specialized
// complex with its absolute grading anchors.
struct GridSlice {
  int p = 0;
  int s = 0;  // symmetric class representative
  ModelComplex tagged;
  KnotComplex raw;
};

inline GridSlice raw_slice(int p, int h) {
  make_grid(p);  // range check
  const int s = symmetric_mod(h, p);
  const int e = std::abs(s);
  const int w = p - 2 * e;

  std::vector<GridGen> G;
  for (const auto& g : grid_generators(p))
    if (spinc_of(g, p) == s) G.push_back(g);
  std::sort(G.begin(), G.end());

  std::vector<std::tuple<GridGen, GridGen, int, int>> biarr;
  for (const auto& g : G) {
    for (const auto& [t, o0, o1] : rect_differential(g, p)) {
      if (spinc_of(t, p) != s)
        throw std::logic_error("raw_slice: differential leaves the class");
      bool tag_ok = (o0 == 0 && o1 == 0) || (o0 == 1 && o1 == 0) || (o0 == 0 && o1 == 1);
      if (!tag_ok) throw std::logic_error("raw_slice: unexpected O-multiplicities");
      biarr.push_back({g, t, o0, o1});
    }
  }

  auto [Arel, Mrel] = assign_gradings(G, biarr);

  // Alexander anchor: the slice multiset is symmetric about zero.
  Rat a_shift(0);
  for (const auto& g : G) a_shift = a_shift + Rat(Arel[g]);
  a_shift = a_shift / Rat(static_cast<std::int64_t>(G.size()));
  {
    std::multiset<Rat> vals, neg;
    for (const auto& g : G) {
      vals.insert(Rat(Arel[g]) - a_shift);
      neg.insert(a_shift - Rat(Arel[g]));
    }
    if (vals != neg)
      throw std::runtime_error("raw_slice: Alexander multiset is not symmetric");
  }

  // Maslov anchor: after specializing, the slice carries two parallel
  // towers one Maslov step apart; the principal (lower) one sits at the
  // lens-space correction term of the class.
  std::map<std::tuple<std::string, std::string, std::int64_t>, int> spec;
  for (const auto& [g, t, o0, o1] : biarr)
    spec[{grid_gen_name(g), grid_gen_name(t), o0 + o1}] ^= 1;

  KnotComplex rel;
  for (const auto& g : G)
    rel.generators.push_back({grid_gen_name(g), Rat(Arel[g]) - a_shift, Rat(Mrel[g]),
                              std::nullopt});
  for (const auto& [key, v] : spec)
    if (v) rel.arrows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key)});

  auto survivors = eliminate(rel);
  if (survivors.size() != 2)
    throw std::runtime_error("raw_slice: expected two surviving towers, found " +
                             std::to_string(survivors.size()));
  Rat lower = std::min(survivors[0].second, survivors[1].second);
  Rat upper = std::max(survivors[0].second, survivors[1].second);
  if (upper - lower != Rat(1))
    throw std::runtime_error("raw_slice: tower tops are not one step apart");
  Rat m_shift = lens_d(p, s) - lower;

  GridSlice S;
  S.p = p;
  S.s = s;
  S.raw = rel;
  for (auto& g : S.raw.generators) {
    g.M = g.M + m_shift;
    g.spinc = s;
  }

  // Model form: rebase the relative gradings to minimum zero and carry the
  // O-multiplicities as arrow tags.
  S.tagged.kind = ModelKind::fused;
  S.tagged.e = e;
  S.tagged.w = w;
  int a0 = Arel[G[0]], m0 = Mrel[G[0]];
  for (const auto& g : G) {
    a0 = std::min(a0, Arel[g]);
    m0 = std::min(m0, Mrel[g]);
  }
  for (const auto& g : G)
    S.tagged.generators.push_back({grid_gen_name(g), Arel[g] - a0, Mrel[g] - m0});
  for (const auto& [g, t, o0, o1] : biarr) {
    int tag = o0 == 0 && o1 == 0 ? kTagPlain : (o0 == 1 ? kTagV0 : kTagV1);
    S.tagged.arrows.push_back({grid_gen_name(g), grid_gen_name(t), tag});
  }
  if (!model_graded_iso(S.tagged, make_fused(e, w)))
    throw std::runtime_error("raw_slice: slice does not match the fused model");
  return S;
}

// The reduced complex of one spin-c class: the staircase left after
// shortening both poles, carrying the lens-space correction term as an
// absolute Maslov shift and the class label on every generator.
inline KnotComplex spinc_slice(const TwistedGrid& G, int h) {
  GridSlice S = raw_slice(G.p, h);
  KnotComplex K = model_knot_form(S.tagged);
  Rat d = lens_d(G.p, S.s);
  for (auto& g : K.generators) {
    g.M = g.M + d;
    g.spinc = S.s;
  }
  return K;
}

}  // namespace ups
