#pragma once
// Electric-pole / wire / fused model complexes: small bivariate complexes
// over F2[V0,V1] whose shapes match the branched-cover grid slices, the
// pole-shortening change of basis, and graded-isomorphism checking against
// ordinary knot complexes.
//
// Canonical planar layout. A wire of length w has levels 0..w with a pair of
// generators per level (Alexander = Maslov = level); even levels fan V0 at
// the first generator above and V1 at the second, odd levels spread V1 from
// the first generator and V0 from the second at both targets. A pole of
// height e stacks levels of constant Alexander degree over a two-generator
// base, one Maslov step per level, a single hub on top, every generator
// pointing a plain arrow at both generators below. A fused complex glues a
// pole onto each end of the wire; with no poles the two end pairs merge into
// single generators.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ups/complex_core.hpp"
#include "ups/gf2.hpp"
#include "ups/oneone.hpp"
#include "ups/upsilon.hpp"

namespace ups {

// Arrow decorations.
inline constexpr int kTagPlain = 0;
inline constexpr int kTagV0 = 1;
inline constexpr int kTagV1 = 2;

enum class ModelKind { pole, wire, fused };

struct ModelGenerator {
  std::string name;
  int A = 0;
  int M = 0;
};

struct ModelArrow {
  std::string from;
  std::string to;
  int tag = kTagPlain;
  friend auto operator<=>(const ModelArrow&, const ModelArrow&) = default;
};

struct ModelComplex {
  ModelKind kind = ModelKind::fused;
  int e = 0;
  int w = 0;
  std::vector<ModelGenerator> generators;
  std::vector<ModelArrow> arrows;
};

namespace detail {

inline void add_pole_levels(ModelComplex& C, int side, int e,
                            std::array<std::string, 2> below, int a0, int m0) {
  for (int j = 1; j <= e; ++j) {
    std::string base = "p" + std::to_string(side) + "_" + std::to_string(j);
    std::vector<std::string> cur;
    if (j == e)
      cur = {base};
    else
      cur = {base + "a", base + "b"};
    for (const auto& nm : cur) {
      C.generators.push_back({nm, a0, m0 + j});
      C.arrows.push_back({nm, below[0], kTagPlain});
      C.arrows.push_back({nm, below[1], kTagPlain});
    }
    below = cur.size() == 2 ? std::array<std::string, 2>{cur[0], cur[1]}
                            : std::array<std::string, 2>{cur[0], cur[0]};
  }
}

inline void add_wire_arrows(ModelComplex& C,
                            const std::vector<std::array<std::string, 2>>& wl) {
  const int w = static_cast<int>(wl.size()) - 1;
  for (int k = 0; k < w; ++k) {
    const auto& [s0, s1] = wl[static_cast<std::size_t>(k)];
    const auto& [t0, t1] = wl[static_cast<std::size_t>(k + 1)];
    if (k % 2 == 0) {
      C.arrows.push_back({s0, t0, kTagV0});
      C.arrows.push_back({s0, t1, kTagV1});
      if (s1 != s0) {
        C.arrows.push_back({s1, t0, kTagV0});
        C.arrows.push_back({s1, t1, kTagV1});
      }
    } else {
      C.arrows.push_back({s0, t0, kTagV1});
      C.arrows.push_back({s1, t0, kTagV0});
      if (t1 != t0) {
        C.arrows.push_back({s0, t1, kTagV1});
        C.arrows.push_back({s1, t1, kTagV0});
      }
    }
  }
}

}  // namespace detail

inline ModelComplex make_pole(int e) {
  if (e < 0) throw std::invalid_argument("make_pole: e must be >= 0");
  ModelComplex C;
  C.kind = ModelKind::pole;
  C.e = e;
  C.w = 0;
  if (e == 0) {
    C.generators.push_back({"p_0", 0, 0});
    return C;
  }
  C.generators.push_back({"p_0a", 0, 0});
  C.generators.push_back({"p_0b", 0, 0});
  detail::add_pole_levels(C, 0, e, {"p_0a", "p_0b"}, 0, 0);
  return C;
}

inline ModelComplex make_wire(int w) {
  if (w <= 0) throw std::invalid_argument("make_wire: w must be > 0");
  ModelComplex C;
  C.kind = ModelKind::wire;
  C.e = 0;
  C.w = w;
  std::vector<std::array<std::string, 2>> wl;
  for (int k = 0; k <= w; ++k) {
    std::string ga = "w" + std::to_string(k) + "a";
    std::string gb = "w" + std::to_string(k) + "b";
    C.generators.push_back({ga, k, k});
    C.generators.push_back({gb, k, k});
    wl.push_back({ga, gb});
  }
  detail::add_wire_arrows(C, wl);
  return C;
}

inline ModelComplex make_fused(int e, int w) {
  if (e < 0 || w <= 0)
    throw std::invalid_argument("make_fused: need e >= 0 and w > 0");
  ModelComplex C;
  C.kind = ModelKind::fused;
  C.e = e;
  C.w = w;
  std::vector<std::array<std::string, 2>> wl;
  for (int k = 0; k <= w; ++k) {
    bool merged = (e == 0 && (k == 0 || k == w));
    std::string ga = "w" + std::to_string(k) + "a";
    if (merged) {
      C.generators.push_back({ga, k, k});
      wl.push_back({ga, ga});
    } else {
      std::string gb = "w" + std::to_string(k) + "b";
      C.generators.push_back({ga, k, k});
      C.generators.push_back({gb, k, k});
      wl.push_back({ga, gb});
    }
  }
  detail::add_wire_arrows(C, wl);
  if (e >= 1) {
    detail::add_pole_levels(C, 0, e, wl.front(), 0, 0);
    detail::add_pole_levels(C, 1, e, wl.back(), w, w);
  }
  return C;
}

// Bigraded homology dimensions of the bivariate complex over F2[V0,V1],
// restricted to the window of bigradings reachable from a generator by total
// V-degree at most `window`. Basis of the (m,a) piece: monomials V0^i V1^j g
// with M(g)-2(i+j) = m and A(g)-(i+j) = a.
inline std::map<std::pair<int, int>, int> bivariate_homology_dims(
    const ModelComplex& Mo, int window = 4) {
  std::map<std::string, std::vector<std::pair<std::string, int>>> out;
  for (const auto& a : Mo.arrows) out[a.from].push_back({a.to, a.tag});

  std::set<std::pair<int, int>> bigr;
  for (const auto& g : Mo.generators)
    for (int k = 0; k <= window; ++k) bigr.insert({g.M - 2 * k, g.A - k});

  using Term = std::tuple<std::string, int, int>;
  auto basis = [&](int m, int a) {
    std::vector<Term> B;
    for (const auto& g : Mo.generators) {
      int k2 = g.M - m;
      if (k2 < 0 || k2 % 2 != 0) continue;
      int k = k2 / 2;
      if (g.A - a != k) continue;
      for (int i = 0; i <= k; ++i) B.push_back({g.name, i, k - i});
    }
    return B;
  };

  std::map<std::pair<int, int>, int> dims;
  for (const auto& [m, a] : bigr) {
    auto B1 = basis(m, a);
    auto B0 = basis(m - 1, a);
    auto B2 = basis(m + 1, a);
    std::map<Term, std::size_t> idx0, idx1;
    for (std::size_t i = 0; i < B0.size(); ++i) idx0[B0[i]] = i;
    for (std::size_t i = 0; i < B1.size(); ++i) idx1[B1[i]] = i;
    auto cols = [&](const std::vector<Term>& src,
                    const std::map<Term, std::size_t>& idx, std::size_t dim) {
      std::vector<BitVec> cc;
      for (const auto& [g, i, j] : src) {
        BitVec v(dim);
        auto it = out.find(g);
        if (it != out.end()) {
          for (const auto& [t, tag] : it->second) {
            int ii = i + (tag == kTagV0 ? 1 : 0);
            int jj = j + (tag == kTagV1 ? 1 : 0);
            auto hit = idx.find({t, ii, jj});
            if (hit != idx.end()) v.flip(hit->second);
          }
        }
        cc.push_back(std::move(v));
      }
      return cc;
    };
    std::size_t r1 = gf2_rank(cols(B1, idx0, B0.size()));
    std::size_t r2 = gf2_rank(cols(B2, idx1, B1.size()));
    dims[{m, a}] =
        static_cast<int>(B1.size()) - static_cast<int>(r1) - static_cast<int>(r2);
  }
  return dims;
}

inline std::vector<std::string> validate_model(const ModelComplex& Mo) {
  std::vector<std::string> problems;
  auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

  std::set<std::string> names;
  for (const auto& g : Mo.generators)
    if (!names.insert(g.name).second) fail("duplicate generator name: " + g.name);
  for (const auto& a : Mo.arrows) {
    if (!names.count(a.from)) fail("arrow from unknown generator: " + a.from);
    if (!names.count(a.to)) fail("arrow to unknown generator: " + a.to);
    if (a.tag != kTagPlain && a.tag != kTagV0 && a.tag != kTagV1)
      fail("arrow " + a.from + " -> " + a.to + " has unknown tag");
  }
  if (!problems.empty()) return problems;

  const auto gens = Mo.generators.size();
  const auto arrs = Mo.arrows.size();
  switch (Mo.kind) {
    case ModelKind::pole: {
      if (Mo.e < 0) fail("pole height must be >= 0");
      std::size_t want_g = Mo.e == 0 ? 1 : static_cast<std::size_t>(2 * Mo.e + 1);
      std::size_t want_a = Mo.e == 0 ? 0 : static_cast<std::size_t>(4 * Mo.e - 2);
      if (gens != want_g)
        fail("pole(" + std::to_string(Mo.e) + ") must have " +
             std::to_string(want_g) + " generators, found " + std::to_string(gens));
      if (arrs != want_a)
        fail("pole(" + std::to_string(Mo.e) + ") must have " +
             std::to_string(want_a) + " arrows, found " + std::to_string(arrs));
      for (const auto& g : Mo.generators)
        if (g.A != Mo.generators[0].A)
          fail("pole generators must share one Alexander degree");
      break;
    }
    case ModelKind::wire: {
      if (Mo.w <= 0) fail("wire length must be > 0");
      if (gens != static_cast<std::size_t>(2 * Mo.w + 2))
        fail("wire(" + std::to_string(Mo.w) + ") must have " +
             std::to_string(2 * Mo.w + 2) + " generators, found " +
             std::to_string(gens));
      if (arrs != static_cast<std::size_t>(4 * Mo.w))
        fail("wire(" + std::to_string(Mo.w) + ") must have " +
             std::to_string(4 * Mo.w) + " arrows, found " + std::to_string(arrs));
      break;
    }
    case ModelKind::fused: {
      if (Mo.e < 0 || Mo.w <= 0) fail("fused complex needs e >= 0 and w > 0");
      if (gens != static_cast<std::size_t>(2 * Mo.w + 4 * Mo.e))
        fail("fused(" + std::to_string(Mo.e) + "," + std::to_string(Mo.w) +
             ") must have " + std::to_string(2 * Mo.w + 4 * Mo.e) +
             " generators, found " + std::to_string(gens));
      break;
    }
  }

  // The differential must square to zero over F2[V0,V1]: compose decorated
  // arrows and cancel per (target, V0 power, V1 power).
  std::map<std::string, std::vector<std::pair<std::string, int>>> out;
  for (const auto& a : Mo.arrows) out[a.from].push_back({a.to, a.tag});
  for (const auto& g : Mo.generators) {
    std::map<std::tuple<std::string, int, int>, int> acc;
    auto it = out.find(g.name);
    if (it == out.end()) continue;
    for (const auto& [mid, tag1] : it->second) {
      auto jt = out.find(mid);
      if (jt == out.end()) continue;
      for (const auto& [t, tag2] : jt->second) {
        int i = (tag1 == kTagV0 ? 1 : 0) + (tag2 == kTagV0 ? 1 : 0);
        int j = (tag1 == kTagV1 ? 1 : 0) + (tag2 == kTagV1 ? 1 : 0);
        acc[{t, i, j}] ^= 1;
      }
    }
    for (const auto& [key, parity] : acc)
      if (parity)
        fail("differential does not square to zero at " + g.name + " -> " +
             std::get<0>(key));
  }
  if (!problems.empty()) return problems;

  // Odd-length fused complexes are knot-type: homology over F2[V0,V1] is one
  // free ray of dimension one per bigrading plus (w-1)/2 torsion classes in
  // single bigradings. Even-length fused complexes carry no such constraint.
  if (Mo.kind == ModelKind::fused && Mo.w % 2 == 1) {
    auto dims = bivariate_homology_dims(Mo);
    std::map<std::pair<int, int>, int> nz;
    for (const auto& [ba, v] : dims)
      if (v != 0) nz[ba] = v;
    if (nz.empty()) {
      fail("fused complex has no homology in the computed window");
    } else {
      auto [m0, a0] = nz.rbegin()->first;
      std::set<std::pair<int, int>> ray;
      for (int k = 0; k <= 4; ++k) ray.insert({m0 - 2 * k, a0 - k});
      int torsion = 0;
      for (const auto& [ba, v] : nz) {
        if (v != 1)
          fail("homology dimension " + std::to_string(v) + " at bigrading (" +
               std::to_string(ba.first) + "," + std::to_string(ba.second) + ")");
        if (!ray.count(ba)) ++torsion;
      }
      for (const auto& ba : ray)
        if (!nz.count(ba))
          fail("free homology ray is interrupted at bigrading (" +
               std::to_string(ba.first) + "," + std::to_string(ba.second) + ")");
      if (torsion != (Mo.w - 1) / 2)
        fail("expected " + std::to_string((Mo.w - 1) / 2) +
             " torsion classes, found " + std::to_string(torsion));
    }
  }
  return problems;
}

// V0, V1 -> U. Parallel arrows that collide after specialization cancel in
// pairs (coefficients are mod 2).
inline KnotComplex specialize(const ModelComplex& Mo) {
  KnotComplex K;
  for (const auto& g : Mo.generators)
    K.generators.push_back({g.name, Rat(g.A), Rat(g.M), std::nullopt});
  std::map<std::tuple<std::string, std::string, std::int64_t>, int> mult;
  for (const auto& a : Mo.arrows) {
    std::int64_t u = a.tag == kTagPlain ? 0 : 1;
    ++mult[{a.from, a.to, u}];
  }
  for (const auto& [key, count] : mult)
    if (count % 2 == 1)
      K.arrows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  return K;
}

// One pole-shortening step: at each of the two pole hubs c with boundary
// a + b, change basis to a' = a+b (arrows into a toggle a matching arrow into
// b) and cancel the acyclic pair (c, a'). The boundary of a' vanishes by
// d^2 = 0, so the surviving arrows into a' are simply dropped with it.
inline ModelComplex reduce_step(const ModelComplex& Mo) {
  if (Mo.kind != ModelKind::fused)
    throw std::invalid_argument("reduce_step: fused complex required");
  if (Mo.e < 1)
    throw std::invalid_argument("reduce_step: no pole level left to shorten");

  std::set<std::tuple<std::string, std::string, int>> arrows;
  for (const auto& a : Mo.arrows) arrows.insert({a.from, a.to, a.tag});

  auto outs_ins = [&]() {
    std::map<std::string, std::set<std::pair<std::string, int>>> outs, ins;
    for (const auto& [s, t, tag] : arrows) {
      outs[s].insert({t, tag});
      ins[t].insert({s, tag});
    }
    return std::pair{outs, ins};
  };

  // Hubs: no incoming arrows, exactly two plain outgoing arrows.
  std::vector<std::string> hubs;
  {
    auto [outs, ins] = outs_ins();
    for (const auto& g : Mo.generators) {
      const auto& o = outs[g.name];
      if (!ins[g.name].empty() || o.size() != 2) continue;
      if (std::all_of(o.begin(), o.end(),
                      [](const auto& ta) { return ta.second == kTagPlain; }))
        hubs.push_back(g.name);
    }
  }
  if (hubs.size() != 2)
    throw std::runtime_error("reduce_step: expected exactly two pole hubs, found " +
                             std::to_string(hubs.size()));
  std::sort(hubs.begin(), hubs.end());

  std::set<std::string> removed;
  for (const auto& c : hubs) {
    auto [outs, ins] = outs_ins();
    auto targets = std::vector<std::pair<std::string, int>>(outs[c].begin(),
                                                            outs[c].end());
    const std::string a = targets[0].first;
    const std::string b = targets[1].first;
    for (const auto& [x, tag] : ins[a]) {
      std::tuple<std::string, std::string, int> key{x, b, tag};
      if (!arrows.erase(key)) arrows.insert(key);
    }
    std::erase_if(arrows, [&](const auto& ar) {
      const auto& [s, t, tag] = ar;
      return s == c || s == a || t == c || t == a;
    });
    removed.insert(c);
    removed.insert(a);
  }

  ModelComplex R;
  R.kind = ModelKind::fused;
  R.e = Mo.e - 1;
  R.w = Mo.w;
  for (const auto& g : Mo.generators)
    if (!removed.count(g.name)) R.generators.push_back(g);
  int a0 = R.generators[0].A, m0 = R.generators[0].M;
  for (const auto& g : R.generators) {
    a0 = std::min(a0, g.A);
    m0 = std::min(m0, g.M);
  }
  for (auto& g : R.generators) {
    g.A -= a0;
    g.M -= m0;
  }
  for (const auto& [s, t, tag] : arrows) R.arrows.push_back({s, t, tag});
  return R;
}

namespace detail {

// Backtracking bijection between two tagged, bigraded arrow sets. Gradings
// are compared after rebasing each side so its minima sit at zero; candidate
// pools are keyed by grading plus in/out tag profiles.
template <typename Grading, typename Tag>
std::optional<std::map<std::string, std::string>> graded_bijection(
    const std::vector<std::pair<std::string, std::pair<Grading, Grading>>>& g1,
    const std::vector<std::tuple<std::string, std::string, Tag>>& ar1,
    const std::vector<std::pair<std::string, std::pair<Grading, Grading>>>& g2,
    const std::vector<std::tuple<std::string, std::string, Tag>>& ar2) {
  if (g1.size() != g2.size() || ar1.size() != ar2.size()) return std::nullopt;

  auto rebase = [](auto gens) {
    auto a0 = gens[0].second.first;
    auto m0 = gens[0].second.second;
    for (const auto& [nm, am] : gens) {
      a0 = std::min(a0, am.first);
      m0 = std::min(m0, am.second);
    }
    std::map<std::string, std::pair<Grading, Grading>> out;
    for (const auto& [nm, am] : gens)
      out[nm] = {am.first - a0, am.second - m0};
    return out;
  };
  auto G1 = rebase(g1);
  auto G2 = rebase(g2);

  std::map<std::pair<Grading, Grading>, int> c1, c2;
  for (const auto& [nm, am] : G1) ++c1[am];
  for (const auto& [nm, am] : G2) ++c2[am];
  if (c1 != c2) return std::nullopt;

  std::map<std::string, std::vector<std::pair<std::string, Tag>>> out1, out2,
      in1, in2;
  for (const auto& [s, t, tag] : ar1) {
    out1[s].push_back({t, tag});
    in1[t].push_back({s, tag});
  }
  for (const auto& [s, t, tag] : ar2) {
    out2[s].push_back({t, tag});
    in2[t].push_back({s, tag});
  }

  using Sig = std::tuple<Grading, Grading, std::vector<Tag>, std::vector<Tag>>;
  auto sig = [](const std::string& nm,
                const std::map<std::string, std::pair<Grading, Grading>>& G,
                auto& out, auto& in) {
    std::vector<Tag> o, i;
    for (const auto& [t, tag] : out[nm]) o.push_back(tag);
    for (const auto& [s, tag] : in[nm]) i.push_back(tag);
    std::sort(o.begin(), o.end());
    std::sort(i.begin(), i.end());
    const auto& am = G.at(nm);
    return Sig{am.first, am.second, std::move(o), std::move(i)};
  };

  std::map<Sig, std::vector<std::string>> pool;
  for (const auto& [nm, am] : G2) pool[sig(nm, G2, out2, in2)].push_back(nm);

  std::vector<std::string> order;
  for (const auto& [nm, am] : G1) order.push_back(nm);
  std::map<std::string, Sig> sig1;
  for (const auto& nm : order) sig1.emplace(nm, sig(nm, G1, out1, in1));
  std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
    auto sx = pool[sig1.at(x)].size(), sy = pool[sig1.at(y)].size();
    return sx != sy ? sx < sy : x < y;
  });

  std::set<std::tuple<std::string, std::string, Tag>> aset2(ar2.begin(),
                                                            ar2.end());
  std::map<std::string, std::string> mp;
  std::set<std::string> used;
  auto ok = [&](const std::string& g, const std::string& h) {
    for (const auto& [t, tag] : out1[g])
      if (mp.count(t) && !aset2.count({h, mp.at(t), tag})) return false;
    for (const auto& [s, tag] : in1[g])
      if (mp.count(s) && !aset2.count({mp.at(s), h, tag})) return false;
    return true;
  };
  auto bt = [&](auto&& self, std::size_t i) -> bool {
    if (i == order.size()) return true;
    const auto& g = order[i];
    for (const auto& h : pool[sig1.at(g)]) {
      if (used.count(h) || !ok(g, h)) continue;
      mp[g] = h;
      used.insert(h);
      if (self(self, i + 1)) return true;
      mp.erase(g);
      used.erase(h);
    }
    return false;
  };
  if (!bt(bt, 0)) return std::nullopt;
  return mp;
}

inline std::optional<std::map<std::string, std::string>> knot_graded_iso(
    const KnotComplex& K1, const KnotComplex& K2) {
  std::vector<std::pair<std::string, std::pair<Rat, Rat>>> g1, g2;
  std::vector<std::tuple<std::string, std::string, std::int64_t>> a1, a2;
  for (const auto& g : K1.generators) g1.push_back({g.name, {g.A, g.M}});
  for (const auto& g : K2.generators) g2.push_back({g.name, {g.A, g.M}});
  for (const auto& a : K1.arrows) a1.push_back({a.from, a.to, a.u_exp});
  for (const auto& a : K2.arrows) a2.push_back({a.from, a.to, a.u_exp});
  return graded_bijection(g1, a1, g2, a2);
}

}  // namespace detail

// Tag-exact graded isomorphism between two model complexes (up to an overall
// grading shift on each side).
inline std::optional<std::map<std::string, std::string>> model_graded_iso(
    const ModelComplex& X, const ModelComplex& Y) {
  std::vector<std::pair<std::string, std::pair<int, int>>> g1, g2;
  std::vector<std::tuple<std::string, std::string, int>> a1, a2;
  for (const auto& g : X.generators) g1.push_back({g.name, {g.A, g.M}});
  for (const auto& g : Y.generators) g2.push_back({g.name, {g.A, g.M}});
  for (const auto& a : X.arrows) a1.push_back({a.from, a.to, a.tag});
  for (const auto& a : Y.arrows) a2.push_back({a.from, a.to, a.tag});
  return detail::graded_bijection(g1, a1, g2, a2);
}

inline bool graded_iso_check(const ModelComplex& X, const ModelComplex& Y) {
  return model_graded_iso(X, Y).has_value();
}

// Graded-isomorphism check between a model and a knot complex, up to an
// overall Maslov shift (reported through m_shift when non-null).
//
// When the generator counts agree, the specialized model is matched against
// K directly. Otherwise the model must be a canonical fused complex of odd
// wire length; it then represents the staircase on (w-1)/2 steps, which is
// matched against K instead.
inline bool graded_iso_check(const ModelComplex& Mo, const KnotComplex& K,
                             Rat* m_shift = nullptr) {
  auto min_m = [](const KnotComplex& C) {
    Rat m = C.generators.at(0).M;
    for (const auto& g : C.generators) m = std::min(m, g.M);
    return m;
  };
  auto match = [&](const KnotComplex& lhs) {
    if (K.generators.empty() || lhs.generators.empty()) return false;
    if (!detail::knot_graded_iso(lhs, K)) return false;
    if (m_shift) *m_shift = min_m(K) - min_m(lhs);
    return true;
  };
  if (Mo.generators.size() == K.generators.size()) return match(specialize(Mo));
  if (Mo.kind != ModelKind::fused) return false;
  if (Mo.w % 2 == 0) return false;
  if (!model_graded_iso(Mo, make_fused(Mo.e, Mo.w))) return false;
  return match(torus_staircase((Mo.w - 1) / 2));
}

// Maslov position of the top of the free homology ray (model-relative).
inline int model_correction_term(const ModelComplex& Mo) {
  auto dims = bivariate_homology_dims(Mo);
  std::optional<std::pair<int, int>> top;
  for (const auto& [ba, v] : dims)
    if (v != 0 && (!top || ba > *top)) top = ba;
  if (!top)
    throw std::runtime_error("model has no homology in the computed window");
  return top->first;
}

// The knot complex a fused model represents: shorten the poles step by step,
// checking the canonical shape after every step, then read off the staircase
// of the odd wire.
inline KnotComplex model_knot_form(ModelComplex Mo) {
  if (Mo.kind != ModelKind::fused)
    throw std::invalid_argument("model_knot_form: fused complex required");
  if (Mo.w % 2 == 0)
    throw std::invalid_argument("model_knot_form: even wire length is not knot-type");
  if (!model_graded_iso(Mo, make_fused(Mo.e, Mo.w)))
    throw std::invalid_argument("model_knot_form: not a canonical fused complex");
  while (Mo.e >= 1) {
    Mo = reduce_step(Mo);
    if (!model_graded_iso(Mo, make_fused(Mo.e, Mo.w)))
      throw std::runtime_error("pole shortening left the canonical fused family");
  }
  return torus_staircase((Mo.w - 1) / 2);
}

inline PiecewiseLinear model_upsilon(const ModelComplex& Mo) {
  return upsilon_function(model_knot_form(Mo));
}

inline Rat model_tau(const ModelComplex& Mo) { return tau(model_knot_form(Mo)); }

}  // namespace ups
