#pragma once

// Finitely generated, Maslov-graded, bifiltered chain complexes over
// Z2[U, U^-1], their validation, elimination, correction terms, generator
// cosets and the exact coset-minimax solver shared by the numerical
// invariants. U drops the Maslov grading by 2 and both filtration levels by
// one; a term U^k·x sits at filtration position (A(x)-k, -k).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ups/gf2.hpp"
#include "ups/rational.hpp"

namespace ups {

struct NotKnotType : std::runtime_error {
  explicit NotKnotType(const std::string& why)
      : std::runtime_error("complex is not knot-type: " + why) {}
};

// Thrown when an exhaustive search would exceed its configured size cap.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& why) : std::runtime_error(why) {}
};

struct Generator {
  std::string name;
  Rat A;  // Alexander filtration level of the basis element (j = 0 slot)
  Rat M;  // Maslov grading
  std::optional<int> spinc;
};

struct Arrow {
  std::string from;
  std::string to;
  std::int64_t u_exp = 0;  // ∂(from) contains U^{u_exp}·to with coefficient 1

  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

struct KnotComplex {
  std::vector<Generator> generators;
  std::vector<Arrow> arrows;

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name == name) return static_cast<int>(i);
    throw std::runtime_error("unknown generator: " + name);
  }
};

// A Z2-chain Σ U^k · x given by its (generator name, U-power) terms.
struct ChainElement {
  std::vector<std::pair<std::string, std::int64_t>> terms;
};

struct GeneratorCoset {
  Rat d;                                  // homology grading
  ChainElement base;                      // one representing cycle
  std::vector<ChainElement> boundary_basis;  // basis of grading-d boundaries
};

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const KnotComplex& K) {
  std::vector<std::string> bad;
  std::set<std::string> names;
  for (const auto& g : K.generators)
    if (!names.insert(g.name).second)
      bad.push_back("duplicate generator name: " + g.name);

  std::optional<bool> has_spinc;
  for (const auto& g : K.generators) {
    bool h = g.spinc.has_value();
    if (!has_spinc) has_spinc = h;
    else if (*has_spinc != h)
      bad.push_back("mixed spinc labelling at generator " + g.name);
  }

  std::set<Arrow> seen;
  for (const auto& a : K.arrows) {
    if (!names.count(a.from) || !names.count(a.to)) {
      bad.push_back("arrow references unknown generator: " + a.from + "->" + a.to);
      continue;
    }
    if (!seen.insert(a).second)
      bad.push_back("duplicate parallel arrow " + a.from + "->" + a.to +
                    " u=" + std::to_string(a.u_exp));
    const auto& f = K.generators[K.index_of(a.from)];
    const auto& t = K.generators[K.index_of(a.to)];
    if (a.u_exp < 0)
      bad.push_back("negative U-exponent on " + a.from + "->" + a.to);
    if (t.M - Rat(2 * a.u_exp) != f.M - Rat(1))
      bad.push_back("Maslov violation on " + a.from + "->" + a.to +
                    ": M(to)-2u != M(from)-1");
    if (t.A - Rat(a.u_exp) > f.A)
      bad.push_back("Alexander violation on " + a.from + "->" + a.to +
                    ": A(to)-u > A(from)");
  }

  // ∂² = 0: composite-path count between any ordered pair with matched total
  // U-exponent must be even.
  std::map<std::string, std::vector<std::pair<std::string, std::int64_t>>> out;
  for (const auto& a : K.arrows) out[a.from].push_back({a.to, a.u_exp});
  for (const auto& g : K.generators) {
    std::map<std::pair<std::string, std::int64_t>, int> paths;
    auto it = out.find(g.name);
    if (it == out.end()) continue;
    for (const auto& [mid, u1] : it->second) {
      auto jt = out.find(mid);
      if (jt == out.end()) continue;
      for (const auto& [end, u2] : jt->second) paths[{end, u1 + u2}] ^= 1;
    }
    for (const auto& [key, parity] : paths)
      if (parity)
        bad.push_back("d^2 != 0: odd path count " + g.name + " => " + key.first +
                      " with total U-exponent " + std::to_string(key.second));
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Structural operations

inline KnotComplex direct_sum(const KnotComplex& K, const KnotComplex& L) {
  KnotComplex R = K;
  for (auto g : L.generators) {
    g.name = "+" + g.name;
    R.generators.push_back(std::move(g));
  }
  for (auto a : L.arrows) {
    a.from = "+" + a.from;
    a.to = "+" + a.to;
    R.arrows.push_back(std::move(a));
  }
  return R;
}

inline KnotComplex tensor(const KnotComplex& K, const KnotComplex& L) {
  KnotComplex R;
  for (const auto& x : K.generators)
    for (const auto& y : L.generators) {
      Generator g;
      g.name = x.name + "|" + y.name;
      g.A = x.A + y.A;
      g.M = x.M + y.M;
      if (x.spinc && y.spinc) g.spinc = *x.spinc + *y.spinc;  // labels add
      R.generators.push_back(std::move(g));
    }
  // Leibniz: ∂(x⊗y) = ∂x⊗y + x⊗∂y.
  for (const auto& a : K.arrows)
    for (const auto& y : L.generators)
      R.arrows.push_back({a.from + "|" + y.name, a.to + "|" + y.name, a.u_exp});
  for (const auto& x : K.generators)
    for (const auto& a : L.arrows)
      R.arrows.push_back({x.name + "|" + a.from, x.name + "|" + a.to, a.u_exp});
  return R;
}

inline KnotComplex dual(const KnotComplex& K) {
  KnotComplex R;
  for (auto g : K.generators) {
    g.A = -g.A;
    g.M = -g.M;
    if (g.spinc) g.spinc = -*g.spinc;
    R.generators.push_back(std::move(g));
  }
  for (const auto& a : K.arrows) R.arrows.push_back({a.to, a.from, a.u_exp});
  return R;
}

// ---------------------------------------------------------------------------
// Elimination over Z2[U, U^-1] (every monomial is a unit)

namespace detail {

// Arrow set keyed for deterministic tie-breaking. U-exponents may go negative
// on rerouted arrows mid-elimination; that is fine over the Laurent ring.
using ArrowKey = std::tuple<std::int64_t, std::string, std::string>;  // (u, from, to)

struct EliminationState {
  std::set<std::string> gens;
  std::set<ArrowKey> arrows;

  void toggle(std::int64_t u, const std::string& f, const std::string& t) {
    ArrowKey k{u, f, t};
    if (!arrows.erase(k)) arrows.insert(k);
  }
};

inline EliminationState elimination_state(const KnotComplex& K) {
  EliminationState st;
  for (const auto& g : K.generators) st.gens.insert(g.name);
  for (const auto& a : K.arrows) st.toggle(a.u_exp, a.from, a.to);
  return st;
}

// Cancel the pair connected by `key`; reroutes (x→t)∘(f→y) with exponent
// u1 + u2 − u0.
inline void cancel(EliminationState& st, const ArrowKey& key) {
  auto [u0, f, t] = key;
  std::vector<ArrowKey> into_t, out_f, touching;
  for (const auto& a : st.arrows) {
    const auto& [u, x, y] = a;
    if (y == t && x != f) into_t.push_back(a);
    if (x == f && y != t) out_f.push_back(a);
    if (x == f || y == f || x == t || y == t) touching.push_back(a);
  }
  for (const auto& a : touching) st.arrows.erase(a);
  st.gens.erase(f);
  st.gens.erase(t);
  for (const auto& [u1, x, tt] : into_t)
    for (const auto& [u2, ff, y] : out_f) st.toggle(u1 + u2 - u0, x, y);
}

}  // namespace detail

// Cancels arrow-connected pairs until no arrows remain; deterministic order
// (lexicographically smallest (u_exp, from, to) first). Returns survivor
// names with their Maslov gradings.
inline std::vector<std::pair<std::string, Rat>> eliminate(const KnotComplex& K) {
  auto st = detail::elimination_state(K);
  while (!st.arrows.empty()) detail::cancel(st, *st.arrows.begin());
  std::map<std::string, Rat> m;
  for (const auto& g : K.generators) m[g.name] = g.M;
  std::vector<std::pair<std::string, Rat>> out;
  for (const auto& n : st.gens) out.push_back({n, m.at(n)});
  return out;
}

// Same elimination with a seeded random cancellation order; used by the
// order-independence property tests.
inline std::size_t eliminate_survivor_count_randomized(const KnotComplex& K,
                                                       std::uint64_t seed) {
  auto st = detail::elimination_state(K);
  std::mt19937_64 rng(seed);
  while (!st.arrows.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, st.arrows.size() - 1);
    auto it = st.arrows.begin();
    std::advance(it, pick(rng));
    detail::cancel(st, *it);
  }
  return st.gens.size();
}

inline bool is_acyclic(const KnotComplex& K) { return eliminate(K).empty(); }

inline Rat correction_term(const KnotComplex& K) {
  auto survivors = eliminate(K);
  if (survivors.empty()) throw NotKnotType("acyclic (no surviving generator)");
  if (survivors.size() > 1)
    throw NotKnotType("homology rank " + std::to_string(survivors.size()) +
                      " after elimination");
  return survivors[0].second;
}

// ---------------------------------------------------------------------------
// Grading slices and the generator coset

namespace detail {

// One term U^k·x per basis generator with M(x) ≡ q (mod 2); finite by
// construction, no window heuristic required.
struct TermBasis {
  std::vector<std::pair<int, std::int64_t>> terms;  // (generator index, k)
  std::map<std::pair<int, std::int64_t>, int> index;

  int find(int g, std::int64_t k) const {
    auto it = index.find({g, k});
    return it == index.end() ? -1 : it->second;
  }
};

inline TermBasis term_basis(const KnotComplex& K, const Rat& q) {
  TermBasis tb;
  for (std::size_t i = 0; i < K.generators.size(); ++i) {
    Rat twice_k = K.generators[i].M - q;
    if (!twice_k.is_integer() || twice_k.num() % 2 != 0) continue;
    std::int64_t k = twice_k.as_integer() / 2;
    tb.index[{static_cast<int>(i), k}] = static_cast<int>(tb.terms.size());
    tb.terms.push_back({static_cast<int>(i), k});
  }
  return tb;
}

// Columns of ∂ : (grading q) → (grading q−1) in the term bases.
inline std::vector<BitVec> boundary_columns(const KnotComplex& K,
                                            const TermBasis& from,
                                            const TermBasis& to) {
  std::map<int, std::vector<std::pair<int, std::int64_t>>> out;
  for (const auto& a : K.arrows)
    out[K.index_of(a.from)].push_back({K.index_of(a.to), a.u_exp});
  std::vector<BitVec> cols;
  cols.reserve(from.terms.size());
  for (const auto& [g, k] : from.terms) {
    BitVec col(to.terms.size());
    auto it = out.find(g);
    if (it != out.end())
      for (const auto& [t, m] : it->second) {
        int j = to.find(t, k + m);
        if (j >= 0) col.flip(static_cast<std::size_t>(j));
      }
    cols.push_back(std::move(col));
  }
  return cols;
}

struct CosetData {
  TermBasis basis;              // grading-d terms
  BitVec base;                  // coordinates of one representing cycle
  std::vector<BitVec> bounds;   // basis of the boundary space
};

inline CosetData coset_data(const KnotComplex& K, const Rat& d) {
  TermBasis bd = term_basis(K, d);
  TermBasis bd1 = term_basis(K, d - Rat(1));
  TermBasis bup = term_basis(K, d + Rat(1));
  auto down = boundary_columns(K, bd, bd1);
  auto in = boundary_columns(K, bup, bd);

  auto kernel_coeffs = gf2_kernel(down, bd1.terms.size());
  Gf2Basis image;
  std::vector<BitVec> image_basis;
  for (auto& c : in)
    if (image.insert(c)) image_basis.push_back(image.rows().back());

  for (const auto& coeff : kernel_coeffs) {
    BitVec z(bd.terms.size());
    for (std::size_t i = 0; i < down.size(); ++i)
      if (coeff.get(i)) z.flip(i);
    if (!image.contains(z)) return {std::move(bd), std::move(z), std::move(image_basis)};
  }
  throw NotKnotType("no non-bounding cycle in grading " + d.str());
}

inline ChainElement to_chain(const KnotComplex& K, const TermBasis& tb,
                             const BitVec& v) {
  ChainElement e;
  for (std::size_t i = 0; i < tb.terms.size(); ++i)
    if (v.get(i))
      e.terms.push_back({K.generators[tb.terms[i].first].name, tb.terms[i].second});
  return e;
}

}  // namespace detail

inline GeneratorCoset generator_coset(const KnotComplex& K) {
  Rat d = correction_term(K);
  auto cd = detail::coset_data(K, d);
  GeneratorCoset gc;
  gc.d = d;
  gc.base = detail::to_chain(K, cd.basis, cd.base);
  for (const auto& b : cd.bounds)
    gc.boundary_basis.push_back(detail::to_chain(K, cd.basis, b));
  return gc;
}

// ---------------------------------------------------------------------------
// Exact coset minimax: smallest θ (drawn from the finite term-value set) such
// that some representing cycle is supported on terms of value ≤ θ. Feasibility
// is one GF(2) solve per probe; the probes binary-search the value list.

namespace detail {

inline Rat coset_min_threshold(const KnotComplex& K, const Rat& d,
                               const std::function<Rat(const Rat& A, const Rat& j)>& val,
                               std::vector<Rat> extra_candidates = {}) {
  CosetData cd = coset_data(K, d);
  std::vector<Rat> values = std::move(extra_candidates);
  std::vector<Rat> term_val(cd.basis.terms.size());
  for (std::size_t i = 0; i < cd.basis.terms.size(); ++i) {
    const auto& [g, k] = cd.basis.terms[i];
    term_val[i] = val(K.generators[g].A - Rat(k), Rat(-k));
    values.push_back(term_val[i]);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  auto feasible = [&](const Rat& theta) {
    std::vector<std::size_t> forbidden;
    for (std::size_t i = 0; i < term_val.size(); ++i)
      if (term_val[i] > theta) forbidden.push_back(i);
    // Want z = base + Σ c_i · bounds_i with z|forbidden = 0.
    std::vector<BitVec> cols;
    cols.reserve(cd.bounds.size());
    for (const auto& b : cd.bounds) {
      BitVec c(forbidden.size());
      for (std::size_t r = 0; r < forbidden.size(); ++r)
        if (b.get(forbidden[r])) c.set(r);
      cols.push_back(std::move(c));
    }
    BitVec target(forbidden.size());
    for (std::size_t r = 0; r < forbidden.size(); ++r)
      if (cd.base.get(forbidden[r])) target.set(r);
    return gf2_solve(cols, forbidden.size(), target).has_value();
  };

  // Feasibility is monotone in θ and the largest value admits the full coset,
  // so the smallest feasible value exists; binary search for it.
  std::size_t a = 0, b = values.size() - 1;
  while (a < b) {
    std::size_t mid = (a + b) / 2;
    if (feasible(values[mid])) b = mid; else a = mid + 1;
  }
  return values[a];
}

}  // namespace detail

// V-type invariant: d(K) − 2·min over the generator coset of
// max over terms of max(A(term) − m, j(term)).
inline Rat v_invariant(const KnotComplex& K, std::int64_t m) {
  if (m < 0) throw std::domain_error("v_invariant requires m >= 0");
  Rat d = correction_term(K);
  Rat theta = detail::coset_min_threshold(
      K, d, [&](const Rat& A, const Rat& j) { return max(A - Rat(m), j); });
  return d - Rat(2) * theta;
}

// Exhaustive-enumeration twin of v_invariant: walks every representing cycle
// in the generator coset instead of binary-searching thresholds. Only usable
// when the boundary space has dimension at most 16; the two must agree.
inline Rat v_oracle(const KnotComplex& K, std::int64_t m) {
  if (m < 0) throw std::domain_error("v_oracle requires m >= 0");
  Rat d = correction_term(K);
  auto cd = detail::coset_data(K, d);
  if (cd.bounds.size() > 16)
    throw CapExceeded("coset dimension " + std::to_string(cd.bounds.size()) +
                      " exceeds the oracle cap of 16");
  std::vector<Rat> val(cd.basis.terms.size());
  for (std::size_t i = 0; i < cd.basis.terms.size(); ++i) {
    const auto& [g, k] = cd.basis.terms[i];
    val[i] = max(K.generators[static_cast<std::size_t>(g)].A - Rat(k) - Rat(m),
                 Rat(-k));
  }
  bool have_best = false;
  Rat best;
  for (std::uint32_t mask = 0; mask < (1u << cd.bounds.size()); ++mask) {
    BitVec z = cd.base;
    for (std::size_t b = 0; b < cd.bounds.size(); ++b)
      if ((mask >> b) & 1) z ^= cd.bounds[b];
    bool have_worst = false;
    Rat worst;
    for (std::size_t i = 0; i < val.size(); ++i)
      if (z.get(i) && (!have_worst || val[i] > worst)) {
        worst = val[i];
        have_worst = true;
      }
    if (have_worst && (!have_best || worst < best)) {
      best = worst;
      have_best = true;
    }
  }
  if (!have_best) throw NotKnotType("empty generator coset");
  return d - Rat(2) * best;
}

// d-invariant of the q-framed two-handle attachment:
// ((q−2m)² − q)/(4q) + V. The genus-bound hypothesis is the caller's.
inline Rat surgery_d(std::int64_t q, std::int64_t m, const Rat& v) {
  if (q < 1) throw std::domain_error("surgery_d requires q >= 1");
  if (2 * m > q || 2 * m < -q) throw std::domain_error("surgery_d requires |m| <= q/2");
  std::int64_t c = q - 2 * m;
  return Rat(c * c - q, 4 * q) + v;
}

// ---------------------------------------------------------------------------
// Deterministic random complexes for property-test corpora: one staircase
// summand (so the result is knot-type) plus acyclic four-generator boxes and
// two-generator pairs, with random grading shifts and generator order. The
// same seed always yields the same complex; mt19937_64 output is pinned by
// the standard, so corpora are reproducible across platforms.

inline KnotComplex random_knot_complex(std::uint64_t seed,
                                       std::size_t max_gens = 8) {
  if (max_gens < 1)
    throw std::invalid_argument("random_knot_complex: max_gens must be >= 1");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  KnotComplex K;
  int serial = 0;
  auto add_gen = [&](const Rat& A, const Rat& M) {
    Generator g;
    g.name = "g" + std::to_string(serial++);
    g.A = A;
    g.M = M;
    K.generators.push_back(g);
    return g.name;
  };

  // Staircase summand: 2s+1 generators with steps of unit slope, shifted by a
  // random symmetric-breaking offset in both gradings.
  std::int64_t s = pick(0, 2);
  while (2 * s + 1 > static_cast<std::int64_t>(max_gens)) --s;
  Rat a0(pick(-2, 2)), m0(pick(-2, 2));
  {
    std::vector<std::string> names;
    for (std::int64_t i = 1; i <= 2 * s + 1; ++i)
      names.push_back(add_gen(a0 + Rat(s + 1 - i), m0 + Rat(1 - i)));
    for (std::int64_t i = 1; i + 1 <= 2 * s + 1; i += 2) {
      K.arrows.push_back({names[static_cast<std::size_t>(i)],
                          names[static_cast<std::size_t>(i - 1)], 1});
      K.arrows.push_back({names[static_cast<std::size_t>(i)],
                          names[static_cast<std::size_t>(i + 1)], 0});
    }
  }

  // Acyclic square summands: b1 → {b2, b3} → b4 with exponents p+r == q+t,
  // so the two routes to b4 cancel mod 2.
  while (K.generators.size() + 4 <= max_gens && pick(0, 1) == 1) {
    std::int64_t p = pick(0, 2), r = pick(0, 2);
    std::int64_t q = pick(0, p + r), t = p + r - q;
    Rat a1(pick(-2, 2)), m1(pick(-2, 2));
    Rat a2 = a1 + Rat(p) - Rat(pick(0, 1));
    Rat a3 = a1 + Rat(q) - Rat(pick(0, 1));
    Rat a4 = min(a2 + Rat(r), a3 + Rat(t)) - Rat(pick(0, 1));
    std::string b1 = add_gen(a1, m1);
    std::string b2 = add_gen(a2, m1 - Rat(1) + Rat(2 * p));
    std::string b3 = add_gen(a3, m1 - Rat(1) + Rat(2 * q));
    std::string b4 = add_gen(a4, m1 - Rat(2) + Rat(2 * (p + r)));
    K.arrows.push_back({b1, b2, p});
    K.arrows.push_back({b1, b3, q});
    K.arrows.push_back({b2, b4, r});
    K.arrows.push_back({b3, b4, t});
  }

  // Acyclic two-generator pairs.
  while (K.generators.size() + 2 <= max_gens && pick(0, 1) == 1) {
    std::int64_t c = pick(0, 2);
    Rat a1(pick(-2, 2)), m1(pick(-2, 2));
    std::string g1 = add_gen(a1, m1);
    std::string g2 = add_gen(a1 + Rat(c) - Rat(pick(0, 1)), m1 - Rat(1) + Rat(2 * c));
    K.arrows.push_back({g1, g2, c});
  }

  // Fisher–Yates shuffle of the generator order (arrows reference names, so
  // order is free); std::shuffle is implementation-defined, this is not.
  for (std::size_t i = K.generators.size(); i > 1; --i)
    std::swap(K.generators[i - 1],
              K.generators[static_cast<std::size_t>(rng() % i)]);

  return K;
}

// ---------------------------------------------------------------------------
// Local equivalence search

struct LocalEquivResult {
  enum class Status { Equivalent, NoneFound, CapExceeded } status;
  // Witness chain maps as (source gen, target gen, u_exp) triples.
  std::vector<std::tuple<std::string, std::string, std::int64_t>> forward;
  std::vector<std::tuple<std::string, std::string, std::int64_t>> backward;
};

namespace detail {

struct MapSearch {
  // Legal slot (x, y): the single monomial U^k with M(U^k y) = M(x), i.e.
  // k = (M(y) − M(x))/2, admissible when k is a non-negative integer and the
  // filtration bounds A(y) − k ≤ A(x), −k ≤ 0 hold.
  std::vector<std::tuple<int, int, std::int64_t>> slots;  // (x, y, k)
};

inline MapSearch map_slots(const KnotComplex& K1, const KnotComplex& K2) {
  MapSearch ms;
  for (std::size_t x = 0; x < K1.generators.size(); ++x)
    for (std::size_t y = 0; y < K2.generators.size(); ++y) {
      Rat twice_k = K2.generators[y].M - K1.generators[x].M;
      if (!twice_k.is_integer() || twice_k.num() % 2 != 0) continue;
      std::int64_t k = twice_k.as_integer() / 2;
      if (k < 0) continue;
      if (K2.generators[y].A - Rat(k) > K1.generators[x].A) continue;
      ms.slots.push_back({static_cast<int>(x), static_cast<int>(y), k});
    }
  return ms;
}

// Find a filtered graded chain map K1 → K2 carrying the non-bounding class to
// a non-bounding class; nullopt when no such map exists.
inline std::optional<std::vector<std::tuple<std::string, std::string, std::int64_t>>>
solve_local_map(const KnotComplex& K1, const KnotComplex& K2, const Rat& d) {
  MapSearch ms = map_slots(K1, K2);
  std::size_t n = ms.slots.size();

  // Equation rows: chain-map condition per (x in K1, z in K2, total power),
  // plus the homology condition row.
  std::map<std::tuple<int, int, std::int64_t>, std::size_t> row_index;
  auto row_of = [&](int x, int z, std::int64_t u) {
    auto key = std::make_tuple(x, z, u);
    auto it = row_index.find(key);
    if (it != row_index.end()) return it->second;
    std::size_t r = row_index.size();
    row_index[key] = r;
    return r;
  };

  std::vector<std::vector<std::size_t>> col_rows(n);
  std::map<int, std::vector<std::pair<int, std::int64_t>>> out1, out2;
  for (const auto& a : K1.arrows)
    out1[K1.index_of(a.from)].push_back({K1.index_of(a.to), a.u_exp});
  for (const auto& a : K2.arrows)
    out2[K2.index_of(a.from)].push_back({K2.index_of(a.to), a.u_exp});

  for (std::size_t s = 0; s < n; ++s) {
    auto [x, y, k] = ms.slots[s];
    // Contribution of slot (x→U^k y) to f(∂-compatibility):
    // RHS ∂₂(f x): for arrows y→z (m): U^{k+m} z appears in ∂₂ f x.
    auto it = out2.find(y);
    if (it != out2.end())
      for (const auto& [z, m] : it->second)
        col_rows[s].push_back(row_of(x, z, k + m));
    // LHS f(∂₁ x): slot contributes when x appears as target of w→x (m):
    // U^{m+k} y appears in f ∂₁ w.
    for (const auto& [w, outs] : out1)
      for (const auto& [t, m] : outs)
        if (t == x) col_rows[s].push_back(row_of(w, y, m + k));
  }

  // Homology condition: image of the base cycle of K1 is not a boundary.
  CosetData c1 = coset_data(K1, d);
  CosetData c2 = coset_data(K2, d);
  // Functional ψ on grading-d chains of K2 vanishing on boundaries with
  // ψ(base2) = 1: reduce the dual condition via a basis complement.
  Gf2Basis bspan;
  for (const auto& b : c2.bounds) bspan.insert(b);
  BitVec base2_res = bspan.reduce(c2.base);
  std::size_t psi_coord = base2_res.lowest();  // base2 ∉ span, so this exists
  // ψ(v) := coordinate psi_coord of v reduced mod boundary span.
  auto psi = [&](const BitVec& v) {
    return bspan.reduce(v).get(psi_coord);
  };

  std::size_t hom_row = row_index.size();
  std::size_t rows = hom_row + 1;

  std::vector<BitVec> cols(n, BitVec(rows));
  for (std::size_t s = 0; s < n; ++s) {
    for (auto r : col_rows[s]) cols[s].flip(r);
    // f(base1) contribution: slot (x,y,k) sends term U^j x to U^{j+k} y.
    auto [x, y, k] = ms.slots[s];
    BitVec img(c2.basis.terms.size());
    for (std::size_t i = 0; i < c1.basis.terms.size(); ++i) {
      if (!c1.base.get(i)) continue;
      const auto& [g, j] = c1.basis.terms[i];
      if (g != x) continue;
      int idx = c2.basis.find(y, j + k);
      if (idx >= 0) img.flip(static_cast<std::size_t>(idx));
    }
    if (psi(img)) cols[s].flip(hom_row);
  }
  BitVec target(rows);
  target.set(hom_row);

  auto sol = gf2_solve(cols, rows, target);
  if (!sol) return std::nullopt;
  std::vector<std::tuple<std::string, std::string, std::int64_t>> witness;
  for (std::size_t s = 0; s < n; ++s)
    if (sol->get(s)) {
      auto [x, y, k] = ms.slots[s];
      witness.push_back({K1.generators[x].name, K2.generators[y].name, k});
    }
  return witness;
}

}  // namespace detail

inline LocalEquivResult local_equiv_search(const KnotComplex& K1,
                                           const KnotComplex& K2,
                                           std::uint64_t size_cap) {
  Rat d1 = correction_term(K1);
  Rat d2 = correction_term(K2);
  if (d1 != d2) return {LocalEquivResult::Status::NoneFound, {}, {}};

  std::size_t unknowns = detail::map_slots(K1, K2).slots.size() +
                         detail::map_slots(K2, K1).slots.size();
  // The search space is all subsets of the legal slots.
  if (unknowns >= 63 || (std::uint64_t{1} << unknowns) > size_cap)
    return {LocalEquivResult::Status::CapExceeded, {}, {}};

  auto f = detail::solve_local_map(K1, K2, d1);
  if (!f) return {LocalEquivResult::Status::NoneFound, {}, {}};
  auto g = detail::solve_local_map(K2, K1, d1);
  if (!g) return {LocalEquivResult::Status::NoneFound, {}, {}};
  return {LocalEquivResult::Status::Equivalent, *f, *g};
}

}  // namespace ups
