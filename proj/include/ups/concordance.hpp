#pragma once
// Concordance-obstruction calculus: exact branched-cover determinants via
// integer resultants, metabolizer enumeration in finite abelian groups,
// slice / concordance / finite-order tests driven by class-labeled upsilon
// data, and the linear-independence bookkeeping for the alternating torus
// family.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ups/rational.hpp"
#include "ups/upsilon.hpp"

namespace ups {

// ---------------------------------------------------------------------------
// Symmetric integer Laurent polynomials

struct IntLaurentPoly {
  std::map<std::int64_t, std::int64_t> coeffs;  // exponent -> coefficient

  friend bool operator==(const IntLaurentPoly&, const IntLaurentPoly&) = default;
};

inline IntLaurentPoly laurent_from(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& terms) {
  IntLaurentPoly P;
  for (const auto& [e, c] : terms) P.coeffs[e] += c;
  std::erase_if(P.coeffs, [](const auto& kv) { return kv.second == 0; });
  return P;
}

inline bool laurent_is_symmetric(const IntLaurentPoly& P) {
  for (const auto& [e, c] : P.coeffs) {
    auto it = P.coeffs.find(-e);
    if (it == P.coeffs.end() || it->second != c) return false;
  }
  return true;
}

// Evaluation at +-1 (the only unit arguments exact integer evaluation needs).
inline std::int64_t laurent_eval_unit(const IntLaurentPoly& P, int x) {
  if (x != 1 && x != -1)
    throw std::invalid_argument("laurent_eval_unit: argument must be +-1");
  std::int64_t out = 0;
  for (const auto& [e, c] : P.coeffs)
    out += (x == 1 || e % 2 == 0) ? c : -c;
  return out;
}

// Constructor for knot polynomials: symmetric and taking the value +-1 at 1.
inline IntLaurentPoly knot_alexander(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& terms) {
  IntLaurentPoly P = laurent_from(terms);
  if (!laurent_is_symmetric(P))
    throw std::invalid_argument("knot_alexander: polynomial is not symmetric");
  std::int64_t v = laurent_eval_unit(P, 1);
  if (v != 1 && v != -1)
    throw std::invalid_argument("knot_alexander: value at 1 must be +-1");
  return P;
}

// T(2, 2n+1): alternating coefficients t^{-n} - t^{1-n} + ... + t^n.
inline IntLaurentPoly torus_alexander(int n) {
  if (n < 0) throw std::invalid_argument("torus_alexander: need n >= 0");
  std::vector<std::pair<std::int64_t, std::int64_t>> terms;
  for (int k = -n; k <= n; ++k) terms.push_back({k, (n + k) % 2 == 0 ? 1 : -1});
  return knot_alexander(terms);
}

// Twist knot with n half-twists in the clasp family used throughout.
inline IntLaurentPoly twist_alexander(int n) {
  if (n < 1) throw std::invalid_argument("twist_alexander: need n >= 1");
  std::int64_t half = (n % 2 == 1) ? (n + 1) / 2 : -(n / 2);
  std::int64_t mid = (n % 2 == 1) ? -n : n + 1;
  return knot_alexander({{-1, half}, {0, mid}, {1, half}});
}

// ---------------------------------------------------------------------------
// det_m via resultants

namespace detail {

inline bool is_prime(std::int64_t v) {
  if (v < 2) return false;
  for (std::int64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline bool is_prime_power(std::int64_t m) {
  if (m < 2) return false;
  std::int64_t p = 2;
  while (m % p != 0) ++p;
  while (m % p == 0) m /= p;
  return m == 1;
}

// Fraction-free Gaussian elimination; exact over the integers.
inline __int128 det_bareiss(std::vector<std::vector<__int128>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        __int128 mag = a[i][j] < 0 ? -a[i][j] : a[i][j];
        if (mag > (__int128(1) << 120))
          throw std::overflow_error("det_bareiss: entries exceed 128-bit range");
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace detail

// |resultant(x^m - 1, cleared form of delta)|: the branched-cover
// determinant, computed exactly over the integers.
inline std::int64_t det_m(const IntLaurentPoly& delta, std::int64_t m) {
  if (!detail::is_prime_power(m))
    throw std::invalid_argument("det_m: m must be a prime power");
  if (delta.coeffs.empty()) throw std::invalid_argument("det_m: zero polynomial");
  const std::int64_t lo = delta.coeffs.begin()->first;
  const std::int64_t hi = delta.coeffs.rbegin()->first;
  const std::size_t d = static_cast<std::size_t>(hi - lo);
  std::vector<__int128> g(d + 1, 0);  // g[i] = coefficient of x^i after clearing
  for (const auto& [e, c] : delta.coeffs) g[static_cast<std::size_t>(e - lo)] = c;

  __int128 res;
  if (d == 0) {
    res = 1;
    for (std::int64_t i = 0; i < m; ++i) res *= g[0];
  } else {
    // Sylvester matrix of f = x^m - 1 (degree m) and g (degree d).
    const std::size_t n = static_cast<std::size_t>(m) + d;
    std::vector<std::vector<__int128>> s(n, std::vector<__int128>(n, 0));
    for (std::size_t r = 0; r < d; ++r) {
      s[r][r] = 1;                                   // leading coefficient of f
      s[r][r + static_cast<std::size_t>(m)] = -1;    // constant term of f
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(m); ++r)
      for (std::size_t i = 0; i <= d; ++i) s[d + r][r + i] = g[d - i];
    res = detail::det_bareiss(std::move(s));
  }
  if (res < 0) res = -res;
  if (res > (__int128(1) << 62))
    throw std::overflow_error("det_m: result does not fit in 64 bits");
  return static_cast<std::int64_t>(res);
}

// ---------------------------------------------------------------------------
// Finite abelian groups and their square-root subgroups

struct FiniteAbelianGroup {
  std::vector<std::int64_t> orders;  // the group is the direct sum of Z_{n_i}
};

using GroupElement = std::vector<std::int64_t>;

inline FiniteAbelianGroup make_group(std::vector<std::int64_t> orders) {
  for (std::int64_t n : orders)
    if (n < 1) throw std::invalid_argument("make_group: factor orders must be >= 1");
  return {std::move(orders)};
}

inline std::int64_t group_order(const FiniteAbelianGroup& H) {
  __int128 n = 1;
  for (std::int64_t o : H.orders) {
    n *= o;
    if (n > (__int128(1) << 62))
      throw std::overflow_error("group_order: order does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(n);
}

inline GroupElement group_zero(const FiniteAbelianGroup& H) {
  return GroupElement(H.orders.size(), 0);
}

inline GroupElement group_reduce(const FiniteAbelianGroup& H, GroupElement g) {
  if (g.size() != H.orders.size())
    throw std::invalid_argument("group element has the wrong number of coordinates");
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] %= H.orders[i];
    if (g[i] < 0) g[i] += H.orders[i];
  }
  return g;
}

inline GroupElement group_add(const FiniteAbelianGroup& H, const GroupElement& a,
                              const GroupElement& b) {
  GroupElement out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return group_reduce(H, std::move(out));
}

inline GroupElement group_neg(const FiniteAbelianGroup& H, const GroupElement& a) {
  GroupElement out(a);
  for (auto& v : out) v = -v;
  return group_reduce(H, std::move(out));
}

inline std::vector<GroupElement> group_elements(const FiniteAbelianGroup& H) {
  std::vector<GroupElement> out{group_zero(H)};
  for (std::size_t i = 0; i < H.orders.size(); ++i) {
    std::vector<GroupElement> next;
    for (const auto& g : out)
      for (std::int64_t v = 0; v < H.orders[i]; ++v) {
        GroupElement e = g;
        e[i] = v;
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline FiniteAbelianGroup group_product(const FiniteAbelianGroup& A,
                                        const FiniteAbelianGroup& B) {
  FiniteAbelianGroup P = A;
  P.orders.insert(P.orders.end(), B.orders.begin(), B.orders.end());
  return P;
}

inline std::int64_t element_order(const FiniteAbelianGroup& H, const GroupElement& g0) {
  GroupElement g = group_reduce(H, g0);
  std::int64_t ord = 1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::int64_t o = H.orders[i] / std::gcd(H.orders[i], g[i]);
    ord = std::lcm(ord, o);
  }
  return ord;
}

namespace detail {

// Closure of S u {g} under addition (finite, so under the full group laws).
inline std::set<GroupElement> subgroup_closure(const FiniteAbelianGroup& H,
                                               std::set<GroupElement> S,
                                               const GroupElement& g) {
  std::vector<GroupElement> fresh;
  if (S.insert(group_reduce(H, g)).second) fresh.push_back(group_reduce(H, g));
  while (!fresh.empty()) {
    GroupElement x = fresh.back();
    fresh.pop_back();
    std::vector<GroupElement> snapshot(S.begin(), S.end());
    for (const auto& y : snapshot) {
      GroupElement z = group_add(H, x, y);
      if (S.insert(z).second) fresh.push_back(std::move(z));
    }
  }
  return S;
}

}  // namespace detail

struct SqrtSubgroups {
  bool not_square = false;
  std::vector<std::vector<GroupElement>> subgroups;  // each sorted ascending
};

// All subgroups whose order is the square root of |H|, by exhaustive
// generator closure. Desk-scale only: |H| above the cap raises CapExceeded.
inline SqrtSubgroups square_root_subgroups(const FiniteAbelianGroup& H,
                                           std::int64_t cap = 10000) {
  const std::int64_t N = group_order(H);
  if (N > cap) throw CapExceeded("square_root_subgroups: group order exceeds cap");
  std::int64_t r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(N))));
  while (r * r > N) --r;
  while ((r + 1) * (r + 1) <= N) ++r;
  if (r * r != N) return {true, {}};

  const auto elements = group_elements(H);
  std::set<std::vector<GroupElement>> found;
  std::set<std::vector<GroupElement>> seen;

  auto key = [](const std::set<GroupElement>& S) {
    return std::vector<GroupElement>(S.begin(), S.end());
  };

  std::vector<std::set<GroupElement>> stack{{group_zero(H)}};
  seen.insert(key(stack.back()));
  if (r == 1) return {false, {key(stack.back())}};
  while (!stack.empty()) {
    std::set<GroupElement> S = std::move(stack.back());
    stack.pop_back();
    for (const auto& g : elements) {
      if (S.count(g)) continue;
      auto S2 = detail::subgroup_closure(H, S, g);
      auto n2 = static_cast<std::int64_t>(S2.size());
      if (n2 > r || r % n2 != 0) continue;
      auto k2 = key(S2);
      if (!seen.insert(k2).second) continue;
      if (n2 == r)
        found.insert(std::move(k2));
      else
        stack.push_back(std::move(S2));
    }
  }
  return {false, {found.begin(), found.end()}};
}

// ---------------------------------------------------------------------------
// Class-labeled upsilon data

struct UpsilonMap {
  FiniteAbelianGroup group;
  std::map<GroupElement, PiecewiseLinear> functions;
};

// Normalizes keys and enforces conjugation symmetry: the function at -xi is
// filled in from xi, and a conflicting pair is rejected.
inline UpsilonMap make_upsilon_map(const FiniteAbelianGroup& H,
                                   const std::map<GroupElement, PiecewiseLinear>& fns) {
  UpsilonMap U;
  U.group = H;
  for (const auto& [xi, f] : fns) {
    GroupElement k = group_reduce(H, xi);
    auto it = U.functions.find(k);
    if (it != U.functions.end() && !piecewise_equal(it->second, f))
      throw std::invalid_argument("make_upsilon_map: conflicting functions at one class");
    U.functions[k] = f;
  }
  for (const auto& [xi, f] : std::map<GroupElement, PiecewiseLinear>(U.functions)) {
    GroupElement nk = group_neg(H, xi);
    auto it = U.functions.find(nk);
    if (it == U.functions.end())
      U.functions[nk] = f;
    else if (!piecewise_equal(it->second, f))
      throw std::invalid_argument(
          "make_upsilon_map: conjugation symmetry violated between xi and -xi");
  }
  return U;
}

inline bool upsilon_total(const UpsilonMap& U) {
  for (const auto& g : group_elements(U.group))
    if (!U.functions.count(g)) return false;
  return true;
}

inline const PiecewiseLinear& upsilon_at(const UpsilonMap& U, const GroupElement& xi) {
  auto it = U.functions.find(group_reduce(U.group, xi));
  if (it == U.functions.end())
    throw std::invalid_argument("upsilon map has no function at the requested class");
  return it->second;
}

// ---------------------------------------------------------------------------
// Obstruction tests

struct ObstructionResult {
  bool obstructed = false;
  std::vector<GroupElement> metabolizer;  // a passing subgroup, when one exists
  std::string reason;                     // why the test obstructs, when it does
};

// Slice test: passes when some square-root subgroup G has vanishing upsilon
// on all of G. Obstructed proves the knot is not slice; passing is
// inconclusive. A non-square group order is itself an obstruction.
inline ObstructionResult slice_obstruction(const UpsilonMap& U,
                                           const FiniteAbelianGroup& H,
                                           std::int64_t cap = 10000) {
  if (U.group.orders != H.orders)
    throw std::invalid_argument("slice_obstruction: map defined on a different group");
  if (group_order(H) > cap)
    throw CapExceeded("slice_obstruction: group order exceeds cap");
  if (!upsilon_total(U))
    throw std::invalid_argument("slice_obstruction: upsilon map is not total");
  SqrtSubgroups S = square_root_subgroups(H, cap);
  if (S.not_square) return {true, {}, "group order is not a perfect square"};
  for (const auto& G : S.subgroups) {
    bool all_zero = true;
    for (const auto& xi : G)
      if (!piecewise_is_zero(upsilon_at(U, xi))) {
        all_zero = false;
        break;
      }
    if (all_zero) return {false, G, ""};
  }
  return {true, {}, "no square-root subgroup with vanishing upsilon"};
}

// Concordance test between two knots' labeled data: searches subgroups G of
// H1 x H2 of order sqrt(|H1| |H2|) on which the two maps agree pairwise.
inline ObstructionResult concordance_test(const UpsilonMap& U1, const UpsilonMap& U2,
                                          const FiniteAbelianGroup& H1,
                                          const FiniteAbelianGroup& H2,
                                          std::int64_t cap = 10000) {
  if (U1.group.orders != H1.orders || U2.group.orders != H2.orders)
    throw std::invalid_argument("concordance_test: map defined on a different group");
  FiniteAbelianGroup P = group_product(H1, H2);
  if (group_order(P) > cap)
    throw CapExceeded("concordance_test: product group order exceeds cap");
  if (!upsilon_total(U1) || !upsilon_total(U2))
    throw std::invalid_argument("concordance_test: upsilon map is not total");
  SqrtSubgroups S = square_root_subgroups(P, cap);
  if (S.not_square) return {true, {}, "product group order is not a perfect square"};
  const std::size_t k1 = H1.orders.size();
  for (const auto& G : S.subgroups) {
    bool aligned = true;
    for (const auto& pair : G) {
      GroupElement xi(pair.begin(), pair.begin() + static_cast<std::ptrdiff_t>(k1));
      GroupElement xi2(pair.begin() + static_cast<std::ptrdiff_t>(k1), pair.end());
      if (!piecewise_equal(upsilon_at(U1, xi), upsilon_at(U2, xi2))) {
        aligned = false;
        break;
      }
    }
    if (aligned) return {false, G, ""};
  }
  return {true, {}, "no subgroup aligns the two upsilon maps"};
}

// Finite-order test at one parameter value: sums the map over each order-p
// subgroup. Zero is achievable by a nonnegative integer combination iff some
// sum vanishes or two sums have opposite signs; otherwise the minimum
// absolute sum is a witness against finite concordance order.
struct FiniteOrderResult {
  bool zero = true;
  bool vacuous = false;   // no order-p subgroup existed
  std::string warning;
  Rat witness;            // min |sum| when zero is not achievable
  std::vector<Rat> subgroup_sums;
};

inline FiniteOrderResult finite_order_S(const UpsilonMap& U, std::int64_t p,
                                        const Rat& t) {
  if (!detail::is_prime(p))
    throw std::invalid_argument("finite_order_S: p must be prime");
  if (!upsilon_total(U))
    throw std::invalid_argument("finite_order_S: upsilon map is not total");
  std::set<std::vector<GroupElement>> subs;
  for (const auto& g : group_elements(U.group))
    if (element_order(U.group, g) == p) {
      auto S = detail::subgroup_closure(U.group, {group_zero(U.group)}, g);
      subs.insert(std::vector<GroupElement>(S.begin(), S.end()));
    }
  FiniteOrderResult R;
  if (subs.empty()) {
    R.vacuous = true;
    R.warning = "no order-" + std::to_string(p) + " subgroup; the criterion is vacuous";
    return R;
  }
  for (const auto& S : subs) {
    Rat v(0);
    for (const auto& xi : S) v = v + upsilon_at(U, xi).eval(t);
    R.subgroup_sums.push_back(v);
  }
  bool pos = false, neg = false, has_zero = false;
  for (const Rat& v : R.subgroup_sums) {
    if (v == Rat(0)) has_zero = true;
    else if (v < Rat(0)) neg = true;
    else pos = true;
  }
  if (has_zero || (pos && neg)) return R;
  R.zero = false;
  R.witness = R.subgroup_sums.front() < Rat(0) ? -R.subgroup_sums.front()
                                               : R.subgroup_sums.front();
  for (const Rat& v : R.subgroup_sums) {
    Rat a = v < Rat(0) ? -v : v;
    if (a < R.witness) R.witness = a;
  }
  return R;
}

// ---------------------------------------------------------------------------
// Linear independence of the alternating torus family

// H(xi) = sum_i a_i |xi_i^+| - sum_j b_j |xi_j^-| for one metabolizer
// element, given the per-factor absolute twist sizes.
inline Rat independence_H(
    const std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>& xi,
    const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  if (xi.first.size() != a.size() || xi.second.size() != b.size())
    throw std::invalid_argument("independence_H: coefficients misaligned with components");
  Rat out(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    out = out + Rat(a[i]) * Rat(std::abs(xi.first[i]));
  for (std::size_t j = 0; j < b.size(); ++j)
    out = out - Rat(b[j]) * Rat(std::abs(xi.second[j]));
  return out;
}

inline std::int64_t squarefree_part(std::int64_t v) {
  if (v < 1) throw std::invalid_argument("squarefree_part: need v >= 1");
  for (std::int64_t d = 2; d * d <= v; ++d)
    while (v % (d * d) == 0) v /= d * d;
  return v;
}

// Necessary condition for concordance to T(2, 2n+1): the determinant must
// exceed (2n+1)/4 and share its square-free part with 2n+1.
inline bool torus_det_bound(std::int64_t n, std::int64_t det_K) {
  if (n < 1 || det_K < 1)
    throw std::invalid_argument("torus_det_bound: need n >= 1 and det >= 1");
  return 4 * det_K > 2 * n + 1 && squarefree_part(det_K) == squarefree_part(2 * n + 1);
}

// Driver for the independence argument over a family of two-strand torus
// knots with distinct prime determinants. Each candidate relation
// sum_i c_i T(2, p_i) ~ 0 is rejected either because the double cover's
// group order is not a perfect square, or because every metabolizer contains
// an element with H != 0. Metabolizers decompose as products of per-prime
// square-root subgroups, so the search stays within the cap even when the
// full group does not.
struct IndependenceCandidate {
  std::vector<int> coeffs;                 // c_i per prime, not all zero
  bool det_square = false;                 // group order was a perfect square
  std::size_t metabolizer_count = 0;       // product metabolizers enumerated
  bool every_metabolizer_witnessed = false;
  std::vector<std::int64_t> witness;       // sample element (positive copies, then negative)
  Rat witness_value;                       // H at the sample
};

struct IndependenceReport {
  std::vector<std::int64_t> primes;
  int coeff_bound = 0;
  std::vector<IndependenceCandidate> candidates;
  bool family_independent = false;  // every candidate relation was rejected
};

inline IndependenceReport independence_driver(
    const std::vector<std::int64_t>& primes = {3, 5, 7}, int coeff_bound = 3,
    std::int64_t cap = 10000) {
  for (std::int64_t p : primes)
    if (!detail::is_prime(p) || p == 2)
      throw std::invalid_argument("independence_driver: factors must be odd primes");
  if (std::set<std::int64_t>(primes.begin(), primes.end()).size() != primes.size())
    throw std::invalid_argument("independence_driver: primes must be distinct");
  if (coeff_bound < 1)
    throw std::invalid_argument("independence_driver: coefficient bound must be >= 1");

  IndependenceReport rep;
  rep.primes = primes;
  rep.coeff_bound = coeff_bound;
  rep.family_independent = true;

  const std::size_t k = primes.size();
  std::vector<int> c(k, -coeff_bound);
  auto advance = [&]() {
    for (std::size_t i = 0; i < k; ++i) {
      if (c[i] < coeff_bound) {
        ++c[i];
        std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(i), -coeff_bound);
        return true;
      }
    }
    return false;
  };

  do {
    if (std::all_of(c.begin(), c.end(), [](int v) { return v == 0; })) continue;
    IndependenceCandidate cand;
    cand.coeffs = c;
    cand.det_square = std::all_of(c.begin(), c.end(), [](int v) { return v % 2 == 0; });
    if (cand.det_square) {
      // Per-prime square-root subgroups of Z_p^{|c_i|}.
      std::vector<std::size_t> active;
      std::vector<std::vector<std::vector<GroupElement>>> per_prime;
      for (std::size_t i = 0; i < k; ++i) {
        if (c[i] == 0) continue;
        active.push_back(i);
        FiniteAbelianGroup Gp =
            make_group(std::vector<std::int64_t>(static_cast<std::size_t>(std::abs(c[i])),
                                                 primes[i]));
        SqrtSubgroups S = square_root_subgroups(Gp, cap);
        per_prime.push_back(S.subgroups);
      }
      // Walk the Cartesian product of per-prime choices.
      std::vector<std::size_t> pick(active.size(), 0);
      bool all_witnessed = true;
      bool more = !active.empty();
      while (more) {
        ++cand.metabolizer_count;
        // Enumerate the product metabolizer's elements and look for H != 0,
        // preferring one supported on the positive side only.
        std::vector<std::size_t> idx(active.size(), 0);
        bool found = false;
        std::vector<std::int64_t> fallback;
        Rat fallback_h(0);
        bool elements_left = true;
        while (elements_left) {
          std::vector<std::int64_t> plus, minus;
          for (std::size_t a = 0; a < active.size(); ++a) {
            const auto& sub = per_prime[a][pick[a]];
            const GroupElement& el = sub[idx[a]];
            const std::int64_t p = primes[active[a]];
            for (std::int64_t coord : el) {
              std::int64_t sz = std::min(coord, p - coord);  // |symmetric rep|
              (c[active[a]] > 0 ? plus : minus).push_back(sz);
            }
          }
          Rat hval = independence_H({plus, minus},
                                    std::vector<std::int64_t>(plus.size(), 1),
                                    std::vector<std::int64_t>(minus.size(), 1));
          if (hval != Rat(0)) {
            bool plus_only =
                std::all_of(minus.begin(), minus.end(), [](std::int64_t v) { return v == 0; });
            std::vector<std::int64_t> flat = plus;
            flat.insert(flat.end(), minus.begin(), minus.end());
            if (plus_only) {
              if (cand.witness.empty()) {
                cand.witness = flat;
                cand.witness_value = hval;
              }
              found = true;
              break;
            }
            if (fallback.empty()) {
              fallback = flat;
              fallback_h = hval;
            }
          }
          elements_left = false;
          for (std::size_t a = 0; a < active.size(); ++a) {
            if (++idx[a] < per_prime[a][pick[a]].size()) {
              std::fill(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(a), 0);
              elements_left = true;
              break;
            }
          }
        }
        if (!found && !fallback.empty()) {
          if (cand.witness.empty()) {
            cand.witness = fallback;
            cand.witness_value = fallback_h;
          }
          found = true;
        }
        if (!found) all_witnessed = false;
        more = false;
        for (std::size_t a = 0; a < active.size(); ++a) {
          if (++pick[a] < per_prime[a].size()) {
            std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(a), 0);
            more = true;
            break;
          }
        }
      }
      cand.every_metabolizer_witnessed = all_witnessed && cand.metabolizer_count > 0;
      if (!cand.every_metabolizer_witnessed) rep.family_independent = false;
    }
    rep.candidates.push_back(std::move(cand));
  } while (advance());

  return rep;
}

}  // namespace ups
