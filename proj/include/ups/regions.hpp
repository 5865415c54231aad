#pragma once

// South-west regions of the plane: finite unions of convex pieces cut out by
// half-planes a·x + b·y ≤ c with a, b ≥ 0, a + b > 0, and the entry time of a
// point under diagonal translation. These drive the generalized-region
// upsilon evaluation.

#include <stdexcept>
#include <vector>

#include "ups/rational.hpp"

namespace ups {

struct HalfPlane {
  Rat a, b, c;  // a·x + b·y ≤ c
};

struct SouthWestRegion {
  // Union of convex pieces; each piece is an intersection of half-planes.
  std::vector<std::vector<HalfPlane>> pieces;
};

// Smallest s with (x−s, y−s) in the region: min over pieces of max over
// constraints of (a·x + b·y − c)/(a + b). Monotone nondecreasing in x and y.
inline Rat entry_time(const SouthWestRegion& C, const Rat& x, const Rat& y) {
  if (C.pieces.empty()) throw std::domain_error("region has no pieces");
  bool first_piece = true;
  Rat best;
  for (const auto& piece : C.pieces) {
    if (piece.empty()) throw std::domain_error("region piece has no constraints");
    bool first = true;
    Rat worst;
    for (const auto& h : piece) {
      if (h.a < Rat(0) || h.b < Rat(0) || h.a + h.b == Rat(0))
        throw std::domain_error("half-plane must have a,b >= 0 and a+b > 0");
      Rat s = (h.a * x + h.b * y - h.c) / (h.a + h.b);
      if (first || s > worst) { worst = s; first = false; }
    }
    if (first_piece || worst < best) { best = worst; first_piece = false; }
  }
  return best;
}

inline bool is_normalized(const SouthWestRegion& C) {
  return entry_time(C, Rat(0), Rat(0)) == Rat(0);
}

// The half-plane family driving the classical one-parameter invariant:
// for t < 2 the region {t·x + (2−t)·y ≤ 0}; at t = 2 the limit {x ≤ 0}.
inline SouthWestRegion halfplane_t(const Rat& t) {
  if (t < Rat(0) || t > Rat(2)) throw std::domain_error("t must lie in [0,2]");
  if (t == Rat(2)) return {{{{Rat(1), Rat(0), Rat(0)}}}};
  return {{{{t, Rat(2) - t, Rat(0)}}}};
}

}  // namespace ups
