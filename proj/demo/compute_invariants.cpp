// Example program: build a bifiltered complex from the library's families,
// compute its concordance invariants, and print the upsilon function as CSV.

#include <iostream>

#include "ups/complex_core.hpp"
#include "ups/oneone.hpp"
#include "ups/regions.hpp"
#include "ups/upsilon.hpp"

int main() {
  // The staircase complex with tau = 3 (the (2,7) torus knot pattern).
  ups::KnotComplex K = ups::torus_staircase(3);

  std::cout << "generators: " << K.generators.size() << "\n";
  std::cout << "tau: " << ups::tau(K).str() << "\n";
  std::cout << "d:   " << ups::correction_term(K).str() << "\n";
  std::cout << "v(0): " << ups::v_invariant(K, 0).str() << "\n\n";

  // Full piecewise-linear upsilon over t in [0, 2], exact rationals.
  std::cout << ups::piecewise_to_csv(ups::upsilon_function(K));

  // The same invariant through the region interface: a single evaluation at
  // t = 1/2 via the corresponding south-west half-plane.
  ups::Rat t(1, 2);
  ups::Rat u = ups::Rat(-2) * ups::upsilon_region(K, ups::halfplane_t(t));
  std::cout << "\nupsilon(1/2) = " << u.str() << "\n";
  return 0;
}
