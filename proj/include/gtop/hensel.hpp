#pragma once

// Square roots modulo prime powers by Newton (Hensel) lifting.

#include <vector>

#include "gtop/int.hpp"
#include "gtop/setspec.hpp"

namespace gtop {

struct HenselWitness {
  Int p;
  Int a;
  unsigned k = 0;
  Int root;  // 0 <= root < p^k, root^2 = a mod p^k
  Int modulus;
};

// Root of x^2 = a mod p^k lifted from the level-1 root min(c, p - c).
// Requires p an odd prime, p not dividing a, a a square mod p, k >= 1.
HenselWitness hensel_sqrt(const Int& a, const Int& p, unsigned k);

// Witnesses for levels 1..k.
std::vector<HenselWitness> hensel_chain(const Int& a, const Int& p, unsigned k);

// S(k) = {x : x mod p^k in {0, c, p^k - c}}.
SetSpec sqrt_set(unsigned k, const Int& p, const Int& a);
inline SetSpec sqrt7_set(unsigned k) { return sqrt_set(k, 3, 7); }

}  // namespace gtop
