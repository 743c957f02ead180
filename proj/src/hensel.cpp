#include "gtop/hensel.hpp"

#include "gtop/error.hpp"

namespace gtop {

namespace {

void check_params(const Int& a, const Int& p, unsigned k) {
  if (k == 0) {
    throw PreconditionError("level k must be at least 1");
  }
  if (p == Int(2) || !is_probable_prime(p)) {
    throw PreconditionError(p.str() + " is not an odd prime");
  }
  if (divides(p, a)) {
    throw PreconditionError(p.str() + " divides " + a.str());
  }
}

Int level_one_root(const Int& a, const Int& p) {
  Int target = mod(a, p);
  std::int64_t pp = p.to_int64();
  for (std::int64_t c = 1; c <= pp / 2; ++c) {
    if (mod(Int(c) * Int(c), p) == target) {
      return c;
    }
  }
  throw PreconditionError(a.str() + " is not a square modulo " + p.str());
}

}  // namespace

std::vector<HenselWitness> hensel_chain(const Int& a, const Int& p, unsigned k) {
  check_params(a, p, k);
  std::vector<HenselWitness> out;
  Int c = level_one_root(a, p);
  Int modulus = p;
  out.push_back({p, a, 1, c, modulus});
  for (unsigned level = 2; level <= k; ++level) {
    modulus *= p;
    // c <- c - (c^2 - a) / (2c), computed modulo p^level.
    auto inv = inverse_mod(Int(2) * c, modulus);
    if (!inv) {
      throw std::logic_error("derivative not invertible during lifting");
    }
    c = mod(c - (c * c - a) * *inv, modulus);
    out.push_back({p, a, level, c, modulus});
  }
  return out;
}

HenselWitness hensel_sqrt(const Int& a, const Int& p, unsigned k) { return hensel_chain(a, p, k).back(); }

SetSpec sqrt_set(unsigned k, const Int& p, const Int& a) {
  HenselWitness w = hensel_sqrt(a, p, k);
  return SetSpec::residue(w.modulus, {Int(0), w.root, mod(-w.root, w.modulus)});
}

}  // namespace gtop
