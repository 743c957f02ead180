#pragma once

// Certified checks for the three counterexamples: square roots of 7 in the
// 3-adic sense, the truncated product of cyclic groups, and the interval
// family in Q.

#include <cstddef>
#include <vector>

#include "gtop/membership.hpp"
#include "gtop/report.hpp"
#include "gtop/setspec.hpp"

namespace gtop {

// Smallest k such that 3^k divides none of g^2 - 7m^2, 0 <= m <= n.
unsigned sqrt7_exclusion_level(const Int& g, unsigned n);
// Smallest k with 3^k > max(g^2, 7n^2).
unsigned sqrt7_bound_level(const Int& g, unsigned n);

VerificationReport verify_sqrt7_necessary(const Int& g, unsigned n);

// Witness for g in S(m0)* + S(m_1)* + ... + S(m_L)*, L = 3^m0: h copies of
// lifted roots of 7 plus a multiple of 3^m0 from S(m0).
Decomposition sqrt7_U_witness(unsigned m0, const std::vector<unsigned>& ms, const Int& g);
// Residue classes covered by S(m0)* + S(m_1)* + ...; the sum is all of Z
// exactly when every class modulo the returned modulus appears.
ResidueSet sqrt7_U_sumset(unsigned m0, const std::vector<unsigned>& ms);
VerificationReport verify_sqrt7_U_full(unsigned m0, const std::vector<unsigned>& ms, const std::vector<Int>& gs);

// Box over ProductMod(N) with coordinates 1..m restricted to images of {-1,0,1}.
SetSpec product_set(std::size_t N, std::size_t m);
Decomposition product_sum_witness(std::size_t N, std::size_t m0, const std::vector<std::size_t>& ms,
                                  const ResidueVector& g);
VerificationReport verify_product_sum_full(std::size_t N, std::size_t m0, const std::vector<std::size_t>& ms,
                                           const std::vector<ResidueVector>& gs);
// Intersection over m <= N of n * S(m)*, as a box.
SetSpec product_union_small(std::size_t N, unsigned n);
// Box of residues of integers with absolute value <= n.
SetSpec small_residue_box(std::size_t N, unsigned n);
VerificationReport verify_product_union_small(std::size_t N, unsigned n);

// Radii 1, 1/2, ..., 2^-steps.
VerificationReport verify_interval_example(unsigned steps = 10);

}  // namespace gtop
