#pragma once

// Dyadic-indexed neighbourhood products in nonabelian groups, tower
// reductions, conjugation closure, and the nonabelian cupcap criterion.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtop/filters.hpp"
#include "gtop/membership.hpp"
#include "gtop/report.hpp"
#include "gtop/setspec.hpp"

namespace gtop {

// m / 2^level in (0, 1), lowest terms (m odd).
class DyadicIndex {
 public:
  // Reduces m / 2^level; requires 0 < m < 2^level and level <= 62.
  DyadicIndex(std::uint64_t m, unsigned level);

  std::uint64_t numerator() const { return m_; }
  unsigned level() const { return level_; }
  // 1 - q.
  DyadicIndex mirror() const;
  std::string str() const;

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
  friend std::strong_ordering operator<=>(const DyadicIndex& a, const DyadicIndex& b);

 private:
  std::uint64_t m_;
  unsigned level_;
};

// All indices of level <= K in increasing order.
std::vector<DyadicIndex> dyadic_indices(unsigned K);

// q = m/2^i in lowest terms carries the set at level i.
class DyadicAssignment {
 public:
  // Levels 1..K must all be present and share one group.
  explicit DyadicAssignment(std::map<unsigned, SetSpec> levels);

  unsigned K() const { return K_; }
  const Group& group() const { return levels_.begin()->second.group(); }
  const SetSpec& level(unsigned i) const;
  const SetSpec& at(const DyadicIndex& q) const { return level(q.level()); }
  const std::map<unsigned, SetSpec>& levels() const { return levels_; }

 private:
  std::map<unsigned, SetSpec> levels_;
  unsigned K_ = 0;
};

// T_0 contains T_1 contains ... T_K with T_i T_i T_i inside T_{i-1}; both
// checked exactly on construction.
class TowerChain {
 public:
  explicit TowerChain(std::vector<SetSpec> sets);

  unsigned K() const { return static_cast<unsigned>(sets_.size() - 1); }
  const SetSpec& operator[](unsigned i) const { return sets_.at(i); }
  const std::vector<SetSpec>& sets() const { return sets_; }
  // Assignment with level i -> T_i, i = 1..K.
  DyadicAssignment assignment() const;

 private:
  std::vector<SetSpec> sets_;
};

// g = factors[0] * ... * factors[n-1] with factors[i] in star(A at indices[i])
// and indices strictly increasing.
struct UQWitness {
  std::vector<DyadicIndex> indices;
  std::vector<Element> factors;
};

bool recheck_uq(const Element& g, const DyadicAssignment& a, const UQWitness& w);

struct UQEnumeration {
  std::map<Element, UQWitness> elements;
  // Products with more factors add nothing new; the enumeration is the whole
  // U-set of levels <= K.
  bool complete = false;
};

// Products over increasing index sequences of length <= depth, optionally
// only with indices strictly above `above`. Throws BudgetExceeded when more
// than `max_elements` elements are reached.
UQEnumeration enumerate_uq(const DyadicAssignment& a, std::size_t depth,
                           std::optional<DyadicIndex> above = std::nullopt, std::size_t max_elements = 200'000);

struct UQMembership {
  Truth truth = Truth::unknown;
  std::optional<UQWitness> witness;
  std::string proof;
};

// "no" only when the enumeration is complete; otherwise an unfound g is unknown.
UQMembership uq_membership(const Element& g, const DyadicAssignment& a, std::size_t depth);

// q -> (q + offset) / 2^shift; maps level i to level i + shift.
struct DyadicEmbedding {
  std::uint64_t offset = 0;
  unsigned shift = 0;

  DyadicIndex apply(const DyadicIndex& q) const;
  // Image lies in (offset / 2^shift, (offset + 1) / 2^shift).
  std::string describe() const;
};

// Assignment q -> S_{e(q)} on levels 1..K - shift; empty when shift >= K,
// in which case its U-set is {e}.
std::optional<DyadicAssignment> pull_back(const DyadicAssignment& a, const DyadicEmbedding& e);

// U(S_sigma) U(S_tau) inside U(S), bounded by depth on each side. Throws
// PreconditionError unless sigma's image lies below tau's.
VerificationReport check_UU(const DyadicAssignment& a, const DyadicEmbedding& sigma, const DyadicEmbedding& tau,
                            std::size_t depth);
// x U(A above q) inside U(A) for every bounded witness of x with last index q.
VerificationReport check_translation(const DyadicAssignment& a, std::size_t depth);
// Reversing and inverting a witness for g gives one for g^-1.
VerificationReport check_inverse_closure(const DyadicAssignment& a, std::size_t depth);

struct ReductionRound {
  unsigned level = 0;
  // Index and the tower level of the set it carries.
  std::vector<std::pair<DyadicIndex, unsigned>> entries;
};

struct ReductionCertificate {
  unsigned j = 0;
  std::vector<ReductionRound> rounds;
  // Inclusion facts used, each checked exactly: "T_i in T_{i-1}" for the
  // promotion and "T_i T_i T_i in T_{i-1}" for merges.
  json steps = json::array();
  bool verified = false;
  // Product of the original level-j sets lies in T_0, when computable.
  std::optional<bool> direct;

  json to_json() const;
};

// Collapses the level-j index set {m/2^j} to the single index 1/2 carrying T_0.
// Requires 1 <= j <= K + 1.
ReductionCertificate s_in_u_reduce(const TowerChain& t, unsigned j);

struct ConjugationClosure {
  std::vector<SetSpec> members;
  // Each closed member contains the member it came from.
  bool contains_original = true;
};

// Member S becomes the union of c S c^-1 over the conjugators, which must
// include the identity.
ConjugationClosure fg_closure(const std::vector<SetSpec>& family, const std::vector<Element>& conjugators);
// Conjugators "all": every element of a finite group.
ConjugationClosure fg_closure_all(const std::vector<SetSpec>& family);

// Searches for S in the first `depth` members with g not in (S*)^n.
CupcapResult cupcap_check_nonab(const Element& g, unsigned n, const std::vector<SetSpec>& family, std::size_t depth);

// (g'_0 g_0)...(g'_n g_n)(g_0...g_n)^-1 and the product of h_i g'_i h_i^-1
// with h_i = g_0...g_{i-1}; returns both sides.
std::pair<Element, Element> conjugation_identity(const Group& grp, const std::vector<Element>& g,
                                                 const std::vector<Element>& g_prime);

// {"levels": {"1": setspec, ...}}; towers also need level "0".
DyadicAssignment assignment_from_json(const json& j, const Group* context = nullptr,
                                      const std::string& where = "assignment");
TowerChain tower_from_json(const json& j, const Group* context = nullptr, const std::string& where = "tower");
json assignment_to_json(const DyadicAssignment& a);
json uq_witness_to_json(const Group& grp, const UQWitness& w);

}  // namespace gtop
