#pragma once

// Exact finite descriptions of subsets of an ambient group.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gtop/group.hpp"
#include "gtop/sequence.hpp"

namespace gtop {

// Explicit list; kept sorted and duplicate-free.
struct FiniteSet {
  std::vector<Element> elements;
};

// {x in Z : x mod modulus in residues}; residues sorted, in [0, modulus).
struct ResidueSet {
  Int modulus;
  std::vector<Int> residues;
};

// Subset of ProductMod(N): coordinate n (1-based, n <= allowed.size()) lies
// in allowed[n-1]; later coordinates are free. Each allowed set contains 0
// and is closed under negation mod n.
struct BoxSet {
  std::size_t N = 1;
  std::vector<std::vector<std::int64_t>> allowed;
};

// Open interval (-epsilon, epsilon) in Q.
struct SymmetricInterval {
  Rational epsilon;
};

// {x_k : k >= start, k not in excluded} for a registered sequence.
struct TailSet {
  SequencePtr sequence;
  std::size_t start = 0;
  std::set<std::size_t> excluded;

  bool allows(std::size_t k) const { return k >= start && !excluded.count(k); }
};

class SetSpec {
 public:
  using Body = std::variant<FiniteSet, ResidueSet, BoxSet, SymmetricInterval, TailSet>;

  static SetSpec finite(const Group& group, std::vector<Element> elements);
  static SetSpec residue(Int modulus, std::vector<Int> residues);
  static SetSpec box(std::size_t N, std::vector<std::vector<std::int64_t>> allowed);
  static SetSpec interval(Rational epsilon);
  static SetSpec tail(SequencePtr sequence, std::size_t start = 0, std::set<std::size_t> excluded = {});
  static SetSpec empty(const Group& group) { return finite(group, {}); }

  const Group& group() const { return group_; }
  const Body& body() const { return body_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&body_);
  }

  bool contains(const Element& g) const;
  std::string describe() const;

 private:
  SetSpec(Group group, Body body) : group_(std::move(group)), body_(std::move(body)) {}

  Group group_;
  Body body_;
};

// S u {identity} u S^-1. Only constructed through star().
class StarSet {
 public:
  // The set whose star this is. When `closed()` holds, `base()` already
  // equals the star closure as a set.
  const SetSpec& base() const { return base_; }
  bool closed() const { return closed_; }
  const Group& group() const { return base_.group(); }

  bool contains(const Element& g) const;
  // Explicit elements; throws UnsupportedOperation for infinite sets.
  std::vector<Element> enumerate() const;
  std::string describe() const;

 private:
  friend StarSet star(const SetSpec& s);
  StarSet(SetSpec base, bool closed) : base_(std::move(base)), closed_(closed) {}

  SetSpec base_;
  bool closed_;
};

// star(s).contains(g) without building the star set.
bool in_star(const SetSpec& s, const Element& g);

StarSet star(const SetSpec& s);
inline StarSet star(const StarSet& s) { return s; }

// Star for multiplicative groups; requires a finite set.
StarSet star_mult(const SetSpec& s);

// Exact sumset (product set A*B in nonabelian groups, finite sets only).
SetSpec sumset(const SetSpec& a, const SetSpec& b);

// Set of n-fold sums (or products) of elements of star(s).
SetSpec n_fold_star(const SetSpec& s, unsigned n, std::size_t max_elements = 1u << 20);

// Exact inclusion a subset-of b where decidable; throws UnsupportedOperation otherwise.
bool is_subset(const SetSpec& a, const SetSpec& b);
bool set_equal(const SetSpec& a, const SetSpec& b);

// Residue set of all classes in star(s) (R u -R), without the point 0.
ResidueSet symmetric_classes(const ResidueSet& r);

}  // namespace gtop
