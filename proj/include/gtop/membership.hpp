#pragma once

// Membership of g in S_0* + ... + S_{n-1}* (a product S_0* ... S_{n-1}* in
// nonabelian groups), with explicit witnesses.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gtop/group.hpp"
#include "gtop/setspec.hpp"

namespace gtop {

enum class Truth { yes, no, unknown };

std::string to_string(Truth t);

struct SearchBudget {
  // Largest number of states kept in one layer of a dynamic program.
  std::size_t max_states = 1'000'000;
  // Candidate values tried per set by the bounded fallback search.
  std::size_t candidates_per_set = 64;
  // Node limit for the bounded fallback and cutoff enumerations.
  std::size_t max_nodes = 2'000'000;
};

// target = summands[0] + ... + summands[n-1], summands[i] in star(sources[i]).
struct Decomposition {
  Group group;
  Element target;
  std::vector<Element> summands;
  std::vector<SetSpec> sources;
};

// Re-checks a decomposition using only the group law and star membership.
bool recheck(const Decomposition& d);

struct Membership {
  Truth truth = Truth::unknown;
  std::optional<Decomposition> witness;
  // Which exact argument produced the answer, or why the search gave up.
  std::string proof;
};

Membership prefix_sum_membership(const Element& g, const std::vector<SetSpec>& chain,
                                 const SearchBudget& budget = {});

// Decides h in star(T_0) + ... + star(T_{m-1}) for tails over one
// divisibility-chain sequence. Returns the summands, or nullopt if none exist.
// Throws BudgetExceeded if the sequence runs out.
std::optional<std::vector<Int>> carry_decompose(const Int& h, const std::vector<const TailSet*>& tails);

}  // namespace gtop
