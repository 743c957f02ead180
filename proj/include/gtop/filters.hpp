#pragma once

// Downward-directed set families, the two Hausdorff criteria, strong
// convergence of sampled point families, and the greedy separating-sequence
// search.
//
// Families are scanned in a fixed order: chain members S(first), S(first+1),
// ...; cofinite members X minus {x_0..x_{j-1}} for j = 0, 1, ...; explicit
// members in list order. `depth` always counts members in that order.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtop/membership.hpp"
#include "gtop/report.hpp"
#include "gtop/setspec.hpp"

namespace gtop {

struct Member {
  std::string label;
  SetSpec set;
  std::size_t position = 0;
};

class FilterFamily {
 public:
  struct Chain {
    std::string generator;
    json params = json::object();
    std::function<SetSpec(std::size_t)> make;  // level -> set
    std::size_t first = 0;                     // first level
    std::optional<std::size_t> last;           // last level, if finite
    // Residue chains S(k) = {x : x mod p^k in R_k} whose images modulo p^j
    // coincide for all k >= j (true for lifted roots).
    std::optional<Int> stable_prime;
  };
  struct Cofinite {
    SequencePtr sequence;
  };
  struct Explicit {
    std::vector<SetSpec> sets;
  };
  using Kind = std::variant<Chain, Cofinite, Explicit>;

  static FilterFamily sqrt7(const Int& p = 3, const Int& a = 7);
  static FilterFamily product(std::size_t N);
  static FilterFamily intervals();
  static FilterFamily repeat(SetSpec s);
  static FilterFamily chain(std::string name, std::function<SetSpec(std::size_t)> make, std::size_t first,
                            std::optional<std::size_t> last = std::nullopt);
  static FilterFamily cofinite(SequencePtr sequence);
  static FilterFamily explicit_list(std::vector<SetSpec> sets);

  const Kind& kind() const { return kind_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }
  Group group() const;
  // Number of members, when finite.
  std::optional<std::size_t> size() const;
  Member member(std::size_t position) const;
  std::vector<Member> first(std::size_t depth) const;
  std::string describe() const;
  json to_json() const;

 private:
  explicit FilterFamily(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

FilterFamily family_from_json(const json& j, const Group* context = nullptr, const std::string& where = "family");

struct DirectedResult {
  bool directed = true;
  std::optional<std::pair<std::size_t, std::size_t>> counterexample;
};
// Every pair of members has a member below both. Throws PreconditionError
// for non-explicit families and UnsupportedOperation for undecidable inclusions.
DirectedResult check_directed(const FilterFamily& f);
// Checks member(k+1) subset member(k) for k + 1 < depth.
bool check_chain_decreasing(const FilterFamily& f, std::size_t depth);

Member lower_bound(const FilterFamily& f, const Member& a, const Member& b);

struct CupcapResult {
  bool found = false;
  std::optional<Member> member;
  Membership proof;  // the "no" at the found member
  std::size_t scanned = 0;
  std::size_t unknown = 0;
};
// Searches the first `depth` members for S with g not in n S*.
CupcapResult cupcap_check(const Element& g, unsigned n, const FilterFamily& f, std::size_t depth,
                          const SearchBudget& budget = {});

// Points sampled at positions 0..L-1 of an omega-chain index.
struct IndexedPoints {
  std::vector<Element> points;
};

struct ConvergenceResult {
  Status status = Status::unknown;
  json detail = json::array();
};
// For each of the first `depth` members S: verified when the last `margin`
// samples satisfy x_j - x in S*; refuted when violations meet every window of
// `margin` consecutive samples in the second half. margin 0 means max(1, L/4).
ConvergenceResult strong_convergence_check(const FilterFamily& f, const IndexedPoints& pts, const Element& x,
                                           std::size_t depth, std::size_t margin = 0);

struct SelectorResult {
  bool fallback = false;
  Element value;
  std::vector<std::size_t> positions;
};
// A value is frequent when it occurs in every window of `window` consecutive
// positions. Returns the most frequent such value (earliest on ties), or the
// identity with all positions.
SelectorResult frequent_value_selector(const SetSpec& s, const IndexedPoints& pts, std::size_t window);

struct SeparationCertificate {
  Element target;
  std::vector<Member> members;
  std::vector<Membership> proofs;  // proofs[n] excludes target from the first n+1 stars
};

struct Stuck {
  std::vector<Member> prefix;
  std::size_t step = 0;
  std::vector<std::pair<Member, Membership>> blocking;
  // Every member of the family, not just the scanned ones, is blocked.
  bool exhaustive = false;
  std::string reason;
};

struct SeparationResult {
  std::optional<SeparationCertificate> certificate;
  std::optional<Stuck> stuck;
};

SeparationResult separating_sequence(const Element& g, const FilterFamily& f, std::size_t max_len,
                                     std::size_t depth, const SearchBudget& budget = {});
// Re-decides every step of the certificate.
bool recheck_certificate(const SeparationCertificate& cert, const SearchBudget& budget = {});

struct HausdorffBudgets {
  unsigned n_max = 3;
  std::size_t depth = 8;
  std::size_t max_len = 5;
  SearchBudget search;
};

VerificationReport hausdorff_verdict(const FilterFamily& f, const std::vector<Element>& probes,
                                     const HausdorffBudgets& budgets);

}  // namespace gtop
