#pragma once

// Registered integer sequences used by tail sets and cofinite families.
//
// Every sequence is strictly increasing in absolute value. A sequence may
// carry a growth certificate: |x_{k+1}| >= ratio * |x_k| for k >= growth_from,
// with ratio >= 2. Sequences where each term divides the next are flagged as
// divisibility chains, which enables exact carry-based decomposition.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gtop/int.hpp"

namespace gtop {

class Sequence {
 public:
  using TermFn = std::function<Int(std::size_t)>;

  Sequence(std::string id, TermFn term, std::optional<std::size_t> length = std::nullopt);

  const std::string& id() const { return id_; }
  // Throws BudgetExceeded when k lies beyond a finite prefix.
  Int term(std::size_t k) const;
  std::optional<std::size_t> length() const { return length_; }

  // Growth certificate, if any.
  std::optional<std::size_t> growth_from() const { return growth_from_; }
  const Int& ratio() const { return ratio_; }
  Sequence& certify_growth(std::size_t from, Int ratio);

  bool divisibility_chain() const { return divisibility_chain_; }
  Sequence& mark_divisibility_chain() {
    divisibility_chain_ = true;
    return *this;
  }

  // Smallest index k >= start with |x_k| > bound, or nullopt when the finite
  // prefix runs out first.
  std::optional<std::size_t> first_index_above(const Int& bound, std::size_t start = 0) const;

 private:
  std::string id_;
  TermFn term_;
  std::optional<std::size_t> length_;
  std::optional<std::size_t> growth_from_;
  Int ratio_ = 0;
  bool divisibility_chain_ = false;
  mutable std::mutex mu_;
  mutable std::vector<Int> cache_;
};

using SequencePtr = std::shared_ptr<const Sequence>;

SequencePtr make_powers(const Int& base);
SequencePtr make_factorials();
SequencePtr make_fibonacci();
// Finite user prefix. `growth_from` declares the index from which terms at
// least double; it is validated against the prefix.
SequencePtr make_prefix(std::string id, std::vector<Int> terms, std::optional<std::size_t> growth_from);

// Write-once registry. Built-in ids ("powers<b>", "factorials", "fibonacci")
// resolve on demand; user sequences are added with add().
class SequenceRegistry {
 public:
  static SequenceRegistry& global();

  SequencePtr get(const std::string& id);
  // Throws PreconditionError if the id is already taken.
  void add(SequencePtr seq);
  bool contains(const std::string& id);

 private:
  std::mutex mu_;
  std::map<std::string, SequencePtr> entries_;
};

}  // namespace gtop
