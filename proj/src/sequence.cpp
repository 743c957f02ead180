#include "gtop/sequence.hpp"

#include <cctype>

#include "gtop/error.hpp"

namespace gtop {

Sequence::Sequence(std::string id, TermFn term, std::optional<std::size_t> length)
    : id_(std::move(id)), term_(std::move(term)), length_(length) {}

Int Sequence::term(std::size_t k) const {
  if (length_ && k >= *length_) {
    throw BudgetExceeded("sequence " + id_ + " is only known up to index " + std::to_string(*length_ - 1));
  }
  std::lock_guard<std::mutex> lock(mu_);
  while (cache_.size() <= k && cache_.size() < 4096) {
    cache_.push_back(term_(cache_.size()));
  }
  if (k < cache_.size()) {
    return cache_[k];
  }
  return term_(k);
}

Sequence& Sequence::certify_growth(std::size_t from, Int ratio) {
  if (ratio < Int(2)) {
    throw PreconditionError("growth ratio must be at least 2");
  }
  growth_from_ = from;
  ratio_ = std::move(ratio);
  return *this;
}

std::optional<std::size_t> Sequence::first_index_above(const Int& bound, std::size_t start) const {
  for (std::size_t k = start;; ++k) {
    if (length_ && k >= *length_) {
      return std::nullopt;
    }
    if (abs(term(k)) > bound) {
      return k;
    }
  }
}

SequencePtr make_powers(const Int& base) {
  if (base < Int(2)) {
    throw PreconditionError("powers sequence needs base >= 2");
  }
  auto seq = std::make_shared<Sequence>("powers" + base.str(),
                                        [base](std::size_t k) { return pow(base, static_cast<unsigned>(k)); });
  seq->certify_growth(0, base).mark_divisibility_chain();
  return seq;
}

SequencePtr make_factorials() {
  // x_k = (k+1)!, so x_{k+1} = (k+2) x_k.
  auto seq = std::make_shared<Sequence>("factorials", [](std::size_t k) {
    Int f = 1;
    for (std::size_t i = 2; i <= k + 1; ++i) {
      f *= Int(i);
    }
    return f;
  });
  seq->certify_growth(0, 2).mark_divisibility_chain();
  return seq;
}

SequencePtr make_fibonacci() {
  // 1, 2, 3, 5, 8, ... : strictly increasing, ratio below 2, no certificate.
  return std::make_shared<Sequence>("fibonacci", [](std::size_t k) {
    Int a = 1, b = 2;
    for (std::size_t i = 0; i < k; ++i) {
      Int c = a + b;
      a = b;
      b = c;
    }
    return a;
  });
}

SequencePtr make_prefix(std::string id, std::vector<Int> terms, std::optional<std::size_t> growth_from) {
  if (terms.empty()) {
    throw PreconditionError("sequence " + id + " has no terms");
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (terms[k].is_zero()) {
      throw PreconditionError("sequence " + id + " contains 0");
    }
    if (k > 0 && !(abs(terms[k]) > abs(terms[k - 1]))) {
      throw PreconditionError("sequence " + id + " is not strictly increasing in absolute value at index " +
                              std::to_string(k));
    }
    if (growth_from && k > *growth_from && abs(terms[k]) < Int(2) * abs(terms[k - 1])) {
      throw PreconditionError("sequence " + id + " violates its growth certificate at index " + std::to_string(k));
    }
  }
  bool chain = true;
  for (std::size_t k = 1; k < terms.size() && chain; ++k) {
    chain = terms[k - 1].sign() > 0 && divides(terms[k - 1], terms[k]);
  }
  std::size_t n = terms.size();
  auto seq = std::make_shared<Sequence>(id, [terms](std::size_t k) { return terms[k]; }, n);
  if (growth_from) {
    seq->certify_growth(*growth_from, 2);
  }
  if (chain) {
    seq->mark_divisibility_chain();
  }
  return seq;
}

SequenceRegistry& SequenceRegistry::global() {
  static SequenceRegistry registry;
  return registry;
}

namespace {

SequencePtr builtin(const std::string& id) {
  if (id == "factorials") {
    return make_factorials();
  }
  if (id == "fibonacci") {
    return make_fibonacci();
  }
  const std::string prefix = "powers";
  if (id.size() > prefix.size() && id.compare(0, prefix.size(), prefix) == 0) {
    std::string digits = id.substr(prefix.size());
    for (char ch : digits) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        return nullptr;
      }
    }
    return make_powers(Int::parse(digits));
  }
  return nullptr;
}

}  // namespace

SequencePtr SequenceRegistry::get(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = entries_.find(id); it != entries_.end()) {
    return it->second;
  }
  if (auto seq = builtin(id)) {
    entries_.emplace(id, seq);
    return seq;
  }
  throw PreconditionError("unknown sequence '" + id + "'");
}

void SequenceRegistry::add(SequencePtr seq) {
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.count(seq->id()) || builtin(seq->id())) {
    throw PreconditionError("sequence '" + seq->id() + "' is already registered");
  }
  entries_.emplace(seq->id(), std::move(seq));
}

bool SequenceRegistry::contains(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.count(id) > 0 || builtin(id) != nullptr;
}

}  // namespace gtop
