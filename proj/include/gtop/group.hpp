#pragma once

// Ambient groups and their elements.
//
// Abelian groups (integers, truncated products of cyclic groups, rationals)
// are written additively; free groups and Cayley-table groups are written
// multiplicatively. Group::add is the group law in either case.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "gtop/int.hpp"

namespace gtop {

using Rational = mpq_class;

// Element of ProductMod(N); coords[n-1] is the coordinate in Z/nZ.
struct ResidueVector {
  std::vector<std::int64_t> coords;
  friend auto operator<=>(const ResidueVector&, const ResidueVector&) = default;
};

// Reduced word. Letter +(i+1) is generator i, -(i+1) its inverse.
struct Word {
  std::vector<int> letters;
  friend auto operator<=>(const Word&, const Word&) = default;
};

struct CayleyIndex {
  std::uint32_t value = 0;
  friend auto operator<=>(const CayleyIndex&, const CayleyIndex&) = default;
};

using Element = std::variant<Int, Rational, ResidueVector, Word, CayleyIndex>;

// Validated multiplication table of a finite group.
class CayleyTable {
 public:
  // Throws InvalidGroupTable unless the table is a group.
  CayleyTable(std::vector<std::vector<std::uint32_t>> table, std::vector<std::string> names = {});

  std::uint32_t order() const { return order_; }
  std::uint32_t identity() const { return identity_; }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const { return table_[a * order_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
  bool is_abelian() const { return abelian_; }
  const std::vector<std::string>& names() const { return names_; }
  std::vector<std::vector<std::uint32_t>> rows() const;

  friend bool operator==(const CayleyTable& a, const CayleyTable& b) { return a.table_ == b.table_; }

 private:
  std::uint32_t order_ = 0;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::string> names_;
  std::uint32_t identity_ = 0;
  bool abelian_ = true;
};

struct Integers {
  friend bool operator==(const Integers&, const Integers&) = default;
};
// Truncation of the product of Z/nZ over n = 1..N.
struct ProductMod {
  std::size_t N = 1;
  friend bool operator==(const ProductMod&, const ProductMod&) = default;
};
struct Rationals {
  friend bool operator==(const Rationals&, const Rationals&) = default;
};
struct FreeGroup {
  std::vector<std::string> generators;
  friend bool operator==(const FreeGroup&, const FreeGroup&) = default;
};
struct Cayley {
  std::shared_ptr<const CayleyTable> table;
  friend bool operator==(const Cayley& a, const Cayley& b) {
    return a.table == b.table || (a.table && b.table && *a.table == *b.table);
  }
};

class Group {
 public:
  using Kind = std::variant<Integers, ProductMod, Rationals, FreeGroup, Cayley>;

  Group() = default;
  explicit Group(Kind kind);

  static Group integers() { return Group(Integers{}); }
  static Group product_mod(std::size_t n);
  static Group rationals() { return Group(Rationals{}); }
  static Group free(std::vector<std::string> generators);
  static Group cayley(CayleyTable table);

  const Kind& kind() const { return kind_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }
  bool is_abelian() const;
  std::string name() const;

  Element identity() const;
  bool is_identity(const Element& e) const { return e == identity(); }
  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }
  // g s g^-1; s itself in abelian groups.
  Element conjugate(const Element& g, const Element& s) const;

  // Throws GroupMismatch unless `e` is a canonical element of this group.
  void check(const Element& e) const;
  bool owns(const Element& e) const;

  std::string format(const Element& e) const;
  Element parse(std::string_view text) const;

  // Elements of a finite group in index order; throws for infinite groups
  // except ProductMod, whose elements are enumerated lexicographically.
  std::vector<Element> elements() const;

  friend bool operator==(const Group& a, const Group& b) { return a.kind_ == b.kind_; }

 private:
  Kind kind_{Integers{}};
};

Word reduce(std::vector<int> letters);
Word word_inverse(const Word& w);

}  // namespace gtop
