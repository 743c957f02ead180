#include "gtop/group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "gtop/error.hpp"

namespace gtop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const char* alternative_name(const Element& e) {
  switch (e.index()) {
    case 0: return "integer";
    case 1: return "rational";
    case 2: return "residue vector";
    case 3: return "word";
    default: return "Cayley index";
  }
}

}  // namespace

CayleyTable::CayleyTable(std::vector<std::vector<std::uint32_t>> table, std::vector<std::string> names)
    : names_(std::move(names)) {
  if (table.empty()) {
    throw InvalidGroupTable("empty table");
  }
  order_ = static_cast<std::uint32_t>(table.size());
  table_.reserve(std::size_t{order_} * order_);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != order_) {
      throw InvalidGroupTable("row " + std::to_string(i) + " has length " + std::to_string(table[i].size()) +
                              ", expected " + std::to_string(order_));
    }
    for (std::uint32_t v : table[i]) {
      if (v >= order_) {
        throw InvalidGroupTable("entry " + std::to_string(v) + " out of range in row " + std::to_string(i));
      }
      table_.push_back(v);
    }
  }
  if (!names_.empty() && names_.size() != order_) {
    throw InvalidGroupTable("names list has wrong length");
  }

  // Identity: two-sided neutral element.
  bool found = false;
  for (std::uint32_t e = 0; e < order_ && !found; ++e) {
    bool neutral = true;
    for (std::uint32_t a = 0; a < order_ && neutral; ++a) {
      neutral = multiply(e, a) == a && multiply(a, e) == a;
    }
    if (neutral) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) {
    throw InvalidGroupTable("no identity element");
  }

  inverse_.assign(order_, order_);
  for (std::uint32_t a = 0; a < order_; ++a) {
    for (std::uint32_t b = 0; b < order_; ++b) {
      if (multiply(a, b) == identity_ && multiply(b, a) == identity_) {
        inverse_[a] = b;
        break;
      }
    }
    if (inverse_[a] == order_) {
      throw InvalidGroupTable("no inverse for index " + std::to_string(a));
    }
  }

  for (std::uint32_t a = 0; a < order_; ++a) {
    for (std::uint32_t b = 0; b < order_; ++b) {
      std::uint32_t ab = multiply(a, b);
      if (ab != multiply(b, a)) {
        abelian_ = false;
      }
      for (std::uint32_t c = 0; c < order_; ++c) {
        if (multiply(ab, c) != multiply(a, multiply(b, c))) {
          throw InvalidGroupTable("not associative at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                  std::to_string(c) + ")");
        }
      }
    }
  }
}

std::vector<std::vector<std::uint32_t>> CayleyTable::rows() const {
  std::vector<std::vector<std::uint32_t>> out(order_);
  for (std::uint32_t a = 0; a < order_; ++a) {
    out[a].assign(table_.begin() + a * order_, table_.begin() + (a + 1) * order_);
  }
  return out;
}

Word reduce(std::vector<int> letters) {
  Word out;
  out.letters.reserve(letters.size());
  for (int l : letters) {
    if (!out.letters.empty() && out.letters.back() == -l) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

Word word_inverse(const Word& w) {
  Word out;
  out.letters.assign(w.letters.rbegin(), w.letters.rend());
  for (int& l : out.letters) {
    l = -l;
  }
  return out;
}

Group::Group(Kind kind) : kind_(std::move(kind)) {}

Group Group::product_mod(std::size_t n) {
  if (n == 0) {
    throw PreconditionError("ProductMod needs N >= 1");
  }
  return Group(ProductMod{n});
}

Group Group::free(std::vector<std::string> generators) {
  if (generators.empty()) {
    throw PreconditionError("free group needs at least one generator");
  }
  for (const auto& g : generators) {
    if (g.empty() || g == "e" || !std::isalpha(static_cast<unsigned char>(g[0]))) {
      throw PreconditionError("invalid generator name '" + g + "'");
    }
  }
  return Group(FreeGroup{std::move(generators)});
}

Group Group::cayley(CayleyTable table) { return Group(Cayley{std::make_shared<const CayleyTable>(std::move(table))}); }

bool Group::is_abelian() const {
  return std::visit(overloaded{[](const FreeGroup& f) { return f.generators.size() < 2; },
                               [](const Cayley& c) { return c.table->is_abelian(); },
                               [](const auto&) { return true; }},
                    kind_);
}

std::string Group::name() const {
  return std::visit(overloaded{[](const Integers&) { return std::string("Z"); },
                               [](const ProductMod& p) { return "P(" + std::to_string(p.N) + ")"; },
                               [](const Rationals&) { return std::string("Q"); },
                               [](const FreeGroup& f) {
                                 std::string s = "F<";
                                 for (std::size_t i = 0; i < f.generators.size(); ++i) {
                                   s += (i ? "," : "") + f.generators[i];
                                 }
                                 return s + ">";
                               },
                               [](const Cayley& c) { return "Cayley(" + std::to_string(c.table->order()) + ")"; }},
                    kind_);
}

Element Group::identity() const {
  return std::visit(overloaded{[](const Integers&) -> Element { return Int(0); },
                               [](const ProductMod& p) -> Element {
                                 return ResidueVector{std::vector<std::int64_t>(p.N, 0)};
                               },
                               [](const Rationals&) -> Element { return Rational(0); },
                               [](const FreeGroup&) -> Element { return Word{}; },
                               [](const Cayley& c) -> Element { return CayleyIndex{c.table->identity()}; }},
                    kind_);
}

bool Group::owns(const Element& e) const {
  return std::visit(
      overloaded{
          [&](const Integers&) { return std::holds_alternative<Int>(e); },
          [&](const ProductMod& p) {
            const auto* v = std::get_if<ResidueVector>(&e);
            if (!v || v->coords.size() != p.N) {
              return false;
            }
            for (std::size_t n = 1; n <= p.N; ++n) {
              auto c = v->coords[n - 1];
              if (c < 0 || c >= static_cast<std::int64_t>(n)) {
                return false;
              }
            }
            return true;
          },
          [&](const Rationals&) {
            const auto* q = std::get_if<Rational>(&e);
            return q && q->get_den() > 0 && gcd(q->get_num(), q->get_den()) == 1;
          },
          [&](const FreeGroup& f) {
            const auto* w = std::get_if<Word>(&e);
            if (!w) {
              return false;
            }
            for (std::size_t i = 0; i < w->letters.size(); ++i) {
              int l = w->letters[i];
              if (l == 0 || static_cast<std::size_t>(l < 0 ? -l : l) > f.generators.size()) {
                return false;
              }
              if (i > 0 && w->letters[i - 1] == -l) {
                return false;
              }
            }
            return true;
          },
          [&](const Cayley& c) {
            const auto* x = std::get_if<CayleyIndex>(&e);
            return x && x->value < c.table->order();
          }},
      kind_);
}

void Group::check(const Element& e) const {
  if (!owns(e)) {
    throw GroupMismatch(std::string(alternative_name(e)) + " is not a canonical element of " + name());
  }
}

Element Group::add(const Element& a, const Element& b) const {
  check(a);
  check(b);
  return std::visit(overloaded{[&](const Integers&) -> Element { return std::get<Int>(a) + std::get<Int>(b); },
                               [&](const ProductMod& p) -> Element {
                                 const auto& x = std::get<ResidueVector>(a).coords;
                                 const auto& y = std::get<ResidueVector>(b).coords;
                                 ResidueVector out{std::vector<std::int64_t>(p.N)};
                                 for (std::size_t n = 1; n <= p.N; ++n) {
                                   out.coords[n - 1] = (x[n - 1] + y[n - 1]) % static_cast<std::int64_t>(n);
                                 }
                                 return out;
                               },
                               [&](const Rationals&) -> Element {
                                 return Rational(std::get<Rational>(a) + std::get<Rational>(b));
                               },
                               [&](const FreeGroup&) -> Element {
                                 std::vector<int> letters = std::get<Word>(a).letters;
                                 const auto& rhs = std::get<Word>(b).letters;
                                 letters.insert(letters.end(), rhs.begin(), rhs.end());
                                 return reduce(std::move(letters));
                               },
                               [&](const Cayley& c) -> Element {
                                 return CayleyIndex{
                                     c.table->multiply(std::get<CayleyIndex>(a).value, std::get<CayleyIndex>(b).value)};
                               }},
                    kind_);
}

Element Group::neg(const Element& a) const {
  check(a);
  return std::visit(overloaded{[&](const Integers&) -> Element { return -std::get<Int>(a); },
                               [&](const ProductMod& p) -> Element {
                                 ResidueVector out = std::get<ResidueVector>(a);
                                 for (std::size_t n = 1; n <= p.N; ++n) {
                                   auto& c = out.coords[n - 1];
                                   c = (static_cast<std::int64_t>(n) - c) % static_cast<std::int64_t>(n);
                                 }
                                 return out;
                               },
                               [&](const Rationals&) -> Element { return Rational(-std::get<Rational>(a)); },
                               [&](const FreeGroup&) -> Element { return word_inverse(std::get<Word>(a)); },
                               [&](const Cayley& c) -> Element {
                                 return CayleyIndex{c.table->inverse(std::get<CayleyIndex>(a).value)};
                               }},
                    kind_);
}

Element Group::conjugate(const Element& g, const Element& s) const {
  check(g);
  check(s);
  if (is_abelian()) {
    return s;
  }
  return add(add(g, s), neg(g));
}

namespace {

std::string format_word(const FreeGroup& f, const Word& w) {
  if (w.letters.empty()) {
    return "e";
  }
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    int l = w.letters[i];
    if (i) {
      out += '*';
    }
    out += f.generators[static_cast<std::size_t>(l < 0 ? -l : l) - 1];
    if (l < 0) {
      out += "^-1";
    }
  }
  return out;
}

Word parse_word(const FreeGroup& f, std::string_view text) {
  std::vector<int> letters;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) {
      return;
    }
    std::string name = token;
    long power = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      try {
        std::size_t used = 0;
        power = std::stol(token.substr(caret + 1), &used);
        if (used != token.size() - caret - 1) {
          throw ParseError("bad exponent in '" + token + "'");
        }
      } catch (const std::logic_error&) {
        throw ParseError("bad exponent in '" + token + "'");
      }
    }
    token.clear();
    if (name == "e" || name == "1") {
      return;
    }
    auto it = std::find(f.generators.begin(), f.generators.end(), name);
    if (it == f.generators.end()) {
      throw GroupMismatch("unknown generator '" + name + "'");
    }
    int letter = static_cast<int>(it - f.generators.begin()) + 1;
    for (long i = 0; i < (power < 0 ? -power : power); ++i) {
      letters.push_back(power < 0 ? -letter : letter);
    }
  };
  for (char ch : text) {
    if (ch == '*' || ch == ' ' || ch == '.') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return reduce(std::move(letters));
}

}  // namespace

std::string Group::format(const Element& e) const {
  check(e);
  return std::visit(overloaded{[&](const Integers&) { return std::get<Int>(e).str(); },
                               [&](const ProductMod&) {
                                 std::ostringstream os;
                                 os << '(';
                                 const auto& c = std::get<ResidueVector>(e).coords;
                                 for (std::size_t i = 0; i < c.size(); ++i) {
                                   os << (i ? "," : "") << c[i];
                                 }
                                 os << ')';
                                 return os.str();
                               },
                               [&](const Rationals&) { return std::get<Rational>(e).get_str(); },
                               [&](const FreeGroup& f) { return format_word(f, std::get<Word>(e)); },
                               [&](const Cayley& c) {
                                 auto idx = std::get<CayleyIndex>(e).value;
                                 return c.table->names().empty() ? std::to_string(idx) : c.table->names()[idx];
                               }},
                    kind_);
}

Element Group::parse(std::string_view text) const {
  std::string s(text);
  return std::visit(
      overloaded{[&](const Integers&) -> Element { return Int::parse(s); },
                 [&](const ProductMod& p) -> Element {
                   ResidueVector v;
                   std::string body = s;
                   body.erase(std::remove_if(body.begin(), body.end(),
                                             [](char ch) { return ch == '(' || ch == ')' || ch == ' '; }),
                              body.end());
                   std::stringstream ss(body);
                   std::string part;
                   while (std::getline(ss, part, ',')) {
                     std::int64_t raw = Int::parse(part).to_int64();
                     std::int64_t n = static_cast<std::int64_t>(v.coords.size()) + 1;
                     v.coords.push_back(((raw % n) + n) % n);
                   }
                   if (v.coords.size() != p.N) {
                     throw ParseError("residue vector '" + s + "' does not have " + std::to_string(p.N) + " coordinates");
                   }
                   return v;
                 },
                 [&](const Rationals&) -> Element {
                   Rational q;
                   if (q.set_str(s, 10) != 0) {
                     throw ParseError("invalid rational '" + s + "'");
                   }
                   if (q.get_den() == 0) {
                     throw ParseError("zero denominator in '" + s + "'");
                   }
                   q.canonicalize();
                   return q;
                 },
                 [&](const FreeGroup& f) -> Element { return parse_word(f, s); },
                 [&](const Cayley& c) -> Element {
                   const auto& names = c.table->names();
                   if (auto it = std::find(names.begin(), names.end(), s); it != names.end()) {
                     return CayleyIndex{static_cast<std::uint32_t>(it - names.begin())};
                   }
                   std::int64_t idx = Int::parse(s).to_int64();
                   if (idx < 0 || idx >= c.table->order()) {
                     throw GroupMismatch("Cayley index '" + s + "' out of range");
                   }
                   return CayleyIndex{static_cast<std::uint32_t>(idx)};
                 }},
      kind_);
}

std::vector<Element> Group::elements() const {
  if (const auto* c = as<Cayley>()) {
    std::vector<Element> out;
    for (std::uint32_t i = 0; i < c->table->order(); ++i) {
      out.emplace_back(CayleyIndex{i});
    }
    return out;
  }
  if (const auto* p = as<ProductMod>()) {
    std::vector<Element> out;
    ResidueVector v{std::vector<std::int64_t>(p->N, 0)};
    for (;;) {
      out.emplace_back(v);
      std::size_t n = p->N;
      while (n > 0) {
        auto& c = v.coords[n - 1];
        if (++c < static_cast<std::int64_t>(n)) {
          break;
        }
        c = 0;
        --n;
      }
      if (n == 0) {
        return out;
      }
    }
  }
  throw UnsupportedOperation("cannot enumerate the elements of " + name());
}

}  // namespace gtop
