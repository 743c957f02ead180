#include "gtop/int.hpp"

#include <ostream>
#include <stdexcept>

#include "gtop/error.hpp"

namespace gtop {

namespace {

mpz_class as_mpz(std::int64_t v) {
  mpz_class out;
  mpz_set_si(out.get_mpz_t(), static_cast<long>(v));
  return out;
}

}  // namespace

Int::Int(const mpz_class& value) : rep_(value) { normalize(); }

Int Int::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) {
    throw ParseError("empty integer literal");
  }
  mpz_class value;
  std::size_t start = (s[0] == '+') ? 1 : 0;
  if (start >= s.size() || value.set_str(s.substr(start), 10) != 0) {
    throw ParseError("invalid integer literal '" + s + "'");
  }
  return Int(value);
}

void Int::normalize() {
  if (auto* big = std::get_if<mpz_class>(&rep_)) {
    if (mpz_fits_slong_p(big->get_mpz_t())) {
      rep_ = static_cast<std::int64_t>(mpz_get_si(big->get_mpz_t()));
    }
  }
}

std::optional<std::int64_t> Int::try_int64() const {
  if (const auto* small = std::get_if<std::int64_t>(&rep_)) {
    return *small;
  }
  return std::nullopt;
}

std::int64_t Int::to_int64() const {
  if (auto v = try_int64()) {
    return *v;
  }
  throw BudgetExceeded("integer " + str() + " exceeds the 64-bit range");
}

mpz_class Int::to_mpz() const {
  if (const auto* small = std::get_if<std::int64_t>(&rep_)) {
    return as_mpz(*small);
  }
  return std::get<mpz_class>(rep_);
}

int Int::sign() const {
  if (const auto* small = std::get_if<std::int64_t>(&rep_)) {
    return (*small > 0) - (*small < 0);
  }
  return sgn(std::get<mpz_class>(rep_));
}

std::size_t Int::bit_length() const {
  if (is_zero()) {
    return 0;
  }
  mpz_class v = to_mpz();
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::string Int::str() const {
  if (const auto* small = std::get_if<std::int64_t>(&rep_)) {
    return std::to_string(*small);
  }
  return std::get<mpz_class>(rep_).get_str();
}

Int& Int::operator+=(const Int& rhs) {
  if (is_small() && rhs.is_small()) {
    std::int64_t out;
    if (!__builtin_add_overflow(std::get<std::int64_t>(rep_), std::get<std::int64_t>(rhs.rep_), &out)) {
      rep_ = out;
      return *this;
    }
  }
  rep_ = mpz_class(to_mpz() + rhs.to_mpz());
  normalize();
  return *this;
}

Int& Int::operator-=(const Int& rhs) {
  if (is_small() && rhs.is_small()) {
    std::int64_t out;
    if (!__builtin_sub_overflow(std::get<std::int64_t>(rep_), std::get<std::int64_t>(rhs.rep_), &out)) {
      rep_ = out;
      return *this;
    }
  }
  rep_ = mpz_class(to_mpz() - rhs.to_mpz());
  normalize();
  return *this;
}

Int& Int::operator*=(const Int& rhs) {
  if (is_small() && rhs.is_small()) {
    std::int64_t out;
    if (!__builtin_mul_overflow(std::get<std::int64_t>(rep_), std::get<std::int64_t>(rhs.rep_), &out)) {
      rep_ = out;
      return *this;
    }
  }
  rep_ = mpz_class(to_mpz() * rhs.to_mpz());
  normalize();
  return *this;
}

Int Int::operator-() const {
  Int out;
  out -= *this;
  return out;
}

bool operator==(const Int& a, const Int& b) {
  if (a.is_small() && b.is_small()) {
    return std::get<std::int64_t>(a.rep_) == std::get<std::int64_t>(b.rep_);
  }
  // Normalized representations are unique.
  if (a.is_small() != b.is_small()) {
    return false;
  }
  return std::get<mpz_class>(a.rep_) == std::get<mpz_class>(b.rep_);
}

std::strong_ordering operator<=>(const Int& a, const Int& b) {
  if (a.is_small() && b.is_small()) {
    return std::get<std::int64_t>(a.rep_) <=> std::get<std::int64_t>(b.rep_);
  }
  int c = cmp(a.to_mpz(), b.to_mpz());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Int abs(const Int& value) { return value.sign() < 0 ? -value : value; }

Int floor_div(const Int& value, const Int& divisor) {
  if (divisor.is_zero()) {
    throw std::domain_error("division by zero");
  }
  auto v = value.try_int64();
  auto d = divisor.try_int64();
  if (v && d && !(*v == INT64_MIN && *d == -1)) {
    std::int64_t q = *v / *d;
    if ((*v % *d != 0) && ((*v < 0) != (*d < 0))) {
      --q;
    }
    return q;
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value.to_mpz().get_mpz_t(), divisor.to_mpz().get_mpz_t());
  return Int(q);
}

Int mod(const Int& value, const Int& divisor) {
  if (divisor.is_zero()) {
    throw std::domain_error("modulus zero");
  }
  auto v = value.try_int64();
  auto d = divisor.try_int64();
  if (v && d && *d != INT64_MIN) {
    std::int64_t m = *d < 0 ? -*d : *d;
    std::int64_t r = *v % m;
    return r < 0 ? r + m : r;
  }
  mpz_class r;
  mpz_class m = abs(divisor).to_mpz();
  mpz_mod(r.get_mpz_t(), value.to_mpz().get_mpz_t(), m.get_mpz_t());
  return Int(r);
}

Int exact_div(const Int& value, const Int& divisor) {
  if (!divides(divisor, value)) {
    throw std::domain_error(divisor.str() + " does not divide " + value.str());
  }
  return floor_div(value, divisor);
}

bool divides(const Int& divisor, const Int& value) {
  if (divisor.is_zero()) {
    return value.is_zero();
  }
  return mod(value, divisor).is_zero();
}

Int gcd(const Int& a, const Int& b) {
  auto x = a.try_int64();
  auto y = b.try_int64();
  if (x && y && *x != INT64_MIN && *y != INT64_MIN) {
    std::int64_t p = *x < 0 ? -*x : *x;
    std::int64_t q = *y < 0 ? -*y : *y;
    while (q != 0) {
      std::int64_t r = p % q;
      p = q;
      q = r;
    }
    return p;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Int(g);
}

Int lcm(const Int& a, const Int& b) {
  if (a.is_zero() || b.is_zero()) {
    return 0;
  }
  return abs(floor_div(a, gcd(a, b)) * b);
}

Int pow(const Int& base, unsigned exponent) {
  Int result = 1;
  Int b = base;
  while (exponent > 0) {
    if (exponent & 1u) {
      result *= b;
    }
    exponent >>= 1u;
    if (exponent > 0) {
      b *= b;
    }
  }
  return result;
}

ExtendedGcd extended_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (!r.is_zero()) {
    Int q = floor_div(old_r, r);
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r.sign() < 0) {
    return {-old_r, -old_s, -old_t};
  }
  return {old_r, old_s, old_t};
}

std::optional<Int> inverse_mod(const Int& value, const Int& modulus) {
  auto eg = extended_gcd(mod(value, modulus), modulus);
  if (eg.gcd != Int(1)) {
    return std::nullopt;
  }
  return mod(eg.x, modulus);
}

bool is_probable_prime(const Int& value) {
  if (value < Int(2)) {
    return false;
  }
  mpz_class v = value.to_mpz();
  return mpz_probab_prime_p(v.get_mpz_t(), 30) > 0;
}

std::ostream& operator<<(std::ostream& os, const Int& value) { return os << value.str(); }

}  // namespace gtop
