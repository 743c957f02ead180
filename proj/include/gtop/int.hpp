#pragma once

// Arbitrary-precision integer with an inline 64-bit fast path.
//
// Values that fit in std::int64_t never touch the heap; anything larger is
// promoted to a GMP integer and demoted again as soon as it fits.

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include <gmpxx.h>

namespace gtop {

class Int {
 public:
  Int() = default;
  template <std::integral T>
  Int(T value) {  // NOLINT
    if constexpr (std::is_unsigned_v<T> && sizeof(T) >= sizeof(std::int64_t)) {
      if (value > static_cast<T>(INT64_MAX)) {
        rep_ = mpz_class(static_cast<unsigned long>(value));
        return;
      }
    }
    rep_ = static_cast<std::int64_t>(value);
  }
  explicit Int(const mpz_class& value);

  static Int parse(std::string_view text);

  bool is_small() const { return std::holds_alternative<std::int64_t>(rep_); }
  std::optional<std::int64_t> try_int64() const;
  std::int64_t to_int64() const;
  mpz_class to_mpz() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  std::size_t bit_length() const;
  std::string str() const;

  Int& operator+=(const Int& rhs);
  Int& operator-=(const Int& rhs);
  Int& operator*=(const Int& rhs);

  friend Int operator+(Int lhs, const Int& rhs) { return lhs += rhs; }
  friend Int operator-(Int lhs, const Int& rhs) { return lhs -= rhs; }
  friend Int operator*(Int lhs, const Int& rhs) { return lhs *= rhs; }
  Int operator-() const;

  friend bool operator==(const Int& a, const Int& b);
  friend std::strong_ordering operator<=>(const Int& a, const Int& b);

 private:
  void normalize();

  std::variant<std::int64_t, mpz_class> rep_{std::int64_t{0}};
};

Int abs(const Int& value);

// Floor division and the matching non-negative remainder; `divisor` must be
// non-zero. mod() always returns a value in [0, |divisor|).
Int floor_div(const Int& value, const Int& divisor);
Int mod(const Int& value, const Int& divisor);
// Exact quotient; throws if `divisor` does not divide `value`.
Int exact_div(const Int& value, const Int& divisor);
bool divides(const Int& divisor, const Int& value);

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
Int pow(const Int& base, unsigned exponent);

struct ExtendedGcd {
  Int gcd;
  Int x;
  Int y;
};
// gcd = a*x + b*y, gcd >= 0.
ExtendedGcd extended_gcd(const Int& a, const Int& b);

// Inverse of `value` modulo `modulus`, if it exists.
std::optional<Int> inverse_mod(const Int& value, const Int& modulus);

bool is_probable_prime(const Int& value);

std::ostream& operator<<(std::ostream& os, const Int& value);

}  // namespace gtop
