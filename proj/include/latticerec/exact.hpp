#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace latticerec {

using Integer = mpz_class;
using Rational = mpq_class;

/// Residue class modulo p, always kept in [0, p).
class ModP {
 public:
  ModP() = default;
  ModP(std::int64_t value, std::int64_t modulus);

  std::int64_t value() const { return value_; }
  std::int64_t modulus() const { return modulus_; }

  ModP operator+(const ModP& o) const;
  ModP operator-(const ModP& o) const;
  ModP operator*(const ModP& o) const;
  ModP operator-() const;
  // Throws kSingular when the value is not a unit modulo p.
  ModP inverse() const;
  ModP operator/(const ModP& o) const { return *this * o.inverse(); }

  bool operator==(const ModP& o) const {
    return value_ == o.value_ && modulus_ == o.modulus_;
  }
  bool is_zero() const { return value_ == 0; }

 private:
  std::int64_t value_ = 0;
  std::int64_t modulus_ = 2;
};

std::int64_t mod_normalize(const Integer& value, std::int64_t modulus);
std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t modulus);
// Inverse of a modulo p; returns -1 when gcd(a, p) != 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t modulus);
bool is_prime(std::int64_t n);

// Field element helpers used by the templated matrix code.
inline Rational field_zero(const Rational&) { return Rational(0); }
inline Rational field_one(const Rational&) { return Rational(1); }
inline bool field_is_zero(const Rational& r) { return sgn(r) == 0; }
inline Rational field_inverse(const Rational& r) { return Rational(1) / r; }
inline ModP field_zero(const ModP& like) { return ModP(0, like.modulus()); }
inline ModP field_one(const ModP& like) { return ModP(1, like.modulus()); }
inline bool field_is_zero(const ModP& r) { return r.is_zero(); }
inline ModP field_inverse(const ModP& r) { return r.inverse(); }

/// Canonical text: integers plain, other rationals as "p/q".
std::string to_text(const Integer& value);
std::string to_text(const Rational& value);
std::string to_text(const ModP& value);

// Accepts "n", "-n" or "p/q"; the result is canonicalized.
Rational parse_rational(const std::string& text);
Integer parse_integer(const std::string& text);

bool is_integral(const Rational& value);

// Checked conversion; throws kOverflow when the value does not fit.
std::int64_t to_int64(const Integer& value);

}  // namespace latticerec
