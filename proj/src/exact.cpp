#include "latticerec/exact.hpp"

#include <limits>

#include "latticerec/error.hpp"

namespace latticerec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kAxisOutOfRange: return "axis-out-of-range";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kNotComparable: return "not-comparable";
    case ErrorKind::kCapExceeded: return "cap-exceeded";
    case ErrorKind::kOutOfDomain: return "out-of-domain";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNotBijective: return "not-bijective";
    case ErrorKind::kNotSurjective: return "not-surjective";
    case ErrorKind::kIncompatible: return "incompatible";
    case ErrorKind::kUndecidable: return "undecidable";
    case ErrorKind::kSingular: return "singular";
    case ErrorKind::kNonCommuting: return "non-commuting";
    case ErrorKind::kTimeOutsideDomain: return "time-outside-domain";
    case ErrorKind::kInfiniteSearch: return "infinite-search";
    case ErrorKind::kTimeComponentMismatch: return "time-component-mismatch";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

std::int64_t mod_normalize(const Integer& value, std::int64_t modulus) {
  Integer r = value % Integer(static_cast<long>(modulus));
  if (sgn(r) < 0) r += static_cast<long>(modulus);
  return r.get_si();
}

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t modulus) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % modulus);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t modulus) {
  std::int64_t old_r = a % modulus, r = modulus;
  std::int64_t old_s = 1, s = 0;
  if (old_r < 0) old_r += modulus;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return -1;
  old_s %= modulus;
  if (old_s < 0) old_s += modulus;
  return old_s;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(Integer(static_cast<long>(n)).get_mpz_t(), 30) > 0;
}

ModP::ModP(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
  if (modulus < 2) fail(ErrorKind::kInvalidArgument, "modulus must be at least 2");
  value_ = value % modulus;
  if (value_ < 0) value_ += modulus;
}

ModP ModP::operator+(const ModP& o) const {
  std::int64_t v = value_ + o.value_;
  if (v >= modulus_) v -= modulus_;
  ModP r;
  r.value_ = v;
  r.modulus_ = modulus_;
  return r;
}

ModP ModP::operator-(const ModP& o) const {
  std::int64_t v = value_ - o.value_;
  if (v < 0) v += modulus_;
  ModP r;
  r.value_ = v;
  r.modulus_ = modulus_;
  return r;
}

ModP ModP::operator*(const ModP& o) const {
  ModP r;
  r.value_ = mod_mul(value_, o.value_, modulus_);
  r.modulus_ = modulus_;
  return r;
}

ModP ModP::operator-() const { return ModP(0, modulus_) - *this; }

ModP ModP::inverse() const {
  std::int64_t inv = mod_inverse(value_, modulus_);
  if (inv < 0) {
    fail(ErrorKind::kSingular, std::to_string(value_) + " is not invertible modulo " +
                                   std::to_string(modulus_));
  }
  return ModP(inv, modulus_);
}

std::string to_text(const Integer& value) { return value.get_str(); }

std::string to_text(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_text(const ModP& value) { return std::to_string(value.value()); }

Integer parse_integer(const std::string& text) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size()) fail(ErrorKind::kParse, "empty integer literal");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      fail(ErrorKind::kParse, "malformed integer literal '" + text + "'");
    }
  }
  Integer result;
  result.set_str(text[0] == '+' ? text.substr(1) : text, 10);
  return result;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  std::string den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    fail(ErrorKind::kParse, "denominator must be unsigned in '" + text + "'");
  }
  Integer den = parse_integer(den_text);
  if (sgn(den) == 0) fail(ErrorKind::kParse, "zero denominator in '" + text + "'");
  Rational result(num, den);
  result.canonicalize();
  return result;
}

bool is_integral(const Rational& value) { return value.get_den() == 1; }

std::int64_t to_int64(const Integer& value) {
  if (!value.fits_slong_p()) fail(ErrorKind::kOverflow, "integer " + value.get_str() + " exceeds 64 bits");
  return value.get_si();
}

}  // namespace latticerec
