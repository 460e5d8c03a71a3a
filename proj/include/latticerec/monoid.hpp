#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "latticerec/matrix.hpp"
#include "latticerec/state.hpp"

namespace latticerec {

using MonoidElement = std::variant<IntVector, Rational, std::int64_t, RationalMatrix, ModMatrix>;

/// A commutative-candidate monoid N together with its action on a state
/// space. Built-ins: (Z^d, +) acting by translation, (Q>0, *) acting by
/// scaling, square matrices acting by multiplication. Finite monoids are
/// declared by an operation table and act either on themselves or through
/// an explicit action table action[a][x].
class Monoid {
 public:
  enum class Kind { kIntegerAddition, kPositiveRationals, kFinite, kMatrices };

  using Table = std::vector<std::vector<std::int64_t>>;

  static Monoid integer_addition(std::size_t dim = 1);
  static Monoid positive_rationals();
  // Validates closure, associativity and the identity exhaustively.
  static Monoid finite(Table table, std::int64_t identity, std::optional<Table> action = std::nullopt);
  // modulus == 0 selects rational entries.
  static Monoid matrices(std::size_t n, std::int64_t modulus = 0);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::int64_t modulus() const { return modulus_; }
  std::int64_t order() const { return static_cast<std::int64_t>(table_.size()); }
  const Table& table() const { return table_; }
  bool has_action_table() const { return action_.has_value(); }

  bool is_group() const;

  MonoidElement identity() const;
  void validate(const MonoidElement& a) const;
  MonoidElement combine(const MonoidElement& a, const MonoidElement& b) const;
  MonoidElement power(const MonoidElement& a, std::uint64_t n) const;
  std::optional<MonoidElement> inverse(const MonoidElement& a) const;
  bool equal(const MonoidElement& a, const MonoidElement& b) const;

  bool acts_on(const StateSpace& space) const;
  // The action a·x; x must lie in a space the monoid acts on.
  State act(const MonoidElement& a, const State& x) const;

  std::string element_text(const MonoidElement& a) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::kIntegerAddition;
  std::size_t dim_ = 1;
  std::int64_t modulus_ = 0;
  std::int64_t identity_ = 0;
  Table table_;
  std::optional<Table> action_;
};

/// Outcome of checking the action axioms (ab)x = a(bx) and ex = x.
struct ActionAxiomCheck {
  enum class Status { kVerified, kAssumedBuiltin, kViolated };
  Status status = Status::kAssumedBuiltin;
  std::string detail;
};

// Exhaustive for finite monoids; built-in actions are assumed lawful.
ActionAxiomCheck check_action_axioms(const Monoid& monoid, const StateSpace& space);

std::string_view to_string(ActionAxiomCheck::Status status);

}  // namespace latticerec
