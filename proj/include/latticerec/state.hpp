#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "latticerec/exact.hpp"
#include "latticerec/lattice.hpp"

namespace latticerec {

class State;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;
using ModVector = std::vector<ModP>;

/// (s, x) pair of a lifted non-autonomous system.
struct AugmentedState {
  MultiIndex time;
  std::shared_ptr<const State> inner;
};

/// One element of a state space M. Labels serve both finite sets and Z_p.
class State {
 public:
  using Value = std::variant<std::int64_t, Integer, IntVector, RatVector, ModVector, AugmentedState>;

  State() : value_(std::int64_t{0}) {}
  State(std::int64_t label) : value_(label) {}  // NOLINT(google-explicit-constructor)
  State(int label) : value_(std::int64_t{label}) {}  // NOLINT(google-explicit-constructor)
  explicit State(Value value) : value_(std::move(value)) {}

  static State integer(Integer v) { return State(Value(std::move(v))); }
  static State int_vector(IntVector v) { return State(Value(std::move(v))); }
  static State rat_vector(RatVector v) { return State(Value(std::move(v))); }
  static State mod_vector(ModVector v) { return State(Value(std::move(v))); }
  static State augmented(MultiIndex time, State inner);

  const Value& value() const { return value_; }

  template <class T>
  bool holds() const { return std::holds_alternative<T>(value_); }
  template <class T>
  const T& as() const { return std::get<T>(value_); }

  std::int64_t label() const;
  const MultiIndex& time_part() const;
  const State& state_part() const;

  bool operator==(const State& o) const;
  bool operator!=(const State& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  Value value_;
};

/// Tunable ceilings shared by the engine.
struct Limits {
  std::size_t path_cap = kDefaultPathCap;
  std::uint64_t volume_cap = 1'000'000;
  // Rational/integer symbolic powers whose linear part is not the identity.
  std::uint64_t exponent_cap = std::uint64_t{1} << 20;
  // Largest finite space scanned exhaustively.
  std::uint64_t enumeration_cap = std::uint64_t{1} << 20;
};

inline constexpr std::uint64_t kModularExponentCap = std::uint64_t{1} << 62;

/// The state set M.
class StateSpace {
 public:
  enum class Kind {
    kFinite,
    kIntegerLine,
    kIntegerVector,
    kModularLine,
    kRationalVector,
    kModularVector,
    kAugmented,
  };

  static StateSpace finite(std::int64_t size);
  static StateSpace integer_line();
  static StateSpace integer_vector(std::size_t dim);
  static StateSpace modular_line(std::int64_t modulus);
  static StateSpace rational_vector(std::size_t dim);
  // Vectors over the field Z_p; the modulus must be prime.
  static StateSpace modular_vector(std::size_t dim, std::int64_t modulus);
  // {s >= t1} x inner
  static StateSpace augmented(MultiIndex t1, StateSpace inner);

  Kind kind() const { return kind_; }
  std::int64_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  std::int64_t modulus() const { return modulus_; }
  const MultiIndex& t1() const { return t1_; }
  const StateSpace& inner() const { return *inner_; }

  bool is_finite() const;
  bool is_vector() const;
  // Number of states when finite and representable; nullopt otherwise.
  std::optional<std::uint64_t> cardinality() const;
  bool enumerable(const Limits& limits) const;

  // Canonical enumeration order of finite spaces.
  State state_at(std::uint64_t index) const;
  std::uint64_t index_of(const State& x) const;

  bool contains(const State& x) const;
  // Throws kOutOfDomain when x is not in the space.
  void require(const State& x) const;

  bool operator==(const StateSpace& o) const;
  bool operator!=(const StateSpace& o) const { return !(*this == o); }

  std::string describe() const;

 private:
  Kind kind_ = Kind::kFinite;
  std::int64_t size_ = 1;
  std::size_t dim_ = 1;
  std::int64_t modulus_ = 0;
  MultiIndex t1_;
  std::shared_ptr<const StateSpace> inner_;
};

// Exact field views of vector-like states, used by the affine and matrix
// machinery. Lines are treated as 1-vectors.
RatVector to_rational_vector(const State& x);
ModVector to_mod_vector(const State& x, std::int64_t modulus);
// Throws kOutOfDomain when an integer space receives a non-integral value.
State from_rational_vector(const StateSpace& space, const RatVector& v);
State from_mod_vector(const StateSpace& space, const ModVector& v);

}  // namespace latticerec
