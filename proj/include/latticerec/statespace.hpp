#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "latticerec/matrix.hpp"
#include "latticerec/monoid.hpp"
#include "latticerec/state.hpp"

namespace latticerec {

class StepMap;

struct TableRule {
  std::vector<std::int64_t> images;
};

// x -> a*x + b on Z.
struct AffineIntRule {
  Integer a;
  Integer b;
};

// x -> a*x + b mod p.
struct ModularAffineRule {
  std::int64_t a = 1;
  std::int64_t b = 0;
};

struct MatrixRule {
  std::variant<RationalMatrix, ModMatrix> matrix;
};

struct TranslateRule {
  std::shared_ptr<const Monoid> monoid;
  MonoidElement element;
};

// chain[0] o chain[1] o ... ; the last entry is applied first. Empty is Id.
struct CompositeRule {
  std::vector<StepMap> chain;
};

/// Escape hatch for maps that have no closed rule family (the lift of a
/// non-autonomous system, for instance).
class OpaqueRule {
 public:
  virtual ~OpaqueRule() = default;
  virtual State apply(const State& x) const = 0;
  virtual std::string describe() const = 0;
};

struct CustomRule {
  std::shared_ptr<const OpaqueRule> impl;
};

using Rule = std::variant<TableRule, AffineIntRule, ModularAffineRule, MatrixRule, TranslateRule,
                          CompositeRule, CustomRule>;

/// One self-map G: M -> M. Immutable once built; constructors validate the
/// rule against the domain.
class StepMap {
 public:
  static StepMap table(std::vector<std::int64_t> images);
  static StepMap affine(Integer a, Integer b);
  static StepMap modular_affine(std::int64_t a, std::int64_t b, std::int64_t modulus);
  // Over Q acting on rational_vector(n), or on integer_vector(n) when every
  // entry is an integer and `domain` says so.
  static StepMap matrix(RationalMatrix a);
  static StepMap matrix(RationalMatrix a, const StateSpace& domain);
  static StepMap matrix(ModMatrix a);
  static StepMap translate(std::shared_ptr<const Monoid> monoid, MonoidElement element,
                           const StateSpace& domain);
  static StepMap identity(const StateSpace& domain);
  static StepMap custom(const StateSpace& domain, std::shared_ptr<const OpaqueRule> impl);

  const StateSpace& domain() const { return domain_; }
  const Rule& rule() const { return rule_; }

  State operator()(const State& x) const { return apply(x); }
  State apply(const State& x) const;

  std::string describe() const;

 private:
  StepMap(StateSpace domain, Rule rule) : domain_(std::move(domain)), rule_(std::move(rule)) {}

  StateSpace domain_;
  Rule rule_;

  friend StepMap compose(const StepMap& outer, const StepMap& inner);
};

/// outer o inner. Closed families stay closed (tables, affine, matrices,
/// translations by one monoid); anything else becomes a CompositeRule.
StepMap compose(const StepMap& outer, const StepMap& inner);

// Symbolic normal forms x -> A x + b. Integer and rational spaces use the
// rational form (lines as 1-vectors); Z_p spaces use the modular one.
struct RationalAffineForm {
  RationalMatrix linear;
  RatVector offset;
};

struct ModAffineForm {
  ModMatrix linear;
  ModVector offset;
};

using SymbolicForm = std::variant<RationalAffineForm, ModAffineForm>;

std::optional<SymbolicForm> symbolic_form(const StepMap& map);
SymbolicForm compose_forms(const SymbolicForm& outer, const SymbolicForm& inner);
bool forms_equal(const SymbolicForm& a, const SymbolicForm& b);
bool linear_part_is_identity(const SymbolicForm& f);
State apply_form(const SymbolicForm& f, const StateSpace& space, const State& x);

enum class PowerRoute {
  kIdentity,             // n == 0
  kBinaryExponentiation, // symbolic form squared up
  kCycleDetection,       // orbit walk on a finite space, reduced by cycle length
  kIteration,            // plain repeated application
};

std::string_view to_string(PowerRoute route);

struct IterateResult {
  State state;
  PowerRoute route;
};

/// G^(n)(x), choosing the cheapest exact route.
IterateResult iterate_with_route(const StepMap& map, std::uint64_t n, const State& x,
                                 const Limits& limits = {});
State iterate(const StepMap& map, std::uint64_t n, const State& x, const Limits& limits = {});

/// G^(k)(x) for signed k; negative powers go through the two-sided inverse
/// and throw kNotBijective when none exists.
IterateResult iterate_signed_with_route(const StepMap& map, std::int64_t k, const State& x,
                                        const Limits& limits = {});
State iterate_signed(const StepMap& map, std::int64_t k, const State& x, const Limits& limits = {});

enum class Decision { kExhaustive, kSymbolic, kSampled };
std::string_view to_string(Decision d);

struct MapComparison {
  bool equal = true;
  Decision decided = Decision::kExhaustive;
  std::optional<State> witness;  // set exactly when !equal
};

/// Decides f == g. Finite enumerable domains are compared pointwise; on
/// infinite domains both maps must have symbolic forms, otherwise the
/// sample is used (and the verdict is labelled sampled). Throws
/// kUndecidable when neither applies.
MapComparison maps_equal(const StepMap& f, const StepMap& g, std::span<const State> sample = {},
                         const Limits& limits = {});

}  // namespace latticerec
