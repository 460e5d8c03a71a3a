#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "latticerec/autonomous.hpp"
#include "latticerec/matrix.hpp"
#include "latticerec/monoid.hpp"

namespace latticerec {

/// x(t + 1_a) = a_a x(t) for commuting elements a_1..a_m of a monoid acting
/// on a state space.
class MonoidActionSystem {
 public:
  // Throws kNonCommuting when two elements do not commute and
  // kInvalidArgument when the action is missing or unlawful.
  MonoidActionSystem(std::shared_ptr<const Monoid> monoid, std::vector<MonoidElement> elements, StateSpace space);

  std::size_t dimension() const { return elements_.size(); }
  const Monoid& monoid() const { return *monoid_; }
  const MonoidElement& element(int axis) const;
  const std::vector<MonoidElement>& elements() const { return elements_; }
  const StateSpace& space() const { return space_; }
  const ActionAxiomCheck& axioms() const { return axioms_; }

  // The same recurrence as translate step maps.
  AutonomousSystem as_autonomous() const;

 private:
  std::shared_ptr<const Monoid> monoid_;
  std::vector<MonoidElement> elements_;
  StateSpace space_;
  ActionAxiomCheck axioms_;
};

/// a_1^(d1) ... a_m^(dm) x0, d = t - t0. Negative d needs an invertible
/// element (kNotBijective otherwise).
State eval_monoid(const MonoidActionSystem& sys, const MultiIndex& t0, const State& x0, const MultiIndex& t,
                  const Limits& limits = {});

enum class AdditiveDomain { kIntegers, kNaturals };

/// sum (t^a - t0^a) a_a + x0. Over the naturals every coefficient, element
/// and x0 must be non-negative.
Integer eval_additive(std::span<const Integer> a, const MultiIndex& t0, const Integer& x0, const MultiIndex& t,
                      AdditiveDomain domain = AdditiveDomain::kIntegers);
IntVector eval_additive(std::span<const IntVector> a, const MultiIndex& t0, const IntVector& x0,
                        const MultiIndex& t, AdditiveDomain domain = AdditiveDomain::kIntegers);

/// A^k for signed k by binary exponentiation. Rational powers beyond
/// limits.exponent_cap and Z_p powers beyond 2^62 throw kCapExceeded;
/// negative powers of singular matrices throw kSingular.
RationalMatrix matrix_power(const RationalMatrix& a, std::int64_t k, const Limits& limits = {});
ModMatrix matrix_power(const ModMatrix& a, std::int64_t k, const Limits& limits = {});

struct NonCommutingEntry {
  int alpha = 1;
  int beta = 2;
  std::size_t row = 0;
  std::size_t col = 0;
};

/// First pair a < b with A_a A_b != A_b A_a and the first differing entry.
std::optional<NonCommutingEntry> find_noncommuting(std::span<const RationalMatrix> as);
std::optional<NonCommutingEntry> find_noncommuting(std::span<const ModMatrix> as);

/// A_1^(d1) ... A_m^(dm) x0 after an exact commutation check.
RatVector eval_matrix_system(std::span<const RationalMatrix> as, const MultiIndex& t0, const RatVector& x0,
                             const MultiIndex& t, const Limits& limits = {});
ModVector eval_matrix_system(std::span<const ModMatrix> as, const MultiIndex& t0, const ModVector& x0,
                             const MultiIndex& t, const Limits& limits = {});

}  // namespace latticerec
