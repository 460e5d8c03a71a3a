#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "latticerec/autonomous.hpp"
#include "latticerec/lattice.hpp"
#include "latticerec/statespace.hpp"

namespace latticerec {

/// Polynomial in the lattice coordinates t^1..t^m with rational
/// coefficients. Monomials are keyed by their exponent vector.
class TimePolynomial {
 public:
  explicit TimePolynomial(std::size_t m = 1) : m_(m) {}

  static TimePolynomial constant(std::size_t m, const Rational& c);
  // c0 + c1 t^a + c2 (t^a)^2 + ... for one 1-based axis a.
  static TimePolynomial in_axis(std::size_t m, int axis, const std::vector<Rational>& coeffs);

  std::size_t dimension() const { return m_; }
  const std::map<std::vector<unsigned>, Rational>& terms() const { return terms_; }

  void add_term(std::vector<unsigned> exponents, const Rational& c);
  TimePolynomial operator+(const TimePolynomial& o) const;
  TimePolynomial operator*(const TimePolynomial& o) const;

  // p(t + 1_axis), expanded.
  TimePolynomial shifted(int axis) const;
  Rational evaluate(const MultiIndex& t) const;
  bool is_constant() const;
  std::string to_string() const;

 private:
  std::size_t m_;
  std::map<std::vector<unsigned>, Rational> terms_;
};

// F(t, .) given by one table per lattice point of a finite window. Times
// outside the window are errors, never extrapolated.
struct TablePerTimeRule {
  std::size_t size = 1;
  std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> tables;
};

// x -> a(t) x + b(t) on Z; a and b must be integral at every visited time.
struct AffineTimedRule {
  TimePolynomial a;
  TimePolynomial b;
};

// x -> A(t) x with polynomial entries, on a rational or integer vector space.
struct MatrixTimedRule {
  std::size_t n = 1;
  std::vector<TimePolynomial> entries;  // row-major n x n
};

struct ConstantRule {
  StepMap map;
};

using TimedRule = std::variant<TablePerTimeRule, AffineTimedRule, MatrixTimedRule, ConstantRule>;

/// F_a: {t >= t1} x M -> M.
class TimedStepMap {
 public:
  static TimedStepMap table_per_time(std::size_t size,
                                     std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> tables);
  static TimedStepMap affine(TimePolynomial a, TimePolynomial b);
  static TimedStepMap matrix(std::size_t n, std::vector<TimePolynomial> entries, const StateSpace& domain);
  static TimedStepMap constant(StepMap map);

  const StateSpace& domain() const { return domain_; }
  const TimedRule& rule() const { return rule_; }

  // The frozen map F(t, .). Throws kTimeOutsideDomain off a table window.
  StepMap at(const MultiIndex& t) const;
  State apply(const MultiIndex& t, const State& x) const { return at(t).apply(x); }

  std::string describe() const;

 private:
  TimedStepMap(StateSpace domain, TimedRule rule) : domain_(std::move(domain)), rule_(std::move(rule)) {}

  StateSpace domain_;
  TimedRule rule_;
};

/// x(t + 1_a) = F_a(t, x(t)) for t >= t1.
class NonAutonomousSystem {
 public:
  NonAutonomousSystem(MultiIndex t1, std::vector<TimedStepMap> maps);

  std::size_t dimension() const { return maps_.size(); }
  const MultiIndex& t1() const { return t1_; }
  const StateSpace& space() const { return maps_.front().domain(); }
  const TimedStepMap& map(int axis) const;
  const std::vector<TimedStepMap>& maps() const { return maps_; }

  // F_a(t, x); throws kTimeOutsideDomain unless t >= t1.
  State step(int axis, const MultiIndex& t, const State& x) const;

 private:
  MultiIndex t1_;
  std::vector<TimedStepMap> maps_;
};

/// G_a(s, x) = (s + 1_a, F_a(s, x)) on {s >= t1} x M.
AutonomousSystem lift(const NonAutonomousSystem& sys);

/// Checks F_a(t + 1_b, F_b(t, x)) == F_b(t + 1_a, F_a(t, x)) at every t
/// whose unit square lies in the window [lo, hi]. Witnesses carry the time.
CompatibilityReport check_compatibility_timed(const NonAutonomousSystem& sys, const MultiIndex& lo,
                                              const MultiIndex& hi, std::span<const State> sample = {},
                                              const Limits& limits = {});

struct TimedEvaluation {
  State state;
  CompatibilityStatus ran_under = CompatibilityStatus::kCompatible;
  bool unsafe = false;
  std::size_t steps = 0;  // map applications along the canonical path
};

/// x(t) by walking the canonical path from t0, applying F_a at the current
/// lattice point.
TimedEvaluation eval_timed(const NonAutonomousSystem& sys, const CompatibilityReport& report,
                           const MultiIndex& t0, const State& x0, const MultiIndex& t,
                           const EvalOptions& options = {});
// Checks compatibility over the box [t0, t] first.
TimedEvaluation eval_timed(const NonAutonomousSystem& sys, const MultiIndex& t0, const State& x0,
                           const MultiIndex& t, const EvalOptions& options = {});

struct TimeComponentCheck {
  bool holds = true;
  std::vector<MultiIndex> time_parts;  // one per visited lattice point

  explicit operator bool() const { return holds; }
};

/// Walks the lift from (s0, x0) along `path` (which starts at t0) and
/// compares the time part at every visited t with t - t0 + s0.
TimeComponentCheck verify_time_component(const NonAutonomousSystem& sys, const MultiIndex& s0, const State& x0,
                                         const MonotonePath& path);

/// Projects a lifted trajectory to the state part. Throws
/// kTimeComponentMismatch where a time part differs from its lattice index.
Trajectory unlift_solution(const Trajectory& lifted);

/// Path walk of the lift from (t0, x0), projected.
PathIndependenceResult timed_path_independence(const NonAutonomousSystem& sys, const MultiIndex& t0,
                                               const State& x0, const MultiIndex& t,
                                               std::size_t cap = kDefaultPathCap, const Limits& limits = {});

/// Box fill of the lift from (t0, x0), projected.
EvalGrid eval_timed_box(const NonAutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                        const State& x0, const MultiIndex& corner, const EvalOptions& options = {});

}  // namespace latticerec
