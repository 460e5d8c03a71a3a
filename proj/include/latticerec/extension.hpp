#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "latticerec/autonomous.hpp"
#include "latticerec/statespace.hpp"

namespace latticerec {

enum class Verdict { kYes, kNo, kUndecided };
std::string_view to_string(Verdict v);

struct InjectivityVerdict {
  Verdict verdict = Verdict::kUndecided;
  std::optional<std::pair<State, State>> collision;  // distinct states, equal image
};

struct SurjectivityVerdict {
  Verdict verdict = Verdict::kUndecided;
  std::optional<State> missed;  // state with empty preimage
};

struct MapClassification {
  InjectivityVerdict injective;
  SurjectivityVerdict surjective;

  bool bijective() const {
    return injective.verdict == Verdict::kYes && surjective.verdict == Verdict::kYes;
  }
};

/// Exhaustive on enumerable finite spaces, coefficient-based on the
/// symbolic families, Undecided otherwise. Every No carries a witness.
MapClassification classify(const StepMap& map, const Limits& limits = {});

struct InverseWitness {
  enum class Kind { kTwoSided, kRight };
  Kind kind = Kind::kTwoSided;
  StepMap map;
};

/// Two-sided inverse of a bijection; otherwise a right inverse picking the
/// least preimage of each state. Throws kNotSurjective with the missed
/// state in the message, and kUndecidable when classify cannot tell.
InverseWitness invert(const StepMap& map, const Limits& limits = {});

/// The unique Z^m solution of a bijective compatible system, using signed
/// exponents. Throws kNotBijective when some map is not a bijection.
Evaluation eval_anywhere(const AutonomousSystem& sys, const CompatibilityReport& report,
                         const MultiIndex& t0, const State& x0, const MultiIndex& t,
                         const EvalOptions& options = {});
Evaluation eval_anywhere(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0,
                         const MultiIndex& t, const EvalOptions& options = {});

/// A solution defined on {t >= start} by x(start) = initial.
class ExtensionEvaluator {
 public:
  ExtensionEvaluator(std::shared_ptr<const AutonomousSystem> sys, CompatibilityReport report, MultiIndex start,
                     State initial);

  const MultiIndex& start() const { return start_; }
  const State& initial() const { return initial_; }
  State operator()(const MultiIndex& t) const;

 private:
  std::shared_ptr<const AutonomousSystem> sys_;
  CompatibilityReport report_;
  MultiIndex start_;
  State initial_;
};

/// Two solutions through the same value at t0 that differ at t0 - 1_a0,
/// built from p != q with G_a0(p) == G_a0(q) == value.
struct TwoExtensions {
  int axis = 1;
  State value;
  State p;
  State q;
  ExtensionEvaluator first;
  ExtensionEvaluator second;
};

struct UniqueExtension {
  int axis = 1;
  State preimage;  // x(t0 - 1_a0)
  ExtensionEvaluator solution;
};

struct NoExtension {
  int axis = 1;
  State value;  // x0, which has no G_a0-preimage
};

using BackwardExtension = std::variant<TwoExtensions, UniqueExtension, NoExtension>;

/// One backward step along axis a0 on a finite space.
///  - x0 outside the image of G_a0: NoExtension.
///  - G_a0 not injective: TwoExtensions, through x0 itself when x0 has two
///    preimages, else through the first collision in state order.
///  - otherwise the unique preimage.
/// Throws kInfiniteSearch on spaces that cannot be enumerated.
BackwardExtension backward_extension_pair(const AutonomousSystem& sys, const MultiIndex& t0,
                                          const State& x0, int axis, const Limits& limits = {});

}  // namespace latticerec
