#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latticerec/lattice.hpp"
#include "latticerec/statespace.hpp"

namespace latticerec {

/// The family G_1..G_m of step maps over one shared state space, driving
/// x(t + 1_a) = G_a(x(t)).
class AutonomousSystem {
 public:
  explicit AutonomousSystem(std::vector<StepMap> maps);

  std::size_t dimension() const { return maps_.size(); }
  const StateSpace& space() const { return maps_.front().domain(); }
  // 1-based axis.
  const StepMap& map(int axis) const;
  const std::vector<StepMap>& maps() const { return maps_; }

 private:
  std::vector<StepMap> maps_;
};

enum class CompatibilityStatus { kCompatible, kIncompatible, kSampledCompatible };
std::string_view to_string(CompatibilityStatus status);

/// A state (and, for timed systems, a time) where the two ways round the
/// (alpha, beta) square disagree: lhs = G_a(G_b(x)), rhs = G_b(G_a(x)).
struct CommutationWitness {
  int alpha = 1;
  int beta = 2;
  State state;
  std::optional<MultiIndex> time;
  State lhs;
  State rhs;
};

struct PairDecision {
  int alpha = 1;
  int beta = 2;
  bool commute = true;
  Decision decided = Decision::kExhaustive;
};

struct CompatibilityReport {
  CompatibilityStatus status = CompatibilityStatus::kCompatible;
  std::vector<CommutationWitness> witnesses;
  std::size_t checked_pairs = 0;
  std::vector<PairDecision> pairs;
  // Set by the timed checker: the lattice box whose squares were checked.
  std::optional<std::pair<MultiIndex, MultiIndex>> window;

  // Weakest decision method used by any pair (sampled < symbolic < exhaustive).
  Decision decided() const;
  bool allows_evaluation() const { return status != CompatibilityStatus::kIncompatible; }
};

/// Checks G_a o G_b == G_b o G_a for every pair a < b. Witnesses are the
/// first violating state per pair in canonical state order.
CompatibilityReport check_compatibility(const AutonomousSystem& sys, std::span<const State> sample = {},
                                        const Limits& limits = {});

struct EvalOptions {
  bool unsafe_incompatible = false;
  Limits limits;
};

struct Evaluation {
  State state;
  CompatibilityStatus ran_under = CompatibilityStatus::kCompatible;
  bool unsafe = false;
  std::vector<PowerRoute> routes;  // one per axis, axis 1 first
};

/// x(t) = G_1^(d1) o ... o G_m^(dm)(x0) with d = t - t0 >= 0; G_m's power
/// is applied first. Refuses incompatible systems unless the options say
/// otherwise.
Evaluation eval_forward(const AutonomousSystem& sys, const CompatibilityReport& report,
                        const MultiIndex& t0, const State& x0, const MultiIndex& t,
                        const EvalOptions& options = {});
Evaluation eval_forward(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0,
                        const MultiIndex& t, const EvalOptions& options = {});

struct TrajectoryPoint {
  MultiIndex index;
  State state;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;

  const State& final_state() const { return points.back().state; }
};

/// Applies the labelled map once per step; valid for any system,
/// compatible or not.
Trajectory walk_path(const AutonomousSystem& sys, const State& x0, const MonotonePath& path);

struct EndpointGroup {
  State value;
  std::size_t count = 0;
  MonotonePath exemplar;
};

struct PathIndependenceResult {
  bool agree = true;
  std::size_t path_count = 0;
  State formula_value;  // closed form in the fixed composition order
  std::vector<EndpointGroup> groups;  // distinct endpoints, first-seen order
};

/// Walks every monotone path t0 -> t and compares all endpoints with each
/// other and with the closed form.
PathIndependenceResult path_independence_check(const AutonomousSystem& sys, const MultiIndex& t0,
                                               const State& x0, const MultiIndex& t,
                                               std::size_t cap = kDefaultPathCap,
                                               const Limits& limits = {});

/// States over the box [lo, hi], row-major with axis m varying fastest.
struct EvalGrid {
  MultiIndex lo;
  MultiIndex hi;
  std::vector<State> cells;

  std::size_t offset(const MultiIndex& t) const;
  const State& at(const MultiIndex& t) const { return cells.at(offset(t)); }
  std::vector<MultiIndex> indices() const { return box_points(lo, hi); }
};

/// Dynamic-programming fill of [t0, corner]: every cell is one map
/// application away from an earlier cell. The 2^m box corners are then
/// re-checked against eval_forward; a mismatch throws kIncompatible.
EvalGrid eval_box(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                  const State& x0, const MultiIndex& corner, const EvalOptions& options = {});
EvalGrid eval_box(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0,
                  const MultiIndex& corner, const EvalOptions& options = {});

}  // namespace latticerec
