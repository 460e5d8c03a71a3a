#pragma once

// Data-parallel kernels. Each OpenMP kernel in `parallel` has a serial
// reference in `serial` with the same contract; tests and the benchmark
// compare the two.

#include <cstdint>
#include <optional>
#include <vector>

#include "latticerec/lattice.hpp"
#include "latticerec/state.hpp"

namespace latticerec {

class StepMap;
class AutonomousSystem;
struct EvalGrid;
struct CompatibilityReport;
struct EvalOptions;

namespace serial {

/// Least enumeration index i < count with f(x_i) != g(x_i).
std::optional<std::uint64_t> first_mismatch(const StepMap& f, const StepMap& g, std::uint64_t count);

/// Endpoint state of each path, in input order.
std::vector<State> path_endpoints(const AutonomousSystem& sys, const State& x0,
                                  const std::vector<MonotonePath>& paths);

/// Every cell of [t0, corner] by the closed-form evaluator.
EvalGrid closed_form_box(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                         const State& x0, const MultiIndex& corner, const EvalOptions& options);

}  // namespace serial

namespace parallel {

std::optional<std::uint64_t> first_mismatch(const StepMap& f, const StepMap& g, std::uint64_t count);

std::vector<State> path_endpoints(const AutonomousSystem& sys, const State& x0,
                                  const std::vector<MonotonePath>& paths);

EvalGrid closed_form_box(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                         const State& x0, const MultiIndex& corner, const EvalOptions& options);

int max_threads();

}  // namespace parallel

}  // namespace latticerec
