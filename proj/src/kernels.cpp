#include "latticerec/kernels.hpp"

#include <omp.h>

#include <exception>

#include "latticerec/autonomous.hpp"
#include "latticerec/error.hpp"

namespace latticerec {

namespace {

// OpenMP regions must not leak exceptions; the first one is rethrown after
// the loop.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) {
    try {
      fn();
    } catch (...) {
#pragma omp critical(latticerec_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

State walk_endpoint(const AutonomousSystem& sys, const State& x0, const MonotonePath& p) {
  State cur = x0;
  for (int a : p.steps) cur = sys.map(a).apply(cur);
  return cur;
}

void require_box(const AutonomousSystem& sys, const MultiIndex& t0, const MultiIndex& corner,
                 const Limits& limits, std::uint64_t& volume) {
  if (t0.dimension() != sys.dimension()) fail(ErrorKind::kDimensionMismatch, "box dimension mismatch");
  volume = box_volume(t0, corner, limits.volume_cap + 1);
  if (volume > limits.volume_cap) {
    fail(ErrorKind::kCapExceeded, "box volume exceeds the cap " + std::to_string(limits.volume_cap));
  }
}

}  // namespace

namespace serial {

std::optional<std::uint64_t> first_mismatch(const StepMap& f, const StepMap& g, std::uint64_t count) {
  const StateSpace& space = f.domain();
  for (std::uint64_t i = 0; i < count; ++i) {
    const State x = space.state_at(i);
    if (f.apply(x) != g.apply(x)) return i;
  }
  return std::nullopt;
}

std::vector<State> path_endpoints(const AutonomousSystem& sys, const State& x0,
                                  const std::vector<MonotonePath>& paths) {
  std::vector<State> out;
  out.reserve(paths.size());
  for (const MonotonePath& p : paths) out.push_back(walk_endpoint(sys, x0, p));
  return out;
}

EvalGrid closed_form_box(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                         const State& x0, const MultiIndex& corner, const EvalOptions& opts) {
  std::uint64_t volume = 0;
  require_box(sys, t0, corner, opts.limits, volume);
  EvalGrid grid{t0, corner, {}};
  grid.cells.reserve(volume);
  for (const MultiIndex& t : box_points(t0, corner)) {
    grid.cells.push_back(eval_forward(sys, report, t0, x0, t, opts).state);
  }
  return grid;
}

}  // namespace serial

namespace parallel {

int max_threads() { return omp_get_max_threads(); }

std::optional<std::uint64_t> first_mismatch(const StepMap& f, const StepMap& g, std::uint64_t count) {
  const StateSpace& space = f.domain();
  std::uint64_t best = count;
  ExceptionSlot slot;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) reduction(min : best)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    if (u >= best) continue;
    slot.run([&] {
      const State x = space.state_at(u);
      if (f.apply(x) != g.apply(x)) best = u;
    });
  }
  slot.rethrow();
  if (best == count) return std::nullopt;
  return best;
}

std::vector<State> path_endpoints(const AutonomousSystem& sys, const State& x0,
                                  const std::vector<MonotonePath>& paths) {
  std::vector<State> out(paths.size());
  ExceptionSlot slot;
  const auto n = static_cast<std::int64_t>(paths.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    slot.run([&] { out[static_cast<std::size_t>(i)] = walk_endpoint(sys, x0, paths[static_cast<std::size_t>(i)]); });
  }
  slot.rethrow();
  return out;
}

EvalGrid closed_form_box(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                         const State& x0, const MultiIndex& corner, const EvalOptions& opts) {
  std::uint64_t volume = 0;
  require_box(sys, t0, corner, opts.limits, volume);
  const std::vector<MultiIndex> points = box_points(t0, corner);
  EvalGrid grid{t0, corner, std::vector<State>(points.size())};
  ExceptionSlot slot;
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    slot.run([&] { grid.cells[k] = eval_forward(sys, report, t0, x0, points[k], opts).state; });
  }
  slot.rethrow();
  return grid;
}

}  // namespace parallel

}  // namespace latticerec
