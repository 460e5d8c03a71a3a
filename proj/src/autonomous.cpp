#include "latticerec/autonomous.hpp"

#include "latticerec/error.hpp"
#include "latticerec/kernels.hpp"

namespace latticerec {

AutonomousSystem::AutonomousSystem(std::vector<StepMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) fail(ErrorKind::kDimensionMismatch, "a system needs at least one step map");
  for (std::size_t i = 1; i < maps_.size(); ++i) {
    if (maps_[i].domain() != maps_[0].domain()) {
      fail(ErrorKind::kInvalidArgument, "step map " + std::to_string(i + 1) + " acts on " +
                                            maps_[i].domain().describe() + ", expected " +
                                            maps_[0].domain().describe());
    }
  }
}

const StepMap& AutonomousSystem::map(int axis) const {
  require_axis(axis, maps_.size());
  return maps_[static_cast<std::size_t>(axis - 1)];
}

std::string_view to_string(CompatibilityStatus status) {
  switch (status) {
    case CompatibilityStatus::kCompatible: return "compatible";
    case CompatibilityStatus::kIncompatible: return "incompatible";
    case CompatibilityStatus::kSampledCompatible: return "sampled-compatible";
  }
  return "?";
}

Decision CompatibilityReport::decided() const {
  Decision weakest = Decision::kExhaustive;
  for (const PairDecision& p : pairs) {
    if (p.decided == Decision::kSampled) return Decision::kSampled;
    if (p.decided == Decision::kSymbolic) weakest = Decision::kSymbolic;
  }
  return weakest;
}

CompatibilityReport check_compatibility(const AutonomousSystem& sys, std::span<const State> sample,
                                        const Limits& limits) {
  CompatibilityReport report;
  const int m = static_cast<int>(sys.dimension());
  bool any_sampled = false;
  for (int a = 1; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      const StepMap& ga = sys.map(a);
      const StepMap& gb = sys.map(b);
      MapComparison cmp = maps_equal(compose(ga, gb), compose(gb, ga), sample, limits);
      ++report.checked_pairs;
      report.pairs.push_back({a, b, cmp.equal, cmp.decided});
      if (!cmp.equal) {
        const State& x = *cmp.witness;
        report.witnesses.push_back({a, b, x, std::nullopt, ga.apply(gb.apply(x)), gb.apply(ga.apply(x))});
      } else if (cmp.decided == Decision::kSampled) {
        any_sampled = true;
      }
    }
  }
  if (!report.witnesses.empty()) {
    report.status = CompatibilityStatus::kIncompatible;
  } else if (any_sampled) {
    report.status = CompatibilityStatus::kSampledCompatible;
  }
  return report;
}

namespace {

void require_forward(const MultiIndex& t0, const MultiIndex& t, std::size_t m) {
  if (t0.dimension() != m || t.dimension() != m) {
    fail(ErrorKind::kDimensionMismatch, "expected multi-indices of dimension " + std::to_string(m));
  }
  if (!leq(t0, t)) fail(ErrorKind::kNotComparable, t.to_string() + " is not >= " + t0.to_string());
}

void require_evaluable(const CompatibilityReport& report, const EvalOptions& options) {
  if (!report.allows_evaluation() && !options.unsafe_incompatible) {
    const auto& w = report.witnesses.front();
    fail(ErrorKind::kIncompatible, "maps " + std::to_string(w.alpha) + " and " + std::to_string(w.beta) +
                                       " do not commute at state " + w.state.to_string());
  }
}

}  // namespace

Evaluation eval_forward(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                        const State& x0, const MultiIndex& t, const EvalOptions& options) {
  require_forward(t0, t, sys.dimension());
  require_evaluable(report, options);
  sys.space().require(x0);
  const MultiIndex delta = t - t0;
  Evaluation out{x0, report.status, !report.allows_evaluation(), {}};
  out.routes.resize(sys.dimension(), PowerRoute::kIdentity);
  for (int a = static_cast<int>(sys.dimension()); a >= 1; --a) {
    auto step = iterate_with_route(sys.map(a), static_cast<std::uint64_t>(delta.coord(a)), out.state,
                                   options.limits);
    out.state = std::move(step.state);
    out.routes[static_cast<std::size_t>(a - 1)] = step.route;
  }
  return out;
}

Evaluation eval_forward(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0, const MultiIndex& t,
                        const EvalOptions& options) {
  return eval_forward(sys, check_compatibility(sys, {}, options.limits), t0, x0, t, options);
}

Trajectory walk_path(const AutonomousSystem& sys, const State& x0, const MonotonePath& path) {
  if (path.start.dimension() != sys.dimension()) {
    fail(ErrorKind::kDimensionMismatch, "path dimension does not match the system");
  }
  sys.space().require(x0);
  Trajectory tr;
  tr.points.reserve(path.steps.size() + 1);
  tr.points.push_back({path.start, x0});
  for (int a : path.steps) {
    const TrajectoryPoint& last = tr.points.back();
    tr.points.push_back({last.index.shifted(a, 1), sys.map(a).apply(last.state)});
  }
  return tr;
}

PathIndependenceResult path_independence_check(const AutonomousSystem& sys, const MultiIndex& t0,
                                               const State& x0, const MultiIndex& t, std::size_t cap,
                                               const Limits& limits) {
  require_forward(t0, t, sys.dimension());
  std::vector<MonotonePath> paths = enumerate_monotone_paths(t0, t, cap);
  std::vector<State> ends = parallel::path_endpoints(sys, x0, paths);

  PathIndependenceResult out;
  out.path_count = paths.size();
  CompatibilityReport unchecked;  // the closed form is wanted even when incompatible
  unchecked.status = CompatibilityStatus::kSampledCompatible;
  EvalOptions opts;
  opts.limits = limits;
  out.formula_value = eval_forward(sys, unchecked, t0, x0, t, opts).state;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool placed = false;
    for (EndpointGroup& g : out.groups) {
      if (g.value == ends[i]) {
        ++g.count;
        placed = true;
        break;
      }
    }
    if (!placed) out.groups.push_back({ends[i], 1, paths[i]});
  }
  out.agree = out.groups.size() == 1 && out.groups.front().value == out.formula_value;
  return out;
}

std::size_t EvalGrid::offset(const MultiIndex& t) const {
  require_same_dimension(lo, t);
  if (!leq(lo, t) || !leq(t, hi)) fail(ErrorKind::kOutOfDomain, t.to_string() + " is outside the grid");
  std::size_t off = 0;
  for (std::size_t i = 0; i < lo.dimension(); ++i) {
    off = off * static_cast<std::size_t>(hi[i] - lo[i] + 1) + static_cast<std::size_t>(t[i] - lo[i]);
  }
  return off;
}

EvalGrid eval_box(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                  const State& x0, const MultiIndex& corner, const EvalOptions& options) {
  require_forward(t0, corner, sys.dimension());
  require_evaluable(report, options);
  sys.space().require(x0);
  const std::uint64_t volume = box_volume(t0, corner, options.limits.volume_cap + 1);
  if (volume > options.limits.volume_cap) {
    fail(ErrorKind::kCapExceeded, "box " + t0.to_string() + ".." + corner.to_string() + " exceeds the volume cap " +
                                      std::to_string(options.limits.volume_cap));
  }
  EvalGrid grid{t0, corner, {}};
  grid.cells.reserve(volume);
  const std::size_t m = sys.dimension();
  // Row-major: the predecessor along the last advanced axis is already filled.
  for (const MultiIndex& t : box_points(t0, corner)) {
    int axis = 0;
    for (std::size_t i = m; i > 0; --i) {
      if (t[i - 1] > t0[i - 1]) {
        axis = static_cast<int>(i);
        break;
      }
    }
    if (axis == 0) {
      grid.cells.push_back(x0);
    } else {
      grid.cells.push_back(sys.map(axis).apply(grid.at(t.shifted(axis, -1))));
    }
  }
  // Spot validation on the box corners.
  if (!report.allows_evaluation()) return grid;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::int64_t> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = (mask >> i) & 1U ? corner[i] : t0[i];
    MultiIndex t(c);
    State closed = eval_forward(sys, report, t0, x0, t, options).state;
    if (closed != grid.at(t)) {
      fail(ErrorKind::kIncompatible, "grid value at " + t.to_string() + " depends on the path: " +
                                         grid.at(t).to_string() + " vs closed form " + closed.to_string());
    }
  }
  return grid;
}

EvalGrid eval_box(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0, const MultiIndex& corner,
                  const EvalOptions& options) {
  return eval_box(sys, check_compatibility(sys, {}, options.limits), t0, x0, corner, options);
}

}  // namespace latticerec
