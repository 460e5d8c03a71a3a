#include "latticerec/nonautonomous.hpp"

#include "latticerec/error.hpp"

namespace latticerec {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Integer require_integral(const Rational& v, const char* what, const MultiIndex& t) {
  if (!is_integral(v)) {
    fail(ErrorKind::kOutOfDomain, std::string(what) + " = " + to_text(v) + " is not an integer at t = " + t.to_string());
  }
  return v.get_num();
}

void require_time(const NonAutonomousSystem& sys, const MultiIndex& t) {
  if (t.dimension() != sys.dimension()) {
    fail(ErrorKind::kDimensionMismatch, "expected a time of dimension " + std::to_string(sys.dimension()));
  }
  if (!leq(sys.t1(), t)) {
    fail(ErrorKind::kTimeOutsideDomain, "time " + t.to_string() + " is not >= t1 = " + sys.t1().to_string());
  }
}

Decision weaker(Decision a, Decision b) {
  if (a == Decision::kSampled || b == Decision::kSampled) return Decision::kSampled;
  if (a == Decision::kSymbolic || b == Decision::kSymbolic) return Decision::kSymbolic;
  return Decision::kExhaustive;
}

class LiftedStep : public OpaqueRule {
 public:
  LiftedStep(std::shared_ptr<const NonAutonomousSystem> sys, int axis) : sys_(std::move(sys)), axis_(axis) {}

  State apply(const State& y) const override {
    const MultiIndex& s = y.time_part();
    return State::augmented(s.shifted(axis_, 1), sys_->step(axis_, s, y.state_part()));
  }

  std::string describe() const override { return "lift(" + sys_->map(axis_).describe() + ")"; }

 private:
  std::shared_ptr<const NonAutonomousSystem> sys_;
  int axis_;
};

}  // namespace

TimePolynomial TimePolynomial::constant(std::size_t m, const Rational& c) {
  TimePolynomial p(m);
  p.add_term(std::vector<unsigned>(m, 0), c);
  return p;
}

TimePolynomial TimePolynomial::in_axis(std::size_t m, int axis, const std::vector<Rational>& coeffs) {
  require_axis(axis, m);
  TimePolynomial p(m);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    std::vector<unsigned> e(m, 0);
    e[static_cast<std::size_t>(axis - 1)] = static_cast<unsigned>(k);
    p.add_term(std::move(e), coeffs[k]);
  }
  return p;
}

void TimePolynomial::add_term(std::vector<unsigned> exponents, const Rational& c) {
  if (exponents.size() != m_) fail(ErrorKind::kDimensionMismatch, "monomial dimension mismatch");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(exponents), c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

TimePolynomial TimePolynomial::operator+(const TimePolynomial& o) const {
  if (o.m_ != m_) fail(ErrorKind::kDimensionMismatch, "polynomial dimension mismatch");
  TimePolynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

TimePolynomial TimePolynomial::operator*(const TimePolynomial& o) const {
  if (o.m_ != m_) fail(ErrorKind::kDimensionMismatch, "polynomial dimension mismatch");
  TimePolynomial r(m_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<unsigned> e(m_);
      for (std::size_t i = 0; i < m_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(std::move(e), Rational(c1 * c2));
    }
  }
  return r;
}

TimePolynomial TimePolynomial::shifted(int axis) const {
  require_axis(axis, m_);
  const auto i = static_cast<std::size_t>(axis - 1);
  TimePolynomial r(m_);
  for (const auto& [e, c] : terms_) {
    // (t + 1)^k = sum_j C(k, j) t^j
    Integer binom = 1;
    for (unsigned j = 0; j <= e[i]; ++j) {
      std::vector<unsigned> f = e;
      f[i] = j;
      r.add_term(std::move(f), Rational(c * binom));
      binom = binom * (e[i] - j) / (j + 1);
    }
  }
  return r;
}

Rational TimePolynomial::evaluate(const MultiIndex& t) const {
  if (t.dimension() != m_) fail(ErrorKind::kDimensionMismatch, "polynomial evaluated at a time of wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Integer prod = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      if (e[i] == 0) continue;
      Integer p;
      mpz_pow_ui(p.get_mpz_t(), Integer(t[i]).get_mpz_t(), e[i]);
      prod *= p;
    }
    sum += c * prod;
  }
  return sum;
}

bool TimePolynomial::is_constant() const {
  for (const auto& [e, c] : terms_) {
    for (unsigned k : e) {
      if (k != 0) return false;
    }
  }
  return true;
}

std::string TimePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    std::string mono;
    for (std::size_t i = 0; i < m_; ++i) {
      if (e[i] == 0) continue;
      mono += (mono.empty() ? "" : "*") + std::string("t") + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      s += to_text(c);
    } else if (c == 1) {
      s += mono;
    } else {
      s += to_text(c) + "*" + mono;
    }
  }
  return s;
}

TimedStepMap TimedStepMap::table_per_time(std::size_t size,
                                          std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> tables) {
  if (size == 0) fail(ErrorKind::kInvalidArgument, "a timed table needs a non-empty state set");
  if (tables.empty()) fail(ErrorKind::kInvalidArgument, "a timed table needs at least one time");
  for (const auto& [t, images] : tables) {
    if (images.size() != size) {
      fail(ErrorKind::kDimensionMismatch, "table at t = " + MultiIndex(t).to_string() + " has " +
                                              std::to_string(images.size()) + " entries, expected " +
                                              std::to_string(size));
    }
    StepMap::table(images);  // validates the entries
  }
  return TimedStepMap(StateSpace::finite(static_cast<std::int64_t>(size)), TablePerTimeRule{size, std::move(tables)});
}

TimedStepMap TimedStepMap::affine(TimePolynomial a, TimePolynomial b) {
  if (a.dimension() != b.dimension()) fail(ErrorKind::kDimensionMismatch, "a(t) and b(t) differ in dimension");
  return TimedStepMap(StateSpace::integer_line(), AffineTimedRule{std::move(a), std::move(b)});
}

TimedStepMap TimedStepMap::matrix(std::size_t n, std::vector<TimePolynomial> entries, const StateSpace& domain) {
  if (entries.size() != n * n) fail(ErrorKind::kDimensionMismatch, "timed matrix needs n*n entries");
  if ((domain.kind() != StateSpace::Kind::kRationalVector && domain.kind() != StateSpace::Kind::kIntegerVector) ||
      domain.dim() != n) {
    fail(ErrorKind::kInvalidArgument, "timed matrix of size " + std::to_string(n) + " cannot act on " +
                                          domain.describe());
  }
  for (const TimePolynomial& p : entries) {
    if (p.dimension() != entries.front().dimension()) {
      fail(ErrorKind::kDimensionMismatch, "timed matrix entries differ in dimension");
    }
  }
  return TimedStepMap(domain, MatrixTimedRule{n, std::move(entries)});
}

TimedStepMap TimedStepMap::constant(StepMap map) {
  StateSpace domain = map.domain();
  return TimedStepMap(std::move(domain), ConstantRule{std::move(map)});
}

StepMap TimedStepMap::at(const MultiIndex& t) const {
  return std::visit(
      Overloaded{
          [&](const TablePerTimeRule& r) {
            auto it = r.tables.find(t.coords());
            if (it == r.tables.end()) {
              fail(ErrorKind::kTimeOutsideDomain, "timed table is undefined at t = " + t.to_string());
            }
            return StepMap::table(it->second);
          },
          [&](const AffineTimedRule& r) {
            return StepMap::affine(require_integral(r.a.evaluate(t), "a(t)", t),
                                   require_integral(r.b.evaluate(t), "b(t)", t));
          },
          [&](const MatrixTimedRule& r) {
            std::vector<Rational> data;
            data.reserve(r.entries.size());
            for (const TimePolynomial& p : r.entries) data.push_back(p.evaluate(t));
            return StepMap::matrix(RationalMatrix(r.n, r.n, std::move(data)), domain_);
          },
          [&](const ConstantRule& r) { return r.map; },
      },
      rule_);
}

std::string TimedStepMap::describe() const {
  return std::visit(
      Overloaded{
          [](const TablePerTimeRule& r) {
            return "table_per_time(" + std::to_string(r.size) + ", " + std::to_string(r.tables.size()) + " times)";
          },
          [](const AffineTimedRule& r) { return "affine_timed(" + r.a.to_string() + ", " + r.b.to_string() + ")"; },
          [](const MatrixTimedRule& r) {
            std::string s = "matrix_timed[";
            for (std::size_t i = 0; i < r.entries.size(); ++i) s += (i ? "; " : "") + r.entries[i].to_string();
            return s + "]";
          },
          [](const ConstantRule& r) { return r.map.describe(); },
      },
      rule_);
}

NonAutonomousSystem::NonAutonomousSystem(MultiIndex t1, std::vector<TimedStepMap> maps)
    : t1_(std::move(t1)), maps_(std::move(maps)) {
  if (maps_.empty()) fail(ErrorKind::kDimensionMismatch, "a system needs at least one step map");
  const std::size_t m = maps_.size();
  if (t1_.dimension() != m) {
    fail(ErrorKind::kDimensionMismatch, "t1 has dimension " + std::to_string(t1_.dimension()) + " but there are " +
                                            std::to_string(m) + " maps");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (maps_[i].domain() != maps_[0].domain()) {
      fail(ErrorKind::kInvalidArgument, "step map " + std::to_string(i + 1) + " acts on " +
                                            maps_[i].domain().describe() + ", expected " +
                                            maps_[0].domain().describe());
    }
    const auto bad = [&] {
      fail(ErrorKind::kDimensionMismatch, "step map " + std::to_string(i + 1) + " is indexed by the wrong dimension");
    };
    std::visit(Overloaded{
                   [&](const TablePerTimeRule& r) {
                     for (const auto& [t, _] : r.tables) {
                       if (t.size() != m) bad();
                     }
                   },
                   [&](const AffineTimedRule& r) {
                     if (r.a.dimension() != m) bad();
                   },
                   [&](const MatrixTimedRule& r) {
                     if (r.entries.front().dimension() != m) bad();
                   },
                   [](const ConstantRule&) {},
               },
               maps_[i].rule());
  }
}

const TimedStepMap& NonAutonomousSystem::map(int axis) const {
  require_axis(axis, maps_.size());
  return maps_[static_cast<std::size_t>(axis - 1)];
}

State NonAutonomousSystem::step(int axis, const MultiIndex& t, const State& x) const {
  require_time(*this, t);
  return map(axis).apply(t, x);
}

AutonomousSystem lift(const NonAutonomousSystem& sys) {
  auto shared = std::make_shared<const NonAutonomousSystem>(sys);
  const StateSpace space = StateSpace::augmented(sys.t1(), sys.space());
  std::vector<StepMap> maps;
  for (int a = 1; a <= static_cast<int>(sys.dimension()); ++a) {
    maps.push_back(StepMap::custom(space, std::make_shared<const LiftedStep>(shared, a)));
  }
  return AutonomousSystem(std::move(maps));
}

CompatibilityReport check_compatibility_timed(const NonAutonomousSystem& sys, const MultiIndex& lo,
                                              const MultiIndex& hi, std::span<const State> sample,
                                              const Limits& limits) {
  require_time(sys, lo);
  require_time(sys, hi);
  if (!leq(lo, hi)) fail(ErrorKind::kNotComparable, "window " + lo.to_string() + ".." + hi.to_string() + " is empty");
  if (box_volume(lo, hi, limits.volume_cap + 1) > limits.volume_cap) {
    fail(ErrorKind::kCapExceeded, "window exceeds the volume cap " + std::to_string(limits.volume_cap));
  }
  CompatibilityReport report;
  report.window = std::make_pair(lo, hi);
  const int m = static_cast<int>(sys.dimension());
  bool any_sampled = false;
  for (int a = 1; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      const TimedStepMap& fa = sys.map(a);
      const TimedStepMap& fb = sys.map(b);
      PairDecision pair{a, b, true, Decision::kExhaustive};
      const MultiIndex upper = hi.shifted(a, -1).shifted(b, -1);
      if (leq(lo, upper)) {
        for (const MultiIndex& t : box_points(lo, upper)) {
          const StepMap lhs = compose(fa.at(t.shifted(b, 1)), fb.at(t));
          const StepMap rhs = compose(fb.at(t.shifted(a, 1)), fa.at(t));
          MapComparison cmp = maps_equal(lhs, rhs, sample, limits);
          pair.decided = weaker(pair.decided, cmp.decided);
          if (!cmp.equal) {
            const State& x = *cmp.witness;
            report.witnesses.push_back({a, b, x, t, lhs.apply(x), rhs.apply(x)});
            pair.commute = false;
            break;
          }
        }
      }
      ++report.checked_pairs;
      if (pair.commute && pair.decided == Decision::kSampled) any_sampled = true;
      report.pairs.push_back(pair);
    }
  }
  if (!report.witnesses.empty()) {
    report.status = CompatibilityStatus::kIncompatible;
  } else if (any_sampled) {
    report.status = CompatibilityStatus::kSampledCompatible;
  }
  return report;
}

TimedEvaluation eval_timed(const NonAutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                           const State& x0, const MultiIndex& t, const EvalOptions& options) {
  require_time(sys, t0);
  require_same_dimension(t0, t);
  if (!leq(t0, t)) fail(ErrorKind::kNotComparable, t.to_string() + " is not >= " + t0.to_string());
  if (!report.allows_evaluation() && !options.unsafe_incompatible) {
    const CommutationWitness& w = report.witnesses.front();
    fail(ErrorKind::kIncompatible, "maps " + std::to_string(w.alpha) + " and " + std::to_string(w.beta) +
                                       " do not commute at state " + w.state.to_string() +
                                       (w.time ? " and time " + w.time->to_string() : std::string()));
  }
  sys.space().require(x0);
  TimedEvaluation out{x0, report.status, !report.allows_evaluation(), 0};
  MultiIndex s = t0;
  for (int a : canonical_path(t0, t).steps) {
    out.state = sys.map(a).apply(s, out.state);
    s = s.shifted(a, 1);
    ++out.steps;
  }
  return out;
}

TimedEvaluation eval_timed(const NonAutonomousSystem& sys, const MultiIndex& t0, const State& x0,
                           const MultiIndex& t, const EvalOptions& options) {
  const State sample[] = {x0};
  return eval_timed(sys, check_compatibility_timed(sys, t0, t, sample, options.limits), t0, x0, t, options);
}

TimeComponentCheck verify_time_component(const NonAutonomousSystem& sys, const MultiIndex& s0, const State& x0,
                                         const MonotonePath& path) {
  require_time(sys, s0);
  const Trajectory tr = walk_path(lift(sys), State::augmented(s0, x0), path);
  TimeComponentCheck out;
  for (const TrajectoryPoint& p : tr.points) {
    const MultiIndex& s = p.state.time_part();
    out.time_parts.push_back(s);
    if (s != p.index - path.start + s0) out.holds = false;
  }
  return out;
}

Trajectory unlift_solution(const Trajectory& lifted) {
  Trajectory out;
  out.points.reserve(lifted.points.size());
  for (const TrajectoryPoint& p : lifted.points) {
    if (!p.state.holds<AugmentedState>()) {
      fail(ErrorKind::kTimeComponentMismatch, "state at " + p.index.to_string() + " carries no time component");
    }
    if (p.state.time_part() != p.index) {
      fail(ErrorKind::kTimeComponentMismatch, "time component " + p.state.time_part().to_string() +
                                                  " at lattice point " + p.index.to_string());
    }
    out.points.push_back({p.index, p.state.state_part()});
  }
  return out;
}

PathIndependenceResult timed_path_independence(const NonAutonomousSystem& sys, const MultiIndex& t0,
                                               const State& x0, const MultiIndex& t, std::size_t cap,
                                               const Limits& limits) {
  require_time(sys, t0);
  PathIndependenceResult r = path_independence_check(lift(sys), t0, State::augmented(t0, x0), t, cap, limits);
  r.formula_value = State(r.formula_value.state_part());
  for (EndpointGroup& g : r.groups) g.value = State(g.value.state_part());
  return r;
}

EvalGrid eval_timed_box(const NonAutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                        const State& x0, const MultiIndex& corner, const EvalOptions& options) {
  require_time(sys, t0);
  EvalGrid grid = eval_box(lift(sys), report, t0, State::augmented(t0, x0), corner, options);
  for (State& c : grid.cells) c = State(c.state_part());
  return grid;
}

}  // namespace latticerec
