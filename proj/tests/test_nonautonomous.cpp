#include <doctest.h>

#include "generators.hpp"
#include "latticerec/error.hpp"
#include "latticerec/nonautonomous.hpp"

using namespace latticerec;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidArgument;
}

State z(long v) { return State::integer(Integer(v)); }

TimePolynomial c1(const Rational& c) { return TimePolynomial::constant(1, c); }
TimePolynomial c2(const Rational& c) { return TimePolynomial::constant(2, c); }

// F(t, x) = x + t on Z, m = 1.
NonAutonomousSystem ramp() {
  return NonAutonomousSystem(MultiIndex{0}, {TimedStepMap::affine(c1(1), TimePolynomial::in_axis(1, 1, {0, 1}))});
}

}  // namespace

TEST_CASE("time polynomials") {
  const auto p = TimePolynomial::in_axis(2, 1, {1, 0, 3}) * TimePolynomial::in_axis(2, 2, {0, 2});
  CHECK(p.evaluate({2, 5}) == (1 + 3 * 4) * 10);
  for (const MultiIndex& t : box_points({-2, -2}, {2, 2})) {
    CHECK(p.shifted(1).evaluate(t) == p.evaluate(t + MultiIndex{1, 0}));
    CHECK(p.shifted(2).evaluate(t) == p.evaluate(t + MultiIndex{0, 1}));
  }
  CHECK(c2(5).is_constant());
  CHECK_FALSE(p.is_constant());
}

TEST_CASE("lift examples") {
  const auto inner = StateSpace::integer_line();
  const NonAutonomousSystem id(MultiIndex{0, 0}, {TimedStepMap::constant(StepMap::identity(inner)),
                                                 TimedStepMap::constant(StepMap::identity(inner))});
  const AutonomousSystem lid = lift(id);
  const State y = State::augmented({3, 4}, z(9));
  CHECK(lid.map(1).apply(y) == State::augmented({4, 4}, z(9)));
  CHECK(lid.map(2).apply(y) == State::augmented({3, 5}, z(9)));

  const AutonomousSystem lr = lift(ramp());
  CHECK(lr.map(1).apply(State::augmented({3}, z(5))) == State::augmented({4}, z(8)));

  for (const auto& c : gen::timed_systems()) {
    const AutonomousSystem l = lift(c.sys);
    const State s = State::augmented(c.t0, c.x0);
    const State ab = l.map(1).apply(l.map(2).apply(s));
    const State ba = l.map(2).apply(l.map(1).apply(s));
    CHECK(ab.time_part() == c.t0 + MultiIndex{1, 1});
    CHECK(ba.time_part() == c.t0 + MultiIndex{1, 1});
  }
  CHECK(kind_of([&] { (void)lr.map(1).apply(State::augmented({-1}, z(0))); }) == ErrorKind::kOutOfDomain);
}

TEST_CASE("check_compatibility_timed examples") {
  const auto line = StateSpace::integer_line();
  const NonAutonomousSystem fixed(MultiIndex{0, 0}, {TimedStepMap::constant(StepMap::affine(1, 1)),
                                                    TimedStepMap::constant(StepMap::affine(2, 0))});
  const auto r0 = check_compatibility_timed(fixed, {0, 0}, {3, 3});
  CHECK(r0.status == CompatibilityStatus::kIncompatible);
  CHECK(r0.witnesses.front().state == z(0));
  CHECK(r0.status == check_compatibility(AutonomousSystem({StepMap::affine(1, 1), StepMap::affine(2, 0)})).status);

  const TimePolynomial t1 = TimePolynomial::in_axis(2, 1, {0, 1});
  const TimePolynomial t2 = TimePolynomial::in_axis(2, 2, {0, 1});
  const NonAutonomousSystem sums(MultiIndex{0, 0}, {TimedStepMap::affine(c2(1), t1), TimedStepMap::affine(c2(1), t2)});
  CHECK(sums.step(1, {0, 1}, sums.step(2, {0, 0}, z(0))) == z(0));
  CHECK(sums.step(2, {1, 0}, sums.step(1, {0, 0}, z(0))) == z(0));
  CHECK(check_compatibility_timed(sums, {0, 0}, {4, 4}).status == CompatibilityStatus::kCompatible);

  const NonAutonomousSystem bad(MultiIndex{0, 0}, {TimedStepMap::affine(c2(1), t2), TimedStepMap::affine(c2(2), c2(0))});
  const auto r = check_compatibility_timed(bad, {0, 0}, {3, 3});
  CHECK(r.status == CompatibilityStatus::kIncompatible);
  const auto& w = r.witnesses.front();
  REQUIRE(w.time);
  CHECK(*w.time == MultiIndex{0, 0});
  CHECK(w.state == z(0));
  CHECK(w.lhs == z(1));
  CHECK(w.rhs == z(0));

  CHECK(kind_of([&] { (void)check_compatibility_timed(sums, {-1, 0}, {2, 2}); }) == ErrorKind::kTimeOutsideDomain);
}

TEST_CASE("eval_timed examples") {
  CHECK(eval_timed(ramp(), MultiIndex{2}, z(7), MultiIndex{2}).state == z(7));
  const auto e = eval_timed(ramp(), MultiIndex{0}, z(0), MultiIndex{4});
  CHECK(e.state == z(6));
  CHECK(e.steps == 4);

  const AutonomousSystem plain({StepMap::affine(3, 1), StepMap::affine(3, 1)});
  const NonAutonomousSystem frozen(MultiIndex{0, 0}, {TimedStepMap::constant(plain.map(1)), TimedStepMap::constant(plain.map(2))});
  for (const MultiIndex& t : box_points({1, 1}, {3, 4})) {
    CHECK(eval_timed(frozen, {1, 1}, z(2), t).state == eval_forward(plain, {1, 1}, z(2), t).state);
  }
  CHECK(kind_of([] { (void)eval_timed(ramp(), MultiIndex{-1}, z(0), MultiIndex{2}); }) == ErrorKind::kTimeOutsideDomain);
}

TEST_CASE("table rules refuse times outside their window") {
  std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> tables{{{0}, {1, 0}}, {{1}, {0, 1}}};
  const NonAutonomousSystem sys(MultiIndex{0}, {TimedStepMap::table_per_time(2, tables)});
  CHECK(sys.step(1, MultiIndex{0}, 0) == State(1));
  CHECK(kind_of([&] { (void)sys.step(1, MultiIndex{2}, 0); }) == ErrorKind::kTimeOutsideDomain);
}

TEST_CASE("verify_time_component examples") {
  const auto c = gen::timed_systems().front();
  const MultiIndex t0{0, 0};
  const auto same = verify_time_component(c.sys, c.sys.t1(), c.x0, MonotonePath{c.sys.t1(), {1, 2, 2, 1}});
  CHECK(same);
  CHECK(same.time_parts.back() == c.sys.t1() + MultiIndex{2, 2});

  const NonAutonomousSystem r2(MultiIndex{0, 0}, {TimedStepMap::affine(c2(1), c2(1)), TimedStepMap::affine(c2(1), c2(2))});
  const auto chk = verify_time_component(r2, {2, 1}, z(0), MonotonePath{t0, {1, 2, 2}});
  CHECK(chk);
  REQUIRE(chk.time_parts.size() == 4);
  CHECK(chk.time_parts[0] == MultiIndex{2, 1});
  CHECK(chk.time_parts[1] == MultiIndex{3, 1});
  CHECK(chk.time_parts[2] == MultiIndex{3, 2});
  CHECK(chk.time_parts[3] == MultiIndex{3, 3});
  for (const auto& p : enumerate_monotone_paths(t0, {1, 2})) {
    CHECK(verify_time_component(r2, {2, 1}, z(0), p).time_parts.back() == MultiIndex{3, 3});
  }
}

TEST_CASE("unlift_solution examples") {
  const AutonomousSystem l = lift(ramp());
  const auto one = unlift_solution(walk_path(l, State::augmented(MultiIndex{0}, z(0)), MonotonePath{MultiIndex{0}, {}}));
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].state == z(0));

  const auto full = unlift_solution(walk_path(l, State::augmented(MultiIndex{0}, z(0)), MonotonePath{MultiIndex{0}, {1, 1, 1, 1}}));
  std::vector<State> states;
  for (const auto& p : full.points) states.push_back(p.state);
  CHECK(states == std::vector<State>{z(0), z(0), z(1), z(3), z(6)});

  const auto shifted = walk_path(l, State::augmented(MultiIndex{1}, z(0)), MonotonePath{MultiIndex{0}, {1}});
  CHECK(kind_of([&] { (void)unlift_solution(shifted); }) == ErrorKind::kTimeComponentMismatch);
}

TEST_CASE("generated timed systems: lift, closed form and paths agree") {
  for (const auto& c : gen::timed_systems()) {
    INFO(c.name);
    const auto report = check_compatibility_timed(c.sys, c.t0, c.corner, std::vector<State>{c.x0});
    REQUIRE(report.allows_evaluation());
    const AutonomousSystem l = lift(c.sys);
    const State y0 = State::augmented(c.t0, c.x0);
    for (const MultiIndex& t : box_points(c.t0, c.corner)) {
      const State direct = eval_timed(c.sys, report, c.t0, c.x0, t).state;
      CHECK(direct == c.expected(t));
      const State lifted = eval_forward(l, report, c.t0, y0, t).state;
      CHECK(lifted.time_part() == t);
      CHECK(lifted.state_part() == direct);
    }
    const auto pi = timed_path_independence(c.sys, c.t0, c.x0, c.corner);
    CHECK(pi.agree);
    const auto grid = eval_timed_box(c.sys, report, c.t0, c.x0, c.corner);
    for (const MultiIndex& t : grid.indices()) CHECK(grid.at(t) == c.expected(t));
  }
}

TEST_CASE("time-shift covariance") {
  for (const auto& c : gen::timed_systems()) {
    INFO(c.name);
    const MultiIndex lattice0{0, 0};
    const AutonomousSystem l = lift(c.sys);
    for (const auto& path : enumerate_monotone_paths(lattice0, {1, 1})) {
      const auto chk = verify_time_component(c.sys, c.t0, c.x0, path);
      CHECK(chk);
      const auto walk = walk_path(l, State::augmented(c.t0, c.x0), path);
      const MultiIndex t = path.endpoint();
      CHECK(walk.final_state().state_part() == c.expected(t - lattice0 + c.t0));
    }
  }
}

TEST_CASE("incompatible timed systems are refused") {
  const TimePolynomial t2 = TimePolynomial::in_axis(2, 2, {0, 1});
  const NonAutonomousSystem bad(MultiIndex{0, 0}, {TimedStepMap::affine(c2(1), t2), TimedStepMap::affine(c2(2), c2(0))});
  CHECK(kind_of([&] { (void)eval_timed(bad, {0, 0}, z(0), {1, 1}); }) == ErrorKind::kIncompatible);
  EvalOptions unsafe;
  unsafe.unsafe_incompatible = true;
  const auto e = eval_timed(bad, {0, 0}, z(0), {1, 1}, unsafe);
  CHECK(e.unsafe);
  CHECK(e.ran_under == CompatibilityStatus::kIncompatible);
}
