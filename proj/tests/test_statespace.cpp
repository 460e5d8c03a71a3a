#include <doctest.h>

#include <random>

#include "latticerec/error.hpp"
#include "latticerec/extension.hpp"
#include "latticerec/monoid.hpp"
#include "latticerec/statespace.hpp"
#include "oracles.hpp"

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

RationalMatrix rows(std::vector<std::vector<Rational>> r) { return RationalMatrix::from_rows(r); }

State rv(std::vector<Rational> v) { return State::rat_vector(std::move(v)); }

class Doubler : public OpaqueRule {
 public:
  State apply(const State& x) const override { return State::integer(2 * x.as<Integer>()); }
  std::string describe() const override { return "double"; }
};

class EvenDoubler : public OpaqueRule {
 public:
  State apply(const State& x) const override {
    const Integer& v = x.as<Integer>();
    return State::integer(v % 2 == 0 ? Integer(2 * v) : v);
  }
  std::string describe() const override { return "double evens"; }
};

}  // namespace

TEST_CASE("state space construction") {
  CHECK(kind_of([] { (void)StateSpace::finite(0); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { (void)StateSpace::modular_line(1); }) == ErrorKind::kInvalidArgument);
  const auto f = StateSpace::finite(3);
  CHECK(f.contains(State(2)));
  CHECK_FALSE(f.contains(State(3)));
  CHECK(kind_of([&] { f.require(State(-1)); }) == ErrorKind::kOutOfDomain);
  CHECK(*f.cardinality() == 3);
  CHECK_FALSE(StateSpace::integer_line().cardinality().has_value());
}

TEST_CASE("table rules are validated") {
  CHECK(kind_of([] { (void)StepMap::table({0, 3, 1}); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { (void)StepMap::table({}); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { (void)StepMap::matrix(RationalMatrix(2, 3, Rational(0))); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("apply examples") {
  CHECK(StepMap::table({2, 0, 1}).apply(0) == State(2));
  CHECK(StepMap::affine(2, 1).apply(State::integer(3)) == State::integer(7));
  const auto a = rows({{1, 1}, {0, 1}});
  const State y = StepMap::matrix(a).apply(rv({3, 4}));
  CHECK(y == rv({7, 4}));
  CHECK(y.as<RatVector>() == oracle::mat_vec(oracle::to_grid(a), {3, 4}));
  CHECK(kind_of([] { (void)StepMap::table({1, 0}).apply(5); }) == ErrorKind::kOutOfDomain);
}

TEST_CASE("iterate examples") {
  CHECK(iterate(StepMap::affine(3, 7), 0, State::integer(11)) == State::integer(11));
  CHECK(iterate(StepMap::affine(1, 5), 4, State::integer(0)) == State::integer(20));
  CHECK(iterate(StepMap::table({1, 2, 0}), 3, 0) == State(0));
}

TEST_CASE("iterate routes") {
  CHECK(iterate_with_route(StepMap::affine(1, 5), 0, State::integer(0)).route == PowerRoute::kIdentity);
  CHECK(iterate_with_route(StepMap::affine(1, 5), 9, State::integer(0)).route == PowerRoute::kBinaryExponentiation);
  const auto r = iterate_with_route(StepMap::table({1, 2, 0}), 1000000000001ULL, 0);
  CHECK(r.route == PowerRoute::kCycleDetection);
  // 10^12 + 1 = 2 (mod 3)
  CHECK(r.state == State(2));
  const auto big = iterate_with_route(StepMap::affine(1, 1), 1ULL << 40, State::integer(0));
  CHECK(big.state == State::integer(Integer(1) << 40));
}

TEST_CASE("iterate_signed examples") {
  CHECK(iterate_signed(StepMap::affine(1, 3), -2, State::integer(10)) == State::integer(4));
  const StepMap perm = StepMap::table({2, 0, 3, 1});
  for (std::int64_t x = 0; x < 4; ++x) {
    CHECK(iterate_signed(perm, 1, iterate_signed(perm, -1, x)) == State(x));
    CHECK(iterate_signed(perm, -1, iterate_signed(perm, 1, x)) == State(x));
  }
  CHECK(kind_of([] { (void)iterate_signed(StepMap::table({0, 0}), -1, 0); }) == ErrorKind::kNotBijective);
  CHECK(kind_of([] { (void)iterate_signed(StepMap::affine(2, 0), -1, State::integer(4)); }) ==
        ErrorKind::kNotBijective);
  CHECK(iterate_signed(StepMap::modular_affine(3, 1, 7), -3, State(5)) ==
        iterate_signed(invert(StepMap::modular_affine(3, 1, 7)).map, 3, State(5)));
}

TEST_CASE("maps_equal examples") {
  const auto same = maps_equal(StepMap::table({1, 0}), StepMap::table({1, 0}));
  CHECK(same.equal);
  CHECK(same.decided == Decision::kExhaustive);

  const StepMap f = StepMap::affine(2, 1);
  const StepMap g = StepMap::affine(1, 1);
  const StepMap fg = compose(f, g);
  const StepMap gf = compose(g, f);
  const auto c = maps_equal(fg, gf);
  CHECK_FALSE(c.equal);
  CHECK(c.decided == Decision::kSymbolic);
  REQUIRE(c.witness);
  CHECK(*c.witness == State::integer(0));
  CHECK(fg.apply(*c.witness) == State::integer(3));
  CHECK(gf.apply(*c.witness) == State::integer(2));

  const StepMap a = StepMap::matrix(rows({{1, 1}, {0, 1}}));
  const StepMap b = StepMap::matrix(rows({{1, 2}, {0, 1}}));
  const auto m = maps_equal(compose(a, b), compose(b, a));
  CHECK(m.equal);
  CHECK(m.decided == Decision::kSymbolic);
  CHECK(compose(a, b).apply(rv({0, 1})) == rv({3, 1}));
}

TEST_CASE("maps_equal falls back to samples and labels them") {
  const auto line = StateSpace::integer_line();
  const StepMap d = StepMap::custom(line, std::make_shared<Doubler>());
  const StepMap e = StepMap::custom(line, std::make_shared<EvenDoubler>());
  CHECK(kind_of([&] { (void)maps_equal(d, e); }) == ErrorKind::kUndecidable);
  const std::vector<State> evens{State::integer(0), State::integer(2), State::integer(-4)};
  const auto s = maps_equal(d, e, evens);
  CHECK(s.equal);
  CHECK(s.decided == Decision::kSampled);
  const std::vector<State> odd{State::integer(2), State::integer(3)};
  const auto t = maps_equal(d, e, odd);
  CHECK_FALSE(t.equal);
  CHECK(*t.witness == State::integer(3));
}

TEST_CASE("maps_equal on a finite domain is pointwise comparison") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 6)(rng);
    std::vector<std::int64_t> f(static_cast<std::size_t>(n)), g(static_cast<std::size_t>(n));
    for (auto& v : f) v = std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = trial % 3 == 0 ? f[i] : std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
    const auto r = maps_equal(StepMap::table(f), StepMap::table(g));
    std::optional<std::int64_t> first;
    for (std::size_t i = 0; i < f.size() && !first; ++i) {
      if (f[i] != g[i]) first = static_cast<std::int64_t>(i);
    }
    CHECK(r.equal == !first.has_value());
    if (first) CHECK(*r.witness == State(*first));
  }
}

TEST_CASE("iterate is additive in the exponent") {
  std::mt19937_64 rng(11);
  const std::vector<StepMap> maps{StepMap::table({1, 2, 0, 0, 3}), StepMap::affine(-2, 3), StepMap::affine(1, -7),
                                  StepMap::modular_affine(4, 2, 13), StepMap::matrix(rows({{1, 1}, {1, 0}}))};
  const std::vector<State> xs{State(4), State::integer(5), State::integer(-1), State(9), rv({1, 0})};
  for (std::size_t i = 0; i < maps.size(); ++i) {
    for (std::uint64_t a = 0; a < 12; ++a) {
      for (std::uint64_t b = 0; b < 12; ++b) {
        CHECK(iterate(maps[i], a + b, xs[i]) == iterate(maps[i], a, iterate(maps[i], b, xs[i])));
      }
    }
    State walk = xs[i];
    for (int k = 0; k < 20; ++k) walk = maps[i].apply(walk);
    CHECK(iterate(maps[i], 20, xs[i]) == walk);
  }
}

TEST_CASE("matrix maps are linear") {
  std::mt19937_64 rng(13);
  auto r = [&] {
    Rational q(std::uniform_int_distribution<int>(-9, 9)(rng), std::uniform_int_distribution<int>(1, 4)(rng));
    q.canonicalize();
    return q;
  };
  for (int trial = 0; trial < 50; ++trial) {
    RationalMatrix a(3, 3, Rational(0));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = r();
    const StepMap m = StepMap::matrix(a);
    RatVector u{r(), r(), r()}, v{r(), r(), r()}, w;
    const Rational s = r();
    for (std::size_t i = 0; i < 3; ++i) w.push_back(s * u[i] + v[i]);
    const auto mu = m.apply(rv(u)).as<RatVector>();
    const auto mv = m.apply(rv(v)).as<RatVector>();
    const auto mw = m.apply(rv(w)).as<RatVector>();
    for (std::size_t i = 0; i < 3; ++i) CHECK(mw[i] == s * mu[i] + mv[i]);
  }
}

TEST_CASE("finite monoids and action axioms") {
  // Z_3 under addition acting on itself.
  const Monoid z3 = Monoid::finite({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 0);
  CHECK(z3.is_group());
  CHECK(check_action_axioms(z3, StateSpace::finite(3)).status == ActionAxiomCheck::Status::kVerified);
  // Non-associative table.
  CHECK(kind_of([] { (void)Monoid::finite({{0, 1}, {1, 1}, {2, 2}}, 0); }) == ErrorKind::kInvalidArgument);
  // Identity element 1 acting non-trivially violates e x = x.
  const Monoid bad = Monoid::finite({{0, 1}, {1, 1}}, 0, Monoid::Table{{1, 0}, {0, 0}});
  CHECK(check_action_axioms(bad, StateSpace::finite(2)).status == ActionAxiomCheck::Status::kViolated);
  CHECK(check_action_axioms(Monoid::integer_addition(), StateSpace::integer_line()).status ==
        ActionAxiomCheck::Status::kAssumedBuiltin);
}

TEST_CASE("translations compose inside the monoid") {
  auto add = std::make_shared<const Monoid>(Monoid::integer_addition());
  const auto line = StateSpace::integer_line();
  const StepMap t2 = StepMap::translate(add, IntVector{Integer(2)}, line);
  const StepMap t3 = StepMap::translate(add, IntVector{Integer(3)}, line);
  CHECK(compose(t2, t3).apply(State::integer(1)) == State::integer(6));
  CHECK(iterate(t2, 5, State::integer(1)) == State::integer(11));
  auto q = std::make_shared<const Monoid>(Monoid::positive_rationals());
  const StepMap half = StepMap::translate(q, Rational(1, 2), StateSpace::rational_vector(1));
  CHECK(half.apply(rv({3})) == rv({Rational(3, 2)}));
  CHECK(kind_of([&] { (void)StepMap::translate(q, Rational(-1), StateSpace::rational_vector(1)); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("exact text round trip") {
  CHECK(to_text(parse_rational("-6/4")) == "-3/2");
  CHECK(kind_of([] { (void)parse_rational("6/-4"); }) == ErrorKind::kParse);
  CHECK(to_text(parse_rational("10")) == "10");
  CHECK(kind_of([] { (void)parse_rational("1/0"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { (void)parse_integer("x"); }) == ErrorKind::kParse);
  CHECK(ModP(-1, 7).value() == 6);
  CHECK((ModP(3, 7) * ModP(3, 7).inverse()).value() == 1);
  CHECK(kind_of([] { (void)ModP(0, 7).inverse(); }) == ErrorKind::kSingular);
}
