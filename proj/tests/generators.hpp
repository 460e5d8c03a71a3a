#pragma once

// Seeded system generators shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "latticerec/autonomous.hpp"
#include "latticerec/nonautonomous.hpp"
#include "oracles.hpp"

namespace gen {

using namespace latticerec;

using Table = std::vector<std::int64_t>;

inline constexpr std::uint64_t kSeed = 20240611;

struct Case {
  std::string name;
  AutonomousSystem sys;
  State x0;
};

struct TimedCase {
  std::string name;
  NonAutonomousSystem sys;
  MultiIndex t0;
  State x0;
  MultiIndex corner;
  // Closed form of the solution through (t0, x0), built from the
  // conjugation that produced the system.
  std::function<State(const MultiIndex&)> expected;
};

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// All n^n maps {0..n-1} -> {0..n-1}, in lexicographic order.
inline std::vector<Table> all_tables(std::int64_t n) {
  std::vector<Table> out;
  Table t(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(t);
    std::size_t i = t.size();
    while (i > 0 && t[i - 1] == n - 1) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

// Unordered commuting pairs (f, g), f <= g, on every |M| <= max_n.
inline std::vector<std::pair<Table, Table>> commuting_table_pairs(std::int64_t max_n) {
  std::vector<std::pair<Table, Table>> out;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    const auto tables = all_tables(n);
    for (std::size_t i = 0; i < tables.size(); ++i) {
      for (std::size_t j = i; j < tables.size(); ++j) {
        if (oracle::tables_commute(tables[i], tables[j])) out.emplace_back(tables[i], tables[j]);
      }
    }
  }
  return out;
}

inline Table random_permutation(std::mt19937_64& rng, std::int64_t n) {
  Table p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline Table compose_tables(const Table& outer, const Table& inner) {
  Table r(inner.size());
  for (std::size_t x = 0; x < inner.size(); ++x) r[x] = outer[static_cast<std::size_t>(inner[x])];
  return r;
}

inline Table table_power(const Table& t, std::int64_t k) {
  Table r(t.size());
  std::iota(r.begin(), r.end(), 0);
  for (std::int64_t i = 0; i < k; ++i) r = compose_tables(t, r);
  return r;
}

inline Table inverse_permutation(const Table& p) {
  Table r(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) r[static_cast<std::size_t>(p[x])] = static_cast<std::int64_t>(x);
  return r;
}

inline RationalMatrix random_int_matrix(std::mt19937_64& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  RationalMatrix m(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(uniform(rng, lo, hi));
  }
  return m;
}

// c0 I + c1 B + c2 B^2: matrices of this shape commute for a fixed B.
inline RationalMatrix poly_in(const RationalMatrix& b, std::int64_t c0, std::int64_t c1, std::int64_t c2) {
  const std::size_t n = b.rows();
  const oracle::Grid g = oracle::to_grid(b);
  const oracle::Grid g2 = oracle::multiply(g, g);
  RationalMatrix r(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r(i, j) = Rational(i == j ? c0 : 0) + c1 * g[i][j] + c2 * g2[i][j];
  }
  return r;
}

inline ModMatrix to_mod(const RationalMatrix& m, std::int64_t p) {
  std::vector<ModP> data;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) data.emplace_back(mod_normalize(m(i, j).get_num(), p), p);
  }
  return ModMatrix(m.rows(), m.cols(), std::move(data));
}

inline bool grids_commute(const RationalMatrix& a, const RationalMatrix& b) {
  const auto ga = oracle::to_grid(a);
  const auto gb = oracle::to_grid(b);
  return oracle::multiply(ga, gb) == oracle::multiply(gb, ga);
}

inline State random_rat_vector(std::mt19937_64& rng, std::size_t n) {
  RatVector v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(uniform(rng, -5, 5), uniform(rng, 1, 3));
  for (auto& c : v) c.canonicalize();
  return State::rat_vector(v);
}

inline State random_int_vector(std::mt19937_64& rng, std::size_t n) {
  IntVector v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(uniform(rng, -5, 5));
  return State::int_vector(v);
}

inline State random_mod_vector(std::mt19937_64& rng, std::size_t n, std::int64_t p) {
  ModVector v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(uniform(rng, 0, p - 1), p);
  return State::mod_vector(v);
}

// 25 compatible systems with m = 2, cycling through five families.
inline std::vector<Case> compatible_symbolic(std::uint64_t seed = kSeed, int count = 25) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  for (int i = 0; i < count; ++i) {
    switch (i % 5) {
      case 0: {  // affine maps sharing a fixed point k: b = k (1 - a)
        const std::int64_t k = uniform(rng, -4, 4);
        const std::int64_t a1 = uniform(rng, -2, 3);
        const std::int64_t a2 = uniform(rng, -2, 3);
        out.push_back({"affine-fixed-point-" + std::to_string(i),
                       AutonomousSystem({StepMap::affine(a1, k * (1 - a1)), StepMap::affine(a2, k * (1 - a2))}),
                       State::integer(uniform(rng, -9, 9))});
        break;
      }
      case 1: {  // translations
        out.push_back({"translations-" + std::to_string(i),
                       AutonomousSystem({StepMap::affine(1, uniform(rng, -50, 50)), StepMap::affine(1, uniform(rng, -50, 50))}),
                       State::integer(uniform(rng, -9, 9))});
        break;
      }
      case 2: {  // modular affine with a shared fixed point
        const std::int64_t p = std::vector<std::int64_t>{5, 7, 11, 13}[static_cast<std::size_t>(uniform(rng, 0, 3))];
        const std::int64_t k = uniform(rng, 0, p - 1);
        const std::int64_t a1 = uniform(rng, 0, p - 1);
        const std::int64_t a2 = uniform(rng, 0, p - 1);
        const auto b = [&](std::int64_t a) { return mod_normalize(Integer(k * (1 - a)), p); };
        out.push_back({"modular-affine-" + std::to_string(i),
                       AutonomousSystem({StepMap::modular_affine(a1, b(a1), p), StepMap::modular_affine(a2, b(a2), p)}),
                       State(uniform(rng, 0, p - 1))});
        break;
      }
      case 3: {  // rational matrices, polynomials in one B
        const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 3));
        const RationalMatrix b = random_int_matrix(rng, n, -2, 2);
        const RationalMatrix a1 = poly_in(b, uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -1, 1));
        const RationalMatrix a2 = poly_in(b, uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -1, 1));
        out.push_back({"rational-matrix-" + std::to_string(i), AutonomousSystem({StepMap::matrix(a1), StepMap::matrix(a2)}),
                       random_rat_vector(rng, n)});
        break;
      }
      default: {  // the same over Z_p
        const std::int64_t p = 7;
        const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 3));
        const RationalMatrix b = random_int_matrix(rng, n, 0, p - 1);
        const RationalMatrix a1 = poly_in(b, uniform(rng, 0, 6), uniform(rng, 0, 6), uniform(rng, 0, 6));
        const RationalMatrix a2 = poly_in(b, uniform(rng, 0, 6), uniform(rng, 0, 6), uniform(rng, 0, 6));
        out.push_back({"modular-matrix-" + std::to_string(i),
                       AutonomousSystem({StepMap::matrix(to_mod(a1, p)), StepMap::matrix(to_mod(a2, p))}),
                       random_mod_vector(rng, n, p)});
        break;
      }
    }
  }
  return out;
}

// 25 non-commuting systems; the first is (x + 1, 2x).
inline std::vector<Case> incompatible(std::uint64_t seed = kSeed + 1, int count = 25) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  out.push_back({"x+1,2x", AutonomousSystem({StepMap::affine(1, 1), StepMap::affine(2, 0)}), State::integer(0)});
  for (int i = 1; i < count; ++i) {
    switch (i % 4) {
      case 0: {
        std::int64_t a1, b1, a2, b2;
        do {
          a1 = uniform(rng, -3, 3);
          b1 = uniform(rng, -5, 5);
          a2 = uniform(rng, -3, 3);
          b2 = uniform(rng, -5, 5);
        } while (b1 * (1 - a2) == b2 * (1 - a1));
        out.push_back({"affine-" + std::to_string(i), AutonomousSystem({StepMap::affine(a1, b1), StepMap::affine(a2, b2)}),
                       State::integer(uniform(rng, -5, 5))});
        break;
      }
      case 1: {
        const std::int64_t n = uniform(rng, 3, 5);
        Table f, g;
        do {
          f = Table(static_cast<std::size_t>(n));
          g = Table(static_cast<std::size_t>(n));
          for (auto& v : f) v = uniform(rng, 0, n - 1);
          for (auto& v : g) v = uniform(rng, 0, n - 1);
        } while (oracle::tables_commute(f, g));
        out.push_back({"tables-" + std::to_string(i), AutonomousSystem({StepMap::table(f), StepMap::table(g)}), State(0)});
        break;
      }
      case 2: {
        RationalMatrix a, b;
        do {
          a = random_int_matrix(rng, 2, -2, 2);
          b = random_int_matrix(rng, 2, -2, 2);
        } while (grids_commute(a, b));
        out.push_back({"matrices-" + std::to_string(i), AutonomousSystem({StepMap::matrix(a), StepMap::matrix(b)}),
                       random_rat_vector(rng, 2)});
        break;
      }
      default: {
        const std::int64_t p = 11;
        std::int64_t a1, b1, a2, b2;
        do {
          a1 = uniform(rng, 0, p - 1);
          b1 = uniform(rng, 0, p - 1);
          a2 = uniform(rng, 0, p - 1);
          b2 = uniform(rng, 0, p - 1);
        } while (mod_normalize(Integer(b1 * (1 - a2) - b2 * (1 - a1)), p) == 0);
        out.push_back({"modular-affine-" + std::to_string(i),
                       AutonomousSystem({StepMap::modular_affine(a1, b1, p), StepMap::modular_affine(a2, b2, p)}),
                       State(uniform(rng, 0, p - 1))});
        break;
      }
    }
  }
  return out;
}

// Powers of one random permutation sigma.
inline std::vector<Case> permutation_systems(std::uint64_t seed = kSeed + 2, int count = 10) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  for (int i = 0; i < count; ++i) {
    const std::int64_t n = uniform(rng, 3, 8);
    const Table sigma = random_permutation(rng, n);
    out.push_back({"permutation-" + std::to_string(i),
                   AutonomousSystem({StepMap::table(table_power(sigma, uniform(rng, 1, n))),
                                     StepMap::table(table_power(sigma, uniform(rng, 0, n)))}),
                   State(uniform(rng, 0, n - 1))});
  }
  return out;
}

// Invertible polynomials in one rational B.
inline std::vector<Case> invertible_matrix_systems(std::uint64_t seed = kSeed + 3, int count = 10) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  while (static_cast<int>(out.size()) < count) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 3));
    const RationalMatrix b = random_int_matrix(rng, n, -2, 2);
    const RationalMatrix a1 = poly_in(b, uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -1, 1));
    const RationalMatrix a2 = poly_in(b, uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -1, 1));
    if (sgn(a1.determinant()) == 0 || sgn(a2.determinant()) == 0) continue;
    out.push_back({"invertible-matrix-" + std::to_string(out.size()),
                   AutonomousSystem({StepMap::matrix(a1), StepMap::matrix(a2)}), random_rat_vector(rng, n)});
  }
  return out;
}

inline TimePolynomial constant_poly(const Rational& c) { return TimePolynomial::constant(2, c); }

inline TimePolynomial random_poly(std::mt19937_64& rng) {
  TimePolynomial p = TimePolynomial::in_axis(2, 1, {Rational(uniform(rng, -3, 3)), Rational(uniform(rng, -2, 2)),
                                                    Rational(uniform(rng, -1, 1))});
  p = p + TimePolynomial::in_axis(2, 2, {Rational(0), Rational(uniform(rng, -2, 2)), Rational(uniform(rng, -1, 1))});
  p = p + constant_poly(uniform(rng, -1, 1)) * TimePolynomial::in_axis(2, 1, {Rational(0), Rational(1)}) *
              TimePolynomial::in_axis(2, 2, {Rational(0), Rational(1)});
  return p;
}

inline Integer ipow(std::int64_t c, std::int64_t k) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), Integer(c).get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

// 25 compatible timed systems with m = 2, each conjugate to an autonomous
// one by a time-dependent change of variables y = phi_t(x):
//   affine:  F_a(t, x) = c_a x + Phi(t + 1_a) - c_a Phi(t)
//   tables:  F_a(t, .) = pi_{t+1_a}^-1 o g_a o pi_t
//   matrix:  F_a(t, .) = P(t+1_a)^-1 A_a P(t), P(t) = [[1, q(t)], [0, 1]]
inline std::vector<TimedCase> timed_systems(std::uint64_t seed = kSeed + 4, int count = 25) {
  std::mt19937_64 rng(seed);
  std::vector<TimedCase> out;
  for (int i = 0; i < count; ++i) {
    const MultiIndex t1{uniform(rng, -2, 2), uniform(rng, -2, 2)};
    const MultiIndex t0 = t1 + MultiIndex{uniform(rng, 0, 2), uniform(rng, 0, 2)};
    const MultiIndex corner = t0 + MultiIndex{uniform(rng, 1, 4), uniform(rng, 1, 4)};
    switch (i % 3) {
      case 0: {
        const TimePolynomial phi = random_poly(rng);
        const std::int64_t c[2] = {uniform(rng, -2, 2), uniform(rng, -2, 2)};
        std::vector<TimedStepMap> maps;
        for (int a = 1; a <= 2; ++a) {
          const TimePolynomial b = phi.shifted(a) + constant_poly(-c[a - 1]) * phi;
          maps.push_back(TimedStepMap::affine(constant_poly(c[a - 1]), b));
        }
        const Integer x0(uniform(rng, -5, 5));
        auto expected = [phi, c, t0, x0](const MultiIndex& t) {
          const Integer scale = ipow(c[0], t[0] - t0[0]) * ipow(c[1], t[1] - t0[1]);
          const Rational v = phi.evaluate(t) + Rational(scale) * (Rational(x0) - phi.evaluate(t0));
          return State::integer(v.get_num());
        };
        out.push_back({"timed-affine-" + std::to_string(i), NonAutonomousSystem(t1, std::move(maps)), t0,
                       State::integer(x0), corner, expected});
        break;
      }
      case 1: {
        const std::int64_t n = uniform(rng, 2, 4);
        const auto pairs = commuting_table_pairs(n);
        std::vector<std::pair<Table, Table>> sized;
        for (const auto& pr : pairs) {
          if (static_cast<std::int64_t>(pr.first.size()) == n) sized.push_back(pr);
        }
        const auto& [g1, g2] = sized[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(sized.size()) - 1))];
        std::map<std::vector<std::int64_t>, Table> pi;
        for (const MultiIndex& s : box_points(t1, corner + MultiIndex{1, 1})) pi[s.coords()] = random_permutation(rng, n);
        std::map<std::vector<std::int64_t>, Table> tables[2];
        const Table* g[2] = {&g1, &g2};
        for (const MultiIndex& s : box_points(t1, corner)) {
          for (int a = 0; a < 2; ++a) {
            const Table& next = pi.at(s.shifted(a + 1, 1).coords());
            tables[a][s.coords()] = compose_tables(inverse_permutation(next), compose_tables(*g[a], pi.at(s.coords())));
          }
        }
        const std::int64_t x0 = uniform(rng, 0, n - 1);
        const Table h1 = g1, h2 = g2;
        auto expected = [pi, h1, h2, t0, x0](const MultiIndex& t) {
          Table walk = compose_tables(table_power(h1, t[0] - t0[0]), table_power(h2, t[1] - t0[1]));
          const std::int64_t y = walk[static_cast<std::size_t>(pi.at(t0.coords())[static_cast<std::size_t>(x0)])];
          return State(inverse_permutation(pi.at(t.coords()))[static_cast<std::size_t>(y)]);
        };
        out.push_back({"timed-tables-" + std::to_string(i),
                       NonAutonomousSystem(t1, {TimedStepMap::table_per_time(static_cast<std::size_t>(n), tables[0]),
                                                TimedStepMap::table_per_time(static_cast<std::size_t>(n), tables[1])}),
                       t0, State(x0), corner, expected});
        break;
      }
      default: {
        const RationalMatrix b = random_int_matrix(rng, 2, -2, 2);
        const RationalMatrix as[2] = {poly_in(b, uniform(rng, -2, 2), uniform(rng, -1, 1), 0),
                                      poly_in(b, uniform(rng, -2, 2), uniform(rng, -1, 1), 0)};
        const TimePolynomial q = random_poly(rng);
        std::vector<TimedStepMap> maps;
        for (int a = 0; a < 2; ++a) {
          const TimePolynomial qs = q.shifted(a + 1);
          const auto k = [&](std::size_t r, std::size_t c) { return constant_poly(as[a](r, c)); };
          const TimePolynomial minus = constant_poly(-1);
          std::vector<TimePolynomial> e = {
              k(0, 0) + minus * qs * k(1, 0),
              k(0, 0) * q + k(0, 1) + minus * qs * (k(1, 0) * q + k(1, 1)),
              k(1, 0),
              k(1, 0) * q + k(1, 1),
          };
          maps.push_back(TimedStepMap::matrix(2, std::move(e), StateSpace::integer_vector(2)));
        }
        const State x0 = random_int_vector(rng, 2);
        const RationalMatrix a1 = as[0], a2 = as[1];
        auto expected = [q, a1, a2, t0, x0](const MultiIndex& t) {
          const auto p = [&](const MultiIndex& s, int sign) {
            return oracle::Grid{{Rational(1), Rational(sign * q.evaluate(s))}, {Rational(0), Rational(1)}};
          };
          const auto m = oracle::multiply(
              oracle::multiply(p(t, -1), oracle::multiply(oracle::naive_power(oracle::to_grid(a1), static_cast<unsigned>(t[0] - t0[0])),
                                                          oracle::naive_power(oracle::to_grid(a2), static_cast<unsigned>(t[1] - t0[1])))),
              p(t0, 1));
          const IntVector& xi = x0.as<IntVector>();
          const auto y = oracle::mat_vec(m, {Rational(xi[0]), Rational(xi[1])});
          return State::int_vector({y[0].get_num(), y[1].get_num()});
        };
        out.push_back({"timed-matrix-" + std::to_string(i), NonAutonomousSystem(t1, std::move(maps)), t0, x0, corner, expected});
        break;
      }
    }
  }
  return out;
}

}  // namespace gen
