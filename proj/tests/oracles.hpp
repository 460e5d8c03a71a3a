#pragma once

// Reference computations written without the library's algorithms: plain
// loops, exact factorials and depth-first walks.

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "latticerec/autonomous.hpp"
#include "latticerec/lattice.hpp"

namespace oracle {

using latticerec::Integer;
using latticerec::Rational;

using Grid = std::vector<std::vector<Rational>>;

// (sum d)! / prod(d!) with exact factorials.
inline Integer multinomial(const std::vector<std::int64_t>& deltas) {
  unsigned long total = 0;
  for (auto d : deltas) total += static_cast<unsigned long>(d);
  Integer num;
  mpz_fac_ui(num.get_mpz_t(), total);
  for (auto d : deltas) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(d));
    num /= f;
  }
  return num;
}

inline Grid identity(std::size_t n) {
  Grid r(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}

inline Grid multiply(const Grid& a, const Grid& b) {
  const std::size_t n = a.size();
  const std::size_t p = b.size();
  const std::size_t q = b.front().size();
  Grid r(n, std::vector<Rational>(q, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < p; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  }
  return r;
}

// k repeated multiplications.
inline Grid naive_power(const Grid& a, unsigned k) {
  Grid r = identity(a.size());
  for (unsigned i = 0; i < k; ++i) r = multiply(r, a);
  return r;
}

inline Rational dot(const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

inline std::vector<Rational> mat_vec(const Grid& a, const std::vector<Rational>& x) {
  std::vector<Rational> y;
  for (const auto& row : a) y.push_back(dot(row, x));
  return y;
}

inline Grid to_grid(const latticerec::RationalMatrix& m) {
  Grid g(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  }
  return g;
}

// Every monotone path from t0 to t by depth-first search over unit steps;
// calls `visit` with each endpoint state. Uses only StepMap::apply.
inline void dfs_endpoints(const latticerec::AutonomousSystem& sys, const latticerec::State& x,
                          std::vector<std::int64_t> remaining,
                          const std::function<void(const latticerec::State&)>& visit) {
  bool done = true;
  for (std::size_t a = 0; a < remaining.size(); ++a) {
    if (remaining[a] == 0) continue;
    done = false;
    --remaining[a];
    dfs_endpoints(sys, sys.maps()[a].apply(x), remaining, visit);
    ++remaining[a];
  }
  if (done) visit(x);
}

inline bool tables_commute(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& g) {
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[static_cast<std::size_t>(g[x])] != g[static_cast<std::size_t>(f[x])]) return false;
  }
  return true;
}

// x + sum d_a a_a by repeated single additions.
inline Integer additive_walk(const std::vector<Integer>& a, const std::vector<std::int64_t>& deltas, Integer x) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::int64_t k = 0; k < deltas[i]; ++k) x += a[i];
  }
  return x;
}

}  // namespace oracle
