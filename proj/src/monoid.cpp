#include "latticerec/monoid.hpp"

#include "latticerec/error.hpp"

namespace latticerec {

Monoid Monoid::integer_addition(std::size_t dim) {
  if (dim < 1) fail(ErrorKind::kInvalidArgument, "additive monoid dimension must be at least 1");
  Monoid m;
  m.kind_ = Kind::kIntegerAddition;
  m.dim_ = dim;
  return m;
}

Monoid Monoid::positive_rationals() {
  Monoid m;
  m.kind_ = Kind::kPositiveRationals;
  return m;
}

Monoid Monoid::matrices(std::size_t n, std::int64_t modulus) {
  if (n < 1) fail(ErrorKind::kInvalidArgument, "matrix size must be at least 1");
  if (modulus != 0 && !is_prime(modulus)) {
    fail(ErrorKind::kInvalidArgument, "matrix monoid modulus must be prime");
  }
  Monoid m;
  m.kind_ = Kind::kMatrices;
  m.dim_ = n;
  m.modulus_ = modulus;
  return m;
}

Monoid Monoid::finite(Table table, std::int64_t identity, std::optional<Table> action) {
  const auto n = static_cast<std::int64_t>(table.size());
  if (n < 1) fail(ErrorKind::kInvalidArgument, "finite monoid needs at least one element");
  for (const auto& row : table) {
    if (static_cast<std::int64_t>(row.size()) != n) {
      fail(ErrorKind::kInvalidArgument, "monoid table must be square");
    }
    for (std::int64_t v : row) {
      if (v < 0 || v >= n) fail(ErrorKind::kInvalidArgument, "monoid table entry out of range");
    }
  }
  if (identity < 0 || identity >= n) fail(ErrorKind::kInvalidArgument, "monoid identity out of range");
  for (std::int64_t a = 0; a < n; ++a) {
    if (table[identity][a] != a || table[a][identity] != a) {
      fail(ErrorKind::kInvalidArgument,
           "element " + std::to_string(identity) + " is not a two-sided identity");
    }
  }
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      for (std::int64_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          fail(ErrorKind::kInvalidArgument, "monoid table is not associative at (" +
                                                std::to_string(a) + "," + std::to_string(b) + "," +
                                                std::to_string(c) + ")");
        }
      }
    }
  }
  if (action) {
    if (static_cast<std::int64_t>(action->size()) != n) {
      fail(ErrorKind::kInvalidArgument, "action table needs one row per monoid element");
    }
    const std::size_t k = action->front().size();
    if (k == 0) fail(ErrorKind::kInvalidArgument, "action table rows must be nonempty");
    for (const auto& row : *action) {
      if (row.size() != k) fail(ErrorKind::kInvalidArgument, "action table rows differ in length");
      for (std::int64_t v : row) {
        if (v < 0 || v >= static_cast<std::int64_t>(k)) {
          fail(ErrorKind::kInvalidArgument, "action table entry out of range");
        }
      }
    }
  }
  Monoid m;
  m.kind_ = Kind::kFinite;
  m.identity_ = identity;
  m.table_ = std::move(table);
  m.action_ = std::move(action);
  return m;
}

bool Monoid::is_group() const {
  if (kind_ == Kind::kIntegerAddition || kind_ == Kind::kPositiveRationals) return true;
  if (kind_ == Kind::kMatrices) return false;
  for (std::int64_t a = 0; a < order(); ++a) {
    if (!inverse(MonoidElement(a))) return false;
  }
  return true;
}

MonoidElement Monoid::identity() const {
  switch (kind_) {
    case Kind::kIntegerAddition: return IntVector(dim_, Integer(0));
    case Kind::kPositiveRationals: return Rational(1);
    case Kind::kFinite: return identity_;
    case Kind::kMatrices:
      if (modulus_ == 0) return RationalMatrix::identity(dim_, Rational(1));
      return ModMatrix::identity(dim_, ModP(1, modulus_));
  }
  return identity_;
}

void Monoid::validate(const MonoidElement& a) const {
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::kInvalidArgument, "invalid element for " + describe() + ": " + why);
  };
  switch (kind_) {
    case Kind::kIntegerAddition:
      if (!std::holds_alternative<IntVector>(a) || std::get<IntVector>(a).size() != dim_) {
        bad("expected an integer vector of length " + std::to_string(dim_));
      }
      break;
    case Kind::kPositiveRationals:
      if (!std::holds_alternative<Rational>(a) || sgn(std::get<Rational>(a)) <= 0) {
        bad("expected a positive rational");
      }
      break;
    case Kind::kFinite:
      if (!std::holds_alternative<std::int64_t>(a) || std::get<std::int64_t>(a) < 0 ||
          std::get<std::int64_t>(a) >= order()) {
        bad("expected a label in 0.." + std::to_string(order() - 1));
      }
      break;
    case Kind::kMatrices:
      if (modulus_ == 0) {
        if (!std::holds_alternative<RationalMatrix>(a)) bad("expected a rational matrix");
        const auto& m = std::get<RationalMatrix>(a);
        if (m.rows() != dim_ || m.cols() != dim_) bad("wrong matrix shape");
      } else {
        if (!std::holds_alternative<ModMatrix>(a)) bad("expected a modular matrix");
        const auto& m = std::get<ModMatrix>(a);
        if (m.rows() != dim_ || m.cols() != dim_ || m.any_entry().modulus() != modulus_) {
          bad("wrong matrix shape or modulus");
        }
      }
      break;
  }
}

MonoidElement Monoid::combine(const MonoidElement& a, const MonoidElement& b) const {
  switch (kind_) {
    case Kind::kIntegerAddition: {
      IntVector r = std::get<IntVector>(a);
      const auto& bv = std::get<IntVector>(b);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += bv[i];
      return r;
    }
    case Kind::kPositiveRationals:
      return Rational(std::get<Rational>(a) * std::get<Rational>(b));
    case Kind::kFinite:
      return table_[std::get<std::int64_t>(a)][std::get<std::int64_t>(b)];
    case Kind::kMatrices:
      if (modulus_ == 0) return std::get<RationalMatrix>(a) * std::get<RationalMatrix>(b);
      return std::get<ModMatrix>(a) * std::get<ModMatrix>(b);
  }
  return a;
}

MonoidElement Monoid::power(const MonoidElement& a, std::uint64_t n) const {
  if (kind_ == Kind::kIntegerAddition) {
    IntVector r = std::get<IntVector>(a);
    Integer k;
    mpz_set_ui(k.get_mpz_t(), n);
    for (auto& c : r) c *= k;
    return r;
  }
  MonoidElement result = identity();
  MonoidElement base = a;
  while (n > 0) {
    if (n & 1U) result = combine(result, base);
    n >>= 1U;
    if (n > 0) base = combine(base, base);
  }
  return result;
}

std::optional<MonoidElement> Monoid::inverse(const MonoidElement& a) const {
  switch (kind_) {
    case Kind::kIntegerAddition: {
      IntVector r = std::get<IntVector>(a);
      for (auto& c : r) c = -c;
      return r;
    }
    case Kind::kPositiveRationals:
      return Rational(Rational(1) / std::get<Rational>(a));
    case Kind::kFinite: {
      const std::int64_t x = std::get<std::int64_t>(a);
      for (std::int64_t y = 0; y < order(); ++y) {
        if (table_[x][y] == identity_ && table_[y][x] == identity_) return y;
      }
      return std::nullopt;
    }
    case Kind::kMatrices:
      if (modulus_ == 0) {
        auto inv = std::get<RationalMatrix>(a).inverse();
        if (!inv) return std::nullopt;
        return *inv;
      } else {
        auto inv = std::get<ModMatrix>(a).inverse();
        if (!inv) return std::nullopt;
        return *inv;
      }
  }
  return std::nullopt;
}

bool Monoid::equal(const MonoidElement& a, const MonoidElement& b) const {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, IntVector>) {
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (cmp(x[i], y[i]) != 0) return false;
          }
          return x.size() == y.size();
        } else {
          return static_cast<bool>(x == y);
        }
      },
      a);
}

bool Monoid::acts_on(const StateSpace& space) const {
  using K = StateSpace::Kind;
  switch (kind_) {
    case Kind::kIntegerAddition:
      return (space.kind() == K::kIntegerLine && dim_ == 1) ||
             ((space.kind() == K::kIntegerVector || space.kind() == K::kRationalVector) &&
              space.dim() == dim_);
    case Kind::kPositiveRationals:
      return space.kind() == K::kRationalVector;
    case Kind::kFinite: {
      const std::int64_t k = action_ ? static_cast<std::int64_t>(action_->front().size()) : order();
      return space.kind() == K::kFinite && space.size() == k;
    }
    case Kind::kMatrices:
      if (modulus_ == 0) {
        return (space.kind() == K::kRationalVector || space.kind() == K::kIntegerVector) &&
               space.dim() == dim_;
      }
      return space.kind() == K::kModularVector && space.dim() == dim_ && space.modulus() == modulus_;
  }
  return false;
}

State Monoid::act(const MonoidElement& a, const State& x) const {
  switch (kind_) {
    case Kind::kIntegerAddition: {
      const auto& g = std::get<IntVector>(a);
      if (x.holds<Integer>()) return State::integer(x.as<Integer>() + g.at(0));
      if (x.holds<IntVector>()) {
        IntVector r = x.as<IntVector>();
        if (r.size() != g.size()) fail(ErrorKind::kDimensionMismatch, "translation dimension mismatch");
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += g[i];
        return State::int_vector(std::move(r));
      }
      if (x.holds<RatVector>()) {
        RatVector r = x.as<RatVector>();
        if (r.size() != g.size()) fail(ErrorKind::kDimensionMismatch, "translation dimension mismatch");
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += g[i];
        return State::rat_vector(std::move(r));
      }
      break;
    }
    case Kind::kPositiveRationals: {
      if (!x.holds<RatVector>()) break;
      RatVector r = x.as<RatVector>();
      for (auto& c : r) c *= std::get<Rational>(a);
      return State::rat_vector(std::move(r));
    }
    case Kind::kFinite: {
      const std::int64_t g = std::get<std::int64_t>(a);
      const std::int64_t v = x.label();
      const auto& row = action_ ? (*action_)[g] : table_[g];
      if (v < 0 || v >= static_cast<std::int64_t>(row.size())) break;
      return State(row[v]);
    }
    case Kind::kMatrices: {
      if (modulus_ == 0) {
        const auto& m = std::get<RationalMatrix>(a);
        RatVector y = m.apply(to_rational_vector(x));
        if (x.holds<IntVector>()) return from_rational_vector(StateSpace::integer_vector(dim_), y);
        return State::rat_vector(std::move(y));
      }
      if (!x.holds<ModVector>()) break;
      return State::mod_vector(std::get<ModMatrix>(a).apply(x.as<ModVector>()));
    }
  }
  fail(ErrorKind::kOutOfDomain, describe() + " does not act on state " + x.to_string());
}

std::string Monoid::element_text(const MonoidElement& a) const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntVector>) {
          if (x.size() == 1) return to_text(x[0]);
          std::string s = "[";
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + to_text(x[i]);
          return s + "]";
        } else if constexpr (std::is_same_v<T, Rational>) {
          return to_text(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else {
          std::string s = "[";
          for (std::size_t i = 0; i < x.rows(); ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < x.cols(); ++j) s += (j ? "," : "") + to_text(x(i, j));
            s += "]";
          }
          return s + "]";
        }
      },
      a);
}

std::string Monoid::describe() const {
  switch (kind_) {
    case Kind::kIntegerAddition: return "integer_add(" + std::to_string(dim_) + ")";
    case Kind::kPositiveRationals: return "rational_mul";
    case Kind::kFinite: return "finite(" + std::to_string(order()) + ")";
    case Kind::kMatrices:
      return modulus_ == 0 ? "matrices(" + std::to_string(dim_) + ")"
                           : "matrices(" + std::to_string(dim_) + " mod " + std::to_string(modulus_) + ")";
  }
  return "?";
}

ActionAxiomCheck check_action_axioms(const Monoid& monoid, const StateSpace& space) {
  if (monoid.kind() != Monoid::Kind::kFinite) {
    return {ActionAxiomCheck::Status::kAssumedBuiltin, "built-in action"};
  }
  if (!monoid.acts_on(space)) {
    return {ActionAxiomCheck::Status::kViolated, monoid.describe() + " does not act on " + space.describe()};
  }
  const std::int64_t n = monoid.order();
  const std::int64_t k = space.size();
  const MonoidElement e = monoid.identity();
  for (std::int64_t x = 0; x < k; ++x) {
    if (monoid.act(e, State(x)).label() != x) {
      return {ActionAxiomCheck::Status::kViolated, "identity moves state " + std::to_string(x)};
    }
  }
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      const MonoidElement ab = monoid.combine(MonoidElement(a), MonoidElement(b));
      for (std::int64_t x = 0; x < k; ++x) {
        const State lhs = monoid.act(ab, State(x));
        const State rhs = monoid.act(MonoidElement(a), monoid.act(MonoidElement(b), State(x)));
        if (lhs != rhs) {
          return {ActionAxiomCheck::Status::kViolated,
                  "(ab)x != a(bx) at a=" + std::to_string(a) + " b=" + std::to_string(b) +
                      " x=" + std::to_string(x)};
        }
      }
    }
  }
  return {ActionAxiomCheck::Status::kVerified, "checked exhaustively"};
}

std::string_view to_string(ActionAxiomCheck::Status status) {
  switch (status) {
    case ActionAxiomCheck::Status::kVerified: return "verified";
    case ActionAxiomCheck::Status::kAssumedBuiltin: return "assumed";
    case ActionAxiomCheck::Status::kViolated: return "violated";
  }
  return "?";
}

}  // namespace latticerec
