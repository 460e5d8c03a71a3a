#include "latticerec/state.hpp"

#include <sstream>

#include "latticerec/error.hpp"

namespace latticerec {

State State::augmented(MultiIndex time, State inner) {
  return State(Value(AugmentedState{std::move(time), std::make_shared<const State>(std::move(inner))}));
}

std::int64_t State::label() const {
  if (!holds<std::int64_t>()) fail(ErrorKind::kOutOfDomain, "state " + to_string() + " is not a label");
  return as<std::int64_t>();
}

const MultiIndex& State::time_part() const {
  if (!holds<AugmentedState>()) fail(ErrorKind::kOutOfDomain, "state " + to_string() + " is not augmented");
  return as<AugmentedState>().time;
}

const State& State::state_part() const {
  if (!holds<AugmentedState>()) fail(ErrorKind::kOutOfDomain, "state " + to_string() + " is not augmented");
  return *as<AugmentedState>().inner;
}

bool State::operator==(const State& o) const {
  if (value_.index() != o.value_.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const T& b = std::get<T>(o.value_);
        if constexpr (std::is_same_v<T, AugmentedState>) {
          return a.time == b.time && *a.inner == *b.inner;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return a == b;
        } else if constexpr (std::is_same_v<T, Integer>) {
          return cmp(a, b) == 0;
        } else {
          if (a.size() != b.size()) return false;
          for (std::size_t i = 0; i < a.size(); ++i) {
            if (!(a[i] == b[i])) return false;
          }
          return true;
        }
      },
      value_);
}

std::string State::to_string() const {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(a);
        } else if constexpr (std::is_same_v<T, Integer>) {
          return to_text(a);
        } else if constexpr (std::is_same_v<T, AugmentedState>) {
          return "(" + a.time.to_string() + ", " + a.inner->to_string() + ")";
        } else {
          std::string s = "[";
          for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + to_text(a[i]);
          return s + "]";
        }
      },
      value_);
}

StateSpace StateSpace::finite(std::int64_t size) {
  if (size < 1) fail(ErrorKind::kInvalidArgument, "finite state space needs at least one state");
  StateSpace s;
  s.kind_ = Kind::kFinite;
  s.size_ = size;
  return s;
}

StateSpace StateSpace::integer_line() {
  StateSpace s;
  s.kind_ = Kind::kIntegerLine;
  return s;
}

StateSpace StateSpace::integer_vector(std::size_t dim) {
  if (dim < 1) fail(ErrorKind::kInvalidArgument, "vector dimension must be at least 1");
  StateSpace s;
  s.kind_ = Kind::kIntegerVector;
  s.dim_ = dim;
  return s;
}

StateSpace StateSpace::modular_line(std::int64_t modulus) {
  if (modulus < 2) fail(ErrorKind::kInvalidArgument, "modulus must be at least 2");
  StateSpace s;
  s.kind_ = Kind::kModularLine;
  s.modulus_ = modulus;
  s.size_ = modulus;
  return s;
}

StateSpace StateSpace::rational_vector(std::size_t dim) {
  if (dim < 1) fail(ErrorKind::kInvalidArgument, "vector dimension must be at least 1");
  StateSpace s;
  s.kind_ = Kind::kRationalVector;
  s.dim_ = dim;
  return s;
}

StateSpace StateSpace::modular_vector(std::size_t dim, std::int64_t modulus) {
  if (dim < 1) fail(ErrorKind::kInvalidArgument, "vector dimension must be at least 1");
  if (!is_prime(modulus)) {
    fail(ErrorKind::kInvalidArgument, "modular vector space needs a prime modulus, got " +
                                          std::to_string(modulus));
  }
  StateSpace s;
  s.kind_ = Kind::kModularVector;
  s.dim_ = dim;
  s.modulus_ = modulus;
  return s;
}

StateSpace StateSpace::augmented(MultiIndex t1, StateSpace inner) {
  StateSpace s;
  s.kind_ = Kind::kAugmented;
  s.t1_ = std::move(t1);
  s.inner_ = std::make_shared<const StateSpace>(std::move(inner));
  return s;
}

bool StateSpace::is_finite() const {
  return kind_ == Kind::kFinite || kind_ == Kind::kModularLine || kind_ == Kind::kModularVector;
}

bool StateSpace::is_vector() const {
  return kind_ == Kind::kIntegerVector || kind_ == Kind::kRationalVector ||
         kind_ == Kind::kModularVector;
}

std::optional<std::uint64_t> StateSpace::cardinality() const {
  switch (kind_) {
    case Kind::kFinite:
    case Kind::kModularLine:
      return static_cast<std::uint64_t>(size_);
    case Kind::kModularVector: {
      unsigned __int128 n = 1;
      for (std::size_t i = 0; i < dim_; ++i) {
        n *= static_cast<std::uint64_t>(modulus_);
        if (n > UINT64_MAX) return std::nullopt;
      }
      return static_cast<std::uint64_t>(n);
    }
    default:
      return std::nullopt;
  }
}

bool StateSpace::enumerable(const Limits& limits) const {
  auto n = cardinality();
  return n && *n <= limits.enumeration_cap;
}

State StateSpace::state_at(std::uint64_t index) const {
  auto n = cardinality();
  if (!n || index >= *n) fail(ErrorKind::kOutOfDomain, "state index outside " + describe());
  if (kind_ == Kind::kModularVector) {
    ModVector v(dim_);
    // First coordinate varies slowest.
    for (std::size_t i = dim_; i > 0; --i) {
      v[i - 1] = ModP(static_cast<std::int64_t>(index % static_cast<std::uint64_t>(modulus_)), modulus_);
      index /= static_cast<std::uint64_t>(modulus_);
    }
    return State::mod_vector(std::move(v));
  }
  return State(static_cast<std::int64_t>(index));
}

std::uint64_t StateSpace::index_of(const State& x) const {
  require(x);
  if (kind_ == Kind::kModularVector) {
    std::uint64_t idx = 0;
    for (const ModP& c : x.as<ModVector>()) {
      idx = idx * static_cast<std::uint64_t>(modulus_) + static_cast<std::uint64_t>(c.value());
    }
    return idx;
  }
  if (!is_finite()) fail(ErrorKind::kInfiniteSearch, describe() + " has no finite enumeration");
  return static_cast<std::uint64_t>(x.label());
}

bool StateSpace::contains(const State& x) const {
  switch (kind_) {
    case Kind::kFinite:
    case Kind::kModularLine:
      return x.holds<std::int64_t>() && x.as<std::int64_t>() >= 0 && x.as<std::int64_t>() < size_;
    case Kind::kIntegerLine:
      return x.holds<Integer>();
    case Kind::kIntegerVector:
      return x.holds<IntVector>() && x.as<IntVector>().size() == dim_;
    case Kind::kRationalVector:
      return x.holds<RatVector>() && x.as<RatVector>().size() == dim_;
    case Kind::kModularVector: {
      if (!x.holds<ModVector>() || x.as<ModVector>().size() != dim_) return false;
      for (const ModP& c : x.as<ModVector>()) {
        if (c.modulus() != modulus_) return false;
      }
      return true;
    }
    case Kind::kAugmented: {
      if (!x.holds<AugmentedState>()) return false;
      const auto& a = x.as<AugmentedState>();
      return a.time.dimension() == t1_.dimension() && leq(t1_, a.time) && inner_->contains(*a.inner);
    }
  }
  return false;
}

void StateSpace::require(const State& x) const {
  if (!contains(x)) fail(ErrorKind::kOutOfDomain, "state " + x.to_string() + " is not in " + describe());
}

bool StateSpace::operator==(const StateSpace& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::kFinite: return size_ == o.size_;
    case Kind::kIntegerLine: return true;
    case Kind::kIntegerVector:
    case Kind::kRationalVector: return dim_ == o.dim_;
    case Kind::kModularLine: return modulus_ == o.modulus_;
    case Kind::kModularVector: return dim_ == o.dim_ && modulus_ == o.modulus_;
    case Kind::kAugmented: return t1_ == o.t1_ && *inner_ == *o.inner_;
  }
  return false;
}

std::string StateSpace::describe() const {
  switch (kind_) {
    case Kind::kFinite: return "finite(" + std::to_string(size_) + ")";
    case Kind::kIntegerLine: return "integer_line";
    case Kind::kIntegerVector: return "integer_vector(" + std::to_string(dim_) + ")";
    case Kind::kModularLine: return "modular_line(" + std::to_string(modulus_) + ")";
    case Kind::kRationalVector: return "rational_vector(" + std::to_string(dim_) + ")";
    case Kind::kModularVector:
      return "modular_vector(" + std::to_string(dim_) + "," + std::to_string(modulus_) + ")";
    case Kind::kAugmented: return "augmented(" + t1_.to_string() + "," + inner_->describe() + ")";
  }
  return "?";
}

RatVector to_rational_vector(const State& x) {
  if (x.holds<Integer>()) return {Rational(x.as<Integer>())};
  if (x.holds<IntVector>()) {
    RatVector v;
    for (const Integer& c : x.as<IntVector>()) v.emplace_back(c);
    return v;
  }
  if (x.holds<RatVector>()) return x.as<RatVector>();
  fail(ErrorKind::kOutOfDomain, "state " + x.to_string() + " has no rational vector view");
}

ModVector to_mod_vector(const State& x, std::int64_t modulus) {
  if (x.holds<std::int64_t>()) return {ModP(x.as<std::int64_t>(), modulus)};
  if (x.holds<ModVector>()) return x.as<ModVector>();
  fail(ErrorKind::kOutOfDomain, "state " + x.to_string() + " has no modular vector view");
}

State from_rational_vector(const StateSpace& space, const RatVector& v) {
  switch (space.kind()) {
    case StateSpace::Kind::kIntegerLine:
      if (v.size() != 1 || !is_integral(v[0])) {
        fail(ErrorKind::kOutOfDomain, "value is not an integer");
      }
      return State::integer(v[0].get_num());
    case StateSpace::Kind::kIntegerVector: {
      IntVector out;
      for (const Rational& c : v) {
        if (!is_integral(c)) fail(ErrorKind::kOutOfDomain, "vector entry " + to_text(c) + " is not an integer");
        out.push_back(c.get_num());
      }
      return State::int_vector(std::move(out));
    }
    case StateSpace::Kind::kRationalVector:
      return State::rat_vector(v);
    default:
      fail(ErrorKind::kOutOfDomain, space.describe() + " is not a rational vector space");
  }
}

State from_mod_vector(const StateSpace& space, const ModVector& v) {
  if (space.kind() == StateSpace::Kind::kModularLine) return State(v.at(0).value());
  if (space.kind() == StateSpace::Kind::kModularVector) return State::mod_vector(v);
  fail(ErrorKind::kOutOfDomain, space.describe() + " is not a modular space");
}

}  // namespace latticerec
