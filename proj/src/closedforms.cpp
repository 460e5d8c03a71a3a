#include "latticerec/closedforms.hpp"

#include "latticerec/error.hpp"
#include "latticerec/statespace.hpp"

namespace latticerec {

namespace {

MultiIndex delta_of(const MultiIndex& t0, const MultiIndex& t, std::size_t m) {
  if (t0.dimension() != m || t.dimension() != m) {
    fail(ErrorKind::kDimensionMismatch, "expected multi-indices of dimension " + std::to_string(m));
  }
  return t - t0;
}

std::uint64_t magnitude(std::int64_t k) {
  return k < 0 ? std::uint64_t(0) - static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
}

// Built-in rational elements grow with the exponent; finite and Z_p ones do not.
bool grows(const Monoid& monoid, const MonoidElement& a) {
  switch (monoid.kind()) {
    case Monoid::Kind::kPositiveRationals: return !monoid.equal(a, monoid.identity());
    case Monoid::Kind::kMatrices: return monoid.modulus() == 0 && !monoid.equal(a, monoid.identity());
    default: return false;
  }
}

template <class F>
Matrix<F> signed_power(const Matrix<F>& a, std::int64_t k, std::uint64_t cap, bool capped) {
  if (!a.is_square()) fail(ErrorKind::kDimensionMismatch, "power of a non-square matrix");
  const std::uint64_t n = magnitude(k);
  if (capped && n > cap) {
    fail(ErrorKind::kCapExceeded, "exponent " + std::to_string(k) + " exceeds the cap " + std::to_string(cap));
  }
  if (k >= 0) return power_nonnegative(a, n);
  auto inv = a.inverse();
  if (!inv) fail(ErrorKind::kSingular, "negative power of a singular matrix");
  return power_nonnegative(*inv, n);
}

template <class F>
std::optional<NonCommutingEntry> first_noncommuting(std::span<const Matrix<F>> as) {
  for (std::size_t a = 0; a < as.size(); ++a) {
    for (std::size_t b = a + 1; b < as.size(); ++b) {
      if (auto pos = (as[a] * as[b]).first_difference(as[b] * as[a])) {
        return NonCommutingEntry{static_cast<int>(a + 1), static_cast<int>(b + 1), pos->first, pos->second};
      }
    }
  }
  return std::nullopt;
}

template <class F>
std::vector<F> matrix_system(std::span<const Matrix<F>> as, const MultiIndex& t0, const std::vector<F>& x0,
                             const MultiIndex& t, const Limits& limits) {
  if (as.empty()) fail(ErrorKind::kDimensionMismatch, "a matrix system needs at least one matrix");
  const std::size_t n = as.front().rows();
  for (const Matrix<F>& a : as) {
    if (!a.is_square() || a.rows() != n) fail(ErrorKind::kDimensionMismatch, "matrices must be square of one size");
  }
  if (x0.size() != n) fail(ErrorKind::kDimensionMismatch, "x0 has the wrong length");
  if (auto w = first_noncommuting(as)) {
    fail(ErrorKind::kNonCommuting, "A_" + std::to_string(w->alpha) + " and A_" + std::to_string(w->beta) +
                                       " do not commute: products differ at entry (" + std::to_string(w->row) +
                                       "," + std::to_string(w->col) + ")");
  }
  const MultiIndex d = delta_of(t0, t, as.size());
  Matrix<F> product = Matrix<F>::identity(n, field_one(as.front().any_entry()));
  for (int a = 1; a <= static_cast<int>(as.size()); ++a) {
    product = product * matrix_power(as[static_cast<std::size_t>(a - 1)], d.coord(a), limits);
  }
  return product.apply(x0);
}

}  // namespace

MonoidActionSystem::MonoidActionSystem(std::shared_ptr<const Monoid> monoid, std::vector<MonoidElement> elements,
                                       StateSpace space)
    : monoid_(std::move(monoid)), elements_(std::move(elements)), space_(std::move(space)) {
  if (!monoid_) fail(ErrorKind::kInvalidArgument, "missing monoid");
  if (elements_.empty()) fail(ErrorKind::kDimensionMismatch, "a system needs at least one element");
  for (const MonoidElement& a : elements_) monoid_->validate(a);
  if (!monoid_->acts_on(space_)) {
    fail(ErrorKind::kInvalidArgument, monoid_->describe() + " does not act on " + space_.describe());
  }
  for (std::size_t a = 0; a < elements_.size(); ++a) {
    for (std::size_t b = a + 1; b < elements_.size(); ++b) {
      if (!monoid_->equal(monoid_->combine(elements_[a], elements_[b]), monoid_->combine(elements_[b], elements_[a]))) {
        fail(ErrorKind::kNonCommuting, "elements a_" + std::to_string(a + 1) + " and a_" + std::to_string(b + 1) +
                                           " do not commute");
      }
    }
  }
  axioms_ = check_action_axioms(*monoid_, space_);
  if (axioms_.status == ActionAxiomCheck::Status::kViolated) {
    fail(ErrorKind::kInvalidArgument, "action axioms fail: " + axioms_.detail);
  }
}

const MonoidElement& MonoidActionSystem::element(int axis) const {
  require_axis(axis, elements_.size());
  return elements_[static_cast<std::size_t>(axis - 1)];
}

AutonomousSystem MonoidActionSystem::as_autonomous() const {
  std::vector<StepMap> maps;
  for (const MonoidElement& a : elements_) maps.push_back(StepMap::translate(monoid_, a, space_));
  return AutonomousSystem(std::move(maps));
}

State eval_monoid(const MonoidActionSystem& sys, const MultiIndex& t0, const State& x0, const MultiIndex& t,
                  const Limits& limits) {
  const MultiIndex d = delta_of(t0, t, sys.dimension());
  sys.space().require(x0);
  const Monoid& monoid = sys.monoid();
  MonoidElement product = monoid.identity();
  for (int a = 1; a <= static_cast<int>(sys.dimension()); ++a) {
    const std::int64_t k = d.coord(a);
    if (k == 0) continue;
    MonoidElement base = sys.element(a);
    if (k < 0) {
      auto inv = monoid.inverse(base);
      if (!inv) {
        fail(ErrorKind::kNotBijective, "a_" + std::to_string(a) + " = " + monoid.element_text(base) +
                                           " is not invertible, so exponent " + std::to_string(k) + " is undefined");
      }
      base = std::move(*inv);
    }
    if (grows(monoid, base) && magnitude(k) > limits.exponent_cap) {
      fail(ErrorKind::kCapExceeded, "exponent " + std::to_string(k) + " exceeds the cap " +
                                        std::to_string(limits.exponent_cap));
    }
    product = monoid.combine(product, monoid.power(base, magnitude(k)));
  }
  return monoid.act(product, x0);
}

IntVector eval_additive(std::span<const IntVector> a, const MultiIndex& t0, const IntVector& x0, const MultiIndex& t,
                        AdditiveDomain domain) {
  const MultiIndex d = delta_of(t0, t, a.size());
  const bool naturals = domain == AdditiveDomain::kNaturals;
  IntVector x = x0;
  for (const Integer& c : x0) {
    if (naturals && sgn(c) < 0) fail(ErrorKind::kOutOfDomain, "x0 is not a natural number vector");
  }
  for (int alpha = 1; alpha <= static_cast<int>(a.size()); ++alpha) {
    const IntVector& v = a[static_cast<std::size_t>(alpha - 1)];
    if (v.size() != x.size()) fail(ErrorKind::kDimensionMismatch, "element length differs from x0");
    const std::int64_t k = d.coord(alpha);
    if (naturals && k < 0) {
      fail(ErrorKind::kNotBijective, "coefficient " + std::to_string(k) + " of a_" + std::to_string(alpha) +
                                         " is negative in a monoid without inverses");
    }
    const Integer kk(static_cast<long>(k));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (naturals && sgn(v[i]) < 0) fail(ErrorKind::kOutOfDomain, "element a_" + std::to_string(alpha) + " is negative");
      x[i] += kk * v[i];
    }
  }
  return x;
}

Integer eval_additive(std::span<const Integer> a, const MultiIndex& t0, const Integer& x0, const MultiIndex& t,
                      AdditiveDomain domain) {
  std::vector<IntVector> vs;
  vs.reserve(a.size());
  for (const Integer& c : a) vs.push_back({c});
  return eval_additive(std::span<const IntVector>(vs), t0, IntVector{x0}, t, domain).front();
}

RationalMatrix matrix_power(const RationalMatrix& a, std::int64_t k, const Limits& limits) {
  return signed_power(a, k, limits.exponent_cap, !a.is_identity());
}

ModMatrix matrix_power(const ModMatrix& a, std::int64_t k, const Limits&) {
  return signed_power(a, k, kModularExponentCap, true);
}

std::optional<NonCommutingEntry> find_noncommuting(std::span<const RationalMatrix> as) {
  return first_noncommuting(as);
}

std::optional<NonCommutingEntry> find_noncommuting(std::span<const ModMatrix> as) { return first_noncommuting(as); }

RatVector eval_matrix_system(std::span<const RationalMatrix> as, const MultiIndex& t0, const RatVector& x0,
                             const MultiIndex& t, const Limits& limits) {
  return matrix_system(as, t0, x0, t, limits);
}

ModVector eval_matrix_system(std::span<const ModMatrix> as, const MultiIndex& t0, const ModVector& x0,
                             const MultiIndex& t, const Limits& limits) {
  return matrix_system(as, t0, x0, t, limits);
}

}  // namespace latticerec
