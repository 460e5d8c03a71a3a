#include "latticerec/statespace.hpp"

#include <unordered_map>

#include "latticerec/error.hpp"
#include "latticerec/extension.hpp"
#include "latticerec/kernels.hpp"

namespace latticerec {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_label_space(const StateSpace& s) {
  return s.kind() == StateSpace::Kind::kFinite || s.kind() == StateSpace::Kind::kModularLine;
}

std::optional<SymbolicForm> identity_form(const StateSpace& space) {
  using K = StateSpace::Kind;
  switch (space.kind()) {
    case K::kIntegerLine:
    case K::kIntegerVector:
    case K::kRationalVector:
      return RationalAffineForm{RationalMatrix::identity(space.dim(), Rational(1)),
                                RatVector(space.dim(), Rational(0))};
    case K::kModularLine:
    case K::kModularVector:
      return ModAffineForm{ModMatrix::identity(space.dim(), ModP(1, space.modulus())),
                           ModVector(space.dim(), ModP(0, space.modulus()))};
    default:
      return std::nullopt;
  }
}

template <class F>
std::pair<Matrix<F>, std::vector<F>> compose_affine(const Matrix<F>& a1, const std::vector<F>& b1,
                                                    const Matrix<F>& a2, const std::vector<F>& b2) {
  std::vector<F> b = a1.apply(b2);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = b[i] + b1[i];
  return {a1 * a2, std::move(b)};
}

template <class F>
bool vectors_equal(const std::vector<F>& a, const std::vector<F>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

SymbolicForm power_form(const SymbolicForm& f, std::uint64_t n, const StateSpace& space) {
  SymbolicForm result = *identity_form(space);
  SymbolicForm base = f;
  while (n > 0) {
    if (n & 1U) result = compose_forms(result, base);
    n >>= 1U;
    if (n > 0) base = compose_forms(base, base);
  }
  return result;
}

// Unit-ish probe where two distinct affine forms must differ.
template <class F>
std::vector<F> distinguishing_point(const Matrix<F>& a1, const std::vector<F>& b1, const Matrix<F>& a2,
                                    const std::vector<F>& b2) {
  const F zero = field_zero(a1.any_entry());
  std::vector<F> x(a1.cols(), zero);
  if (vectors_equal(b1, b2)) {
    auto diff = a1.first_difference(a2);
    x[diff->second] = field_one(zero);
  }
  return x;
}

IterateResult cycle_walk(const StepMap& map, std::uint64_t n, const State& x) {
  std::unordered_map<std::int64_t, std::uint64_t> first_seen;
  std::vector<std::int64_t> seq;
  std::int64_t cur = x.label();
  for (std::uint64_t step = 0;; ++step) {
    if (step == n) return {State(cur), PowerRoute::kCycleDetection};
    auto [it, inserted] = first_seen.emplace(cur, step);
    if (!inserted) {
      const std::uint64_t start = it->second;
      const std::uint64_t period = step - start;
      return {State(seq[start + (n - start) % period]), PowerRoute::kCycleDetection};
    }
    seq.push_back(cur);
    cur = map.apply(State(cur)).label();
  }
}

}  // namespace

StepMap StepMap::table(std::vector<std::int64_t> images) {
  if (images.empty()) fail(ErrorKind::kInvalidArgument, "table map needs at least one image");
  const auto n = static_cast<std::int64_t>(images.size());
  for (std::int64_t v : images) {
    if (v < 0 || v >= n) {
      fail(ErrorKind::kInvalidArgument,
           "table image " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
    }
  }
  return StepMap(StateSpace::finite(n), TableRule{std::move(images)});
}

StepMap StepMap::affine(Integer a, Integer b) {
  return StepMap(StateSpace::integer_line(), AffineIntRule{std::move(a), std::move(b)});
}

StepMap StepMap::modular_affine(std::int64_t a, std::int64_t b, std::int64_t modulus) {
  StateSpace space = StateSpace::modular_line(modulus);
  return StepMap(space, ModularAffineRule{ModP(a, modulus).value(), ModP(b, modulus).value()});
}

StepMap StepMap::matrix(RationalMatrix a) {
  if (!a.is_square()) fail(ErrorKind::kInvalidArgument, "step matrix must be square");
  StateSpace space = StateSpace::rational_vector(a.rows());
  return StepMap(space, MatrixRule{std::move(a)});
}

StepMap StepMap::matrix(RationalMatrix a, const StateSpace& domain) {
  if (!a.is_square()) fail(ErrorKind::kInvalidArgument, "step matrix must be square");
  if (!(domain.kind() == StateSpace::Kind::kRationalVector ||
        domain.kind() == StateSpace::Kind::kIntegerVector) ||
      domain.dim() != a.rows()) {
    fail(ErrorKind::kInvalidArgument, "matrix of size " + std::to_string(a.rows()) +
                                          " cannot act on " + domain.describe());
  }
  if (domain.kind() == StateSpace::Kind::kIntegerVector) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (!is_integral(a(i, j))) {
          fail(ErrorKind::kInvalidArgument, "integer vector space needs an integer matrix");
        }
      }
    }
  }
  return StepMap(domain, MatrixRule{std::move(a)});
}

StepMap StepMap::matrix(ModMatrix a) {
  if (!a.is_square()) fail(ErrorKind::kInvalidArgument, "step matrix must be square");
  StateSpace space = StateSpace::modular_vector(a.rows(), a.any_entry().modulus());
  return StepMap(space, MatrixRule{std::move(a)});
}

StepMap StepMap::translate(std::shared_ptr<const Monoid> monoid, MonoidElement element,
                           const StateSpace& domain) {
  if (!monoid) fail(ErrorKind::kInvalidArgument, "translation needs a monoid");
  monoid->validate(element);
  if (!monoid->acts_on(domain)) {
    fail(ErrorKind::kInvalidArgument, monoid->describe() + " does not act on " + domain.describe());
  }
  if (monoid->kind() == Monoid::Kind::kMatrices && domain.kind() == StateSpace::Kind::kIntegerVector) {
    const auto& m = std::get<RationalMatrix>(element);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!is_integral(m(i, j))) {
          fail(ErrorKind::kInvalidArgument, "integer vector space needs an integer matrix");
        }
      }
    }
  }
  return StepMap(domain, TranslateRule{std::move(monoid), std::move(element)});
}

StepMap StepMap::identity(const StateSpace& domain) { return StepMap(domain, CompositeRule{}); }

StepMap StepMap::custom(const StateSpace& domain, std::shared_ptr<const OpaqueRule> impl) {
  if (!impl) fail(ErrorKind::kInvalidArgument, "custom map needs an implementation");
  return StepMap(domain, CustomRule{std::move(impl)});
}

State StepMap::apply(const State& x) const {
  domain_.require(x);
  return std::visit(
      Overloaded{
          [&](const TableRule& r) { return State(r.images[static_cast<std::size_t>(x.label())]); },
          [&](const AffineIntRule& r) { return State::integer(r.a * x.as<Integer>() + r.b); },
          [&](const ModularAffineRule& r) {
            const std::int64_t p = domain_.modulus();
            return State((ModP(r.a, p) * ModP(x.label(), p) + ModP(r.b, p)).value());
          },
          [&](const MatrixRule& r) {
            if (const auto* q = std::get_if<RationalMatrix>(&r.matrix)) {
              return from_rational_vector(domain_, q->apply(to_rational_vector(x)));
            }
            return State::mod_vector(std::get<ModMatrix>(r.matrix).apply(x.as<ModVector>()));
          },
          [&](const TranslateRule& r) { return r.monoid->act(r.element, x); },
          [&](const CompositeRule& r) {
            State cur = x;
            for (auto it = r.chain.rbegin(); it != r.chain.rend(); ++it) cur = it->apply(cur);
            return cur;
          },
          [&](const CustomRule& r) { return r.impl->apply(x); },
      },
      rule_);
}

std::string StepMap::describe() const {
  return std::visit(
      Overloaded{
          [](const TableRule& r) {
            std::string s = "table[";
            for (std::size_t i = 0; i < r.images.size(); ++i) s += (i ? "," : "") + std::to_string(r.images[i]);
            return s + "]";
          },
          [](const AffineIntRule& r) { return "affine(" + to_text(r.a) + "," + to_text(r.b) + ")"; },
          [&](const ModularAffineRule& r) {
            return "modular_affine(" + std::to_string(r.a) + "," + std::to_string(r.b) + " mod " +
                   std::to_string(domain_.modulus()) + ")";
          },
          [](const MatrixRule& r) {
            return std::visit(
                [](const auto& m) {
                  std::string s = "matrix[";
                  for (std::size_t i = 0; i < m.rows(); ++i) {
                    s += i ? ",[" : "[";
                    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? "," : "") + to_text(m(i, j));
                    s += "]";
                  }
                  return s + "]";
                },
                r.matrix);
          },
          [](const TranslateRule& r) {
            return "translate(" + r.monoid->describe() + "," + r.monoid->element_text(r.element) + ")";
          },
          [](const CompositeRule& r) {
            if (r.chain.empty()) return std::string("identity");
            std::string s;
            for (std::size_t i = 0; i < r.chain.size(); ++i) s += (i ? " o " : "") + r.chain[i].describe();
            return s;
          },
          [](const CustomRule& r) { return r.impl->describe(); },
      },
      rule_);
}

StepMap compose(const StepMap& outer, const StepMap& inner) {
  if (outer.domain() != inner.domain()) {
    fail(ErrorKind::kInvalidArgument, "cannot compose maps on " + outer.domain().describe() + " and " +
                                          inner.domain().describe());
  }
  const StateSpace& space = outer.domain();
  if (const auto* f = std::get_if<TableRule>(&outer.rule())) {
    if (const auto* g = std::get_if<TableRule>(&inner.rule())) {
      std::vector<std::int64_t> images(g->images.size());
      for (std::size_t i = 0; i < images.size(); ++i) {
        images[i] = f->images[static_cast<std::size_t>(g->images[i])];
      }
      return StepMap(space, TableRule{std::move(images)});
    }
  }
  if (const auto* f = std::get_if<AffineIntRule>(&outer.rule())) {
    if (const auto* g = std::get_if<AffineIntRule>(&inner.rule())) {
      return StepMap(space, AffineIntRule{f->a * g->a, f->a * g->b + f->b});
    }
  }
  if (const auto* f = std::get_if<ModularAffineRule>(&outer.rule())) {
    if (const auto* g = std::get_if<ModularAffineRule>(&inner.rule())) {
      const std::int64_t p = space.modulus();
      return StepMap(space, ModularAffineRule{(ModP(f->a, p) * ModP(g->a, p)).value(),
                                              (ModP(f->a, p) * ModP(g->b, p) + ModP(f->b, p)).value()});
    }
  }
  if (const auto* f = std::get_if<MatrixRule>(&outer.rule())) {
    if (const auto* g = std::get_if<MatrixRule>(&inner.rule())) {
      if (f->matrix.index() == g->matrix.index()) {
        return std::visit(
            [&](const auto& a) {
              using M = std::decay_t<decltype(a)>;
              return StepMap(space, MatrixRule{a * std::get<M>(g->matrix)});
            },
            f->matrix);
      }
    }
  }
  if (const auto* f = std::get_if<TranslateRule>(&outer.rule())) {
    if (const auto* g = std::get_if<TranslateRule>(&inner.rule())) {
      if (f->monoid == g->monoid) {
        return StepMap(space, TranslateRule{f->monoid, f->monoid->combine(f->element, g->element)});
      }
    }
  }
  std::vector<StepMap> chain;
  auto append = [&](const StepMap& m) {
    if (const auto* c = std::get_if<CompositeRule>(&m.rule())) {
      chain.insert(chain.end(), c->chain.begin(), c->chain.end());
    } else {
      chain.push_back(m);
    }
  };
  append(outer);
  append(inner);
  return StepMap(space, CompositeRule{std::move(chain)});
}

std::optional<SymbolicForm> symbolic_form(const StepMap& map) {
  const StateSpace& space = map.domain();
  return std::visit(
      Overloaded{
          [](const TableRule&) -> std::optional<SymbolicForm> { return std::nullopt; },
          [](const AffineIntRule& r) -> std::optional<SymbolicForm> {
            return RationalAffineForm{RationalMatrix(1, 1, {Rational(r.a)}), {Rational(r.b)}};
          },
          [&](const ModularAffineRule& r) -> std::optional<SymbolicForm> {
            const std::int64_t p = space.modulus();
            return ModAffineForm{ModMatrix(1, 1, {ModP(r.a, p)}), {ModP(r.b, p)}};
          },
          [](const MatrixRule& r) -> std::optional<SymbolicForm> {
            if (const auto* q = std::get_if<RationalMatrix>(&r.matrix)) {
              return RationalAffineForm{*q, RatVector(q->rows(), Rational(0))};
            }
            const auto& m = std::get<ModMatrix>(r.matrix);
            return ModAffineForm{m, ModVector(m.rows(), field_zero(m.any_entry()))};
          },
          [&](const TranslateRule& r) -> std::optional<SymbolicForm> {
            switch (r.monoid->kind()) {
              case Monoid::Kind::kIntegerAddition: {
                RatVector b;
                for (const Integer& c : std::get<IntVector>(r.element)) b.emplace_back(c);
                return RationalAffineForm{RationalMatrix::identity(b.size(), Rational(1)), std::move(b)};
              }
              case Monoid::Kind::kPositiveRationals: {
                RationalMatrix a = RationalMatrix::identity(space.dim(), Rational(1));
                for (std::size_t i = 0; i < space.dim(); ++i) a(i, i) = std::get<Rational>(r.element);
                return RationalAffineForm{std::move(a), RatVector(space.dim(), Rational(0))};
              }
              case Monoid::Kind::kMatrices:
                if (const auto* q = std::get_if<RationalMatrix>(&r.element)) {
                  return RationalAffineForm{*q, RatVector(q->rows(), Rational(0))};
                } else {
                  const auto& m = std::get<ModMatrix>(r.element);
                  return ModAffineForm{m, ModVector(m.rows(), field_zero(m.any_entry()))};
                }
              case Monoid::Kind::kFinite:
                return std::nullopt;
            }
            return std::nullopt;
          },
          [&](const CompositeRule& r) -> std::optional<SymbolicForm> {
            std::optional<SymbolicForm> acc = identity_form(space);
            if (!acc) return std::nullopt;
            for (const StepMap& m : r.chain) {
              auto f = symbolic_form(m);
              if (!f) return std::nullopt;
              acc = compose_forms(*acc, *f);
            }
            return acc;
          },
          [](const CustomRule&) -> std::optional<SymbolicForm> { return std::nullopt; },
      },
      map.rule());
}

SymbolicForm compose_forms(const SymbolicForm& outer, const SymbolicForm& inner) {
  if (outer.index() != inner.index()) {
    fail(ErrorKind::kInvalidArgument, "cannot compose rational and modular forms");
  }
  if (const auto* f = std::get_if<RationalAffineForm>(&outer)) {
    const auto& g = std::get<RationalAffineForm>(inner);
    auto [a, b] = compose_affine(f->linear, f->offset, g.linear, g.offset);
    return RationalAffineForm{std::move(a), std::move(b)};
  }
  const auto& f = std::get<ModAffineForm>(outer);
  const auto& g = std::get<ModAffineForm>(inner);
  auto [a, b] = compose_affine(f.linear, f.offset, g.linear, g.offset);
  return ModAffineForm{std::move(a), std::move(b)};
}

bool forms_equal(const SymbolicForm& a, const SymbolicForm& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        const auto& y = std::get<std::decay_t<decltype(x)>>(b);
        return x.linear == y.linear && vectors_equal(x.offset, y.offset);
      },
      a);
}

bool linear_part_is_identity(const SymbolicForm& f) {
  return std::visit([](const auto& x) { return x.linear.is_identity(); }, f);
}

State apply_form(const SymbolicForm& f, const StateSpace& space, const State& x) {
  if (const auto* r = std::get_if<RationalAffineForm>(&f)) {
    RatVector y = r->linear.apply(to_rational_vector(x));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += r->offset[i];
    return from_rational_vector(space, y);
  }
  const auto& m = std::get<ModAffineForm>(f);
  ModVector y = m.linear.apply(to_mod_vector(x, space.modulus()));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + m.offset[i];
  return from_mod_vector(space, y);
}

std::string_view to_string(PowerRoute route) {
  switch (route) {
    case PowerRoute::kIdentity: return "identity";
    case PowerRoute::kBinaryExponentiation: return "binary-exponentiation";
    case PowerRoute::kCycleDetection: return "cycle-detection";
    case PowerRoute::kIteration: return "iteration";
  }
  return "?";
}

IterateResult iterate_with_route(const StepMap& map, std::uint64_t n, const State& x, const Limits& limits) {
  const StateSpace& space = map.domain();
  space.require(x);
  if (n == 0) return {x, PowerRoute::kIdentity};
  if (auto form = symbolic_form(map)) {
    const bool modular = std::holds_alternative<ModAffineForm>(*form);
    const std::uint64_t cap = modular ? kModularExponentCap : limits.exponent_cap;
    if (n > cap && !(!modular && linear_part_is_identity(*form))) {
      fail(ErrorKind::kCapExceeded, "exponent " + std::to_string(n) + " exceeds the cap " +
                                        std::to_string(cap) + " for " + map.describe());
    }
    return {apply_form(power_form(*form, n, space), space, x), PowerRoute::kBinaryExponentiation};
  }
  if (is_label_space(space)) return cycle_walk(map, n, x);
  State cur = x;
  for (std::uint64_t i = 0; i < n; ++i) cur = map.apply(cur);
  return {cur, PowerRoute::kIteration};
}

State iterate(const StepMap& map, std::uint64_t n, const State& x, const Limits& limits) {
  return iterate_with_route(map, n, x, limits).state;
}

IterateResult iterate_signed_with_route(const StepMap& map, std::int64_t k, const State& x,
                                        const Limits& limits) {
  if (k >= 0) return iterate_with_route(map, static_cast<std::uint64_t>(k), x, limits);
  const std::uint64_t magnitude = static_cast<std::uint64_t>(-(k + 1)) + 1;
  InverseWitness inv = [&] {
    try {
      return invert(map, limits);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kNotSurjective || e.kind() == ErrorKind::kUndecidable) {
        fail(ErrorKind::kNotBijective, "negative power of " + map.describe() + ": " + e.what());
      }
      throw;
    }
  }();
  if (inv.kind != InverseWitness::Kind::kTwoSided) {
    fail(ErrorKind::kNotBijective, "negative power of non-injective map " + map.describe());
  }
  return iterate_with_route(inv.map, magnitude, x, limits);
}

State iterate_signed(const StepMap& map, std::int64_t k, const State& x, const Limits& limits) {
  return iterate_signed_with_route(map, k, x, limits).state;
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::kExhaustive: return "exhaustive";
    case Decision::kSymbolic: return "symbolic";
    case Decision::kSampled: return "sampled";
  }
  return "?";
}

MapComparison maps_equal(const StepMap& f, const StepMap& g, std::span<const State> sample,
                         const Limits& limits) {
  if (f.domain() != g.domain()) {
    fail(ErrorKind::kInvalidArgument, "maps_equal needs a shared domain: " + f.domain().describe() +
                                          " vs " + g.domain().describe());
  }
  const StateSpace& space = f.domain();
  if (space.enumerable(limits)) {
    auto idx = parallel::first_mismatch(f, g, *space.cardinality());
    if (!idx) return {true, Decision::kExhaustive, std::nullopt};
    return {false, Decision::kExhaustive, space.state_at(*idx)};
  }
  auto ff = symbolic_form(f);
  auto gf = symbolic_form(g);
  if (ff && gf && ff->index() == gf->index()) {
    if (forms_equal(*ff, *gf)) return {true, Decision::kSymbolic, std::nullopt};
    State witness = std::visit(
        [&](const auto& a) {
          const auto& b = std::get<std::decay_t<decltype(a)>>(*gf);
          auto x = distinguishing_point(a.linear, a.offset, b.linear, b.offset);
          if constexpr (std::is_same_v<std::decay_t<decltype(a)>, RationalAffineForm>) {
            return from_rational_vector(space, x);
          } else {
            return from_mod_vector(space, x);
          }
        },
        *ff);
    return {false, Decision::kSymbolic, witness};
  }
  if (sample.empty()) {
    fail(ErrorKind::kUndecidable, "cannot compare " + f.describe() + " and " + g.describe() + " on " +
                                      space.describe() + " without a sample");
  }
  for (const State& x : sample) {
    if (f.apply(x) != g.apply(x)) return {false, Decision::kSampled, x};
  }
  return {true, Decision::kSampled, std::nullopt};
}

}  // namespace latticerec
