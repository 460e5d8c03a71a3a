#include "latticerec/extension.hpp"

#include "latticerec/error.hpp"

namespace latticerec {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kYes: return "yes";
    case Verdict::kNo: return "no";
    case Verdict::kUndecided: return "undecided";
  }
  return "?";
}

namespace {

MapClassification classify_exhaustive(const StepMap& map) {
  const StateSpace& space = map.domain();
  const std::uint64_t n = *space.cardinality();
  constexpr std::uint64_t kUnseen = UINT64_MAX;
  std::vector<std::uint64_t> first_preimage(n, kUnseen);
  MapClassification out;
  out.injective.verdict = Verdict::kYes;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t img = space.index_of(map.apply(space.state_at(i)));
    if (first_preimage[img] == kUnseen) {
      first_preimage[img] = i;
    } else if (out.injective.verdict == Verdict::kYes) {
      out.injective.verdict = Verdict::kNo;
      out.injective.collision = std::make_pair(space.state_at(first_preimage[img]), space.state_at(i));
    }
  }
  out.surjective.verdict = Verdict::kYes;
  for (std::uint64_t y = 0; y < n; ++y) {
    if (first_preimage[y] == kUnseen) {
      out.surjective = {Verdict::kNo, space.state_at(y)};
      break;
    }
  }
  return out;
}

// Scales a rational vector to a primitive-ish integer vector.
RatVector clear_denominators(RatVector v) {
  Integer l = 1;
  for (const Rational& c : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  for (Rational& c : v) c *= l;
  return v;
}

template <class F>
std::vector<F> add(std::vector<F> a, const std::vector<F>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] + b[i];
  return a;
}

// First unit vector outside the column space of A.
template <class F>
std::vector<F> unit_outside_image(const Matrix<F>& a) {
  const std::size_t r = a.rank();
  const F zero = field_zero(a.any_entry());
  for (std::size_t j = 0; j < a.rows(); ++j) {
    Matrix<F> aug(a.rows(), a.cols() + 1, zero);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t c = 0; c < a.cols(); ++c) aug(i, c) = a(i, c);
    }
    aug(j, a.cols()) = field_one(zero);
    if (aug.rank() > r) {
      std::vector<F> e(a.rows(), zero);
      e[j] = field_one(zero);
      return e;
    }
  }
  fail(ErrorKind::kInvalidArgument, "matrix has full column space");
}

MapClassification classify_rational(const RationalAffineForm& f, const StateSpace& space) {
  const bool integral = space.kind() != StateSpace::Kind::kRationalVector;
  const Rational det = f.linear.determinant();
  const std::size_t d = f.linear.rows();
  const RatVector zero(d, Rational(0));
  MapClassification out;
  if (sgn(det) != 0) {
    out.injective.verdict = Verdict::kYes;
  } else {
    RatVector v = *f.linear.kernel_vector();
    if (integral) v = clear_denominators(std::move(v));
    out.injective = {Verdict::kNo, std::make_pair(from_rational_vector(space, zero), from_rational_vector(space, v))};
  }
  if (sgn(det) == 0) {
    out.surjective = {Verdict::kNo, from_rational_vector(space, add(f.offset, unit_outside_image(f.linear)))};
  } else if (!integral || abs(det) == 1) {
    out.surjective.verdict = Verdict::kYes;
  } else {
    // |det| > 1: some unit vector has a non-integral preimage.
    const RationalMatrix inv = *f.linear.inverse();
    for (std::size_t j = 0; j < d; ++j) {
      RatVector e(d, Rational(0));
      e[j] = 1;
      bool hit = true;
      for (const Rational& c : inv.apply(e)) hit = hit && is_integral(c);
      if (!hit) {
        out.surjective = {Verdict::kNo, from_rational_vector(space, add(f.offset, e))};
        break;
      }
    }
  }
  return out;
}

MapClassification classify_modular(const ModAffineForm& f, const StateSpace& space) {
  MapClassification out;
  const std::size_t d = f.linear.rows();
  if (!f.linear.determinant().is_zero()) {
    out.injective.verdict = Verdict::kYes;
    out.surjective.verdict = Verdict::kYes;
    return out;
  }
  const ModVector zero(d, ModP(0, space.modulus()));
  out.injective = {Verdict::kNo, std::make_pair(from_mod_vector(space, zero),
                                                from_mod_vector(space, *f.linear.kernel_vector()))};
  out.surjective = {Verdict::kNo, from_mod_vector(space, add(f.offset, unit_outside_image(f.linear)))};
  return out;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::optional<StepMap> structural_inverse(const StepMap& map, const Limits& limits) {
  const StateSpace& space = map.domain();
  return std::visit(
      Overloaded{
          [&](const TableRule& r) -> std::optional<StepMap> {
            std::vector<std::int64_t> inv(r.images.size());
            for (std::size_t x = 0; x < r.images.size(); ++x) inv[static_cast<std::size_t>(r.images[x])] = static_cast<std::int64_t>(x);
            return StepMap::table(std::move(inv));
          },
          [&](const AffineIntRule& r) -> std::optional<StepMap> {
            return StepMap::affine(r.a, -r.a * r.b);  // a = +-1
          },
          [&](const ModularAffineRule& r) -> std::optional<StepMap> {
            const std::int64_t p = space.modulus();
            const ModP ai = ModP(r.a, p).inverse();
            return StepMap::modular_affine(ai.value(), (-(ai * ModP(r.b, p))).value(), p);
          },
          [&](const MatrixRule& r) -> std::optional<StepMap> {
            if (const auto* q = std::get_if<RationalMatrix>(&r.matrix)) {
              return StepMap::matrix(*q->inverse(), space);
            }
            return StepMap::matrix(*std::get<ModMatrix>(r.matrix).inverse());
          },
          [&](const TranslateRule& r) -> std::optional<StepMap> {
            auto inv = r.monoid->inverse(r.element);
            if (!inv) return std::nullopt;
            return StepMap::translate(r.monoid, *inv, space);
          },
          [&](const CompositeRule& r) -> std::optional<StepMap> {
            StepMap acc = StepMap::identity(space);
            for (const StepMap& m : r.chain) {
              auto inv = structural_inverse(m, limits);
              if (!inv) return std::nullopt;
              acc = compose(acc, *inv);
            }
            return acc;
          },
          [&](const CustomRule&) -> std::optional<StepMap> { return std::nullopt; },
      },
      map.rule());
}

// Least-preimage table on a finite label space.
StepMap preimage_table(const StepMap& map) {
  const auto n = static_cast<std::int64_t>(*map.domain().cardinality());
  std::vector<std::int64_t> h(static_cast<std::size_t>(n), -1);
  for (std::int64_t x = 0; x < n; ++x) {
    auto& slot = h[static_cast<std::size_t>(map.apply(State(x)).label())];
    if (slot < 0) slot = x;
  }
  return StepMap::table(std::move(h));
}

}  // namespace

MapClassification classify(const StepMap& map, const Limits& limits) {
  const StateSpace& space = map.domain();
  if (space.enumerable(limits)) return classify_exhaustive(map);
  if (auto form = symbolic_form(map)) {
    if (const auto* r = std::get_if<RationalAffineForm>(&*form)) return classify_rational(*r, space);
    return classify_modular(std::get<ModAffineForm>(*form), space);
  }
  return {};
}

InverseWitness invert(const StepMap& map, const Limits& limits) {
  const MapClassification cls = classify(map, limits);
  if (cls.surjective.verdict == Verdict::kNo) {
    fail(ErrorKind::kNotSurjective, map.describe() + " is not surjective: " +
                                        cls.surjective.missed->to_string() + " has no preimage");
  }
  if (cls.surjective.verdict == Verdict::kUndecided || cls.injective.verdict == Verdict::kUndecided) {
    fail(ErrorKind::kUndecidable, "cannot decide whether " + map.describe() + " is invertible");
  }
  if (cls.injective.verdict == Verdict::kYes) {
    if (auto inv = structural_inverse(map, limits)) return {InverseWitness::Kind::kTwoSided, *inv};
    if (map.domain().kind() == StateSpace::Kind::kFinite) {
      return {InverseWitness::Kind::kTwoSided, preimage_table(map)};
    }
    fail(ErrorKind::kUndecidable, "no inverse construction for " + map.describe());
  }
  if (map.domain().kind() == StateSpace::Kind::kFinite) {
    return {InverseWitness::Kind::kRight, preimage_table(map)};
  }
  fail(ErrorKind::kUndecidable, "no right-inverse construction for " + map.describe());
}

Evaluation eval_anywhere(const AutonomousSystem& sys, const CompatibilityReport& report, const MultiIndex& t0,
                         const State& x0, const MultiIndex& t, const EvalOptions& options) {
  const std::size_t m = sys.dimension();
  if (t0.dimension() != m || t.dimension() != m) {
    fail(ErrorKind::kDimensionMismatch, "expected multi-indices of dimension " + std::to_string(m));
  }
  if (!report.allows_evaluation() && !options.unsafe_incompatible) {
    fail(ErrorKind::kIncompatible, "system is incompatible");
  }
  std::vector<StepMap> inverses;
  for (int a = 1; a <= static_cast<int>(m); ++a) {
    const MapClassification cls = classify(sys.map(a), options.limits);
    if (!cls.bijective()) {
      fail(ErrorKind::kNotBijective, "map " + std::to_string(a) + " (" + sys.map(a).describe() +
                                         ") is not a bijection");
    }
  }
  sys.space().require(x0);
  const MultiIndex delta = t - t0;
  Evaluation out{x0, report.status, !report.allows_evaluation(), std::vector<PowerRoute>(m, PowerRoute::kIdentity)};
  for (int a = static_cast<int>(m); a >= 1; --a) {
    auto step = iterate_signed_with_route(sys.map(a), delta.coord(a), out.state, options.limits);
    out.state = std::move(step.state);
    out.routes[static_cast<std::size_t>(a - 1)] = step.route;
  }
  return out;
}

Evaluation eval_anywhere(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0, const MultiIndex& t,
                         const EvalOptions& options) {
  return eval_anywhere(sys, check_compatibility(sys, {}, options.limits), t0, x0, t, options);
}

ExtensionEvaluator::ExtensionEvaluator(std::shared_ptr<const AutonomousSystem> sys, CompatibilityReport report,
                                       MultiIndex start, State initial)
    : sys_(std::move(sys)), report_(std::move(report)), start_(std::move(start)), initial_(std::move(initial)) {}

State ExtensionEvaluator::operator()(const MultiIndex& t) const {
  return eval_forward(*sys_, report_, start_, initial_, t).state;
}

BackwardExtension backward_extension_pair(const AutonomousSystem& sys, const MultiIndex& t0, const State& x0,
                                          int axis, const Limits& limits) {
  require_axis(axis, sys.dimension());
  const StateSpace& space = sys.space();
  if (!space.enumerable(limits)) {
    fail(ErrorKind::kInfiniteSearch, "preimage search refused on " + space.describe());
  }
  space.require(x0);
  CompatibilityReport report = check_compatibility(sys, {}, limits);
  if (!report.allows_evaluation()) fail(ErrorKind::kIncompatible, "backward extension needs a compatible system");

  const StepMap& g = sys.map(axis);
  const std::uint64_t n = *space.cardinality();
  std::vector<State> preimages;
  for (std::uint64_t i = 0; i < n && preimages.size() < 2; ++i) {
    State x = space.state_at(i);
    if (g.apply(x) == x0) preimages.push_back(std::move(x));
  }
  if (preimages.empty()) return NoExtension{axis, x0};

  auto shared = std::make_shared<const AutonomousSystem>(sys);
  const MultiIndex start = t0.shifted(axis, -1);
  auto two = [&](State v, State p, State q) -> BackwardExtension {
    return TwoExtensions{axis, std::move(v), p, q, ExtensionEvaluator(shared, report, start, p),
                         ExtensionEvaluator(shared, report, start, q)};
  };
  if (preimages.size() >= 2) return two(x0, preimages[0], preimages[1]);

  const MapClassification cls = classify(g, limits);
  if (cls.injective.verdict == Verdict::kNo) {
    const auto& [p, q] = *cls.injective.collision;
    return two(g.apply(p), p, q);
  }
  return UniqueExtension{axis, preimages[0], ExtensionEvaluator(shared, report, start, preimages[0])};
}

}  // namespace latticerec
