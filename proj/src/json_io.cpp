#include "latticerec/json_io.hpp"

#include <cstdio>

#include "latticerec/error.hpp"

namespace latticerec {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

// Rethrows a parse failure of a command-line value as a usage error.
template <class Fn>
auto usage_guard(std::string_view text, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(ErrorKind::kUsage, "cannot read '" + std::string(text) + "': " + e.what());
  }
}

std::int64_t label_from(const Integer& v, const StateSpace& space) {
  if (sgn(v) < 0 || v >= space.size()) {
    fail(ErrorKind::kOutOfDomain, "label " + to_text(v) + " is not in " + space.describe());
  }
  return to_int64(v);
}

State state_from_components(const StateSpace& space, const std::vector<Rational>& comps) {
  using K = StateSpace::Kind;
  const auto scalar = [&]() -> const Rational& {
    if (comps.size() != 1) fail(ErrorKind::kDimensionMismatch, space.describe() + " expects one value");
    return comps.front();
  };
  const auto integral = [](const Rational& r) -> Integer {
    if (!is_integral(r)) fail(ErrorKind::kOutOfDomain, to_text(r) + " is not an integer");
    return r.get_num();
  };
  switch (space.kind()) {
    case K::kFinite:
    case K::kModularLine:
      return State(label_from(integral(scalar()), space));
    case K::kIntegerLine:
      return State::integer(integral(scalar()));
    case K::kIntegerVector:
    case K::kRationalVector:
    case K::kModularVector: {
      if (comps.size() != space.dim()) {
        fail(ErrorKind::kDimensionMismatch, space.describe() + " expects " + std::to_string(space.dim()) +
                                                " components, got " + std::to_string(comps.size()));
      }
      if (space.kind() == K::kRationalVector) return State::rat_vector(comps);
      if (space.kind() == K::kIntegerVector) {
        IntVector v;
        for (const Rational& c : comps) v.push_back(integral(c));
        return State::int_vector(std::move(v));
      }
      ModVector v;
      for (const Rational& c : comps) v.emplace_back(mod_normalize(integral(c), space.modulus()), space.modulus());
      return State::mod_vector(std::move(v));
    }
    case K::kAugmented:
      break;
  }
  fail(ErrorKind::kInvalidArgument, "states of " + space.describe() + " have no flat spelling");
}

}  // namespace

Json number_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(to_text(v));
}

Json number_json(const Rational& v) {
  if (is_integral(v)) return number_json(Integer(v.get_num()));
  return Json(to_text(v));
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(parse_integer(std::to_string(j.get<std::uint64_t>())));
    return Rational(parse_integer(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail(ErrorKind::kParse, "expected an integer or a \"p/q\" string, got " + j.dump());
}

Integer integer_from_json(const Json& j) {
  const Rational r = rational_from_json(j);
  if (!is_integral(r)) fail(ErrorKind::kParse, "expected an integer, got " + to_text(r));
  return r.get_num();
}

Json multi_index_json(const MultiIndex& t) { return Json(t.coords()); }

Json state_json(const State& x) {
  return std::visit(
      [](const auto& a) -> Json {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return Json(a);
        } else if constexpr (std::is_same_v<T, Integer>) {
          return number_json(a);
        } else if constexpr (std::is_same_v<T, AugmentedState>) {
          return Json{{"time", multi_index_json(a.time)}, {"state", state_json(*a.inner)}};
        } else if constexpr (std::is_same_v<T, ModVector>) {
          Json arr = Json::array();
          for (const ModP& c : a) arr.push_back(c.value());
          return arr;
        } else {
          Json arr = Json::array();
          for (const auto& c : a) arr.push_back(number_json(c));
          return arr;
        }
      },
      x.value());
}

State state_from_json(const StateSpace& space, const Json& j) {
  if (space.kind() == StateSpace::Kind::kAugmented) {
    if (!j.is_object() || !j.contains("time") || !j.contains("state") || j.size() != 2) {
      fail(ErrorKind::kParse, "augmented state needs exactly the keys time and state");
    }
    std::vector<std::int64_t> t;
    for (const Json& c : j.at("time")) t.push_back(to_int64(integer_from_json(c)));
    State x = State::augmented(MultiIndex(std::move(t)), state_from_json(space.inner(), j.at("state")));
    space.require(x);
    return x;
  }
  std::vector<Rational> comps;
  if (j.is_array()) {
    if (!space.is_vector()) fail(ErrorKind::kParse, space.describe() + " expects a single value, got " + j.dump());
    for (const Json& c : j) comps.push_back(rational_from_json(c));
  } else {
    if (space.is_vector()) fail(ErrorKind::kParse, space.describe() + " expects an array, got " + j.dump());
    comps.push_back(rational_from_json(j));
  }
  return state_from_components(space, comps);
}

MultiIndex parse_multi_index_text(std::string_view text) {
  return usage_guard(text, [&] {
    std::vector<std::int64_t> coords;
    for (const std::string& part : split_commas(text)) coords.push_back(to_int64(parse_integer(part)));
    return MultiIndex(std::move(coords));
  });
}

State parse_state_text(const StateSpace& space, std::string_view text) {
  return usage_guard(text, [&] {
    std::vector<Rational> comps;
    for (const std::string& part : split_commas(text)) comps.push_back(parse_rational(part));
    return state_from_components(space, comps);
  });
}

Json report_json(const CompatibilityReport& report) {
  Json pairs = Json::array();
  for (const PairDecision& p : report.pairs) {
    pairs.push_back({{"alpha", p.alpha},
                     {"beta", p.beta},
                     {"commute", p.commute},
                     {"decided", std::string(to_string(p.decided))}});
  }
  Json witnesses = Json::array();
  for (const CommutationWitness& w : report.witnesses) {
    Json wj{{"alpha", w.alpha}, {"beta", w.beta}, {"state", state_json(w.state)}, {"lhs", state_json(w.lhs)},
            {"rhs", state_json(w.rhs)}};
    if (w.time) wj["time"] = multi_index_json(*w.time);
    witnesses.push_back(std::move(wj));
  }
  Json out{{"status", std::string(to_string(report.status))},
           {"decided", std::string(to_string(report.decided()))},
           {"checked_pairs", report.checked_pairs},
           {"pairs", std::move(pairs)},
           {"witnesses", std::move(witnesses)}};
  if (report.window) {
    out["window"] = {{"lo", multi_index_json(report.window->first)}, {"hi", multi_index_json(report.window->second)}};
  }
  return out;
}

Json path_json(const MonotonePath& path) { return Json{{"start", multi_index_json(path.start)}, {"steps", path.steps}}; }

std::vector<std::string> csv_state_header(const StateSpace& space) {
  if (!space.is_vector()) return {"x"};
  std::vector<std::string> h;
  for (std::size_t i = 1; i <= space.dim(); ++i) h.push_back("x_" + std::to_string(i));
  return h;
}

std::vector<std::string> csv_state_cells(const State& x) {
  return std::visit(
      [](const auto& a) -> std::vector<std::string> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return {std::to_string(a)};
        } else if constexpr (std::is_same_v<T, Integer>) {
          return {to_text(a)};
        } else if constexpr (std::is_same_v<T, AugmentedState>) {
          fail(ErrorKind::kInvalidArgument, "augmented states have no CSV spelling");
        } else {
          std::vector<std::string> cells;
          for (const auto& c : a) cells.push_back(to_text(c));
          return cells;
        }
      },
      x.value());
}

std::string digest_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace latticerec
