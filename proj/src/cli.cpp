#include "latticerec/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "latticerec/closedforms.hpp"
#include "latticerec/error.hpp"
#include "latticerec/extension.hpp"

namespace latticerec {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kExitUsage;
    case ErrorKind::kParse:
    case ErrorKind::kConfig: return kExitParse;
    default: return kExitEvaluation;
  }
}

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::kAutonomous: return "autonomous";
    case SystemKind::kNonautonomous: return "nonautonomous";
    case SystemKind::kMonoid: return "monoid";
    case SystemKind::kMatrix: return "matrix";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------- parsing

class Reader {
 public:
  std::vector<ConfigError> errors;

  void error(std::string path, std::string message) { errors.push_back({std::move(path), std::move(message)}); }

  // Runs fn, turning any failure into an error at `path`.
  bool guard(const std::string& path, const std::function<void()>& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      error(path, e.what());
    } catch (const Json::exception& e) {
      error(path, e.what());
    }
    return false;
  }

  bool object(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (std::string_view a : allowed) known = known || key == a;
      if (!known) error(path + "/" + key, "unknown key '" + key + "'");
    }
    return true;
  }

  const Json* require(const Json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      error(path, "missing key '" + key + "'");
      return nullptr;
    }
    return &*it;
  }
};

std::int64_t read_i64(const Json& j) { return to_int64(integer_from_json(j)); }

std::uint64_t read_positive(const Json& j) {
  const Integer v = integer_from_json(j);
  if (sgn(v) <= 0 || !v.fits_ulong_p()) fail(ErrorKind::kConfig, "expected a positive integer, got " + j.dump());
  return v.get_ui();
}

const Json& array_of(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorKind::kConfig, std::string(what) + " must be an array");
  return j;
}

std::vector<std::int64_t> read_i64_list(const Json& j, const char* what) {
  std::vector<std::int64_t> out;
  for (const Json& c : array_of(j, what)) out.push_back(read_i64(c));
  return out;
}

RationalMatrix read_rational_matrix(const Json& rows) {
  std::vector<std::vector<Rational>> data;
  for (const Json& row : array_of(rows, "rows")) {
    std::vector<Rational>& r = data.emplace_back();
    for (const Json& c : array_of(row, "each row")) r.push_back(rational_from_json(c));
    if (r.empty()) fail(ErrorKind::kConfig, "matrix rows must not be empty");
  }
  RationalMatrix a = RationalMatrix::from_rows(data);
  if (!a.is_square()) fail(ErrorKind::kConfig, "matrix must be square");
  return a;
}

ModMatrix read_mod_matrix(const Json& rows, std::int64_t p) {
  std::vector<std::vector<ModP>> data;
  for (const Json& row : array_of(rows, "rows")) {
    std::vector<ModP>& r = data.emplace_back();
    for (const Json& c : array_of(row, "each row")) r.emplace_back(mod_normalize(integer_from_json(c), p), p);
    if (r.empty()) fail(ErrorKind::kConfig, "matrix rows must not be empty");
  }
  ModMatrix a = ModMatrix::from_rows(data);
  if (!a.is_square()) fail(ErrorKind::kConfig, "matrix must be square");
  return a;
}

void require_kind(const StateSpace& space, std::initializer_list<StateSpace::Kind> kinds, const std::string& rule) {
  for (StateSpace::Kind k : kinds) {
    if (space.kind() == k) return;
  }
  fail(ErrorKind::kConfig, "rule '" + rule + "' cannot act on " + space.describe());
}

StateSpace read_space(Reader& rd, const Json& j, const std::string& path) {
  if (!rd.object(j, path, {"kind", "size", "dim", "modulus"})) fail(ErrorKind::kConfig, "bad state space");
  const Json* kind = rd.require(j, "kind", path);
  if (!kind) fail(ErrorKind::kConfig, "bad state space");
  const std::string k = kind->get<std::string>();
  const auto param = [&](const char* key) -> const Json& {
    if (!j.contains(key)) fail(ErrorKind::kConfig, "state space '" + k + "' needs '" + key + "'");
    return j.at(key);
  };
  const auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : j.items()) {
      if (key == "kind") continue;
      bool ok = false;
      for (const char* a : keys) ok = ok || key == a;
      if (!ok) fail(ErrorKind::kConfig, "state space '" + k + "' takes no '" + key + "'");
    }
  };
  if (k == "finite") {
    only({"size"});
    return StateSpace::finite(static_cast<std::int64_t>(read_positive(param("size"))));
  }
  if (k == "integer_line") {
    only({});
    return StateSpace::integer_line();
  }
  if (k == "integer_vector") {
    only({"dim"});
    return StateSpace::integer_vector(read_positive(param("dim")));
  }
  if (k == "rational_vector") {
    only({"dim"});
    return StateSpace::rational_vector(read_positive(param("dim")));
  }
  if (k == "modular_line") {
    only({"modulus"});
    return StateSpace::modular_line(read_i64(param("modulus")));
  }
  if (k == "modular_vector") {
    only({"dim", "modulus"});
    return StateSpace::modular_vector(read_positive(param("dim")), read_i64(param("modulus")));
  }
  fail(ErrorKind::kConfig, "unknown state space kind '" + k + "'");
}

std::string rule_name(Reader& rd, const Json& desc, const std::string& path) {
  const Json* r = rd.require(desc, "rule", path);
  if (!r) fail(ErrorKind::kConfig, "map descriptor needs a rule");
  return r->get<std::string>();
}

StepMap read_plain_map(const Json& desc, const std::string& rule, const StateSpace& space) {
  using K = StateSpace::Kind;
  const auto expect_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : desc.items()) {
      if (key == "rule") continue;
      bool ok = false;
      for (const char* a : keys) ok = ok || key == a;
      if (!ok) fail(ErrorKind::kConfig, "unknown key '" + key + "' for rule '" + rule + "'");
    }
    for (const char* a : keys) {
      if (!desc.contains(a)) fail(ErrorKind::kConfig, "rule '" + rule + "' needs '" + a + "'");
    }
  };
  if (rule == "identity") {
    expect_keys({});
    return StepMap::identity(space);
  }
  if (rule == "table") {
    expect_keys({"images"});
    require_kind(space, {K::kFinite}, rule);
    std::vector<std::int64_t> images = read_i64_list(desc.at("images"), "images");
    if (static_cast<std::int64_t>(images.size()) != space.size()) {
      fail(ErrorKind::kConfig, "table has " + std::to_string(images.size()) + " entries but the state space has " +
                                   std::to_string(space.size()) + " states");
    }
    return StepMap::table(std::move(images));
  }
  if (rule == "affine") {
    expect_keys({"a", "b"});
    require_kind(space, {K::kIntegerLine}, rule);
    return StepMap::affine(integer_from_json(desc.at("a")), integer_from_json(desc.at("b")));
  }
  if (rule == "modular_affine") {
    expect_keys({"a", "b"});
    require_kind(space, {K::kModularLine}, rule);
    const std::int64_t p = space.modulus();
    return StepMap::modular_affine(mod_normalize(integer_from_json(desc.at("a")), p),
                                   mod_normalize(integer_from_json(desc.at("b")), p), p);
  }
  if (rule == "matrix") {
    expect_keys({"rows"});
    require_kind(space, {K::kRationalVector, K::kIntegerVector, K::kModularVector}, rule);
    if (space.kind() == K::kModularVector) return StepMap::matrix(read_mod_matrix(desc.at("rows"), space.modulus()));
    return StepMap::matrix(read_rational_matrix(desc.at("rows")), space);
  }
  fail(ErrorKind::kConfig, "unknown rule '" + rule + "'");
}

TimePolynomial read_polynomial(const Json& j, std::size_t m) {
  if (!j.is_object()) return TimePolynomial::constant(m, rational_from_json(j));
  for (const auto& [key, _] : j.items()) {
    if (key != "constant" && key != "axes") fail(ErrorKind::kConfig, "unknown polynomial key '" + key + "'");
  }
  TimePolynomial p = TimePolynomial::constant(m, j.contains("constant") ? rational_from_json(j.at("constant")) : 0);
  if (j.contains("axes")) {
    const Json& axes = array_of(j.at("axes"), "axes");
    if (axes.size() != m) {
      fail(ErrorKind::kConfig, "polynomial lists " + std::to_string(axes.size()) + " axes, expected " +
                                   std::to_string(m));
    }
    for (std::size_t a = 0; a < m; ++a) {
      std::vector<Rational> coeffs{0};
      for (const Json& c : array_of(axes[a], "each axis")) coeffs.push_back(rational_from_json(c));
      p = p + TimePolynomial::in_axis(m, static_cast<int>(a + 1), coeffs);
    }
  }
  return p;
}

TimedStepMap read_timed_map(const Json& desc, const std::string& rule, const StateSpace& space, std::size_t m) {
  using K = StateSpace::Kind;
  const auto expect_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : desc.items()) {
      if (key == "rule") continue;
      bool ok = false;
      for (const char* a : keys) ok = ok || key == a;
      if (!ok) fail(ErrorKind::kConfig, "unknown key '" + key + "' for rule '" + rule + "'");
    }
    for (const char* a : keys) {
      if (!desc.contains(a)) fail(ErrorKind::kConfig, "rule '" + rule + "' needs '" + a + "'");
    }
  };
  if (rule == "table_per_time") {
    expect_keys({"tables"});
    require_kind(space, {K::kFinite}, rule);
    std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> tables;
    for (const Json& entry : array_of(desc.at("tables"), "tables")) {
      if (!entry.is_object() || entry.size() != 2 || !entry.contains("t") || !entry.contains("images")) {
        fail(ErrorKind::kConfig, "each timed table needs exactly the keys t and images");
      }
      std::vector<std::int64_t> t = read_i64_list(entry.at("t"), "t");
      if (t.size() != m) fail(ErrorKind::kConfig, "table time " + entry.at("t").dump() + " has the wrong dimension");
      if (!tables.emplace(std::move(t), read_i64_list(entry.at("images"), "images")).second) {
        fail(ErrorKind::kConfig, "time " + entry.at("t").dump() + " is listed twice");
      }
    }
    return TimedStepMap::table_per_time(static_cast<std::size_t>(space.size()), std::move(tables));
  }
  if (rule == "affine_timed") {
    expect_keys({"a", "b"});
    require_kind(space, {K::kIntegerLine}, rule);
    return TimedStepMap::affine(read_polynomial(desc.at("a"), m), read_polynomial(desc.at("b"), m));
  }
  if (rule == "matrix_timed") {
    expect_keys({"rows"});
    require_kind(space, {K::kRationalVector, K::kIntegerVector}, rule);
    std::vector<TimePolynomial> entries;
    const Json& rows = array_of(desc.at("rows"), "rows");
    for (const Json& row : rows) {
      if (array_of(row, "each row").size() != rows.size()) fail(ErrorKind::kConfig, "timed matrix must be square");
      for (const Json& c : row) entries.push_back(read_polynomial(c, m));
    }
    return TimedStepMap::matrix(rows.size(), std::move(entries), space);
  }
  return TimedStepMap::constant(read_plain_map(desc, rule, space));
}

std::shared_ptr<const Monoid> read_monoid(Reader& rd, const Json& j, const StateSpace& space, const std::string& path) {
  if (!rd.object(j, path, {"kind", "table", "identity", "action"})) fail(ErrorKind::kConfig, "bad monoid");
  const Json* kind = rd.require(j, "kind", path);
  if (!kind) fail(ErrorKind::kConfig, "bad monoid");
  const std::string k = kind->get<std::string>();
  const bool has_table_keys = j.contains("table") || j.contains("identity") || j.contains("action");
  if (k != "finite" && has_table_keys) fail(ErrorKind::kConfig, "only finite monoids take table, identity or action");
  std::shared_ptr<const Monoid> monoid;
  if (k == "integer_addition") {
    monoid = std::make_shared<const Monoid>(Monoid::integer_addition(space.is_vector() ? space.dim() : 1));
  } else if (k == "positive_rationals") {
    monoid = std::make_shared<const Monoid>(Monoid::positive_rationals());
  } else if (k == "matrices") {
    const std::int64_t p = space.kind() == StateSpace::Kind::kModularVector ? space.modulus() : 0;
    monoid = std::make_shared<const Monoid>(Monoid::matrices(space.is_vector() ? space.dim() : 1, p));
  } else if (k == "finite") {
    const auto table_of = [](const Json& t) {
      Monoid::Table out;
      for (const Json& row : array_of(t, "table")) out.push_back(read_i64_list(row, "each table row"));
      return out;
    };
    if (!j.contains("table") || !j.contains("identity")) fail(ErrorKind::kConfig, "finite monoid needs table and identity");
    std::optional<Monoid::Table> action;
    if (j.contains("action")) action = table_of(j.at("action"));
    monoid = std::make_shared<const Monoid>(Monoid::finite(table_of(j.at("table")), read_i64(j.at("identity")), action));
  } else {
    fail(ErrorKind::kConfig, "unknown monoid kind '" + k + "'");
  }
  if (!monoid->acts_on(space)) fail(ErrorKind::kConfig, monoid->describe() + " does not act on " + space.describe());
  return monoid;
}

MonoidElement read_element(const Monoid& monoid, const Json& j) {
  MonoidElement a;
  switch (monoid.kind()) {
    case Monoid::Kind::kIntegerAddition: {
      IntVector v;
      if (j.is_array()) {
        for (const Json& c : j) v.push_back(integer_from_json(c));
      } else {
        v.push_back(integer_from_json(j));
      }
      a = std::move(v);
      break;
    }
    case Monoid::Kind::kPositiveRationals:
      a = rational_from_json(j);
      break;
    case Monoid::Kind::kFinite:
      a = read_i64(j);
      break;
    case Monoid::Kind::kMatrices:
      if (monoid.modulus() == 0) {
        a = read_rational_matrix(j);
      } else {
        a = read_mod_matrix(j, monoid.modulus());
      }
      break;
  }
  monoid.validate(a);
  return a;
}

std::size_t line_column(std::string_view text, std::size_t byte, std::size_t& column) {
  std::size_t line = 1;
  std::size_t line_start = 0;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  column = end - line_start + 1;
  return line;
}

}  // namespace

ParsedConfig parse_config(std::string_view text) {
  ParsedConfig result;
  std::vector<std::set<std::string>> open_objects;
  std::vector<std::string> duplicates;
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end(), [&](int, Json::parse_event_t event, Json& parsed) {
      if (event == Json::parse_event_t::object_start) {
        open_objects.emplace_back();
      } else if (event == Json::parse_event_t::object_end) {
        open_objects.pop_back();
      } else if (event == Json::parse_event_t::key) {
        const std::string key = parsed.get<std::string>();
        if (!open_objects.back().insert(key).second) duplicates.push_back(key);
      }
      return true;
    });
  } catch (const Json::parse_error& e) {
    ConfigError err{"", "syntax error: " + std::string(e.what())};
    err.line = line_column(text, e.byte, err.column);
    result.errors.push_back(std::move(err));
    return result;
  }

  Reader rd;
  for (const std::string& key : duplicates) rd.error("", "duplicate key '" + key + "'");
  if (!rd.object(doc, "", {"dimension", "state_space", "kind", "maps", "t1", "monoid", "limits", "sample"})) {
    result.errors = std::move(rd.errors);
    return result;
  }

  SystemConfig cfg;
  bool ok_dimension = false;
  bool ok_kind = false;
  bool ok_space = false;
  if (const Json* d = rd.require(doc, "dimension", "")) {
    ok_dimension = rd.guard("/dimension", [&] { cfg.dimension = read_positive(*d); });
  }
  if (const Json* k = rd.require(doc, "kind", "")) {
    ok_kind = rd.guard("/kind", [&] {
      const std::string s = k->get<std::string>();
      if (s == "autonomous") {
        cfg.kind = SystemKind::kAutonomous;
      } else if (s == "nonautonomous") {
        cfg.kind = SystemKind::kNonautonomous;
      } else if (s == "monoid") {
        cfg.kind = SystemKind::kMonoid;
      } else if (s == "matrix") {
        cfg.kind = SystemKind::kMatrix;
      } else {
        fail(ErrorKind::kConfig, "unknown kind '" + s + "'");
      }
    });
  }
  if (const Json* s = rd.require(doc, "state_space", "")) {
    ok_space = rd.guard("/state_space", [&] { cfg.space = read_space(rd, *s, "/state_space"); });
  }
  if (doc.contains("limits")) {
    const Json& lim = doc.at("limits");
    if (rd.object(lim, "/limits", {"path_cap", "volume_cap", "exponent_cap", "enumeration_cap"})) {
      for (const auto& [key, value] : lim.items()) {
        rd.guard("/limits/" + key, [&, &key = key, &value = value] {
          const std::uint64_t v = read_positive(value);
          if (key == "path_cap") cfg.limits.path_cap = v;
          if (key == "volume_cap") cfg.limits.volume_cap = v;
          if (key == "exponent_cap") cfg.limits.exponent_cap = v;
          if (key == "enumeration_cap") cfg.limits.enumeration_cap = v;
        });
      }
    }
  }

  MultiIndex t1;
  bool ok_t1 = true;
  if (doc.contains("t1")) {
    if (ok_kind && cfg.kind != SystemKind::kNonautonomous) {
      rd.error("/t1", "t1 only applies to nonautonomous systems");
      ok_t1 = false;
    } else {
      ok_t1 = rd.guard("/t1", [&] {
        t1 = MultiIndex(read_i64_list(doc.at("t1"), "t1"));
        if (ok_dimension && t1.dimension() != cfg.dimension) {
          fail(ErrorKind::kConfig, "t1 has " + std::to_string(t1.dimension()) + " coordinates but dimension is " +
                                       std::to_string(cfg.dimension));
        }
      });
    }
  } else if (ok_kind && cfg.kind == SystemKind::kNonautonomous) {
    rd.error("", "missing key 't1' (required for nonautonomous systems)");
    ok_t1 = false;
  }

  bool ok_monoid = true;
  if (doc.contains("monoid")) {
    if (ok_kind && cfg.kind != SystemKind::kMonoid) {
      rd.error("/monoid", "monoid only applies to monoid systems");
      ok_monoid = false;
    } else if (ok_space) {
      ok_monoid = rd.guard("/monoid", [&] { cfg.monoid = read_monoid(rd, doc.at("monoid"), cfg.space, "/monoid"); });
    }
  } else if (ok_kind && cfg.kind == SystemKind::kMonoid) {
    rd.error("", "missing key 'monoid' (required for monoid systems)");
    ok_monoid = false;
  }
  if (ok_kind && cfg.kind == SystemKind::kMatrix && ok_space && !cfg.space.is_vector()) {
    rd.error("/state_space", "matrix systems act on vector spaces, not " + cfg.space.describe());
    ok_space = false;
  }

  std::vector<TimedStepMap> timed_maps;
  if (const Json* maps = rd.require(doc, "maps", "")) {
    if (!maps->is_array()) {
      rd.error("/maps", "expected an array");
    } else {
      if (ok_dimension && maps->size() != cfg.dimension) {
        rd.error("/maps", "dimension is " + std::to_string(cfg.dimension) + " but " + std::to_string(maps->size()) +
                              " maps are given");
      }
      if (ok_kind && ok_space && ok_monoid) {
        const std::size_t m = ok_dimension ? cfg.dimension : maps->size();
        for (std::size_t i = 0; i < maps->size(); ++i) {
          const Json& desc = (*maps)[i];
          const std::string path = "/maps/" + std::to_string(i);
          if (!desc.is_object()) {
            rd.error(path, "expected an object");
            continue;
          }
          rd.guard(path, [&] {
            const std::string rule = rule_name(rd, desc, path);
            switch (cfg.kind) {
              case SystemKind::kAutonomous:
                cfg.maps.push_back(read_plain_map(desc, rule, cfg.space));
                break;
              case SystemKind::kNonautonomous:
                timed_maps.push_back(read_timed_map(desc, rule, cfg.space, m));
                break;
              case SystemKind::kMatrix: {
                if (rule != "matrix") fail(ErrorKind::kConfig, "matrix systems only take rule 'matrix'");
                cfg.maps.push_back(read_plain_map(desc, rule, cfg.space));
                const auto& r = std::get<MatrixRule>(cfg.maps.back().rule());
                if (const auto* q = std::get_if<RationalMatrix>(&r.matrix)) {
                  cfg.rational_matrices.push_back(*q);
                } else {
                  cfg.mod_matrices.push_back(std::get<ModMatrix>(r.matrix));
                }
                break;
              }
              case SystemKind::kMonoid: {
                if (rule != "translate") fail(ErrorKind::kConfig, "monoid systems only take rule 'translate'");
                for (const auto& [key, _] : desc.items()) {
                  if (key != "rule" && key != "element") fail(ErrorKind::kConfig, "unknown key '" + key + "'");
                }
                if (!desc.contains("element")) fail(ErrorKind::kConfig, "rule 'translate' needs 'element'");
                cfg.elements.push_back(read_element(*cfg.monoid, desc.at("element")));
                cfg.maps.push_back(StepMap::translate(cfg.monoid, cfg.elements.back(), cfg.space));
                break;
              }
            }
          });
        }
      }
    }
  }

  if (doc.contains("sample") && ok_space) {
    const Json& sample = doc.at("sample");
    if (!sample.is_array()) {
      rd.error("/sample", "expected an array");
    } else {
      for (std::size_t i = 0; i < sample.size(); ++i) {
        rd.guard("/sample/" + std::to_string(i), [&] { cfg.sample.push_back(state_from_json(cfg.space, sample[i])); });
      }
    }
  }

  if (rd.errors.empty() && cfg.kind == SystemKind::kNonautonomous && ok_t1) {
    rd.guard("", [&] { cfg.timed.emplace(t1, std::move(timed_maps)); });
  }
  if (!rd.errors.empty()) {
    result.errors = std::move(rd.errors);
    return result;
  }
  cfg.digest = "fnv1a64:" + digest_hex(doc.dump());
  result.config = std::move(cfg);
  return result;
}

namespace {

// --------------------------------------------------------------- commands

Json base_document(const SystemConfig& cfg, std::string_view command) {
  return Json{{"command", std::string(command)},
              {"config_digest", cfg.digest},
              {"system", {{"kind", std::string(to_string(cfg.kind))},
                          {"dimension", cfg.dimension},
                          {"state_space", cfg.space.describe()}}}};
}

void set_status(CommandResult& r, int code) {
  static const char* const kNames[] = {"ok", "incompatible", "sampled", "usage-error", "parse-error", "error"};
  r.exit_code = code;
  r.document["exit_code"] = code;
  r.document["status"] = kNames[code];
}

int exit_for(CompatibilityStatus s) {
  switch (s) {
    case CompatibilityStatus::kCompatible: return kExitOk;
    case CompatibilityStatus::kIncompatible: return kExitIncompatible;
    case CompatibilityStatus::kSampledCompatible: return kExitSampled;
  }
  return kExitEvaluation;
}

Limits effective_limits(const SystemConfig& cfg, const CommandOptions& opt) {
  Limits l = cfg.limits;
  if (opt.path_cap) l.path_cap = *opt.path_cap;
  if (opt.volume_cap) l.volume_cap = *opt.volume_cap;
  return l;
}

const std::string& required(const std::optional<std::string>& v, const char* flag, std::string_view command) {
  if (!v) fail(ErrorKind::kUsage, std::string(command) + " needs " + flag);
  return *v;
}

MultiIndex index_arg(const SystemConfig& cfg, const std::string& text, const char* flag) {
  MultiIndex t = parse_multi_index_text(text);
  if (t.dimension() != cfg.dimension) {
    fail(ErrorKind::kUsage, std::string(flag) + " has " + std::to_string(t.dimension()) +
                                " coordinates, the system has dimension " + std::to_string(cfg.dimension));
  }
  return t;
}

MultiIndex start_time(const SystemConfig& cfg, const CommandOptions& opt) {
  if (opt.t0) return index_arg(cfg, *opt.t0, "--t0");
  if (cfg.timed) return cfg.timed->t1();
  return MultiIndex::zero(cfg.dimension);
}

CompatibilityReport report_for(const SystemConfig& cfg, const Limits& limits, const MultiIndex& lo,
                               const MultiIndex& hi, const State* x0) {
  std::vector<State> sample = cfg.sample;
  if (x0) sample.push_back(*x0);
  if (cfg.timed) return check_compatibility_timed(*cfg.timed, lo, hi, sample, limits);
  return check_compatibility(cfg.autonomous(), sample, limits);
}

Json routes_json(const std::vector<PowerRoute>& routes) {
  Json out = Json::array();
  for (PowerRoute r : routes) out.push_back(std::string(to_string(r)));
  return out;
}

State vector_state(const StateSpace& space, const RatVector& v) { return from_rational_vector(space, v); }

}  // namespace

CommandResult cmd_check(const SystemConfig& cfg, const CommandOptions& opt) {
  const Limits limits = effective_limits(cfg, opt);
  CommandResult r{kExitOk, base_document(cfg, "check"), {}};
  MultiIndex lo = start_time(cfg, opt);
  MultiIndex hi = lo;
  if (cfg.timed) hi = index_arg(cfg, required(opt.t, "--t (the window corner)", "check"), "--t");
  const CompatibilityReport report = report_for(cfg, limits, lo, hi, nullptr);
  r.document["compatibility"] = report_json(report);
  Json payload = Json::object();
  if (cfg.kind == SystemKind::kMatrix) {
    auto w = cfg.rational_matrices.empty() ? find_noncommuting(std::span<const ModMatrix>(cfg.mod_matrices))
                                           : find_noncommuting(std::span<const RationalMatrix>(cfg.rational_matrices));
    payload["matrices_commute"] = !w.has_value();
    if (w) payload["noncommuting_entry"] = {{"alpha", w->alpha}, {"beta", w->beta}, {"row", w->row}, {"col", w->col}};
  }
  if (cfg.kind == SystemKind::kMonoid) {
    bool commute = true;
    for (std::size_t a = 0; a < cfg.elements.size(); ++a) {
      for (std::size_t b = a + 1; b < cfg.elements.size(); ++b) {
        commute = commute && cfg.monoid->equal(cfg.monoid->combine(cfg.elements[a], cfg.elements[b]),
                                               cfg.monoid->combine(cfg.elements[b], cfg.elements[a]));
      }
    }
    payload["elements_commute"] = commute;
    payload["action_axioms"] = std::string(to_string(check_action_axioms(*cfg.monoid, cfg.space).status));
  }
  r.document["payload"] = std::move(payload);
  set_status(r, exit_for(report.status));
  return r;
}

CommandResult cmd_eval(const SystemConfig& cfg, const CommandOptions& opt) {
  const Limits limits = effective_limits(cfg, opt);
  CommandResult r{kExitOk, base_document(cfg, "eval"), {}};
  const MultiIndex t0 = start_time(cfg, opt);
  const MultiIndex t = index_arg(cfg, required(opt.t, "--t", "eval"), "--t");
  const State x0 = parse_state_text(cfg.space, required(opt.x0, "--x0", "eval"));
  const bool forward = leq(t0, t);
  if (!forward && !opt.allow_negative) {
    fail(ErrorKind::kUsage, t.to_string() + " is not >= t0 = " + t0.to_string() +
                                "; pass --allow-negative to evaluate outside the forward cone");
  }
  if (!forward && cfg.timed) {
    fail(ErrorKind::kInvalidArgument, "nonautonomous systems are evaluated forward only");
  }
  const CompatibilityReport report = report_for(cfg, limits, t0, forward ? t : t0, &x0);
  r.document["compatibility"] = report_json(report);
  if (!report.allows_evaluation() && !opt.unsafe_incompatible) {
    r.document["error"] = {{"kind", std::string(to_string(ErrorKind::kIncompatible))},
                           {"message", "refusing to evaluate an incompatible system; pass --unsafe-incompatible"}};
    set_status(r, kExitEvaluation);
    return r;
  }
  EvalOptions eo{opt.unsafe_incompatible, limits};
  const bool safe = report.allows_evaluation();
  State x;
  Json route;
  if (cfg.kind == SystemKind::kNonautonomous) {
    TimedEvaluation ev = eval_timed(*cfg.timed, report, t0, x0, t, eo);
    x = ev.state;
    route = {{"method", "path-walk"}, {"steps", ev.steps}};
  } else if (cfg.kind == SystemKind::kMonoid && safe) {
    const MonoidActionSystem sys(cfg.monoid, cfg.elements, cfg.space);
    x = eval_monoid(sys, t0, x0, t, limits);
    route = {{"method", "monoid-power"}};
  } else if (cfg.kind == SystemKind::kMatrix && safe) {
    if (cfg.rational_matrices.empty()) {
      x = State::mod_vector(eval_matrix_system(std::span<const ModMatrix>(cfg.mod_matrices), t0,
                                               x0.as<ModVector>(), t, limits));
    } else {
      x = vector_state(cfg.space, eval_matrix_system(std::span<const RationalMatrix>(cfg.rational_matrices), t0,
                                                     to_rational_vector(x0), t, limits));
    }
    route = {{"method", "matrix-power"}};
  } else if (forward) {
    Evaluation ev = eval_forward(cfg.autonomous(), report, t0, x0, t, eo);
    x = ev.state;
    route = {{"method", "closed-form"}, {"powers", routes_json(ev.routes)}};
  } else {
    Evaluation ev = eval_anywhere(cfg.autonomous(), report, t0, x0, t, eo);
    x = ev.state;
    route = {{"method", "closed-form-signed"}, {"powers", routes_json(ev.routes)}};
  }
  r.document["payload"] = {{"t0", multi_index_json(t0)},
                           {"t", multi_index_json(t)},
                           {"x0", state_json(x0)},
                           {"state", state_json(x)},
                           {"route", std::move(route)},
                           {"ran_under", std::string(to_string(report.status))},
                           {"unsafe", !safe}};
  set_status(r, exit_for(report.status));
  return r;
}

CommandResult cmd_trace(const SystemConfig& cfg, const CommandOptions& opt) {
  const Limits limits = effective_limits(cfg, opt);
  CommandResult r{kExitOk, base_document(cfg, "trace"), {}};
  const MultiIndex t0 = start_time(cfg, opt);
  const MultiIndex corner = index_arg(cfg, required(opt.corner, "--corner", "trace"), "--corner");
  const State x0 = parse_state_text(cfg.space, required(opt.x0, "--x0", "trace"));
  if (!leq(t0, corner)) fail(ErrorKind::kNotComparable, "corner " + corner.to_string() + " is not >= t0 = " + t0.to_string());
  const CompatibilityReport report = report_for(cfg, limits, t0, corner, &x0);
  r.document["compatibility"] = report_json(report);
  if (!report.allows_evaluation() && !opt.unsafe_incompatible) {
    r.document["error"] = {{"kind", std::string(to_string(ErrorKind::kIncompatible))},
                           {"message", "refusing to trace an incompatible system; pass --unsafe-incompatible"}};
    set_status(r, kExitEvaluation);
    return r;
  }
  EvalOptions eo{opt.unsafe_incompatible, limits};
  const EvalGrid grid = cfg.timed ? eval_timed_box(*cfg.timed, report, t0, x0, corner, eo)
                                  : eval_box(cfg.autonomous(), report, t0, x0, corner, eo);
  Json cells = Json::array();
  std::ostringstream csv;
  std::vector<std::string> header;
  for (std::size_t a = 1; a <= cfg.dimension; ++a) header.push_back("t_" + std::to_string(a));
  for (std::string& h : csv_state_header(cfg.space)) header.push_back(std::move(h));
  for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
  csv << '\n';
  const std::vector<MultiIndex> points = grid.indices();
  for (std::size_t i = 0; i < points.size(); ++i) {
    cells.push_back({{"t", multi_index_json(points[i])}, {"x", state_json(grid.cells[i])}});
    std::vector<std::string> row;
    for (std::int64_t c : points[i].coords()) row.push_back(std::to_string(c));
    for (std::string& c : csv_state_cells(grid.cells[i])) row.push_back(std::move(c));
    for (std::size_t k = 0; k < row.size(); ++k) csv << (k ? "," : "") << row[k];
    csv << '\n';
  }
  r.csv = csv.str();
  r.document["payload"] = {{"lo", multi_index_json(grid.lo)},
                           {"hi", multi_index_json(grid.hi)},
                           {"x0", state_json(x0)},
                           {"cells", std::move(cells)},
                           {"ran_under", std::string(to_string(report.status))},
                           {"unsafe", !report.allows_evaluation()}};
  set_status(r, exit_for(report.status));
  return r;
}

CommandResult cmd_paths(const SystemConfig& cfg, const CommandOptions& opt) {
  const Limits limits = effective_limits(cfg, opt);
  CommandResult r{kExitOk, base_document(cfg, "paths"), {}};
  const MultiIndex t0 = start_time(cfg, opt);
  const MultiIndex t = index_arg(cfg, required(opt.t, "--t", "paths"), "--t");
  const State x0 = parse_state_text(cfg.space, required(opt.x0, "--x0", "paths"));
  if (!leq(t0, t)) fail(ErrorKind::kNotComparable, t.to_string() + " is not >= t0 = " + t0.to_string());
  const CompatibilityReport report = report_for(cfg, limits, t0, t, &x0);
  r.document["compatibility"] = report_json(report);
  const PathIndependenceResult res = cfg.timed
                                         ? timed_path_independence(*cfg.timed, t0, x0, t, limits.path_cap, limits)
                                         : path_independence_check(cfg.autonomous(), t0, x0, t, limits.path_cap, limits);
  Json groups = Json::array();
  for (const EndpointGroup& g : res.groups) {
    groups.push_back({{"value", state_json(g.value)}, {"count", g.count}, {"exemplar", g.exemplar.steps}});
  }
  r.document["payload"] = {{"t0", multi_index_json(t0)},
                           {"t", multi_index_json(t)},
                           {"x0", state_json(x0)},
                           {"path_count", res.path_count},
                           {"agree", res.agree},
                           {"formula_value", state_json(res.formula_value)},
                           {"groups", std::move(groups)}};
  set_status(r, res.agree ? kExitOk : kExitIncompatible);
  return r;
}

static Json verdict_json(const MapClassification& c) {
  Json j{{"injective", std::string(to_string(c.injective.verdict))},
         {"surjective", std::string(to_string(c.surjective.verdict))}};
  if (c.injective.collision) {
    j["collision"] = {state_json(c.injective.collision->first), state_json(c.injective.collision->second)};
  }
  if (c.surjective.missed) j["missed"] = state_json(*c.surjective.missed);
  return j;
}

CommandResult cmd_extend(const SystemConfig& cfg, const CommandOptions& opt) {
  const Limits limits = effective_limits(cfg, opt);
  CommandResult r{kExitOk, base_document(cfg, "extend"), {}};
  if (cfg.timed) fail(ErrorKind::kUsage, "extend applies to autonomous systems only");
  const MultiIndex t0 = start_time(cfg, opt);
  const State x0 = parse_state_text(cfg.space, required(opt.x0, "--x0", "extend"));
  if (!opt.axis) fail(ErrorKind::kUsage, "extend needs --axis");
  const int axis = *opt.axis;
  if (axis < 1 || static_cast<std::size_t>(axis) > cfg.dimension) {
    fail(ErrorKind::kUsage, "--axis " + std::to_string(axis) + " outside 1.." + std::to_string(cfg.dimension));
  }
  const AutonomousSystem sys = cfg.autonomous();
  const CompatibilityReport report = report_for(cfg, limits, t0, t0, &x0);
  r.document["compatibility"] = report_json(report);
  if (!report.allows_evaluation()) {
    r.document["error"] = {{"kind", std::string(to_string(ErrorKind::kIncompatible))},
                           {"message", "refusing to extend an incompatible system"}};
    set_status(r, kExitEvaluation);
    return r;
  }
  const MultiIndex before = t0 - unit(axis, cfg.dimension);
  Json payload{{"t0", multi_index_json(t0)},
               {"x0", state_json(x0)},
               {"axis", axis},
               {"before", multi_index_json(before)},
               {"classification", verdict_json(classify(sys.map(axis), limits))}};
  const BackwardExtension ext = backward_extension_pair(sys, t0, x0, axis, limits);
  if (const auto* two = std::get_if<TwoExtensions>(&ext)) {
    payload["extension"] = {{"kind", "two"},
                            {"value", state_json(two->value)},
                            {"p", state_json(two->p)},
                            {"q", state_json(two->q)}};
  } else if (const auto* one = std::get_if<UniqueExtension>(&ext)) {
    payload["extension"] = {{"kind", "unique"}, {"preimage", state_json(one->preimage)}};
  } else {
    payload["extension"] = {{"kind", "none"}, {"value", state_json(std::get<NoExtension>(ext).value)}};
  }
  r.document["payload"] = std::move(payload);
  set_status(r, exit_for(report.status));
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multitime recurrence engine: check, evaluate, trace, path-test and extend lattice recurrences."};
  app.name("latticerec");
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string csv_path;
  CommandOptions opt;
  std::size_t path_cap = 0;
  std::uint64_t volume_cap = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "system document (JSON)")->required();
    sub->add_option("--t0", opt.t0, "initial lattice point, e.g. 0,0");
    sub->add_option("--x0", opt.x0, "initial state, e.g. 1 or 1/2,3");
    sub->add_option("--t", opt.t, "target lattice point");
    sub->add_option("--corner", opt.corner, "upper corner of the traced box");
    sub->add_flag("--allow-negative", opt.allow_negative, "allow t outside the forward cone of t0");
    sub->add_flag("--unsafe-incompatible", opt.unsafe_incompatible, "evaluate without a compatible verdict");
    sub->add_option("--csv", csv_path, "write the traced grid as CSV");
    sub->add_option("--path-cap", path_cap, "maximum number of enumerated paths");
    sub->add_option("--volume-cap", volume_cap, "maximum number of box cells");
  };
  CLI::App* check = app.add_subcommand("check", "decide compatibility of the step maps");
  CLI::App* eval = app.add_subcommand("eval", "evaluate x(t)");
  CLI::App* trace = app.add_subcommand("trace", "evaluate every point of the box [t0, corner]");
  CLI::App* paths = app.add_subcommand("paths", "walk every monotone path from t0 to t");
  CLI::App* extend = app.add_subcommand("extend", "step one unit backward along --axis from (t0, x0)");
  for (CLI::App* sub : {check, eval, trace, paths, extend}) add_common(sub);
  extend->add_option("--axis", opt.axis, "axis of the backward step, 1-based");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "latticerec: " << e.what() << '\n';
    return kExitUsage;
  }
  if (path_cap > 0) opt.path_cap = path_cap;
  if (volume_cap > 0) opt.volume_cap = volume_cap;

  const std::string command = app.get_subcommands().front()->get_name();
  const auto emit_error = [&](const Json& doc, int code, const std::string& message) {
    err << "latticerec: " << message << '\n';
    Json d = doc;
    d["exit_code"] = code;
    d["status"] = code == kExitUsage ? "usage-error" : code == kExitParse ? "parse-error" : "error";
    out << d.dump(2) << '\n';
    return code;
  };

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    return emit_error(Json{{"command", command}, {"error", {{"kind", "usage"}, {"message", "cannot read " + config_path}}}},
                      kExitUsage, "cannot read config file " + config_path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const ParsedConfig parsed = parse_config(buf.str());
  if (!parsed.config) {
    Json errors = Json::array();
    for (const ConfigError& e : parsed.errors) {
      Json ej{{"path", e.path}, {"message", e.message}};
      if (e.line > 0) {
        ej["line"] = e.line;
        ej["column"] = e.column;
      }
      errors.push_back(std::move(ej));
      err << "latticerec: " << config_path;
      if (e.line > 0) err << ':' << e.line << ':' << e.column;
      err << ": " << (e.path.empty() ? "" : e.path + ": ") << e.message << '\n';
    }
    Json doc{{"command", command}, {"errors", std::move(errors)}, {"exit_code", kExitParse}, {"status", "parse-error"}};
    out << doc.dump(2) << '\n';
    return kExitParse;
  }
  const SystemConfig& cfg = *parsed.config;
  if (!csv_path.empty() && command != "trace") {
    return emit_error(base_document(cfg, command), kExitUsage, "--csv only applies to trace");
  }

  CommandResult result;
  try {
    if (command == "check") {
      result = cmd_check(cfg, opt);
    } else if (command == "eval") {
      result = cmd_eval(cfg, opt);
    } else if (command == "trace") {
      result = cmd_trace(cfg, opt);
    } else if (command == "paths") {
      result = cmd_paths(cfg, opt);
    } else {
      result = cmd_extend(cfg, opt);
    }
  } catch (const Error& e) {
    Json doc = base_document(cfg, command);
    doc["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    return emit_error(doc, exit_code_for(e.kind()), std::string(to_string(e.kind())) + ": " + e.what());
  }
  if (result.document.contains("error")) {
    err << "latticerec: " << result.document["error"]["message"].get<std::string>() << '\n';
  }
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv || !(csv << result.csv)) {
      return emit_error(base_document(cfg, command), kExitUsage, "cannot write " + csv_path);
    }
  }
  out << result.document.dump(2) << '\n';
  return result.exit_code;
}

}  // namespace latticerec
