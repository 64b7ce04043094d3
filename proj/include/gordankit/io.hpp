#pragma once

// JSON encoding of problems and results. Parsing is strict: unknown fields,
// wrong types and non-finite numbers are rejected with distinct codes.
// Output numbers are written with 17 significant digits.

#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gordankit/gordankit.hpp"

namespace gordankit::io {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kToolVersion = "gordankit 0.1.0";

/// Failure in reading or validating an input file.
class InputError : public std::runtime_error {
 public:
  InputError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& msg) { throw InputError(code, msg); }

// ---------------------------------------------------------------------------
// Parsing

/// Bare words other than true/false/null outside strings mean the text used
/// a NaN or Infinity literal.
inline bool has_nonfinite_literal(std::string_view text) {
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (ch == '\\') ++i;
      else if (ch == '"') in_string = false;
      continue;
    }
    if (ch == '"') {
      in_string = true;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) && ch != 'e' && ch != 'E') {
      std::size_t j = i;
      while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      const std::string_view word = text.substr(i, j - i);
      if (word == "NaN" || word == "nan" || word == "Infinity" || word == "inf" || word == "Inf") return true;
      i = j - 1;
    }
  }
  return false;
}

inline Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    if (has_nonfinite_literal(text)) fail("E_NONFINITE", "non-finite number literal in input");
    fail("E_PARSE", e.what());
  }
}

inline void check_fields(const Json& obj, const std::set<std::string>& required, const std::set<std::string>& optional,
                         const std::string& where) {
  if (!obj.is_object()) fail("E_SCHEMA_TYPE", where + ": expected an object");
  for (const auto& key : required)
    if (!obj.contains(key)) fail("E_SCHEMA_MISSING_FIELD", where + ": missing field \"" + key + "\"");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!required.contains(it.key()) && !optional.contains(it.key()))
      fail("E_SCHEMA_UNKNOWN_FIELD", where + ": unknown field \"" + it.key() + "\"");
}

inline double parse_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail("E_SCHEMA_TYPE", where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail("E_NONFINITE", where + ": non-finite number");
  return v;
}

inline std::uint64_t parse_uint(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) fail("E_SCHEMA_TYPE", where + ": expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline Vector parse_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) fail("E_SCHEMA_TYPE", where + ": expected an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_number(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline SymMatrix parse_matrix(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail("E_SCHEMA_TYPE", where + ": expected an array of rows");
  if (j.size() != n)
    fail("E_DIMENSION", where + ": expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(parse_vector(j[i], where + "[" + std::to_string(i) + "]"));
    if (rows.back().size() != n)
      fail("E_DIMENSION", where + "[" + std::to_string(i) + "]: expected " + std::to_string(n) + " entries");
  }
  try {
    return SymMatrix::from_rows(rows);
  } catch (const Error& e) {
    fail(std::string(to_string(e.code())).c_str(), where + ": " + e.what());
  }
}

inline QuadraticFunction parse_quadratic(const Json& j, std::size_t n, const std::string& where) {
  check_fields(j, {"A", "b", "c"}, {}, where);
  SymMatrix a = parse_matrix(j["A"], n, where + ".A");
  Vector b = parse_vector(j["b"], where + ".b");
  if (b.size() != n) fail("E_DIMENSION", where + ".b: expected length " + std::to_string(n));
  return QuadraticFunction(std::move(a), std::move(b), parse_number(j["c"], where + ".c"));
}

inline QuadraticFamily parse_family(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail("E_SCHEMA_TYPE", where + ": expected an array of quadratics");
  if (j.empty()) fail("E_SCHEMA_TYPE", where + ": family must be nonempty");
  std::vector<QuadraticFunction> m;
  for (std::size_t i = 0; i < j.size(); ++i)
    m.push_back(parse_quadratic(j[i], n, where + "[" + std::to_string(i) + "]"));
  return QuadraticFamily(std::move(m));
}

inline Domain parse_domain(const Json& j, std::size_t n) {
  if (!j.is_object() || !j.contains("type")) fail("E_SCHEMA_MISSING_FIELD", "domain: missing field \"type\"");
  if (!j["type"].is_string()) fail("E_SCHEMA_TYPE", "domain.type: expected a string");
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "reals" || type == "nonneg-orthant" || type == "unit-sphere") {
      check_fields(j, {"type"}, {}, "domain");
      if (type == "reals") return Domain::reals(n);
      if (type == "nonneg-orthant") return Domain::nonneg_orthant(n);
      return Domain::unit_sphere(n);
    }
    if (type == "box") {
      check_fields(j, {"type", "lo", "hi"}, {}, "domain");
      Vector lo = parse_vector(j["lo"], "domain.lo");
      Vector hi = parse_vector(j["hi"], "domain.hi");
      if (lo.size() != n || hi.size() != n) fail("E_DIMENSION", "domain: box bounds must have length " + std::to_string(n));
      return Domain::box(std::move(lo), std::move(hi));
    }
    if (type == "points") {
      check_fields(j, {"type", "points"}, {}, "domain");
      if (!j["points"].is_array()) fail("E_SCHEMA_TYPE", "domain.points: expected an array");
      std::vector<Vector> pts;
      for (std::size_t i = 0; i < j["points"].size(); ++i) {
        pts.push_back(parse_vector(j["points"][i], "domain.points[" + std::to_string(i) + "]"));
        if (pts.back().size() != n) fail("E_DIMENSION", "domain.points: every point must have length " + std::to_string(n));
      }
      return Domain::points(std::move(pts));
    }
  } catch (const Error& e) {
    fail(std::string(to_string(e.code())).c_str(), std::string("domain: ") + e.what());
  }
  fail("E_DOMAIN", "domain.type: unknown domain \"" + type + "\"");
}

/// Config overrides found in a problem file. Absent keys leave the value unset.
struct ConfigOverrides {
  std::optional<double> tol_cert, delta_strict, tol_band, alpha, tol_bisect, tol_kkt, search_radius;
  std::optional<std::uint64_t> grid, multistart, refine_iters, falsify_samples, kkt_samples, seed;
  std::optional<bool> enforce_z;
};

inline ConfigOverrides parse_config(const Json& j) {
  check_fields(j, {},
               {"tol_cert", "delta_strict", "tol_band", "alpha", "tol_bisect", "tol_kkt", "search_radius", "grid",
                "multistart", "refine_iters", "falsify_samples", "kkt_samples", "seed", "enforce_z"},
               "config");
  ConfigOverrides c;
  auto num = [&](const char* key, std::optional<double>& dst) {
    if (j.contains(key)) dst = parse_number(j[key], std::string("config.") + key);
  };
  auto uint = [&](const char* key, std::optional<std::uint64_t>& dst) {
    if (j.contains(key)) dst = parse_uint(j[key], std::string("config.") + key);
  };
  num("tol_cert", c.tol_cert);
  num("delta_strict", c.delta_strict);
  num("tol_band", c.tol_band);
  num("alpha", c.alpha);
  num("tol_bisect", c.tol_bisect);
  num("tol_kkt", c.tol_kkt);
  num("search_radius", c.search_radius);
  uint("grid", c.grid);
  uint("multistart", c.multistart);
  uint("refine_iters", c.refine_iters);
  uint("falsify_samples", c.falsify_samples);
  uint("kkt_samples", c.kkt_samples);
  uint("seed", c.seed);
  if (j.contains("enforce_z")) {
    if (!j["enforce_z"].is_boolean()) fail("E_SCHEMA_TYPE", "config.enforce_z: expected a boolean");
    c.enforce_z = j["enforce_z"].get<bool>();
  }
  return c;
}

inline void apply(const ConfigOverrides& o, EngineConfig& cfg) {
  if (o.tol_cert) cfg.tol_cert = *o.tol_cert;
  if (o.delta_strict) cfg.delta_strict = *o.delta_strict;
  if (o.tol_band) cfg.tol_band = *o.tol_band;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.tol_bisect) cfg.tol_bisect = *o.tol_bisect;
  if (o.tol_kkt) cfg.tol_kkt = *o.tol_kkt;
  if (o.search_radius) cfg.search_radius = *o.search_radius;
  if (o.grid) cfg.simplex_grid_resolution = static_cast<std::size_t>(*o.grid);
  if (o.multistart) cfg.multistart_count = static_cast<std::size_t>(*o.multistart);
  if (o.refine_iters) cfg.refine_iters = static_cast<std::size_t>(*o.refine_iters);
  if (o.falsify_samples) cfg.falsify_samples = static_cast<std::size_t>(*o.falsify_samples);
  if (o.kkt_samples) cfg.kkt_samples = static_cast<std::size_t>(*o.kkt_samples);
  if (o.seed) cfg.seed = *o.seed;
}

// ---------------------------------------------------------------------------
// Problem files

enum class Kind { alternative, yuan, zcheck, infsup, qp, kkt_check, conjugate };

inline std::optional<Kind> kind_from_string(std::string_view s) {
  if (s == "alternative") return Kind::alternative;
  if (s == "yuan") return Kind::yuan;
  if (s == "zcheck") return Kind::zcheck;
  if (s == "infsup") return Kind::infsup;
  if (s == "qp") return Kind::qp;
  if (s == "kkt-check") return Kind::kkt_check;
  if (s == "conjugate") return Kind::conjugate;
  return std::nullopt;
}

inline constexpr std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::alternative: return "alternative";
    case Kind::yuan: return "yuan";
    case Kind::zcheck: return "zcheck";
    case Kind::infsup: return "infsup";
    case Kind::qp: return "qp";
    case Kind::kkt_check: return "kkt-check";
    case Kind::conjugate: return "conjugate";
  }
  return "unknown";
}

struct ProblemFile {
  Kind kind = Kind::alternative;
  std::size_t dimension = 0;
  std::optional<Domain> domain;
  std::optional<QuadraticFamily> family;
  std::optional<QuadraticFunction> objective;
  std::vector<SymMatrix> matrices;       ///< yuan
  std::vector<Vector> points;            ///< zcheck aggregation points
  std::optional<Vector> weights;         ///< zcheck aggregation weights
  std::optional<Vector> point;           ///< kkt-check x0
  std::optional<Vector> multipliers;     ///< kkt-check u
  std::optional<Vector> y;               ///< conjugate argument
  std::optional<std::uint64_t> brute_resolution;  ///< conjugate brute-force grid
  ConfigOverrides config;
};

inline ProblemFile parse_problem(const Json& j) {
  if (!j.is_object()) fail("E_SCHEMA_TYPE", "problem: expected an object");
  if (!j.contains("version")) fail("E_SCHEMA_MISSING_FIELD", "problem: missing field \"version\"");
  if (!j["version"].is_number_integer()) fail("E_SCHEMA_TYPE", "version: expected an integer");
  if (j["version"].get<std::int64_t>() != kFormatVersion)
    fail("E_VERSION", "unsupported format version " + j["version"].dump());
  if (!j.contains("kind")) fail("E_SCHEMA_MISSING_FIELD", "problem: missing field \"kind\"");
  if (!j["kind"].is_string()) fail("E_SCHEMA_TYPE", "kind: expected a string");
  const auto kind = kind_from_string(j["kind"].get<std::string>());
  if (!kind) fail("E_KIND", "unknown kind \"" + j["kind"].get<std::string>() + "\"");

  std::set<std::string> required{"version", "kind", "dimension"};
  std::set<std::string> optional{"config", "labels"};
  switch (*kind) {
    case Kind::alternative:
    case Kind::infsup: required.insert({"domain", "family"}); break;
    case Kind::yuan: required.insert({"domain", "matrices"}); break;
    case Kind::zcheck:
      required.insert("family");
      optional.insert({"points", "weights"});
      break;
    case Kind::qp: required.insert({"domain", "objective", "family"}); break;
    case Kind::kkt_check: required.insert({"domain", "objective", "family", "point", "multipliers"}); break;
    case Kind::conjugate:
      required.insert({"family", "y"});
      optional.insert("brute_resolution");
      break;
  }
  check_fields(j, required, optional, "problem");

  ProblemFile p;
  p.kind = *kind;
  const std::uint64_t n = parse_uint(j["dimension"], "dimension");
  if (n == 0) fail("E_DIMENSION", "dimension: must be positive");
  p.dimension = static_cast<std::size_t>(n);
  try {
    if (j.contains("domain")) p.domain = parse_domain(j["domain"], p.dimension);
    if (j.contains("family")) {
      p.family = parse_family(j["family"], p.dimension, "family");
      if (j.contains("labels")) {
        const Json& l = j["labels"];
        if (!l.is_array()) fail("E_SCHEMA_TYPE", "labels: expected an array of strings");
        std::vector<std::string> labels;
        for (const auto& s : l) {
          if (!s.is_string()) fail("E_SCHEMA_TYPE", "labels: expected an array of strings");
          labels.push_back(s.get<std::string>());
        }
        if (labels.size() != p.family->size()) fail("E_DIMENSION", "labels: one label per family member");
        p.family = QuadraticFamily(p.family->members(), std::move(labels));
      }
    } else if (j.contains("labels")) {
      fail("E_SCHEMA_UNKNOWN_FIELD", "problem: labels given without a family");
    }
    if (j.contains("objective")) p.objective = parse_quadratic(j["objective"], p.dimension, "objective");
    if (j.contains("matrices")) {
      const Json& m = j["matrices"];
      if (!m.is_array() || m.size() != 2) fail("E_SCHEMA_TYPE", "matrices: expected exactly two matrices");
      p.matrices.push_back(parse_matrix(m[0], p.dimension, "matrices[0]"));
      p.matrices.push_back(parse_matrix(m[1], p.dimension, "matrices[1]"));
    }
    if (j.contains("points")) {
      if (!j["points"].is_array() || j["points"].empty()) fail("E_SCHEMA_TYPE", "points: expected a nonempty array");
      for (std::size_t i = 0; i < j["points"].size(); ++i) {
        p.points.push_back(parse_vector(j["points"][i], "points[" + std::to_string(i) + "]"));
        if (p.points.back().size() != p.dimension) fail("E_DIMENSION", "points: every point must have length dimension");
      }
      if (!j.contains("weights")) fail("E_SCHEMA_MISSING_FIELD", "problem: \"points\" requires \"weights\"");
    }
    if (j.contains("weights")) {
      if (!j.contains("points")) fail("E_SCHEMA_MISSING_FIELD", "problem: \"weights\" requires \"points\"");
      p.weights = parse_vector(j["weights"], "weights");
      if (p.weights->size() != p.points.size()) fail("E_DIMENSION", "weights: one weight per point");
    }
    if (j.contains("point")) {
      p.point = parse_vector(j["point"], "point");
      if (p.point->size() != p.dimension) fail("E_DIMENSION", "point: expected length dimension");
    }
    if (j.contains("multipliers")) {
      p.multipliers = parse_vector(j["multipliers"], "multipliers");
      if (p.multipliers->size() != p.family->size()) fail("E_DIMENSION", "multipliers: one per family member");
    }
    if (j.contains("y")) {
      p.y = parse_vector(j["y"], "y");
      if (p.y->size() != p.dimension) fail("E_DIMENSION", "y: expected length dimension");
    }
    if (j.contains("brute_resolution")) p.brute_resolution = parse_uint(j["brute_resolution"], "brute_resolution");
    if (j.contains("config")) p.config = parse_config(j["config"]);
  } catch (const Error& e) {
    fail(std::string(to_string(e.code())).c_str(), e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Encoding

inline OJson to_json(std::span<const double> v) {
  OJson a = OJson::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline OJson to_json(const SymMatrix& m) {
  OJson a = OJson::array();
  for (const auto& row : m.rows()) a.push_back(to_json(row));
  return a;
}

inline OJson to_json(const QuadraticFunction& q) {
  OJson o;
  o["A"] = to_json(q.a);
  o["b"] = to_json(q.b);
  o["c"] = q.c;
  return o;
}

inline OJson to_json(const QuadraticFamily& f) {
  OJson a = OJson::array();
  for (const auto& q : f) a.push_back(to_json(q));
  return a;
}

inline OJson to_json(const Domain& d) {
  OJson o;
  o["type"] = std::string(to_string(d.kind()));
  if (d.kind() == DomainKind::box) {
    o["lo"] = to_json(std::get<Box>(d.variant()).lo);
    o["hi"] = to_json(std::get<Box>(d.variant()).hi);
  } else if (d.kind() == DomainKind::finite_points) {
    OJson pts = OJson::array();
    for (const auto& p : std::get<FinitePointSet>(d.variant()).points) pts.push_back(to_json(p));
    o["points"] = std::move(pts);
  }
  return o;
}

/// Finite doubles as numbers, infinities as null.
inline OJson extended(double v) { return std::isfinite(v) ? OJson(v) : OJson(nullptr); }

inline OJson to_json(const EngineConfig& c) {
  OJson o;
  o["tol_cert"] = c.tol_cert;
  o["delta_strict"] = c.delta_strict;
  o["tol_band"] = c.tol_band;
  o["alpha"] = c.alpha;
  o["tol_bisect"] = c.tol_bisect;
  o["tol_kkt"] = c.tol_kkt;
  o["search_radius"] = c.search_radius;
  o["grid"] = c.simplex_grid_resolution;
  o["multistart"] = c.multistart_count;
  o["refine_iters"] = c.refine_iters;
  o["falsify_samples"] = c.falsify_samples;
  o["kkt_samples"] = c.kkt_samples;
  o["seed"] = c.seed;
  return o;
}

namespace detail {

inline void format_double(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  if (v == 0.0) v = 0.0;  // no negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void emit(const OJson& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case OJson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += OJson(it.key()).dump();
        out += ": ";
        emit(it.value(), indent, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case OJson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const OJson& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], indent, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], indent, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case OJson::value_t::number_float: format_double(j.get<double>(), out); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Pretty JSON with every floating-point number printed as %.17g.
inline std::string dump(const OJson& j) {
  std::string out;
  detail::emit(j, 2, 0, out);
  out += "\n";
  return out;
}

}  // namespace gordankit::io
