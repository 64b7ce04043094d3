#pragma once

// Command-line driver, usable in-process: run() parses arguments, reads the
// problem file, dispatches on its kind and writes the result document.
//
// Exit codes: 0 decided / certificate valid / solve converged,
//             1 input or numeric error (error object on stdout),
//             2 indeterminate or suspected-only verdict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gordankit/io.hpp"

namespace gordankit::cli {

using io::OJson;

struct Environment {
  std::optional<std::string> seed;  ///< value of GORDANKIT_SEED, if set
};

inline Environment process_environment() {
  Environment env;
  if (const char* s = std::getenv("GORDANKIT_SEED")) env.seed = s;
  return env;
}

struct Flags {
  std::string kind;
  std::string input;
  std::optional<double> tol;
  std::optional<std::uint64_t> grid;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string out_path;
  bool quiet = false;
  std::string format = "json";
};

struct Output {
  OJson doc;
  int exit_code = 0;
  std::vector<std::string> text;  ///< summary lines for --format text
};

namespace detail {

inline OJson outcome_json(const AlternativeOutcome& o, const QuadraticFamily& fam, double alpha) {
  OJson r;
  r["outcome"] = std::string(outcome_tag(o));
  if (const auto* f = std::get_if<FeasiblePoint>(&o)) {
    OJson p;
    p["x"] = io::to_json(f->x);
    p["margin"] = f->margin;
    Vector vals = fam.values(f->x);
    for (double& v : vals) v -= alpha;
    p["member_values_minus_alpha"] = io::to_json(vals);
    r["feasible_point"] = std::move(p);
  } else if (const auto* c = std::get_if<Certificate>(&o)) {
    OJson w;
    w["weights"] = io::to_json(c->weight.values());
    w["inf_value"] = io::extended(c->inf_value);
    w["check"] = "inf over domain of sum_j weights_j (q_j - alpha) >= -tol_cert";
    r["certificate"] = std::move(w);
  } else {
    const auto& ind = std::get<Indeterminate>(o);
    OJson d;
    d["best_point"] = io::to_json(ind.best_point);
    d["best_sup"] = io::extended(ind.best_sup);
    d["best_weights"] = io::to_json(ind.best_weight.values());
    d["best_inf"] = io::extended(ind.best_inf);
    r["indeterminate"] = std::move(d);
  }
  return r;
}

inline void outcome_text(const AlternativeOutcome& o, std::vector<std::string>& lines) {
  std::ostringstream s;
  s.precision(10);
  if (const auto* f = std::get_if<FeasiblePoint>(&o)) {
    s << "feasible point, sup - alpha = " << f->margin;
  } else if (const auto* c = std::get_if<Certificate>(&o)) {
    s << "certificate, weights (";
    for (std::size_t j = 0; j < c->weight.size(); ++j) s << (j ? ", " : "") << c->weight[j];
    s << "), inf - alpha = " << c->inf_value;
  } else {
    const auto& i = std::get<Indeterminate>(o);
    s << "indeterminate, best sup = " << i.best_sup << ", best inf = " << i.best_inf;
  }
  lines.push_back(s.str());
}

inline int outcome_exit(const AlternativeOutcome& o) { return std::holds_alternative<Indeterminate>(o) ? 2 : 0; }

inline Output run_alternative(const io::ProblemFile& p, const EngineConfig& cfg) {
  Output out;
  const AlternativeOutcome o = decide_alternative(*p.family, *p.domain, cfg);
  out.doc = outcome_json(o, *p.family, cfg.alpha);
  outcome_text(o, out.text);
  out.exit_code = outcome_exit(o);
  return out;
}

inline Output run_yuan(const io::ProblemFile& p, const EngineConfig& cfg) {
  Output out;
  const PencilMax pm = yuan_pencil_max(p.matrices[0], p.matrices[1]);
  const AlternativeOutcome o = yuan_alternative(p.matrices[0], p.matrices[1], *p.domain, cfg);
  const std::size_t n = p.dimension;
  const QuadraticFamily forms({QuadraticFunction(p.matrices[0], Vector(n, 0.0), 0.0),
                               QuadraticFunction(p.matrices[1], Vector(n, 0.0), 0.0)});
  out.doc = outcome_json(o, forms, 0.0);
  out.doc["t_star"] = pm.t_star;
  out.doc["lambda_min_star"] = pm.lambda_min_star;
  outcome_text(o, out.text);
  std::ostringstream s;
  s.precision(10);
  s << "pencil maximum at t = " << pm.t_star << ", lambda_min = " << pm.lambda_min_star;
  out.text.push_back(s.str());
  out.exit_code = outcome_exit(o);
  return out;
}

inline Output run_zcheck(const io::ProblemFile& p) {
  Output out;
  const ZFamilyReport z = z_family_report(*p.family);
  OJson members = OJson::array();
  for (std::size_t j = 0; j < z.members.size(); ++j) {
    OJson m;
    m["is_z"] = z.members[j].ok;
    OJson offs = OJson::array();
    for (const auto& o : z.members[j].offenders) offs.push_back(OJson::array({o.k, o.l, o.value}));
    m["offenders"] = std::move(offs);
    m["bordered"] = io::to_json(bordered((*p.family)[j]));
    members.push_back(std::move(m));
  }
  out.doc["family_is_z"] = z.family_is_z;
  out.doc["members"] = std::move(members);
  out.text.push_back(std::string("family is ") + (z.family_is_z ? "" : "not ") + "a Z-matrix family");
  if (p.weights) {
    const SimplexWeight t = SimplexWeight::make(*p.weights);
    if (z.family_is_z) {
      const AggregationCheck a = verify_aggregation_inequality(*p.family, p.points, t);
      OJson ag;
      ag["point"] = io::to_json(a.x0);
      ag["ok"] = a.ok;
      ag["worst_gap"] = a.worst_gap;
      out.doc["aggregation"] = std::move(ag);
      out.text.push_back(std::string("aggregation inequality ") + (a.ok ? "holds" : "fails"));
    } else {
      OJson ag;
      ag["point"] = io::to_json(aggregation_point(p.points, t));
      ag["skipped"] = "family is not a Z-matrix family";
      out.doc["aggregation"] = std::move(ag);
    }
  }
  return out;
}

inline Output run_infsup(const io::ProblemFile& p, const EngineConfig& cfg) {
  Output out;
  const InfsupReport r = infsup_falsify(*p.family, *p.domain, cfg);
  OJson f;
  f["status"] = std::string(to_string(r.status));
  f["samples"] = r.samples;
  f["inf_sup"] = io::extended(r.inf_sup);
  f["inf_sup_exact"] = r.inf_sup_exact;
  if (r.violation) {
    OJson v;
    v["weights"] = io::to_json(r.violation->t.values());
    OJson pts = OJson::array();
    for (const auto& x : r.violation->points) pts.push_back(io::to_json(x));
    v["points"] = std::move(pts);
    v["lhs"] = r.violation->lhs;
    v["rhs"] = r.violation->rhs;
    f["violation"] = std::move(v);
  }
  out.doc["falsifier"] = std::move(f);
  const ProbeReport pr = characterization_probe(*p.family, *p.domain, cfg.alpha, cfg);
  OJson probe;
  probe["alpha"] = cfg.alpha;
  probe["verdict"] = std::string(to_string(pr.verdict));
  probe["a1_holds"] = pr.a1_holds;
  probe["a2_holds"] = pr.a2_holds;
  probe["point"] = io::to_json(pr.point);
  probe["sup_minus_alpha"] = io::extended(pr.sup);
  probe["weights"] = io::to_json(pr.weight.values());
  probe["inf_minus_alpha"] = io::extended(pr.inf);
  out.doc["probe"] = std::move(probe);
  out.text.push_back("falsifier: " + std::string(to_string(r.status)));
  out.text.push_back("probe at alpha: " + std::string(to_string(pr.verdict)));
  out.exit_code = r.status == InfsupStatus::suspected_violation ? 2 : 0;
  return out;
}

inline OJson kkt_json(const KktReport& r) {
  OJson o;
  o["valid"] = r.valid;
  o["attainment_gap"] = io::extended(r.attainment.gap);
  o["stationarity"] = io::extended(r.attainment.stationarity);
  o["max_constraint"] = r.max_constraint;
  o["slackness"] = r.slackness;
  o["cross_check_samples"] = r.cross_check_samples;
  o["cross_check_worst"] = r.cross_check_worst;
  o["cross_check_ok"] = r.cross_check_ok;
  return o;
}

inline Output run_qp(const io::ProblemFile& p, const EngineConfig& cfg, bool enforce_z) {
  Output out;
  const QpProblem qp(*p.objective, *p.family, *p.domain, enforce_z);
  const QpResult r = solve_levelset(qp, cfg);
  out.doc["status"] = std::string(to_string(r.status));
  out.doc["value"] = io::extended(r.value);
  out.doc["x0"] = io::to_json(r.x0);
  out.doc["iterations"] = r.iterations;
  out.doc["bracket"] = OJson::array({io::extended(r.lower), io::extended(r.upper)});
  out.doc["indeterminate_steps"] = r.indeterminate_steps;
  out.doc["polished"] = r.polished;
  std::ostringstream s;
  s.precision(12);
  s << "status " << to_string(r.status);
  if (r.status == QpStatus::infeasible) {
    out.doc["infeasibility_weights"] = io::to_json(r.infeasibility_certificate->values());
    out.text.push_back(s.str());
    return out;
  }
  if (r.status != QpStatus::optimal) {
    out.text.push_back(s.str());
    out.exit_code = 2;
    return out;
  }
  s << ", value " << r.value;
  out.text.push_back(s.str());

  const SlaterResult sl = slater_check(qp, cfg);
  OJson slater;
  slater["status"] = std::string(to_string(sl.status));
  if (sl.point) slater["point"] = io::to_json(*sl.point);
  out.doc["slater"] = std::move(slater);

  const FritzJohnReport fj = fritz_john_search(qp, r.x0, cfg);
  OJson fjj;
  fjj["found"] = fj.found;
  fjj["y"] = fj.certificate.y;
  fjj["u"] = io::to_json(fj.certificate.u.values());
  fjj["attainment_gap"] = io::extended(fj.attainment.gap);
  fjj["stationarity"] = io::extended(fj.attainment.stationarity);
  fjj["slackness"] = io::extended(fj.slackness);
  out.doc["fritz_john"] = std::move(fjj);

  const auto kkt = fj.found ? to_kkt(fj.certificate, r.x0) : std::nullopt;
  if (kkt) {
    const KktReport kr = kkt_check(qp, *kkt, cfg);
    OJson k = kkt_json(kr);
    k["u"] = io::to_json(kkt->u.values());
    out.doc["kkt"] = std::move(k);
    OJson verify;
    verify["version"] = io::kFormatVersion;
    verify["kind"] = "kkt-check";
    verify["dimension"] = p.dimension;
    verify["domain"] = io::to_json(*p.domain);
    verify["objective"] = io::to_json(*p.objective);
    verify["family"] = io::to_json(*p.family);
    verify["point"] = io::to_json(r.x0);
    verify["multipliers"] = io::to_json(kkt->u.values());
    if (!enforce_z) verify["config"] = OJson{{"enforce_z", false}};
    out.doc["verification"] = std::move(verify);
    out.text.push_back(std::string("KKT certificate ") + (kr.valid ? "valid" : "invalid"));
    if (!kr.valid) out.exit_code = 2;
  } else {
    out.text.push_back("no KKT certificate (Fritz John y = 0 or not found)");
    out.exit_code = 2;
  }
  return out;
}

inline Output run_kkt_check(const io::ProblemFile& p, const EngineConfig& cfg, bool enforce_z) {
  Output out;
  const QpProblem qp(*p.objective, *p.family, *p.domain, enforce_z);
  const KktCertificate cert{ConeWeight::make(*p.multipliers), *p.point};
  const KktReport r = kkt_check(qp, cert, cfg);
  out.doc["kkt"] = kkt_json(r);
  out.text.push_back(std::string("KKT certificate ") + (r.valid ? "valid" : "invalid"));
  out.exit_code = r.valid ? 0 : 2;
  return out;
}

inline Output run_conjugate(const io::ProblemFile& p, const EngineConfig& cfg) {
  Output out;
  const ConjugateSupResult r = conjugate_sup_min(*p.family, *p.y, cfg);
  out.doc["value"] = r.value.infinite ? OJson(nullptr) : OJson(r.value.value);
  out.doc["infinite"] = r.value.infinite;
  out.doc["weights"] = io::to_json(r.t.values());
  if (r.value.witness) out.doc["witness"] = io::to_json(*r.value.witness);
  out.doc["hypothesis"] = std::string(to_string(r.hypothesis));
  out.doc["infinite_lattice_points"] = r.infinite_count;
  out.doc["lattice_points"] = r.lattice_size;
  std::ostringstream s;
  s.precision(12);
  if (r.value.infinite) s << "conjugate of the maximum: +infinity";
  else s << "conjugate of the maximum: " << r.value.value;
  out.text.push_back(s.str());
  if (p.brute_resolution) {
    const BruteConjugateResult b =
        brute_conjugate_sup(*p.family, *p.y, static_cast<std::size_t>(*p.brute_resolution));
    OJson bj;
    bj["value"] = b.value;
    bj["argmax"] = io::to_json(b.argmax);
    bj["box_half_width"] = b.box.hi.front();
    bj["on_boundary"] = b.on_boundary;
    out.doc["brute_force"] = std::move(bj);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::InputError("E_IO", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline OJson error_doc(std::string_view code, std::string_view message) {
  OJson e;
  e["code"] = std::string(code);
  e["message"] = std::string(message);
  OJson d;
  d["error"] = std::move(e);
  return d;
}

}  // namespace detail

/// Resolves the engine configuration: flag > problem file > environment > default.
inline EngineConfig resolve_config(const Flags& f, const io::ConfigOverrides& file, const Environment& env) {
  EngineConfig cfg;
  if (env.seed) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(*env.seed, &pos, 0);
      if (pos != env.seed->size()) throw std::invalid_argument("trailing characters");
      cfg.seed = v;
    } catch (const std::exception&) {
      throw io::InputError("E_ENV", "GORDANKIT_SEED is not an unsigned integer");
    }
  }
  io::apply(file, cfg);
  if (f.tol) cfg.tol_cert = *f.tol;
  if (f.grid) cfg.simplex_grid_resolution = static_cast<std::size_t>(*f.grid);
  if (f.seed) cfg.seed = *f.seed;
  if (f.alpha) cfg.alpha = *f.alpha;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw io::InputError(std::string(to_string(e.code())), e.what());
  }
  return cfg;
}

/// Runs one problem file given parsed flags. Never throws.
inline Output execute(const Flags& f, const Environment& env) {
  Output out;
  try {
    const auto kind = io::kind_from_string(f.kind);
    if (!kind) throw io::InputError("E_KIND", "unknown command \"" + f.kind + "\"");
    const io::ProblemFile p = io::parse_problem(io::parse_text(detail::read_file(f.input)));
    if (p.kind != *kind)
      throw io::InputError("E_KIND", "file kind \"" + std::string(io::to_string(p.kind)) +
                                         "\" does not match command \"" + f.kind + "\"");
    const EngineConfig cfg = resolve_config(f, p.config, env);
    const bool enforce_z = p.config.enforce_z.value_or(true);
    switch (p.kind) {
      case io::Kind::alternative: out = detail::run_alternative(p, cfg); break;
      case io::Kind::yuan: out = detail::run_yuan(p, cfg); break;
      case io::Kind::zcheck: out = detail::run_zcheck(p); break;
      case io::Kind::infsup: out = detail::run_infsup(p, cfg); break;
      case io::Kind::qp: out = detail::run_qp(p, cfg, enforce_z); break;
      case io::Kind::kkt_check: out = detail::run_kkt_check(p, cfg, enforce_z); break;
      case io::Kind::conjugate: out = detail::run_conjugate(p, cfg); break;
    }
    OJson doc;
    doc["tool"] = std::string(io::kToolVersion);
    doc["kind"] = std::string(io::to_string(p.kind));
    for (auto it = out.doc.begin(); it != out.doc.end(); ++it) doc[it.key()] = it.value();
    doc["config"] = io::to_json(cfg);
    out.doc = std::move(doc);
  } catch (const io::InputError& e) {
    out = Output{detail::error_doc(e.code(), e.what()), 1, {std::string("error ") + e.code() + ": " + e.what()}};
  } catch (const Error& e) {
    const std::string code(to_string(e.code()));
    out = Output{detail::error_doc(code, e.what()), 1, {"error " + code + ": " + e.what()}};
  } catch (const std::exception& e) {
    out = Output{detail::error_doc("E_INTERNAL", e.what()), 1, {std::string("error E_INTERNAL: ") + e.what()}};
  }
  return out;
}

inline std::string render(const Output& o, const std::string& format) {
  if (format == "text") {
    std::string s;
    for (const auto& l : o.text) s += l + "\n";
    return s;
  }
  return io::dump(o.doc);
}

/// Full command line: `gordankit <kind> <problem.json> [flags]`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const Environment& env = {}) {
  CLI::App app{"Theorems of the alternative for finite quadratic families", "gordankit"};
  app.set_version_flag("--version", std::string(io::kToolVersion));
  Flags f;
  app.add_option("kind", f.kind, "alternative | yuan | zcheck | infsup | qp | kkt-check | conjugate")->required();
  app.add_option("input", f.input, "problem file (JSON)")->required();
  app.add_option("--tol", f.tol, "certificate tolerance (tol_cert)");
  app.add_option("--grid", f.grid, "simplex lattice resolution");
  app.add_option("--seed", f.seed, "random seed (default from GORDANKIT_SEED)");
  app.add_option("--alpha", f.alpha, "level alpha");
  app.add_option("--out", f.out_path, "write the result here instead of stdout");
  app.add_flag("--quiet", f.quiet, "print nothing on stdout");
  app.add_option("--format", f.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << io::kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    out << io::dump(detail::error_doc("E_USAGE", e.what()));
    return 1;
  }

  Output o = execute(f, env);
  const std::string text = o.exit_code == 1 ? io::dump(o.doc) : render(o, f.format);
  if (!f.out_path.empty() && o.exit_code != 1) {
    std::ofstream file(f.out_path, std::ios::binary);
    if (!file) {
      o = Output{detail::error_doc("E_IO", "cannot write " + f.out_path), 1, {}};
      if (!f.quiet) out << io::dump(o.doc);
      return 1;
    }
    file << text;
  } else if (!f.quiet) {
    out << text;
  }
  if (o.exit_code == 1 && !f.quiet) err << o.text.front() << "\n";
  return o.exit_code;
}

}  // namespace gordankit::cli
