#pragma once

// Quadratic programs  min q(x)  s.t.  q_j(x) <= 0,  x in X  (X = R^N or R^N_+)
// with Z-matrix data. The optimal value is located by bisection on the level
// gamma, each step deciding the alternative for {q - gamma} u {q_j}; the
// optimizer is then polished on its active set and certified by Fritz John
// or KKT multipliers.

#include <limits>

#include "gordankit/zfamily.hpp"

namespace gordankit {

struct QpProblem {
  QuadraticFunction objective;
  QuadraticFamily constraints;
  Domain domain = Domain::reals(1);

  QpProblem(QuadraticFunction q, QuadraticFamily cons, Domain dom, bool enforce_z = true)
      : objective(std::move(q)), constraints(std::move(cons)), domain(std::move(dom)) {
    require_dims(objective.dim(), constraints.dim(), "QpProblem constraints");
    require_dims(objective.dim(), domain.dim(), "QpProblem domain");
    if (!domain.contains_orthant())
      throw Error(ErrorCode::unsupported_domain, "QpProblem: domain must be reals or nonneg-orthant");
    if (enforce_z) {
      if (!is_z_matrix(bordered(objective)).ok)
        throw Error(ErrorCode::precondition, "QpProblem: bordered objective is not a Z-matrix");
      const ZFamilyReport z = z_family_report(constraints);
      for (std::size_t j = 0; j < z.members.size(); ++j)
        if (!z.members[j].ok)
          throw Error(ErrorCode::precondition,
                      "QpProblem: bordered constraint " + std::to_string(j) + " is not a Z-matrix");
    }
  }

  std::size_t dim() const noexcept { return objective.dim(); }
  double max_constraint(std::span<const double> x) const { return constraints.sup(x).first; }
};

// ---------------------------------------------------------------------------
// Slater

enum class SlaterStatus { found, none, indeterminate };

inline constexpr std::string_view to_string(SlaterStatus s) {
  switch (s) {
    case SlaterStatus::found: return "found";
    case SlaterStatus::none: return "none";
    case SlaterStatus::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct SlaterResult {
  SlaterStatus status;
  std::optional<Vector> point;  ///< max_j q_j(point) < -delta_strict when found
  double max_constraint;        ///< at the best point examined
};

inline SlaterResult slater_check(const QpProblem& p, const EngineConfig& cfg) {
  EngineConfig c = cfg;
  c.alpha = 0.0;
  const AlternativeOutcome o = decide_alternative(p.constraints, p.domain, c);
  if (const auto* f = std::get_if<FeasiblePoint>(&o)) return {SlaterStatus::found, f->x, f->margin};
  if (std::holds_alternative<Certificate>(o)) return {SlaterStatus::none, std::nullopt, 0.0};
  const auto& ind = std::get<Indeterminate>(o);
  return {SlaterStatus::indeterminate, std::nullopt, ind.best_sup};
}

// ---------------------------------------------------------------------------
// Level-set solver

enum class QpStatus { optimal, infeasible, unbounded, indeterminate };

inline constexpr std::string_view to_string(QpStatus s) {
  switch (s) {
    case QpStatus::optimal: return "optimal";
    case QpStatus::infeasible: return "infeasible";
    case QpStatus::unbounded: return "unbounded";
    case QpStatus::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct QpResult {
  QpStatus status = QpStatus::indeterminate;
  double value = std::numeric_limits<double>::quiet_NaN();
  Vector x0;
  std::size_t iterations = 0;
  double lower = -std::numeric_limits<double>::infinity();  ///< final bracket
  double upper = std::numeric_limits<double>::infinity();
  std::size_t indeterminate_steps = 0;
  bool polished = false;
  std::optional<SimplexWeight> infeasibility_certificate;  ///< weights on the constraints
};

inline constexpr double kUnboundedFloor = 1e12;

namespace detail {

/// One bisection test. Same verdicts as decide_alternative, ordered so the
/// cheap point search runs first.
inline AlternativeOutcome level_test(const QuadraticFamily& fam, const Domain& dom, const EngineConfig& cfg,
                                     std::span<const Vector> seeds) {
  PointSearch p = search_point(fam, dom, cfg, seeds);
  if (p.sup < -cfg.delta_strict) return FeasiblePoint{p.x, p.sup};
  const CertificateSearch c = search_certificate(fam, dom, cfg.simplex_grid_resolution);
  if (c.inf_value >= -cfg.tol_cert) return Certificate{c.weight, c.inf_value};
  std::vector<Vector> more(seeds.begin(), seeds.end());
  if (c.argmin) more.push_back(*c.argmin);
  PointSearch q = search_point(fam, dom, cfg, more, c.inf_value);
  if (q.sup < p.sup) p = std::move(q);
  if (p.sup < -cfg.delta_strict) return FeasiblePoint{p.x, p.sup};
  return Indeterminate{p.x, p.sup, c.weight, c.inf_value};
}

inline QuadraticFamily augmented(const QpProblem& p, double gamma) {
  std::vector<QuadraticFunction> m;
  m.push_back(p.objective.shifted(-gamma));
  for (const auto& q : p.constraints) m.push_back(q);
  return QuadraticFamily(std::move(m));
}

/// Newton's method on the KKT system of the active set: constraints J held
/// at equality, coordinates in `fixed` held at zero. Drops constraints or
/// bounds whose multipliers come out negative, adds violated constraints.
inline std::optional<Vector> polish_active_set(const QpProblem& p, const Vector& start) {
  const std::size_t n = p.dim();
  const std::size_t m = p.constraints.size();
  const bool orthant = p.domain.kind() == DomainKind::nonneg_orthant;
  const double scale = 1.0 + norm_inf(start);
  const double act_tol = 1e-4 * scale;
  std::vector<bool> in_j(m, false);
  std::vector<bool> fixed(n, false);
  for (std::size_t j = 0; j < m; ++j)
    in_j[j] = eval_quadratic(p.constraints[j], start) >= -act_tol;
  if (orthant)
    for (std::size_t k = 0; k < n; ++k) fixed[k] = start[k] <= act_tol;

  for (int round = 0; round < static_cast<int>(2 * (n + m) + 2); ++round) {
    std::vector<std::size_t> fr, js;
    for (std::size_t k = 0; k < n; ++k)
      if (!fixed[k]) fr.push_back(k);
    for (std::size_t j = 0; j < m; ++j)
      if (in_j[j]) js.push_back(j);
    const std::size_t nf = fr.size();
    const std::size_t dimk = nf + js.size();
    Vector x = start;
    for (std::size_t k = 0; k < n; ++k)
      if (fixed[k]) x[k] = 0.0;
    Vector u(js.size(), 0.0);
    bool ok = dimk > 0;
    if (dimk == 0) {
      // Every coordinate fixed and no active constraints: x = 0.
      ok = true;
    }
    for (int it = 0; it < 60 && dimk > 0; ++it) {
      SymMatrix h = p.objective.a;
      Vector grad = p.objective.gradient(x);
      std::vector<Vector> cg(js.size());
      for (std::size_t i = 0; i < js.size(); ++i) {
        h.add_scaled(p.constraints[js[i]].a, u[i]);
        cg[i] = p.constraints[js[i]].gradient(x);
        for (std::size_t k = 0; k < n; ++k) grad[k] += u[i] * cg[i][k];
      }
      std::vector<double> kmat(dimk * dimk, 0.0);
      Vector rhs(dimk, 0.0);
      for (std::size_t a = 0; a < nf; ++a) {
        for (std::size_t b = 0; b < nf; ++b) kmat[a * dimk + b] = h(fr[a], fr[b]);
        for (std::size_t i = 0; i < js.size(); ++i) {
          kmat[a * dimk + nf + i] = cg[i][fr[a]];
          kmat[(nf + i) * dimk + a] = cg[i][fr[a]];
        }
        rhs[a] = -grad[fr[a]];
      }
      for (std::size_t i = 0; i < js.size(); ++i) rhs[nf + i] = -eval_quadratic(p.constraints[js[i]], x);
      const auto step = solve_dense(std::move(kmat), std::move(rhs));
      if (!step) {
        ok = false;
        break;
      }
      for (std::size_t a = 0; a < nf; ++a) x[fr[a]] += (*step)[a];
      for (std::size_t i = 0; i < js.size(); ++i) u[i] += (*step)[nf + i];
      if (!all_finite(x)) {
        ok = false;
        break;
      }
      if (norm_inf(*step) <= 1e-15 * (1.0 + norm_inf(x) + norm_inf(u))) break;
    }
    if (!ok) return std::nullopt;
    // Multiplier signs, bound multipliers and feasibility.
    std::optional<std::size_t> drop_j;
    double worst_u = 0.0;
    for (std::size_t i = 0; i < js.size(); ++i)
      if (u[i] < worst_u) {
        worst_u = u[i];
        drop_j = js[i];
      }
    if (drop_j) {
      in_j[*drop_j] = false;
      continue;
    }
    if (orthant) {
      Vector grad = p.objective.gradient(x);
      for (std::size_t i = 0; i < js.size(); ++i) {
        const Vector g = p.constraints[js[i]].gradient(x);
        for (std::size_t k = 0; k < n; ++k) grad[k] += u[i] * g[k];
      }
      std::optional<std::size_t> release;
      double worst_mu = -1e-12 * scale;
      for (std::size_t k = 0; k < n; ++k)
        if (fixed[k] && grad[k] < worst_mu) {
          worst_mu = grad[k];
          release = k;
        }
      if (release) {
        fixed[*release] = false;
        continue;
      }
      std::optional<std::size_t> negative;
      for (std::size_t k = 0; k < n; ++k)
        if (x[k] < 0.0 && (!negative || x[k] < x[*negative])) negative = k;
      if (negative) {
        fixed[*negative] = true;
        continue;
      }
    }
    std::optional<std::size_t> add;
    double worst_q = 1e-12 * scale;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = eval_quadratic(p.constraints[j], x);
      if (!in_j[j] && v > worst_q) {
        worst_q = v;
        add = j;
      }
    }
    if (add) {
      in_j[*add] = true;
      continue;
    }
    return x;
  }
  return std::nullopt;
}

}  // namespace detail

/// Bisection on the level gamma between the infimum of q over X (or a probed
/// floor when that is -infinity) and q at the best feasible point.
inline QpResult solve_levelset(const QpProblem& p, const EngineConfig& cfg) {
  cfg.validate();
  QpResult res;
  const Domain& dom = p.domain;

  // Feasibility
  const PointSearch feas = search_point(p.constraints, dom, cfg);
  Vector x_best;
  if (feas.sup <= cfg.tol_cert) {
    x_best = feas.x;
  } else {
    const CertificateSearch c = search_certificate(p.constraints, dom, cfg.simplex_grid_resolution);
    if (c.inf_value > cfg.tol_cert) {
      res.status = QpStatus::infeasible;
      res.infeasibility_certificate = c.weight;
      res.lower = c.inf_value;
      return res;
    }
    res.status = QpStatus::indeterminate;
    res.x0 = feas.x;
    return res;
  }
  double upper = eval_quadratic(p.objective, x_best);
  auto take_point = [&](const Vector& x) {
    if (p.max_constraint(x) > cfg.tol_cert || !dom.contains(x)) return;
    const double v = eval_quadratic(p.objective, x);
    if (v < upper) {
      upper = v;
      x_best = x;
    }
  };

  double lower = quadratic_infimum(p.objective, dom).value;
  double certified_lower = lower;
  std::vector<Vector> seeds;
  std::vector<Vector> extra_seeds;
  auto step = [&](double gamma) {
    ++res.iterations;
    seeds.assign(1, x_best);
    seeds.insert(seeds.end(), extra_seeds.begin(), extra_seeds.end());
    const AlternativeOutcome o = detail::level_test(detail::augmented(p, gamma), dom, cfg, seeds);
    if (const auto* f = std::get_if<FeasiblePoint>(&o)) {
      take_point(f->x);
      return 1;
    }
    if (std::holds_alternative<Certificate>(o)) {
      certified_lower = std::max(certified_lower, gamma);
      return -1;
    }
    ++res.indeterminate_steps;
    take_point(std::get<Indeterminate>(o).best_point);
    // A near-miss point below the level still lowers the upper bracket.
    return upper < gamma ? 1 : 0;
  };

  if (!(lower > -detail::kInf)) {
    double drop = 1.0;
    bool stopped = false;
    while (drop <= kUnboundedFloor) {
      const double gamma = upper - drop;
      const Vector before = x_best;
      const int outcome = step(gamma);
      if (outcome != 1) {
        lower = gamma;
        stopped = true;
        break;
      }
      // Extrapolate along the last improvement so the next, deeper level is reachable.
      Vector ahead = x_best;
      for (std::size_t k = 0; k < ahead.size(); ++k) ahead[k] += 2.0 * (x_best[k] - before[k]);
      extra_seeds.assign(1, dom.project(ahead));
      drop *= 2.0;
    }
    extra_seeds.clear();
    if (!stopped) {
      res.status = QpStatus::unbounded;
      res.value = -detail::kInf;
      res.x0 = x_best;
      res.upper = upper;
      return res;
    }
  }

  while (upper - lower > cfg.tol_bisect * (1.0 + std::abs(upper)) && res.iterations < 200) {
    const double gamma = 0.5 * (lower + upper);
    if (step(gamma) <= 0) lower = gamma;
  }
  lower = std::min(lower, upper);

  if (auto pol = detail::polish_active_set(p, x_best)) {
    const double v = eval_quadratic(p.objective, *pol);
    const double feas_tol = 1e-10 * (1.0 + norm_inf(*pol));
    if (dom.contains(*pol) && p.max_constraint(*pol) <= feas_tol &&
        v <= upper + 1e-7 * (1.0 + std::abs(upper))) {
      x_best = *pol;
      upper = v;
      res.polished = true;
    }
  }
  res.x0 = x_best;
  res.value = upper;
  res.upper = upper;
  res.lower = res.indeterminate_steps == 0 ? std::min(lower, upper) : std::min(certified_lower, upper);
  res.status = res.indeterminate_steps == 0 || upper - certified_lower <= 1e-6 * (1.0 + std::abs(upper))
                   ? QpStatus::optimal
                   : QpStatus::indeterminate;
  return res;
}

// ---------------------------------------------------------------------------
// Certificates

struct FritzJohnCertificate {
  double y = 0.0;
  ConeWeight u;
};

struct KktCertificate {
  ConeWeight u;
  Vector x0;
};

/// Checks that the aggregate attains its infimum over X at x0: the gap
/// agg(x0) - inf_X agg, and the (projected) gradient residual at x0.
struct AttainmentCheck {
  bool ok = false;
  double gap = detail::kInf;
  double stationarity = detail::kInf;
};

inline AttainmentCheck check_attainment(const QuadraticFunction& agg, const Domain& dom, std::span<const double> x0,
                                        double tol) {
  AttainmentCheck r;
  const Vector g = agg.gradient(x0);
  const bool orthant = dom.kind() == DomainKind::nonneg_orthant;
  double res = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (orthant && x0[k] <= 1e-12) res = std::max(res, std::max(0.0, -g[k]));
    else res = std::max(res, std::abs(g[k]));
  }
  r.stationarity = res;
  const double at = eval_quadratic(agg, x0);
  const InfimumResult inf = quadratic_infimum(agg, dom);
  r.gap = inf.bounded() ? at - inf.value : detail::kInf;
  const double scale = 1.0 + std::abs(at) + norm_inf(agg.b) + agg.a.norm_inf() * (1.0 + norm_inf(x0));
  r.ok = dom.contains(x0) && r.gap <= tol * (1.0 + std::abs(at)) && r.stationarity <= tol * scale;
  return r;
}

struct FritzJohnReport {
  bool found = false;
  FritzJohnCertificate certificate;  ///< best verified, else best residual candidate
  AttainmentCheck attainment;
  double slackness = detail::kInf;   ///< |sum_j u_j q_j(x0)|
  double max_constraint = 0.0;       ///< max_j q_j(x0)
  std::size_t candidates = 0;
};

namespace detail {

struct FjCandidate {
  Vector w;  ///< (y, u_1..u_m)
};

/// Exact min-norm multipliers on each support: minimize
/// |sum_i w_i g_i - sum_{k in T} mu_k e_k| subject to sum w = 1.
inline void fj_support_candidates(const std::vector<Vector>& grads, const std::vector<std::size_t>& allowed,
                                  const std::vector<std::size_t>& tight, std::vector<FjCandidate>& out) {
  const std::size_t n = grads.front().size();
  const std::size_t na = allowed.size();
  const std::size_t nt = tight.size();
  const std::size_t total = grads.size();
  for (std::uint64_t smask = 1; smask < (std::uint64_t{1} << na); ++smask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < na; ++i)
      if (smask & (std::uint64_t{1} << i)) s.push_back(allowed[i]);
    for (std::uint64_t tmask = 0; tmask < (std::uint64_t{1} << nt); ++tmask) {
      std::vector<std::size_t> t;
      for (std::size_t i = 0; i < nt; ++i)
        if (tmask & (std::uint64_t{1} << i)) t.push_back(tight[i]);
      const std::size_t nz = s.size() + t.size();
      // Rows: n stationarity equations + normalization.
      std::vector<Vector> mrows(n + 1, Vector(nz, 0.0));
      Vector rhs(n + 1, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < s.size(); ++i) mrows[k][i] = grads[s[i]][k];
        for (std::size_t i = 0; i < t.size(); ++i) mrows[k][s.size() + i] = t[i] == k ? -1.0 : 0.0;
      }
      for (std::size_t i = 0; i < s.size(); ++i) mrows[n][i] = 1.0;
      rhs[n] = 1.0;
      SymMatrix mtm(nz);
      Vector mtr(nz, 0.0);
      for (std::size_t a = 0; a < nz; ++a) {
        for (std::size_t b = a; b < nz; ++b) {
          double v = 0.0;
          for (std::size_t r = 0; r <= n; ++r) v += mrows[r][a] * mrows[r][b];
          mtm.set(a, b, v);
        }
        for (std::size_t r = 0; r <= n; ++r) mtr[a] += mrows[r][a] * rhs[r];
      }
      const auto z = pseudo_inverse_apply(mtm, mtr, 1e-12);
      if (!z) continue;
      Vector w(total, 0.0);
      bool nonneg = true;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if ((*z)[i] < -1e-12) nonneg = false;
        w[s[i]] = std::max(0.0, (*z)[i]);
      }
      for (std::size_t i = 0; i < t.size(); ++i)
        if ((*z)[s.size() + i] < -1e-12) nonneg = false;
      double sum = 0.0;
      for (double v : w) sum += v;
      if (!nonneg || !(sum > 0.0)) continue;
      for (double& v : w) v /= sum;
      out.push_back({std::move(w)});
    }
  }
}

}  // namespace detail

/// Searches normalized (y, u) with y + sum u = 1 such that y q + sum u_j q_j
/// attains its infimum over X at x0 and sum u_j q_j(x0) = 0. Candidates come
/// from the simplex lattice and from exact support enumeration; inactive
/// constraints carry zero weight. Among verified candidates the largest y wins.
inline FritzJohnReport fritz_john_search(const QpProblem& p, std::span<const double> x0, const EngineConfig& cfg) {
  cfg.validate();
  require_dims(p.dim(), x0.size(), "fritz_john_search point");
  const std::size_t n = p.dim();
  const std::size_t m = p.constraints.size();
  FritzJohnReport rep;
  rep.max_constraint = p.max_constraint(x0);
  if (rep.max_constraint > cfg.tol_cert || !p.domain.contains(x0))
    throw Error(ErrorCode::precondition, "fritz_john_search: x0 is not feasible");

  std::vector<Vector> grads;
  grads.push_back(p.objective.gradient(x0));
  std::vector<std::size_t> allowed{0};
  Vector qvals(m);
  const double act_tol = 1e-6 * (1.0 + norm_inf(x0));
  for (std::size_t j = 0; j < m; ++j) {
    grads.push_back(p.constraints[j].gradient(x0));
    qvals[j] = eval_quadratic(p.constraints[j], x0);
    if (qvals[j] >= -act_tol) allowed.push_back(j + 1);
  }
  std::vector<std::size_t> tight;
  if (p.domain.kind() == DomainKind::nonneg_orthant)
    for (std::size_t k = 0; k < n; ++k)
      if (x0[k] <= 1e-12) tight.push_back(k);

  std::vector<detail::FjCandidate> cands;
  detail::fj_support_candidates(grads, allowed, tight, cands);
  // Lattice candidates with small stationarity residual.
  const double gscale = [&] {
    double s = 1.0;
    for (const auto& g : grads) s = std::max(s, norm_inf(g));
    return s;
  }();
  for_each_simplex_lattice(allowed.size(), cfg.simplex_grid_resolution, [&](std::span<const double> t) {
    Vector w(m + 1, 0.0);
    for (std::size_t i = 0; i < allowed.size(); ++i) w[allowed[i]] = t[i];
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i <= m; ++i) s += w[i] * grads[i][k];
      const bool is_tight = std::find(tight.begin(), tight.end(), k) != tight.end();
      res = std::max(res, is_tight ? std::max(0.0, -s) : std::abs(s));
    }
    if (res <= cfg.tol_kkt * gscale) cands.push_back({std::move(w)});
  });

  rep.candidates = cands.size();
  double best_score = detail::kInf;
  for (const auto& c : cands) {
    std::vector<double> u(c.w.begin() + 1, c.w.end());
    const QuadraticFunction agg = [&] {
      QuadraticFunction a = p.objective.scaled(c.w[0]);
      for (std::size_t j = 0; j < m; ++j) {
        if (u[j] == 0.0) continue;
        a.a.add_scaled(p.constraints[j].a, u[j]);
        for (std::size_t k = 0; k < n; ++k) a.b[k] += u[j] * p.constraints[j].b[k];
        a.c += u[j] * p.constraints[j].c;
      }
      return a;
    }();
    const AttainmentCheck att = check_attainment(agg, p.domain, x0, cfg.tol_kkt);
    double slack = 0.0;
    for (std::size_t j = 0; j < m; ++j) slack += u[j] * qvals[j];
    slack = std::abs(slack);
    const bool verified = att.ok && slack <= cfg.tol_cert;
    const bool better = verified ? (!rep.found || c.w[0] > rep.certificate.y)
                                 : (!rep.found && att.gap + att.stationarity + slack < best_score);
    if (better) {
      if (!verified) best_score = att.gap + att.stationarity + slack;
      rep.found = rep.found || verified;
      rep.certificate = {c.w[0], ConeWeight::make(u)};
      rep.attainment = att;
      rep.slackness = slack;
    }
  }
  return rep;
}

struct KktReport {
  bool valid = false;
  AttainmentCheck attainment;       ///< condition (1)
  double max_constraint = 0.0;      ///< condition (2)
  double slackness = 0.0;           ///< condition (3): |sum_j u_j q_j(x0)|
  std::size_t cross_check_samples = 0;  ///< feasible sample points examined
  double cross_check_worst = 0.0;   ///< max(0, q(x0) - q(x)) over feasible samples
  bool cross_check_ok = true;
};

/// KKT conditions with y = 1. Valid certificates prove optimality of x0; as
/// an independent check q(x0) is compared against feasible Halton samples.
inline KktReport kkt_check(const QpProblem& p, const KktCertificate& cert, const EngineConfig& cfg) {
  cfg.validate();
  const std::size_t n = p.dim();
  require_dims(n, cert.x0.size(), "kkt_check point");
  require_dims(p.constraints.size(), cert.u.size(), "kkt_check multipliers");
  KktReport r;
  QuadraticFunction agg = p.objective;
  double slack = 0.0;
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    agg.a.add_scaled(p.constraints[j].a, cert.u[j]);
    for (std::size_t k = 0; k < n; ++k) agg.b[k] += cert.u[j] * p.constraints[j].b[k];
    agg.c += cert.u[j] * p.constraints[j].c;
    slack += cert.u[j] * eval_quadratic(p.constraints[j], cert.x0);
  }
  r.attainment = check_attainment(agg, p.domain, cert.x0, cfg.tol_kkt);
  r.max_constraint = p.max_constraint(cert.x0);
  r.slackness = std::abs(slack);
  r.valid = r.attainment.ok && r.max_constraint <= cfg.tol_cert && r.slackness <= cfg.tol_cert;

  const double radius = std::max(cfg.search_radius, 2.0 * norm_inf(cert.x0) + 1.0);
  const bool orthant = p.domain.kind() == DomainKind::nonneg_orthant;
  const auto pts = halton_box(Vector(n, orthant ? 0.0 : -radius), Vector(n, radius), cfg.kkt_samples, cfg.seed);
  const double q0 = eval_quadratic(p.objective, cert.x0);
  for (const auto& x : pts) {
    if (p.max_constraint(x) > 0.0) continue;
    ++r.cross_check_samples;
    r.cross_check_worst = std::max(r.cross_check_worst, q0 - eval_quadratic(p.objective, x));
  }
  r.cross_check_ok = r.cross_check_worst <= 1e-6;
  return r;
}

/// KKT multipliers from a Fritz John certificate with y > 0.
inline std::optional<KktCertificate> to_kkt(const FritzJohnCertificate& fj, std::span<const double> x0,
                                            double tol = 1e-12) {
  if (!(fj.y > tol)) return std::nullopt;
  Vector u(fj.u.values().begin(), fj.u.values().end());
  for (double& v : u) v /= fj.y;
  return KktCertificate{ConeWeight::make(std::move(u)), Vector(x0.begin(), x0.end())};
}

}  // namespace gordankit
