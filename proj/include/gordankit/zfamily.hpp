#pragma once

// Z-matrix families: quadratics whose bordered matrix [[A, b], [b^T, 2c]] has
// nonpositive off-diagonal entries. Such families are infsup-convex on every
// domain containing the nonnegative orthant, witnessed by the coordinatewise
// quadratic-mean aggregation point.

#include <cmath>
#include <tuple>

#include "gordankit/alternative.hpp"

namespace gordankit {

inline SymMatrix bordered(const QuadraticFunction& q) {
  const std::size_t n = q.dim();
  SymMatrix m(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) m.set(k, l, q.a(k, l));
    m.set(k, n, q.b[k]);
  }
  m.set(n, n, 2.0 * q.c);
  return m;
}

struct ZOffender {
  std::size_t k;
  std::size_t l;
  double value;
  friend bool operator==(const ZOffender&, const ZOffender&) = default;
};

struct ZCheck {
  bool ok = true;
  std::vector<ZOffender> offenders;  ///< (k, l, value) with k < l and value > tol
};

inline ZCheck is_z_matrix(const SymMatrix& m, double tol = 0.0) {
  ZCheck r;
  for (std::size_t k = 0; k < m.size(); ++k)
    for (std::size_t l = k + 1; l < m.size(); ++l)
      if (m(k, l) > tol) r.offenders.push_back({k, l, m(k, l)});
  r.ok = r.offenders.empty();
  return r;
}

struct ZFamilyReport {
  std::vector<ZCheck> members;
  bool family_is_z = true;
};

inline ZFamilyReport z_family_report(const QuadraticFamily& fam, double tol = 0.0) {
  ZFamilyReport r;
  for (const auto& q : fam) {
    r.members.push_back(is_z_matrix(bordered(q), tol));
    r.family_is_z = r.family_is_z && r.members.back().ok;
  }
  return r;
}

/// x0_k = sqrt(sum_j t_j (x_k^(j))^2)
inline Vector aggregation_point(const std::vector<Vector>& points, const SimplexWeight& t) {
  if (points.empty()) throw Error(ErrorCode::precondition, "aggregation_point: no points");
  require_dims(points.size(), t.size(), "aggregation_point weights");
  const std::size_t n = points.front().size();
  Vector x0(n, 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    require_dims(n, points[j].size(), "aggregation_point point");
    for (std::size_t k = 0; k < n; ++k) x0[k] += t[j] * points[j][k] * points[j][k];
  }
  for (double& v : x0) v = std::sqrt(v);
  return x0;
}

struct AggregationCheck {
  bool ok;
  double worst_gap;  ///< max(0, max_lambda q_lambda(x0) - sum_j t_j q_lambda(x_j))
  Vector x0;
};

/// Checks q_lambda(x0) <= sum_j t_j q_lambda(x_j) + 1e-9 for every member.
/// Only meaningful for Z families; anything else is rejected.
inline AggregationCheck verify_aggregation_inequality(const QuadraticFamily& fam, const std::vector<Vector>& points,
                                                      const SimplexWeight& t) {
  const ZFamilyReport z = z_family_report(fam);
  if (!z.family_is_z) {
    for (std::size_t j = 0; j < z.members.size(); ++j) {
      if (z.members[j].ok) continue;
      const ZOffender& o = z.members[j].offenders.front();
      throw Error(ErrorCode::precondition, "verify_aggregation_inequality: member " + std::to_string(j) +
                                               " bordered entry (" + std::to_string(o.k) + "," +
                                               std::to_string(o.l) + ") is positive");
    }
  }
  for (const auto& p : points) require_dims(fam.dim(), p.size(), "verify_aggregation_inequality point");
  AggregationCheck r{true, 0.0, aggregation_point(points, t)};
  for (const auto& q : fam) {
    double rhs = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) rhs += t[j] * eval_quadratic(q, points[j]);
    r.worst_gap = std::max(r.worst_gap, eval_quadratic(q, r.x0) - rhs);
  }
  r.ok = r.worst_gap <= 1e-9;
  return r;
}

// ---------------------------------------------------------------------------
// Infsup-convexity falsifier

enum class InfsupStatus { verified_on_samples, violation_found, suspected_violation };

inline constexpr std::string_view to_string(InfsupStatus s) {
  switch (s) {
    case InfsupStatus::verified_on_samples: return "verified-on-samples";
    case InfsupStatus::violation_found: return "violation-found";
    case InfsupStatus::suspected_violation: return "suspected-violation";
  }
  return "unknown";
}

struct InfsupViolation {
  SimplexWeight t;
  std::vector<Vector> points;
  double lhs;  ///< inf_x max_lambda q_lambda(x) (exact on finite point sets, else an upper bound)
  double rhs;  ///< max_lambda sum_j t_j q_lambda(x_j)
};

struct InfsupReport {
  InfsupStatus status = InfsupStatus::verified_on_samples;
  std::size_t samples = 0;
  double inf_sup = 0.0;  ///< best value of inf_x max_lambda q_lambda(x) found
  bool inf_sup_exact = false;
  std::optional<InfsupViolation> violation;
};

/// Samples (m, t, x_1..x_m) and compares inf_x max_lambda q_lambda(x) with
/// max_lambda sum_j t_j q_lambda(x_j). On finite point sets the left side is
/// exact and all pairs are enumerated first; elsewhere it is only an upper
/// bound from the point search (tightened by the aggregation point when the
/// domain contains the orthant), so a gap is reported as suspected.
inline InfsupReport infsup_falsify(const QuadraticFamily& fam, const Domain& dom, const EngineConfig& cfg) {
  cfg.validate();
  check_family_domain(fam, dom);
  const bool exact = dom.kind() == DomainKind::finite_points;
  InfsupReport rep;
  const PointSearch ps = search_point(fam, dom, cfg);
  rep.inf_sup = ps.sup;
  rep.inf_sup_exact = exact;
  const std::size_t n = fam.dim();

  auto consider = [&](const SimplexWeight& t, const std::vector<Vector>& pts) {
    ++rep.samples;
    double rhs = -detail::kInf;
    for (const auto& q : fam) {
      double s = 0.0;
      for (std::size_t j = 0; j < pts.size(); ++j) s += t[j] * eval_quadratic(q, pts[j]);
      rhs = std::max(rhs, s);
    }
    double lhs = rep.inf_sup;
    if (!exact && dom.contains_orthant()) lhs = std::min(lhs, fam.sup(aggregation_point(pts, t)).first);
    if (lhs > rhs + cfg.tol_band) {
      if (!rep.violation || lhs - rhs > rep.violation->lhs - rep.violation->rhs)
        rep.violation = InfsupViolation{t, pts, lhs, rhs};
    }
  };

  // m = 2 on finite sets: every lattice weight against every ordered pair.
  if (exact) {
    const auto& pts = std::get<FinitePointSet>(dom.variant()).points;
    const std::size_t r = std::min<std::size_t>(cfg.simplex_grid_resolution, 16);
    for (const SimplexWeight& t : simplex_lattice(2, r))
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) consider(t, {pts[i], pts[j]});
  }

  CounterRng rng(cfg.seed, 0x1F5A);
  const double radius = cfg.search_radius;
  for (std::size_t s = 0; s < cfg.falsify_samples; ++s) {
    const std::size_t m = 1 + rng.index(4);
    Vector raw(m);
    double sum = 0.0;
    for (double& v : raw) {
      v = -std::log(1.0 - rng.uniform01());
      sum += v;
    }
    for (double& v : raw) v /= sum;
    const SimplexWeight t = SimplexWeight::make(raw);
    std::vector<Vector> pts(m, Vector(n));
    for (auto& p : pts) {
      switch (dom.kind()) {
        case DomainKind::finite_points: {
          const auto& set = std::get<FinitePointSet>(dom.variant()).points;
          p = set[rng.index(set.size())];
          break;
        }
        case DomainKind::reals:
          for (double& v : p) v = rng.uniform(-radius, radius);
          break;
        case DomainKind::nonneg_orthant:
          for (double& v : p) v = rng.uniform(0.0, radius);
          break;
        case DomainKind::box: {
          const auto& b = std::get<Box>(dom.variant());
          for (std::size_t k = 0; k < n; ++k) p[k] = rng.uniform(b.lo[k], b.hi[k]);
          break;
        }
        case DomainKind::unit_sphere: {
          for (double& v : p) v = rng.normal();
          p = dom.project(std::move(p));
          break;
        }
      }
    }
    consider(t, pts);
  }
  if (rep.violation) rep.status = exact ? InfsupStatus::violation_found : InfsupStatus::suspected_violation;
  return rep;
}

}  // namespace gordankit
