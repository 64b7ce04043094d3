#pragma once

// Gordan-type alternative for finite quadratic families: either some point of
// the domain makes every member strictly negative, or some simplex weight
// makes the aggregate nonnegative on the domain. The engine searches both
// sides and reports a three-valued outcome with an explicit tolerance band.

#include <cmath>
#include <limits>
#include <optional>

#include "gordankit/infimum.hpp"
#include "gordankit/oracle.hpp"

namespace gordankit {

struct EngineConfig {
  std::size_t simplex_grid_resolution = 32;
  std::size_t multistart_count = 64;
  std::size_t refine_iters = 200;
  double tol_cert = 1e-8;
  double delta_strict = 1e-7;
  double tol_band = 1e-6;
  Seed seed = kDefaultSeed;
  double alpha = 0.0;  ///< level: (a1) sup < alpha, (a2) inf >= alpha
  std::size_t falsify_samples = 500;
  double tol_bisect = 1e-8;
  std::size_t kkt_samples = 10'000;
  double tol_kkt = 1e-6;
  double search_radius = 4.0;

  void validate() const {
    if (simplex_grid_resolution == 0 || multistart_count == 0 || refine_iters == 0)
      throw Error(ErrorCode::precondition, "EngineConfig: resolutions and counts must be positive");
    for (double tol : {tol_cert, delta_strict, tol_band, tol_bisect, tol_kkt, search_radius})
      if (!(tol > 0.0) || !std::isfinite(tol))
        throw Error(ErrorCode::precondition, "EngineConfig: tolerances must be positive and finite");
    if (!std::isfinite(alpha)) throw Error(ErrorCode::non_finite, "EngineConfig: alpha must be finite");
  }
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Maximizes a concave extended-valued function on [a, b] by golden-section
/// search. s0 is a point with finite value f0; it disambiguates probes that
/// both land outside the effective domain.
template <class F>
std::pair<double, double> golden_max(const F& f, double a, double b, double s0, double f0, int iters = 90) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best_s = s0;
  double best_f = f0;
  auto consider = [&](double s, double v) {
    if (v > best_f) {
      best_f = v;
      best_s = s;
    }
  };
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < iters; ++it) {
    if (b - a <= 1e-15 * (1.0 + std::abs(a) + std::abs(b))) break;
    if (fc == -kInf && fd == -kInf) {
      if (s0 < c) b = c;
      else if (s0 > d) a = d;
      else {
        a = c;
        b = d;
      }
      c = b - invphi * (b - a);
      d = a + invphi * (b - a);
      fc = f(c);
      fd = f(d);
    } else if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    consider(c, fc);
    consider(d, fd);
  }
  return {best_s, best_f};
}

/// Pairwise mass transfers t += s (e_i - e_j), each maximized by golden
/// section; repeated until a sweep stops improving.
template <class F>
void refine_simplex_weight(const F& g, Vector& t, double& best, int max_sweeps = 8) {
  const std::size_t m = t.size();
  if (m < 2 || !(best > -kInf)) return;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double lo = -t[i];
        const double hi = t[j];
        if (hi - lo < 1e-15) continue;
        auto along = [&](double s) {
          Vector tt = t;
          tt[i] = std::max(0.0, tt[i] + s);
          tt[j] = std::max(0.0, tt[j] - s);
          return g(std::span<const double>(tt));
        };
        const auto [s, v] = golden_max(along, lo, hi, 0.0, best);
        if (v > best + 1e-15 * (1.0 + std::abs(best))) {
          t[i] = std::max(0.0, t[i] + s);
          t[j] = std::max(0.0, t[j] - s);
          best = v;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  double sum = 0.0;
  for (double v : t) sum += v;
  for (double& v : t) v /= sum;
  best = g(std::span<const double>(t));
}

}  // namespace detail

/// Best weight found by the certificate-side search.
struct CertificateSearch {
  SimplexWeight weight;
  double inf_value = -detail::kInf;
  std::optional<Vector> argmin;
};

/// Best point found by the feasible-point search.
struct PointSearch {
  Vector x;
  double sup = detail::kInf;
};

/// Scans the simplex lattice of the given resolution for the weight maximizing
/// the aggregate infimum over dom, then refines it by pairwise golden-section
/// moves (the aggregate infimum is concave in the weight).
inline CertificateSearch search_certificate(const QuadraticFamily& fam, const Domain& dom, std::size_t resolution,
                                            bool refine = true) {
  auto g = [&](std::span<const double> t) { return quadratic_infimum(aggregate(fam, t), dom).value; };
  Vector best_t;
  double best = -detail::kInf;
  for_each_simplex_lattice(fam.size(), resolution, [&](std::span<const double> t) {
    const double v = g(t);
    if (best_t.empty() || v > best) {
      best = v;
      best_t.assign(t.begin(), t.end());
    }
  });
  if (refine) detail::refine_simplex_weight(g, best_t, best);
  CertificateSearch out;
  out.weight = SimplexWeight::make(best_t);
  const InfimumResult inf = quadratic_infimum(aggregate(fam, out.weight), dom);
  out.inf_value = inf.value;
  out.argmin = inf.argmin;
  return out;
}

namespace detail {

/// Projected subgradient descent on x -> max_j q_j(x). The active member with
/// the lowest index supplies the subgradient. With a finite lower bound the
/// Polyak step (phi(x) - lower) / |g|^2 is used, otherwise step0 / k along the
/// normalized subgradient.
inline void descend(const QuadraticFamily& fam, const Domain& dom, Vector x, std::size_t iters, double lower,
                    double step0, PointSearch& best) {
  for (std::size_t k = 1; k <= iters; ++k) {
    const auto [f, j] = fam.sup(x);
    if (f < best.sup) {
      best.sup = f;
      best.x = x;
    }
    const Vector g = fam[j].gradient(x);
    const double gn2 = dot(g, g);
    if (gn2 == 0.0) break;
    double s;
    if (lower > -kInf) {
      if (f - lower <= 0.0) break;
      s = (f - lower) / gn2;
    } else {
      s = step0 / (static_cast<double>(k) * std::sqrt(gn2));
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= s * g[i];
    x = dom.project(std::move(x));
    if (!all_finite(x)) break;
  }
  const double f = fam.sup(x).first;
  if (f < best.sup) {
    best.sup = f;
    best.x = std::move(x);
  }
}

}  // namespace detail

/// Minimizes phi(x) = max_j q_j(x) over dom: exhaustive on finite point sets,
/// otherwise multistart projected subgradient descent seeded by a rotated
/// Halton sample, the origin, the members' minimizers and any extra seeds.
inline PointSearch search_point(const QuadraticFamily& fam, const Domain& dom, const EngineConfig& cfg,
                                std::span<const Vector> extra_seeds = {}, double lower = -detail::kInf,
                                std::size_t multistart = 0) {
  const std::size_t n = fam.dim();
  PointSearch best;
  if (dom.kind() == DomainKind::finite_points) {
    for (const auto& p : std::get<FinitePointSet>(dom.variant()).points) {
      const double v = fam.sup(p).first;
      if (v < best.sup) {
        best.sup = v;
        best.x = p;
      }
    }
    return best;
  }
  const std::size_t starts = multistart == 0 ? cfg.multistart_count : multistart;
  const double radius = cfg.search_radius;
  std::vector<Vector> seeds;
  seeds.push_back(dom.project(Vector(n, 0.0)));
  for (const auto& s : extra_seeds) seeds.push_back(dom.project(s));
  for (const auto& q : fam) {
    const InfimumResult r = quadratic_infimum(q, dom);
    if (r.argmin) seeds.push_back(*r.argmin);
  }
  std::vector<Vector> sample;
  switch (dom.kind()) {
    case DomainKind::reals:
      sample = halton_box(Vector(n, -radius), Vector(n, radius), starts, cfg.seed);
      break;
    case DomainKind::nonneg_orthant:
      sample = halton_box(Vector(n, 0.0), Vector(n, radius), starts, cfg.seed);
      break;
    case DomainKind::box: {
      const auto& b = std::get<Box>(dom.variant());
      sample = halton_box(b.lo, b.hi, starts, cfg.seed);
      break;
    }
    case DomainKind::unit_sphere: sample = sphere_sample(n, starts, cfg.seed); break;
    case DomainKind::finite_points: break;
  }
  for (auto& s : sample) seeds.push_back(std::move(s));
  const double step0 = dom.kind() == DomainKind::unit_sphere ? 0.5 : radius / 2.0;
  for (const auto& s : seeds) detail::descend(fam, dom, s, cfg.refine_iters, lower, step0, best);
  return best;
}

inline void check_family_domain(const QuadraticFamily& fam, const Domain& dom) {
  require_dims(fam.dim(), dom.dim(), "family/domain");
}

namespace detail {

struct BothSides {
  CertificateSearch cert;
  PointSearch point;
};

inline BothSides search_both(const QuadraticFamily& shifted, const Domain& dom, const EngineConfig& cfg) {
  BothSides out;
  out.cert = search_certificate(shifted, dom, cfg.simplex_grid_resolution);
  std::vector<Vector> seeds;
  if (out.cert.argmin) seeds.push_back(*out.cert.argmin);
  out.point = search_point(shifted, dom, cfg, seeds, out.cert.inf_value);
  if (!(out.point.sup < -cfg.delta_strict) && out.cert.inf_value > -kInf) {
    // Polyak steps stall when the lower bound is loose; retry with 1/k steps.
    PointSearch again = search_point(shifted, dom, cfg, seeds);
    if (again.sup < out.point.sup) out.point = std::move(again);
  }
  return out;
}

}  // namespace detail

/// Decides which alternative holds at level cfg.alpha. Reported margins and
/// infima are relative to the level: FeasiblePoint.margin = sup_j q_j(x) - alpha
/// and Certificate.inf_value = inf_x sum_j t_j q_j(x) - alpha.
inline AlternativeOutcome decide_alternative(const QuadraticFamily& fam, const Domain& dom, const EngineConfig& cfg) {
  cfg.validate();
  check_family_domain(fam, dom);
  const QuadraticFamily shifted = cfg.alpha != 0.0 ? fam.shifted(-cfg.alpha) : fam;
  const detail::BothSides s = detail::search_both(shifted, dom, cfg);
  if (s.point.sup < -cfg.delta_strict) return FeasiblePoint{s.point.x, s.point.sup};
  if (s.cert.inf_value >= -cfg.tol_cert) return Certificate{s.cert.weight, s.cert.inf_value};
  return Indeterminate{s.point.x, s.point.sup, s.cert.weight, s.cert.inf_value};
}

// ---------------------------------------------------------------------------
// Two-matrix (Yuan) alternative

struct PencilMax {
  double t_star;
  double lambda_min_star;
};

/// Maximizes g(t) = lambda_min(t A1 + (1 - t) A2) over [0, 1] by ternary
/// search; g is concave as a minimum of functions affine in t.
inline PencilMax yuan_pencil_max(const SymMatrix& a1, const SymMatrix& a2) {
  require_dims(a1.size(), a2.size(), "yuan_pencil_max");
  auto pencil = [&](double t) {
    SymMatrix m = a2.scaled(1.0 - t);
    m.add_scaled(a1, t);
    return m;
  };
  auto g = [&](double t) { return sym_eigen(pencil(t)).min_value(); };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) < g(m2)) lo = m1;
    else hi = m2;
  }
  PencilMax best{0.5 * (lo + hi), 0.0};
  best.lambda_min_star = g(best.t_star);
  for (double t : {0.0, 1.0}) {
    const double v = g(t);
    if (v > best.lambda_min_star) best = {t, v};
  }
  return best;
}

/// Either some x in dom has max(x^T A1 x, x^T A2 x)/2 < 0, or some
/// t A1 + (1 - t) A2 is PSD.
inline AlternativeOutcome yuan_alternative(const SymMatrix& a1, const SymMatrix& a2, const Domain& dom,
                                           const EngineConfig& cfg) {
  cfg.validate();
  require_dims(a1.size(), a2.size(), "yuan_alternative");
  require_dims(a1.size(), dom.dim(), "yuan_alternative domain");
  if (dom.kind() != DomainKind::reals && dom.kind() != DomainKind::unit_sphere)
    throw Error(ErrorCode::unsupported_domain, "yuan_alternative: domain must be reals or unit-sphere");
  const std::size_t n = a1.size();
  const PencilMax pm = yuan_pencil_max(a1, a2);
  SymMatrix pencil = a2.scaled(1.0 - pm.t_star);
  pencil.add_scaled(a1, pm.t_star);
  const SimplexWeight weight = SimplexWeight::make({pm.t_star, 1.0 - pm.t_star});
  const QuadraticFunction agg(pencil, Vector(n, 0.0), 0.0);
  const double agg_inf = quadratic_infimum(agg, dom).value;
  if (pm.lambda_min_star >= -cfg.tol_cert) return Certificate{weight, agg_inf};

  auto h = [&](std::span<const double> x) { return 0.5 * std::max(a1.quadratic_form(x), a2.quadratic_form(x)); };
  PointSearch best;
  auto consider = [&](Vector x) {
    const double r = norm2(x);
    if (r == 0.0) return;
    for (double& v : x) v /= r;
    const double v = h(x);
    if (v < best.sup) {
      best.sup = v;
      best.x = std::move(x);
    }
  };
  const EigenDecomposition pe = sym_eigen(pencil);
  for (const auto& v : pe.vectors) consider(v);
  for (const auto& v : sym_eigen(a1).vectors) consider(v);
  for (const auto& v : sym_eigen(a2).vectors) consider(v);
  // At an interior optimum the minimizing x lies in the bottom eigenspace of
  // the optimal pencil, typically spanned by its two lowest eigenvectors.
  if (n >= 2) {
    const Vector& u = pe.vectors[0];
    const Vector& w = pe.vectors[1];
    auto along = [&](double th) {
      Vector x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = std::cos(th) * u[k] + std::sin(th) * w[k];
      return x;
    };
    const int steps = 720;
    const double pi = 3.14159265358979323846;
    int best_i = 0;
    double best_v = detail::kInf;
    for (int i = 0; i < steps; ++i) {
      const double v = h(along(pi * i / steps));
      if (v < best_v) {
        best_v = v;
        best_i = i;
      }
    }
    const double th0 = pi * best_i / steps;
    auto neg = [&](double th) { return -h(along(th)); };
    const auto [th, val] = detail::golden_max(neg, th0 - pi / steps, th0 + pi / steps, th0, -best_v);
    (void)val;
    consider(along(th));
  }
  const Domain sphere = Domain::unit_sphere(n);
  const QuadraticFamily forms({QuadraticFunction(a1, Vector(n, 0.0), 0.0), QuadraticFunction(a2, Vector(n, 0.0), 0.0)});
  std::vector<Vector> seeds;
  if (!best.x.empty()) seeds.push_back(best.x);
  PointSearch sampled = search_point(forms, sphere, cfg, seeds);
  if (sampled.sup < best.sup) best = std::move(sampled);
  if (best.sup < -cfg.delta_strict) return FeasiblePoint{best.x, best.sup};
  return Indeterminate{best.x, best.sup, weight, agg_inf};
}

// ---------------------------------------------------------------------------
// Characterization probe

enum class ProbeVerdict { both_fail, only_a1, only_a2 };

inline constexpr std::string_view to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::both_fail: return "both-fail";
    case ProbeVerdict::only_a1: return "exactly-one-a1";
    case ProbeVerdict::only_a2: return "exactly-one-a2";
  }
  return "unknown";
}

struct ProbeReport {
  ProbeVerdict verdict;
  bool a1_holds;
  bool a2_holds;
  Vector point;    ///< best point for (a1)
  double sup;      ///< sup_j q_j(point) - alpha
  SimplexWeight weight;  ///< best weight for (a2)
  double inf;      ///< inf of the aggregate minus alpha
};

/// Searches both alternatives at level alpha and reports which hold. Both
/// failing is evidence that the family is not infsup-convex on dom; both
/// holding is impossible and raises an internal-consistency error.
inline ProbeReport characterization_probe(const QuadraticFamily& fam, const Domain& dom, double alpha,
                                          const EngineConfig& cfg) {
  cfg.validate();
  check_family_domain(fam, dom);
  const detail::BothSides s = detail::search_both(fam.shifted(-alpha), dom, cfg);
  ProbeReport r{ProbeVerdict::both_fail, s.point.sup < -cfg.delta_strict, s.cert.inf_value >= -cfg.tol_cert,
                s.point.x, s.point.sup, s.cert.weight, s.cert.inf_value};
  if (r.a1_holds && r.a2_holds)
    throw Error(ErrorCode::internal_consistency,
                "characterization_probe: both alternatives claimed (sup " + std::to_string(r.sup) + ", inf " +
                    std::to_string(r.inf) + ")");
  if (r.a1_holds) r.verdict = ProbeVerdict::only_a1;
  else if (r.a2_holds) r.verdict = ProbeVerdict::only_a2;
  return r;
}

// ---------------------------------------------------------------------------
// Finite-functional checks

/// values[j][lambda] = alpha_lambda^(j). Checks
///   min_j L(alpha^(j)) <= max_lambda sum_j t_j alpha_lambda^(j) + 1e-12.
inline bool lemma_min_bound_check(const std::vector<Vector>& values, const SimplexWeight& l, const SimplexWeight& t) {
  require_dims(values.size(), t.size(), "lemma_min_bound_check rows");
  double lhs = detail::kInf;
  for (const auto& row : values) {
    require_dims(l.size(), row.size(), "lemma_min_bound_check columns");
    lhs = std::min(lhs, dot(l.values(), row));
  }
  double rhs = -detail::kInf;
  for (std::size_t lam = 0; lam < l.size(); ++lam) {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) s += t[j] * values[j][lam];
    rhs = std::max(rhs, s);
  }
  return lhs <= rhs + 1e-12;
}

struct PositiveNormalizedReport {
  bool is_simplex;
  std::optional<Vector> violating_probe;  ///< a probe with L . probe > max(probe)
  std::optional<std::size_t> violated_index;  ///< index into the supplied probes, if one of them violates
};

/// A linear functional on R^m is dominated by the max functional iff it is a
/// simplex vector. For simplex L every probe must satisfy L . probe <= max
/// probe; otherwise a violating probe is constructed (-e_j at a negative
/// entry, -1 or +1 for a normalization failure).
inline PositiveNormalizedReport positive_normalized_check(std::span<const double> l, const std::vector<Vector>& probes,
                                                          double tol = kTolWeight) {
  for (const auto& p : probes) require_dims(l.size(), p.size(), "positive_normalized_check probe");
  PositiveNormalizedReport r{true, std::nullopt, std::nullopt};
  double sum = 0.0;
  std::optional<std::size_t> negative;
  for (std::size_t j = 0; j < l.size(); ++j) {
    sum += l[j];
    if (l[j] < -tol && !negative) negative = j;
  }
  if (negative) {
    Vector p(l.size(), 0.0);
    p[*negative] = -1.0;
    r.is_simplex = false;
    r.violating_probe = std::move(p);
    return r;
  }
  if (std::abs(sum - 1.0) > tol) {
    r.is_simplex = false;
    r.violating_probe = Vector(l.size(), sum < 1.0 ? -1.0 : 1.0);
    return r;
  }
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double lp = dot(l, probes[i]);
    const double mx = *std::max_element(probes[i].begin(), probes[i].end());
    if (lp > mx + 1e-12 * (1.0 + norm_inf(probes[i]))) {
      r.violating_probe = probes[i];
      r.violated_index = i;
      break;
    }
  }
  return r;
}

}  // namespace gordankit
