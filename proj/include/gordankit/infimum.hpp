#pragma once

// Infimum of a single quadratic function over the supported domains.
//
//   Reals          closed form through the thresholded pseudo-inverse
//   NonnegOrthant  exact face enumeration for N <= kOrthantEnumMax
//   Box            exact face enumeration for N <= kBoxEnumMax
//   UnitSphere     secular-equation (trust-region boundary) solve
//   FinitePointSet enumeration
//
// Beyond the enumeration limits a projected-descent multistart is used and
// the result is flagged approximate.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

#include "gordankit/quadratic.hpp"

namespace gordankit {

inline constexpr std::size_t kOrthantEnumMax = 14;
inline constexpr std::size_t kBoxEnumMax = 8;

struct InfimumResult {
  double value = 0.0;               ///< -infinity when unbounded below
  std::optional<Vector> argmin;     ///< present whenever value is finite
  std::optional<Vector> direction;  ///< recession direction witnessing -infinity
  bool approximate = false;

  bool bounded() const noexcept { return value > -std::numeric_limits<double>::infinity(); }
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline std::vector<std::size_t> mask_indices(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; ++k)
    if (mask & (std::uint64_t{1} << k)) idx.push_back(k);
  return idx;
}

inline Vector gather(std::span<const double> v, std::span<const std::size_t> idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

inline Vector scatter(std::span<const double> v, std::span<const std::size_t> idx, std::size_t n) {
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = v[i];
  return out;
}

inline InfimumResult unbounded(Vector direction, bool approximate = false) {
  InfimumResult r;
  r.value = kNegInf;
  r.direction = std::move(direction);
  r.approximate = approximate;
  return r;
}

inline InfimumResult reals_infimum(const QuadraticFunction& q) {
  const EigenDecomposition eig = sym_eigen(q.a);
  const double z = psd_threshold(q.a, kTolPsd);
  if (q.dim() > 0 && eig.min_value() < -z) return unbounded(eig.vectors.front());
  const auto sol = spectral_solve(eig, q.b, kPinvCutoff * eig.max_abs_value(), kPinvCutoff, true);
  if (!sol) {
    // -b projected onto the discarded eigenspace is a zero-curvature descent direction.
    Vector dir(q.b.size());
    for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = -q.b[k];
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
      if (!(eig.values[i] > kPinvCutoff * eig.max_abs_value())) continue;
      const double coef = dot(eig.vectors[i], q.b);
      for (std::size_t k = 0; k < dir.size(); ++k) dir[k] += coef * eig.vectors[i][k];
    }
    return unbounded(std::move(dir));
  }
  InfimumResult r;
  Vector x(sol->size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = -(*sol)[k];
  r.value = q.c - 0.5 * dot(q.b, *sol);
  r.argmin = std::move(x);
  return r;
}

/// Exact infimum over the nonnegative orthant.
///
/// The quadratic is unbounded below on R^N_+ iff A is not copositive, or some
/// d >= 0 has d^T A d = 0 and b^T d < 0. A minimal-support witness of the
/// first kind solves a nonsingular bordered KKT system on its support; one of
/// the second kind spans a one-dimensional kernel of a PSD principal block.
/// When bounded, the minimum is attained at a point whose support block is
/// positive definite, so the candidates -A_SS^{-1} b_S cover it.
inline InfimumResult orthant_infimum_exact(const QuadraticFunction& q) {
  const std::size_t n = q.dim();
  const SymMatrix& a = q.a;
  const double z = psd_threshold(a, kTolPsd);
  const std::uint64_t faces = std::uint64_t{1} << n;

  const EigenDecomposition full = sym_eigen(a);
  if (full.min_value() < -z) {
    for (std::uint64_t mask = 1; mask < faces; ++mask) {
      const auto idx = mask_indices(mask, n);
      const std::size_t s = idx.size();
      std::vector<double> k((s + 1) * (s + 1), 0.0);
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) k[i * (s + 1) + j] = a(idx[i], idx[j]);
        k[i * (s + 1) + s] = -1.0;
        k[s * (s + 1) + i] = 1.0;
      }
      Vector rhs(s + 1, 0.0);
      rhs[s] = 1.0;
      const auto sol = solve_dense(std::move(k), std::move(rhs));
      if (!sol) continue;
      Vector d(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(s));
      if (std::any_of(d.begin(), d.end(), [](double v) { return v < -1e-12; })) continue;
      for (double& v : d) v = std::max(v, 0.0);
      const Vector full_d = scatter(d, idx, n);
      if (a.quadratic_form(full_d) < -z) return unbounded(full_d);
    }
  }

  struct Face {
    std::vector<std::size_t> idx;
    EigenDecomposition eig;
  };
  std::vector<Face> face_cache;
  face_cache.reserve(static_cast<std::size_t>(faces));
  face_cache.push_back({{}, {}});
  const double zb = kTolPsd * (1.0 + norm2(q.b));
  for (std::uint64_t mask = 1; mask < faces; ++mask) {
    Face f{mask_indices(mask, n), {}};
    f.eig = sym_eigen(a.principal(f.idx));
    if (f.eig.min_value() >= -z) {
      std::size_t null_count = 0;
      std::size_t null_at = 0;
      for (std::size_t i = 0; i < f.eig.values.size(); ++i) {
        if (std::abs(f.eig.values[i]) <= z) {
          ++null_count;
          null_at = i;
        }
      }
      if (null_count == 1) {
        Vector v = f.eig.vectors[null_at];
        const double sum = std::accumulate(v.begin(), v.end(), 0.0);
        if (sum < 0.0)
          for (double& x : v) x = -x;
        const bool positive = std::all_of(v.begin(), v.end(), [](double x) { return x > 1e-12; });
        if (positive && dot(gather(q.b, f.idx), v) < -zb) return unbounded(scatter(v, f.idx, n));
      }
    }
    face_cache.push_back(std::move(f));
  }

  InfimumResult best;
  best.value = q.c;
  best.argmin = Vector(n, 0.0);
  for (std::uint64_t mask = 1; mask < faces; ++mask) {
    const Face& f = face_cache[static_cast<std::size_t>(mask)];
    if (!(f.eig.min_value() > z)) continue;
    const Vector bs = gather(q.b, f.idx);
    const auto sol = spectral_solve(f.eig, bs, 0.0, 1.0, true);
    if (!sol) continue;
    Vector xs(sol->size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = -(*sol)[i];
    const double slack = 1e-10 * (1.0 + norm_inf(xs));
    if (std::any_of(xs.begin(), xs.end(), [&](double v) { return v < -slack; })) continue;
    for (double& v : xs) v = std::max(v, 0.0);
    Vector x = scatter(xs, f.idx, n);
    const double val = eval_quadratic(q, x);
    if (val < best.value) {
      best.value = val;
      best.argmin = std::move(x);
    }
  }
  return best;
}

/// Exact minimum over a box: a minimizer with the fewest interior coordinates
/// has a positive definite free block, so enumerating lo/hi/free per
/// coordinate (3^N faces) finds it.
inline InfimumResult box_infimum_exact(const QuadraticFunction& q, const Box& box) {
  const std::size_t n = q.dim();
  const std::uint64_t free_masks = std::uint64_t{1} << n;
  std::vector<std::optional<EigenDecomposition>> eig_cache(static_cast<std::size_t>(free_masks));
  const double z = psd_threshold(q.a, kTolPsd);

  InfimumResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> state(n, 0);  // 0 = lo, 1 = hi, 2 = free
  while (true) {
    bool valid = true;
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (state[k] == 2) {
        if (box.lo[k] == box.hi[k]) valid = false;
        mask |= std::uint64_t{1} << k;
      }
    }
    if (valid) {
      Vector x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = state[k] == 1 ? box.hi[k] : box.lo[k];
      bool ok = true;
      if (mask != 0) {
        const auto idx = mask_indices(mask, n);
        auto& eig = eig_cache[static_cast<std::size_t>(mask)];
        if (!eig) eig = sym_eigen(q.a.principal(idx));
        if (eig->min_value() > z) {
          // Free block solves A_FF x_F = -(b_F + A_F,fixed x_fixed).
          Vector rhs(idx.size());
          for (std::size_t i = 0; i < idx.size(); ++i) {
            double s = q.b[idx[i]];
            for (std::size_t l = 0; l < n; ++l)
              if (!(mask & (std::uint64_t{1} << l))) s += q.a(idx[i], l) * x[l];
            rhs[i] = s;
          }
          const auto sol = spectral_solve(*eig, rhs, 0.0, 1.0, true);
          ok = sol.has_value();
          if (ok) {
            for (std::size_t i = 0; i < idx.size() && ok; ++i) {
              const double v = -(*sol)[i];
              const std::size_t k = idx[i];
              const double slack = 1e-10 * (1.0 + std::abs(box.lo[k]) + std::abs(box.hi[k]));
              if (v < box.lo[k] - slack || v > box.hi[k] + slack) ok = false;
              x[k] = std::clamp(v, box.lo[k], box.hi[k]);
            }
          }
        } else {
          ok = false;
        }
      }
      if (ok) {
        const double val = eval_quadratic(q, x);
        if (val < best.value) {
          best.value = val;
          best.argmin = std::move(x);
        }
      }
    }
    std::size_t k = 0;
    while (k < n && state[k] == 2) state[k++] = 0;
    if (k == n) break;
    ++state[k];
  }
  return best;
}

/// Global minimum of 1/2 x^T A x + b^T x + c over |x| = 1. The minimizer
/// satisfies (A - mu I) x = -b with A - mu I PSD, so mu <= lambda_min solves
/// the secular equation sum beta_i^2 / (lambda_i - mu)^2 = 1, with the usual
/// hard case when b is orthogonal to the bottom eigenspace.
inline InfimumResult sphere_infimum(const QuadraticFunction& q) {
  const std::size_t n = q.dim();
  const EigenDecomposition eig = sym_eigen(q.a);
  const double lam1 = eig.values.front();
  const double bnorm = norm2(q.b);
  InfimumResult r;
  if (bnorm == 0.0) {
    r.value = 0.5 * lam1 + q.c;
    r.argmin = eig.vectors.front();
    return r;
  }
  Vector beta(n);
  for (std::size_t i = 0; i < n; ++i) beta[i] = dot(eig.vectors[i], q.b);
  const double gap_tol = 1e-12 * (1.0 + eig.max_abs_value());
  const double beta_tol = 1e-12 * (1.0 + bnorm);
  double bottom_weight = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (eig.values[i] - lam1 <= gap_tol) bottom_weight += beta[i] * beta[i];

  auto secular = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = eig.values[i] - mu;
      s += beta[i] * beta[i] / (d * d);
    }
    return s;
  };
  auto point_at = [&](double mu, std::span<const std::size_t> skip) {
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
      const double coef = -beta[i] / (eig.values[i] - mu);
      for (std::size_t k = 0; k < n; ++k) x[k] += coef * eig.vectors[i][k];
    }
    return x;
  };

  Vector x;
  std::vector<std::size_t> bottom;
  for (std::size_t i = 0; i < n; ++i)
    if (eig.values[i] - lam1 <= gap_tol) bottom.push_back(i);

  bool hard_case = false;
  if (std::sqrt(bottom_weight) <= beta_tol) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(bottom.begin(), bottom.end(), i) != bottom.end()) continue;
      const double d = eig.values[i] - lam1;
      s += beta[i] * beta[i] / (d * d);
    }
    if (s <= 1.0) {
      hard_case = true;
      x = point_at(lam1, bottom);
      const double tau = std::sqrt(std::max(0.0, 1.0 - s));
      for (std::size_t k = 0; k < n; ++k) x[k] += tau * eig.vectors[bottom.front()][k];
    } else {
      for (std::size_t i : bottom) beta[i] = 0.0;
    }
  }
  if (!hard_case) {
    double lo = lam1 - bnorm - 1.0;
    double hi = lam1;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (secular(mid) > 1.0) hi = mid;
      else lo = mid;
    }
    x = point_at(lo, {});
  }
  const double xn = norm2(x);
  if (xn > 0.0)
    for (double& v : x) v /= xn;
  r.value = eval_quadratic(q, x);
  r.argmin = std::move(x);
  return r;
}

/// Fallback for dimensions beyond the enumeration limits.
inline InfimumResult projected_descent(const QuadraticFunction& q, const Domain& dom) {
  const std::size_t n = q.dim();
  const double lip = q.a.norm_inf() + 1.0;
  std::vector<Vector> starts;
  starts.push_back(dom.project(Vector(n, 0.0)));
  starts.push_back(dom.project(Vector(n, 1.0)));
  if (auto un = reals_infimum(q); un.argmin) starts.push_back(dom.project(*un.argmin));
  InfimumResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.approximate = true;
  for (Vector x : starts) {
    for (int it = 0; it < 5000; ++it) {
      Vector g = q.gradient(x);
      for (std::size_t k = 0; k < n; ++k) x[k] -= g[k] / lip;
      x = dom.project(std::move(x));
      if (norm_inf(x) > 1e12) return unbounded(x, true);
    }
    const double v = eval_quadratic(q, x);
    if (v < best.value) {
      best.value = v;
      best.argmin = x;
    }
  }
  return best;
}

}  // namespace detail

inline InfimumResult quadratic_infimum(const QuadraticFunction& q, const Domain& dom) {
  require_dims(dom.dim(), q.dim(), "quadratic_infimum domain");
  switch (dom.kind()) {
    case DomainKind::reals: return detail::reals_infimum(q);
    case DomainKind::nonneg_orthant:
      return q.dim() <= kOrthantEnumMax ? detail::orthant_infimum_exact(q) : detail::projected_descent(q, dom);
    case DomainKind::box:
      return q.dim() <= kBoxEnumMax ? detail::box_infimum_exact(q, std::get<Box>(dom.variant()))
                                    : detail::projected_descent(q, dom);
    case DomainKind::unit_sphere: return detail::sphere_infimum(q);
    case DomainKind::finite_points: {
      const auto& pts = std::get<FinitePointSet>(dom.variant()).points;
      InfimumResult r;
      r.value = eval_quadratic(q, pts.front());
      r.argmin = pts.front();
      for (std::size_t i = 1; i < pts.size(); ++i) {
        const double v = eval_quadratic(q, pts[i]);
        if (v < r.value) {
          r.value = v;
          r.argmin = pts[i];
        }
      }
      return r;
    }
  }
  throw Error(ErrorCode::unsupported_domain, "quadratic_infimum: unsupported domain");
}

}  // namespace gordankit
