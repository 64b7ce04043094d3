#pragma once

// Brute-force references shared by the test suites. They use only grids,
// sampling and plain descent, never the library's exact solvers.

#include <array>
#include <functional>
#include <numbers>

#include "gordankit/oracle.hpp"

namespace gordankit::testing {

using Objective = std::function<double(std::span<const double>)>;
using Predicate = std::function<bool(std::span<const double>)>;

struct ZoomResult {
  double value = std::numeric_limits<double>::infinity();
  Vector argmin;
};

/// Dense grid over the box, then repeated zooming around the best few grid
/// points. Points failing `admissible` are skipped.
inline ZoomResult grid_zoom_min(const Objective& f, const Box& box, std::size_t resolution, int levels = 30,
                                const Predicate& admissible = {}, std::size_t keep = 4) {
  const std::size_t n = box.lo.size();
  struct Cand {
    double v;
    Vector x;
  };
  auto scan = [&](const Box& b, std::size_t res) {
    std::vector<Cand> best;
    std::vector<std::size_t> idx(n, 0);
    Vector x(n);
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < n; ++k) total *= res;
    for (std::uint64_t c = 0; c < total; ++c) {
      for (std::size_t k = 0; k < n; ++k)
        x[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * static_cast<double>(idx[k]) / static_cast<double>(res - 1);
      if (!admissible || admissible(x)) {
        const double v = f(x);
        if (best.size() < keep || v < best.back().v) {
          best.push_back({v, x});
          std::sort(best.begin(), best.end(), [](const Cand& a, const Cand& b2) { return a.v < b2.v; });
          if (best.size() > keep) best.pop_back();
        }
      }
      for (std::size_t k = n; k-- > 0;) {
        if (++idx[k] < res) break;
        idx[k] = 0;
      }
    }
    return best;
  };
  ZoomResult out;
  std::vector<Cand> cands = scan(box, resolution);
  for (const auto& c : cands)
    if (c.v < out.value) out = {c.v, c.x};
  for (const auto& start : cands) {
    Vector center = start.x;
    double cv = start.v;
    Vector half(n);
    for (std::size_t k = 0; k < n; ++k) half[k] = (box.hi[k] - box.lo[k]) / static_cast<double>(resolution - 1);
    // The window only shrinks once the best point is interior to it, so the
    // search can walk along curved valleys such as active constraint arcs.
    for (int level = 0, moves = 0; level < levels && moves < 50 * levels; ++moves) {
      Box b{Vector(n), Vector(n)};
      for (std::size_t k = 0; k < n; ++k) {
        b.lo[k] = std::max(box.lo[k], center[k] - half[k]);
        b.hi[k] = std::min(box.hi[k], center[k] + half[k]);
      }
      const auto local = scan(b, 9);
      bool on_edge = false;
      if (!local.empty() && local.front().v < cv) {
        center = local.front().x;
        cv = local.front().v;
        for (std::size_t k = 0; k < n; ++k) {
          const bool lo_edge = center[k] == b.lo[k] && b.lo[k] > box.lo[k];
          const bool hi_edge = center[k] == b.hi[k] && b.hi[k] < box.hi[k];
          on_edge = on_edge || lo_edge || hi_edge;
        }
      }
      if (!on_edge) {
        for (double& h : half) h *= 0.5;
        ++level;
      }
    }
    if (cv < out.value) out = {cv, center};
  }
  return out;
}

/// Minimum of f over the unit circle by an angle scan and golden refinement.
inline double circle_min(const Objective& f, std::size_t steps = 20000) {
  auto at = [&](double th) {
    const Vector x{std::cos(th), std::sin(th)};
    return f(x);
  };
  const double h = 2.0 * std::numbers::pi / static_cast<double>(steps);
  double best = std::numeric_limits<double>::infinity();
  double best_th = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double v = at(h * static_cast<double>(i));
    if (v < best) {
      best = v;
      best_th = h * static_cast<double>(i);
    }
  }
  double a = best_th - h, b = best_th + h;
  for (int it = 0; it < 100; ++it) {
    const double m1 = a + (b - a) * 0.381966, m2 = a + (b - a) * 0.618034;
    if (at(m1) < at(m2)) b = m2;
    else a = m1;
  }
  return std::min(best, at(0.5 * (a + b)));
}

/// Minimum over the unit sphere: sampled starts refined by projected
/// gradient with backtracking.
inline double sphere_min(const Objective& f, const std::function<Vector(std::span<const double>)>& grad,
                         std::size_t n, std::size_t samples, Seed seed) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Vector>> starts;
  for (auto& x : sphere_sample(n, samples, seed)) starts.emplace_back(f(x), std::move(x));
  std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t s = 0; s < std::min<std::size_t>(20, starts.size()); ++s) {
    Vector x = starts[s].second;
    double fx = starts[s].first;
    double step = 0.1;
    for (int it = 0; it < 3000 && step > 1e-14; ++it) {
      const Vector g = grad(x);
      Vector y(n);
      for (std::size_t k = 0; k < n; ++k) y[k] = x[k] - step * g[k];
      const double r = norm2(y);
      for (double& v : y) v /= r;
      const double fy = f(y);
      if (fy < fx) {
        x = std::move(y);
        fx = fy;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    best = std::min(best, fx);
  }
  return best;
}

/// Projected gradient with backtracking for a convex quadratic over a
/// domain with a projection. Converges to the global minimum.
inline double projected_gradient_min(const QuadraticFunction& q, const std::function<Vector(Vector)>& project,
                                     int iters = 20000) {
  const std::size_t n = q.dim();
  Vector x = project(Vector(n, 0.0));
  double fx = eval_quadratic(q, x);
  const double lip = q.a.norm_inf() + 1e-12;
  for (int it = 0; it < iters; ++it) {
    const Vector g = q.gradient(x);
    Vector y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] - g[k] / lip;
    y = project(std::move(y));
    const double fy = eval_quadratic(q, y);
    if (!(fy < fx)) break;
    x = std::move(y);
    fx = fy;
  }
  return fx;
}

/// Minimum of q over {x : g_j(x) <= 0} (intersected with the nonnegative
/// orthant when requested) for feasible sets containing the origin and
/// bounded along every ray. Each ray from the origin is solved exactly in
/// one dimension; the direction is found by a zoomed angle grid. N <= 3.
inline ZoomResult ray_min(const QuadraticFunction& q, const std::vector<QuadraticFunction>& cons, bool orthant,
                          std::size_t resolution) {
  const std::size_t n = q.dim();
  auto direction = [&](std::span<const double> ang) {
    if (n == 1) return Vector{ang[0] < 0.5 ? 1.0 : -1.0};
    if (n == 2) return Vector{std::cos(ang[0]), std::sin(ang[0])};
    return Vector{std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]), std::cos(ang[0])};
  };
  // Restriction of f to the ray rho * d: 0.5 a rho^2 + b rho + c.
  auto along = [&](const QuadraticFunction& f, const Vector& d) {
    return std::array<double, 3>{f.a.quadratic_form(d), dot(f.b, d), f.c};
  };
  auto on_ray = [&](const Vector& d) {
    const auto [qa, qb, qc] = along(q, d);
    std::vector<std::array<double, 3>> gs;
    for (const auto& g : cons) gs.push_back(along(g, d));
    std::vector<double> cuts{0.0};
    for (const auto& [a, b, c] : gs) {
      if (std::abs(a) < 1e-300) {
        if (b != 0.0 && -c / b > 0.0) cuts.push_back(-c / b);
        continue;
      }
      const double disc = b * b - 2.0 * a * c;
      if (disc < 0.0) continue;
      for (double r : {(-b - std::sqrt(disc)) / a, (-b + std::sqrt(disc)) / a})
        if (r > 0.0) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    auto feasible = [&](double r) {
      for (const auto& [a, b, c] : gs)
        if (0.5 * a * r * r + b * r + c > 0.0) return false;
      return true;
    };
    auto qv = [&](double r) { return 0.5 * qa * r * r + qb * r + qc; };
    std::pair<double, double> best{std::numeric_limits<double>::infinity(), 0.0};
    auto consider = [&](double r) {
      if (qv(r) < best.first) best = {qv(r), r};
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      if (!feasible(0.5 * (lo + hi))) continue;
      consider(lo);
      consider(hi);
      if (qa > 0.0 && -qb / qa > lo && -qb / qa < hi) consider(-qb / qa);
    }
    if (cuts.size() == 1) consider(0.0);
    return best;
  };
  Box angles{Vector(n == 1 ? 1 : n - 1, 0.0), Vector(n == 1 ? 1 : n - 1, 0.0)};
  const double quarter = 0.5 * std::numbers::pi;
  if (n == 1) angles.hi[0] = orthant ? 0.25 : 1.0;
  if (n == 2) angles.hi[0] = orthant ? quarter : 2.0 * std::numbers::pi;
  if (n == 3) {
    angles.hi[0] = orthant ? quarter : std::numbers::pi;
    angles.hi[1] = orthant ? quarter : 2.0 * std::numbers::pi;
  }
  const auto z = grid_zoom_min([&](std::span<const double> ang) { return on_ray(direction(ang)).first; }, angles,
                               n == 1 ? 2 : resolution, n == 1 ? 0 : 40, {}, 16);
  const Vector d = direction(z.argmin);
  const double rho = on_ray(d).second;
  ZoomResult out{z.value, Vector(n)};
  for (std::size_t k = 0; k < n; ++k) out.argmin[k] = orthant ? std::max(0.0, rho * d[k]) : rho * d[k];
  return out;
}

}  // namespace gordankit::testing
