#pragma once

// Fenchel conjugates of quadratics and of the pointwise maximum of a family.
// For an infsup-convex family the conjugate of the maximum at y equals the
// minimum over the simplex of the conjugate of the aggregate.

#include <limits>

#include "gordankit/zfamily.hpp"

namespace gordankit {

/// Extended value in (-inf, +inf]. +infinity is a tag, never a float.
struct ConjugateValue {
  bool infinite = false;
  double value = 0.0;              ///< meaningful only when finite
  std::optional<Vector> witness;   ///< argsup x when finite
  std::optional<Vector> direction; ///< ascent direction when infinite

  static ConjugateValue plus_infinity(std::optional<Vector> dir = std::nullopt) {
    ConjugateValue v;
    v.infinite = true;
    v.direction = std::move(dir);
    return v;
  }
  bool finite() const noexcept { return !infinite; }

  /// Orders +infinity above every finite value.
  friend bool operator<(const ConjugateValue& a, const ConjugateValue& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
};

/// q*(y) = sup_x (y.x - q(x)) = -inf_x (1/2 x^T A x + (b - y).x + c).
inline ConjugateValue conjugate_quadratic(const QuadraticFunction& q, std::span<const double> y) {
  require_dims(q.dim(), y.size(), "conjugate_quadratic");
  Vector shifted_b = q.b;
  for (std::size_t k = 0; k < y.size(); ++k) shifted_b[k] -= y[k];
  const InfimumResult r = detail::reals_infimum(QuadraticFunction(q.a, std::move(shifted_b), q.c));
  if (!r.bounded()) return ConjugateValue::plus_infinity(r.direction);
  ConjugateValue v;
  v.value = -r.value;
  v.witness = r.argmin;
  return v;
}

enum class ConjugateHypothesis { z_family_nonneg_y, convex_family, none };

inline constexpr std::string_view to_string(ConjugateHypothesis h) {
  switch (h) {
    case ConjugateHypothesis::z_family_nonneg_y: return "z-family-nonneg-y";
    case ConjugateHypothesis::convex_family: return "convex-family";
    case ConjugateHypothesis::none: return "none";
  }
  return "unknown";
}

struct ConjugateSupResult {
  ConjugateValue value;
  SimplexWeight t;
  ConjugateHypothesis hypothesis;
  std::size_t infinite_count = 0;  ///< lattice weights whose aggregate conjugate is +infinity
  std::size_t lattice_size = 0;
};

/// Which sufficient condition for the min formula the family meets at y.
inline ConjugateHypothesis conjugate_hypothesis(const QuadraticFamily& fam, std::span<const double> y) {
  if (z_family_report(fam).family_is_z && std::all_of(y.begin(), y.end(), [](double v) { return v >= 0.0; }))
    return ConjugateHypothesis::z_family_nonneg_y;
  if (std::all_of(fam.begin(), fam.end(), [](const QuadraticFunction& q) { return is_psd(q.a, kTolPsd); }))
    return ConjugateHypothesis::convex_family;
  return ConjugateHypothesis::none;
}

/// min over the simplex of (sum_j t_j q_j)^*(y): lattice scan then pairwise
/// golden-section refinement (the objective is convex in t). Validity of the
/// formula is the caller's concern; the result records which hypothesis holds.
inline ConjugateSupResult conjugate_sup_min(const QuadraticFamily& fam, std::span<const double> y,
                                            const EngineConfig& cfg) {
  cfg.validate();
  require_dims(fam.dim(), y.size(), "conjugate_sup_min");
  ConjugateSupResult out;
  out.hypothesis = conjugate_hypothesis(fam, y);
  Vector best_t;
  ConjugateValue best = ConjugateValue::plus_infinity();
  for_each_simplex_lattice(fam.size(), cfg.simplex_grid_resolution, [&](std::span<const double> t) {
    ++out.lattice_size;
    ConjugateValue v = conjugate_quadratic(aggregate(fam, t), y);
    if (v.infinite) ++out.infinite_count;
    if (best_t.empty() || v < best) {
      best = std::move(v);
      best_t.assign(t.begin(), t.end());
    }
  });
  if (best.finite()) {
    // Refine by maximizing the concave function -f*(aggregate).
    auto g = [&](std::span<const double> t) {
      const ConjugateValue v = conjugate_quadratic(aggregate(fam, t), y);
      return v.infinite ? -detail::kInf : -v.value;
    };
    double neg = -best.value;
    detail::refine_simplex_weight(g, best_t, neg);
    ConjugateValue refined = conjugate_quadratic(aggregate(fam, best_t), y);
    if (refined < best || (!(best < refined) && refined.finite())) best = std::move(refined);
  }
  out.value = std::move(best);
  out.t = SimplexWeight::make(best_t);
  return out;
}

struct BruteConjugateResult {
  double value;
  Vector argmax;
  Box box;              ///< final box after any doubling
  bool on_boundary;     ///< argmax still on the final box boundary
};

namespace detail {

/// Exact maximum over s in [lo, hi] of y.x - max_j q_j(x) with x = (prefix, s).
/// Along the line every member is a 1-D quadratic, so the maximum sits at an
/// endpoint, a member's stationary point or a crossing of two members.
inline std::pair<double, double> line_conjugate_max(const QuadraticFamily& fam, std::span<const double> y,
                                                    Vector& x, double lo, double hi) {
  const std::size_t last = x.size() - 1;
  struct Piece {
    double a, b;  // member restricted to the line, up to a constant: a/2 s^2 + b s
  };
  std::vector<Piece> pieces;
  std::vector<double> consts;
  for (const auto& q : fam) {
    double b = q.b[last];
    for (std::size_t k = 0; k < last; ++k) b += q.a(last, k) * x[k];
    x[last] = 0.0;
    pieces.push_back({q.a(last, last), b});
    consts.push_back(eval_quadratic(q, x));
  }
  std::vector<double> cand{lo, hi};
  auto keep = [&](double s) {
    if (std::isfinite(s) && s > lo && s < hi) cand.push_back(s);
  };
  for (const auto& pc : pieces)
    if (pc.a != 0.0) keep((y[last] - pc.b) / pc.a);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const double a = 0.5 * (pieces[i].a - pieces[j].a);
      const double b = pieces[i].b - pieces[j].b;
      const double c = consts[i] - consts[j];
      if (a == 0.0) {
        if (b != 0.0) keep(-c / b);
        continue;
      }
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      keep((-b - root) / (2.0 * a));
      keep((-b + root) / (2.0 * a));
    }
  std::pair<double, double> best{-kInf, lo};
  for (double s : cand) {
    x[last] = s;
    const double v = dot(y, x) - fam.sup(x).first;
    if (v > best.first) best = {v, s};
  }
  x[last] = best.second;
  return best;
}

}  // namespace detail

/// Maximum of y.x - max_j q_j(x) over box. The last coordinate is maximized
/// exactly on each line; the remaining ones by a grid scan polished with a
/// local grid that shrinks once the incumbent is interior to it. A lower
/// bound on the conjugate of the maximum.
inline BruteConjugateResult brute_conjugate_sup(const QuadraticFamily& fam, std::span<const double> y, const Box& box,
                                                std::size_t resolution) {
  const std::size_t n = fam.dim();
  require_dims(n, y.size(), "brute_conjugate_sup");
  require_dims(n, box.lo.size(), "brute_conjugate_sup box");
  const std::size_t outer = n - 1;
  auto line = [&](std::span<const double> prefix) {
    Vector x(n);
    std::copy(prefix.begin(), prefix.end(), x.begin());
    detail::line_conjugate_max(fam, y, x, box.lo[outer], box.hi[outer]);
    return x;
  };
  auto neg = [&](std::span<const double> prefix) {
    const Vector x = line(prefix);
    return fam.sup(x).first - dot(y, x);
  };
  Vector x;
  if (outer == 0) {
    x = line({});
  } else {
    const Box pbox{Vector(box.lo.begin(), box.lo.end() - 1), Vector(box.hi.begin(), box.hi.end() - 1)};
    const GridMinResult g = grid_min(neg, pbox, resolution);
    Vector center = g.argmin;
    double cv = g.value;
    Vector half(outer);
    for (std::size_t k = 0; k < outer; ++k)
      half[k] = (pbox.hi[k] - pbox.lo[k]) / static_cast<double>(resolution - 1);
    for (int moves = 0; *std::max_element(half.begin(), half.end()) > 1e-12 && moves < 4000; ++moves) {
      Box local{Vector(outer), Vector(outer)};
      for (std::size_t k = 0; k < outer; ++k) {
        local.lo[k] = std::max(pbox.lo[k], center[k] - half[k]);
        local.hi[k] = std::min(pbox.hi[k], center[k] + half[k]);
      }
      const GridMinResult l = grid_min(neg, local, 9);
      bool on_edge = false;
      if (l.value < cv) {
        center = l.argmin;
        cv = l.value;
        for (std::size_t k = 0; k < outer; ++k)
          on_edge = on_edge || (center[k] == local.lo[k] && local.lo[k] > pbox.lo[k]) ||
                    (center[k] == local.hi[k] && local.hi[k] < pbox.hi[k]);
      }
      if (!on_edge)
        for (double& h : half) h *= 0.5;
    }
    x = line(center);
  }
  const double fx = dot(y, x) - fam.sup(x).first;
  bool boundary = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double tol = 1e-9 * (1.0 + box.hi[k] - box.lo[k]);
    if (x[k] <= box.lo[k] + tol || x[k] >= box.hi[k] - tol) boundary = true;
  }
  return {fx, std::move(x), box, boundary};
}

/// Default box [-8, 8]^N, doubled up to three times while the maximizer sits
/// on the boundary.
inline BruteConjugateResult brute_conjugate_sup(const QuadraticFamily& fam, std::span<const double> y,
                                                std::size_t resolution) {
  const std::size_t n = fam.dim();
  double half = 8.0;
  BruteConjugateResult r = brute_conjugate_sup(fam, y, Box{Vector(n, -half), Vector(n, half)}, resolution);
  for (int doubling = 0; doubling < 3 && r.on_boundary; ++doubling) {
    half *= 2.0;
    r = brute_conjugate_sup(fam, y, Box{Vector(n, -half), Vector(n, half)}, resolution);
  }
  return r;
}

}  // namespace gordankit
