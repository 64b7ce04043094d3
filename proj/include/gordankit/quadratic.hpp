#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "gordankit/linalg.hpp"

namespace gordankit {

inline constexpr double kTolWeight = 1e-9;

/// q(x) = 1/2 x^T A x + b^T x + c
struct QuadraticFunction {
  SymMatrix a;
  Vector b;
  double c = 0.0;

  QuadraticFunction() = default;
  QuadraticFunction(SymMatrix a_, Vector b_, double c_) : a(std::move(a_)), b(std::move(b_)), c(c_) {
    require_dims(a.size(), b.size(), "QuadraticFunction");
    if (!all_finite(b) || !std::isfinite(c)) {
      throw Error(ErrorCode::non_finite, "QuadraticFunction: non-finite linear or constant term");
    }
  }

  static QuadraticFunction linear(Vector b_, double c_) {
    const std::size_t n = b_.size();
    return {SymMatrix(n), std::move(b_), c_};
  }

  std::size_t dim() const noexcept { return b.size(); }

  Vector gradient(std::span<const double> x) const {
    Vector g = a.apply(x);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += b[k];
    return g;
  }

  QuadraticFunction shifted(double delta_c) const { return {a, b, c + delta_c}; }
  QuadraticFunction scaled(double w) const {
    Vector bb = b;
    for (double& v : bb) v *= w;
    return {a.scaled(w), std::move(bb), c * w};
  }

  friend bool operator==(const QuadraticFunction&, const QuadraticFunction&) = default;
};

inline double eval_quadratic(const QuadraticFunction& q, std::span<const double> x) {
  require_dims(q.dim(), x.size(), "eval_quadratic");
  return 0.5 * q.a.quadratic_form(x) + dot(q.b, x) + q.c;
}

/// Finite indexed family {q_j} over a shared dimension.
class QuadraticFamily {
 public:
  QuadraticFamily() = default;
  explicit QuadraticFamily(std::vector<QuadraticFunction> members, std::vector<std::string> labels = {})
      : members_(std::move(members)), labels_(std::move(labels)) {
    if (members_.empty()) throw Error(ErrorCode::precondition, "QuadraticFamily: no members");
    dim_ = members_.front().dim();
    for (const auto& q : members_) require_dims(dim_, q.dim(), "QuadraticFamily member");
    if (!labels_.empty()) require_dims(members_.size(), labels_.size(), "QuadraticFamily labels");
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return members_.size(); }
  const QuadraticFunction& operator[](std::size_t j) const { return members_[j]; }
  const std::vector<QuadraticFunction>& members() const noexcept { return members_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  Vector values(std::span<const double> x) const {
    Vector out(members_.size());
    for (std::size_t j = 0; j < members_.size(); ++j) out[j] = eval_quadratic(members_[j], x);
    return out;
  }

  /// max_j q_j(x) together with the lowest index attaining it.
  std::pair<double, std::size_t> sup(std::span<const double> x) const {
    double best = eval_quadratic(members_[0], x);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < members_.size(); ++j) {
      const double v = eval_quadratic(members_[j], x);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    return {best, arg};
  }

  QuadraticFamily shifted(double delta_c) const {
    std::vector<QuadraticFunction> m;
    m.reserve(members_.size());
    for (const auto& q : members_) m.push_back(q.shifted(delta_c));
    return QuadraticFamily(std::move(m), labels_);
  }

  QuadraticFamily scaled(double w) const {
    std::vector<QuadraticFunction> m;
    for (const auto& q : members_) m.push_back(q.scaled(w));
    return QuadraticFamily(std::move(m), labels_);
  }

  friend bool operator==(const QuadraticFamily&, const QuadraticFamily&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<QuadraticFunction> members_;
  std::vector<std::string> labels_;
};

/// A point of the probability simplex. Entries within tol_weight of the
/// simplex are clamped (negatives to zero) and renormalized.
class SimplexWeight {
 public:
  SimplexWeight() = default;

  static SimplexWeight make(Vector t, double tol = kTolWeight) {
    if (t.empty()) throw Error(ErrorCode::invalid_weight, "SimplexWeight: empty");
    if (!all_finite(t)) throw Error(ErrorCode::non_finite, "SimplexWeight: non-finite entry");
    double sum = 0.0;
    for (double v : t) {
      if (v < -tol) throw Error(ErrorCode::invalid_weight, "SimplexWeight: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw Error(ErrorCode::invalid_weight, "SimplexWeight: entries do not sum to 1");
    double clipped = 0.0;
    for (double& v : t) {
      v = std::max(v, 0.0);
      clipped += v;
    }
    if (clipped != 1.0)
      for (double& v : t) v /= clipped;
    SimplexWeight w;
    w.t_ = std::move(t);
    return w;
  }

  static SimplexWeight vertex(std::size_t m, std::size_t j) {
    Vector t(m, 0.0);
    t.at(j) = 1.0;
    return make(std::move(t));
  }

  static SimplexWeight uniform(std::size_t m) { return make(Vector(m, 1.0 / static_cast<double>(m))); }

  std::size_t size() const noexcept { return t_.size(); }
  double operator[](std::size_t j) const { return t_[j]; }
  std::span<const double> values() const noexcept { return t_; }

  friend bool operator==(const SimplexWeight&, const SimplexWeight&) = default;

 private:
  Vector t_;
};

/// Nonnegative multiplier vector.
class ConeWeight {
 public:
  ConeWeight() = default;

  static ConeWeight make(Vector u, double tol = kTolWeight) {
    if (!all_finite(u)) throw Error(ErrorCode::non_finite, "ConeWeight: non-finite entry");
    for (double& v : u) {
      if (v < -tol) throw Error(ErrorCode::invalid_weight, "ConeWeight: negative entry");
      v = std::max(v, 0.0);
    }
    ConeWeight w;
    w.u_ = std::move(u);
    return w;
  }

  std::size_t size() const noexcept { return u_.size(); }
  double operator[](std::size_t j) const { return u_[j]; }
  std::span<const double> values() const noexcept { return u_; }

  friend bool operator==(const ConeWeight&, const ConeWeight&) = default;

 private:
  Vector u_;
};

/// Weighted sum of the family: A(w) = sum w_j A_j, b(w) = sum w_j b_j, c(w) = sum w_j c_j.
inline QuadraticFunction aggregate(const QuadraticFamily& fam, std::span<const double> w) {
  require_dims(fam.size(), w.size(), "aggregate weights");
  const std::size_t n = fam.dim();
  SymMatrix a(n);
  Vector b(n, 0.0);
  double c = 0.0;
  for (std::size_t j = 0; j < fam.size(); ++j) {
    if (w[j] == 0.0) continue;
    a.add_scaled(fam[j].a, w[j]);
    for (std::size_t k = 0; k < n; ++k) b[k] += w[j] * fam[j].b[k];
    c += w[j] * fam[j].c;
  }
  return {std::move(a), std::move(b), c};
}

inline QuadraticFunction aggregate(const QuadraticFamily& fam, const SimplexWeight& w) {
  return aggregate(fam, w.values());
}
inline QuadraticFunction aggregate(const QuadraticFamily& fam, const ConeWeight& w) {
  return aggregate(fam, w.values());
}

// ---------------------------------------------------------------------------
// Domains

struct Reals {
  std::size_t n;
};
struct NonnegOrthant {
  std::size_t n;
};
struct UnitSphere {
  std::size_t n;
};
struct Box {
  Vector lo;
  Vector hi;
};
struct FinitePointSet {
  std::vector<Vector> points;
};

enum class DomainKind { reals, nonneg_orthant, unit_sphere, box, finite_points };

inline constexpr std::string_view to_string(DomainKind k) {
  switch (k) {
    case DomainKind::reals: return "reals";
    case DomainKind::nonneg_orthant: return "nonneg-orthant";
    case DomainKind::unit_sphere: return "unit-sphere";
    case DomainKind::box: return "box";
    case DomainKind::finite_points: return "points";
  }
  return "unknown";
}

class Domain {
 public:
  using Variant = std::variant<Reals, NonnegOrthant, UnitSphere, Box, FinitePointSet>;

  static Domain reals(std::size_t n) { return Domain(Reals{check_n(n)}); }
  static Domain nonneg_orthant(std::size_t n) { return Domain(NonnegOrthant{check_n(n)}); }
  static Domain unit_sphere(std::size_t n) { return Domain(UnitSphere{check_n(n)}); }
  static Domain box(Vector lo, Vector hi) {
    require_dims(lo.size(), hi.size(), "Box bounds");
    check_n(lo.size());
    if (!all_finite(lo) || !all_finite(hi)) throw Error(ErrorCode::non_finite, "Box: non-finite bound");
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (lo[k] > hi[k]) throw Error(ErrorCode::invalid_domain, "Box: lo > hi at coordinate " + std::to_string(k));
    return Domain(Box{std::move(lo), std::move(hi)});
  }
  static Domain points(std::vector<Vector> pts) {
    if (pts.empty()) throw Error(ErrorCode::invalid_domain, "FinitePointSet: empty");
    const std::size_t n = check_n(pts.front().size());
    for (const auto& p : pts) {
      require_dims(n, p.size(), "FinitePointSet point");
      if (!all_finite(p)) throw Error(ErrorCode::non_finite, "FinitePointSet: non-finite coordinate");
    }
    return Domain(FinitePointSet{std::move(pts)});
  }

  const Variant& variant() const noexcept { return v_; }
  DomainKind kind() const noexcept { return static_cast<DomainKind>(v_.index()); }

  std::size_t dim() const {
    return std::visit(
        [](const auto& d) -> std::size_t {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Box>) return d.lo.size();
          else if constexpr (std::is_same_v<T, FinitePointSet>) return d.points.front().size();
          else return d.n;
        },
        v_);
  }

  /// True when the domain contains the nonnegative orthant.
  bool contains_orthant() const { return kind() == DomainKind::reals || kind() == DomainKind::nonneg_orthant; }

  bool contains(std::span<const double> x, double tol = 1e-12) const {
    if (x.size() != dim()) return false;
    switch (kind()) {
      case DomainKind::reals: return true;
      case DomainKind::nonneg_orthant:
        return std::all_of(x.begin(), x.end(), [&](double v) { return v >= -tol; });
      case DomainKind::unit_sphere: return std::abs(norm2(x) - 1.0) <= tol;
      case DomainKind::box: {
        const auto& b = std::get<Box>(v_);
        for (std::size_t k = 0; k < x.size(); ++k)
          if (x[k] < b.lo[k] - tol || x[k] > b.hi[k] + tol) return false;
        return true;
      }
      case DomainKind::finite_points: {
        for (const auto& p : std::get<FinitePointSet>(v_).points) {
          bool same = true;
          for (std::size_t k = 0; k < x.size() && same; ++k) same = std::abs(p[k] - x[k]) <= tol;
          if (same) return true;
        }
        return false;
      }
    }
    return false;
  }

  /// Nearest-point projection for the continuous domains. Finite point sets
  /// project to the closest listed point (lowest index on ties).
  Vector project(Vector x) const {
    switch (kind()) {
      case DomainKind::reals: return x;
      case DomainKind::nonneg_orthant:
        for (double& v : x) v = std::max(v, 0.0);
        return x;
      case DomainKind::unit_sphere: {
        const double r = norm2(x);
        if (r == 0.0) {
          std::fill(x.begin(), x.end(), 0.0);
          x[0] = 1.0;
          return x;
        }
        for (double& v : x) v /= r;
        return x;
      }
      case DomainKind::box: {
        const auto& b = std::get<Box>(v_);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], b.lo[k], b.hi[k]);
        return x;
      }
      case DomainKind::finite_points: {
        const auto& pts = std::get<FinitePointSet>(v_).points;
        std::size_t best = 0;
        double bd = -1.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          double d = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k) d += (pts[i][k] - x[k]) * (pts[i][k] - x[k]);
          if (bd < 0.0 || d < bd) {
            bd = d;
            best = i;
          }
        }
        return pts[best];
      }
    }
    return x;
  }

  friend bool operator==(const Domain& a, const Domain& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case DomainKind::box:
        return std::get<Box>(a.v_).lo == std::get<Box>(b.v_).lo && std::get<Box>(a.v_).hi == std::get<Box>(b.v_).hi;
      case DomainKind::finite_points:
        return std::get<FinitePointSet>(a.v_).points == std::get<FinitePointSet>(b.v_).points;
      default: return a.dim() == b.dim();
    }
  }

 private:
  explicit Domain(Variant v) : v_(std::move(v)) {}
  static std::size_t check_n(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::invalid_domain, "Domain: dimension must be positive");
    return n;
  }
  Variant v_;
};

// ---------------------------------------------------------------------------
// Outcome of the alternative engine

/// Alternative (a1): a point where every member is strictly negative.
struct FeasiblePoint {
  Vector x;
  double margin;  ///< sup_j q_j(x), below -delta_strict
};

/// Alternative (a2): simplex multipliers whose aggregate is nonnegative on the domain.
struct Certificate {
  SimplexWeight weight;
  double inf_value;  ///< infimum of the aggregate over the domain
};

/// Neither search cleared its threshold; both near-misses are kept.
struct Indeterminate {
  Vector best_point;
  double best_sup;
  SimplexWeight best_weight;
  double best_inf;
};

using AlternativeOutcome = std::variant<FeasiblePoint, Certificate, Indeterminate>;

inline std::string_view outcome_tag(const AlternativeOutcome& o) {
  switch (o.index()) {
    case 0: return "feasible-point";
    case 1: return "certificate";
    default: return "indeterminate";
  }
}

}  // namespace gordankit
