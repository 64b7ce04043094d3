#pragma once

// Dense symmetric-matrix numerics: the SymMatrix carrier, a cyclic Jacobi
// eigensolver, PSD tests, the thresholded pseudo-inverse, and a small
// pivoted Gaussian elimination used by the face enumerations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gordankit/error.hpp"

namespace gordankit {

using Vector = std::vector<double>;

inline constexpr double kTolSym = 1e-9;
inline constexpr double kTolEig = 1e-10;
inline constexpr double kTolPsd = 1e-8;
inline constexpr double kPinvCutoff = 1e-10;
inline constexpr int kJacobiSweeps = 30;

inline double dot(std::span<const double> x, std::span<const double> y) {
  require_dims(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

/// Dense n-by-n real symmetric matrix stored row-major.
///
/// Construction from arbitrary rows symmetrizes as (M + M^T)/2 and rejects
/// asymmetry larger than tol_sym * (1 + max|m_kl|). Already-symmetric input is
/// reproduced bit-exactly because (a + a)/2 == a in IEEE arithmetic.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static SymMatrix from_rows(const std::vector<Vector>& rows, double tol_sym = kTolSym) {
    const std::size_t n = rows.size();
    SymMatrix m(n);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      require_dims(n, rows[k].size(), "SymMatrix row");
      if (!all_finite(rows[k])) {
        throw Error(ErrorCode::non_finite, "SymMatrix: non-finite entry in row " + std::to_string(k));
      }
      scale = std::max(scale, gordankit::norm_inf(rows[k]));
    }
    const double limit = tol_sym * (1.0 + scale);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k; l < n; ++l) {
        const double u = rows[k][l];
        const double v = rows[l][k];
        if (std::abs(u - v) > limit) {
          throw Error(ErrorCode::asymmetric, "SymMatrix: entries (" + std::to_string(k) + "," +
                                                 std::to_string(l) + ") and transpose differ");
        }
        const double s = (u + v) / 2.0;
        m.a_[k * n + l] = s;
        m.a_[l * n + k] = s;
      }
    }
    return m;
  }

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t k = 0; k < n; ++k) m.a_[k * n + k] = 1.0;
    return m;
  }

  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix m(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m.a_[k * d.size() + k] = d[k];
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t k, std::size_t l) const { return a_[k * n_ + l]; }

  /// Writes both (k,l) and (l,k).
  void set(std::size_t k, std::size_t l, double v) {
    a_[k * n_ + l] = v;
    a_[l * n_ + k] = v;
  }

  std::span<const double> data() const noexcept { return a_; }

  std::vector<Vector> rows() const {
    std::vector<Vector> out(n_, Vector(n_));
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t l = 0; l < n_; ++l) out[k][l] = a_[k * n_ + l];
    return out;
  }

  /// Induced infinity norm (max absolute row sum).
  double norm_inf() const {
    double m = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      double s = 0.0;
      for (std::size_t l = 0; l < n_; ++l) s += std::abs(a_[k * n_ + l]);
      m = std::max(m, s);
    }
    return m;
  }

  double max_abs() const { return gordankit::norm_inf(a_); }

  Vector apply(std::span<const double> x) const {
    require_dims(n_, x.size(), "SymMatrix::apply");
    Vector y(n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      double s = 0.0;
      for (std::size_t l = 0; l < n_; ++l) s += a_[k * n_ + l] * x[l];
      y[k] = s;
    }
    return y;
  }

  double quadratic_form(std::span<const double> x) const { return dot(x, apply(x)); }

  /// this += w * other
  void add_scaled(const SymMatrix& other, double w) {
    require_dims(n_, other.n_, "SymMatrix::add_scaled");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += w * other.a_[i];
  }

  SymMatrix scaled(double w) const {
    SymMatrix m = *this;
    for (double& v : m.a_) v *= w;
    return m;
  }

  /// Principal submatrix on the given (sorted) index set.
  SymMatrix principal(std::span<const std::size_t> idx) const {
    SymMatrix m(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m.a_[i * idx.size() + j] = (*this)(idx[i], idx[j]);
    return m;
  }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  Vector a_;
};

/// Eigenpairs sorted by ascending eigenvalue; vectors[i] pairs with values[i].
struct EigenDecomposition {
  Vector values;
  std::vector<Vector> vectors;

  double min_value() const { return values.empty() ? 0.0 : values.front(); }
  double max_abs_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// Cyclic Jacobi rotations, capped at kJacobiSweeps sweeps.
inline EigenDecomposition sym_eigen(const SymMatrix& m) {
  const std::size_t n = m.size();
  std::vector<Vector> a = m.rows();
  std::vector<Vector> v(n, Vector(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) v[k][k] = 1.0;

  double frob = 0.0;
  for (double x : m.data()) frob += x * x;
  frob = std::sqrt(frob);
  const double target = 1e-15 * frob;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += a[p][q] * a[p][q];
    return std::sqrt(2.0 * s);
  };

  bool converged = off_norm() <= target;
  for (int sweep = 0; sweep < kJacobiSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        a[p][q] = 0.0;
        a[q][p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= target;
  }
  if (!converged) {
    // Rounding can leave the off-diagonal mass a few ulps above the target;
    // accept anything within the published residual tolerance.
    if (off_norm() > kTolEig * (1.0 + m.norm_inf())) {
      throw Error(ErrorCode::numeric_failure,
                  "sym_eigen: Jacobi did not converge in " + std::to_string(kJacobiSweeps) +
                      " sweeps (off-diagonal norm " + std::to_string(off_norm()) + ")");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.assign(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a[order[i]][order[i]];
    for (std::size_t k = 0; k < n; ++k) out.vectors[i][k] = v[k][order[i]];
  }
  return out;
}

inline double psd_threshold(const SymMatrix& m, double tol) { return tol * (1.0 + m.norm_inf()); }

inline bool is_psd(const EigenDecomposition& eig, const SymMatrix& m, double tol = kTolPsd) {
  return m.size() == 0 || eig.min_value() >= -psd_threshold(m, tol);
}

inline bool is_psd(const SymMatrix& m, double tol = kTolPsd) {
  if (tol < 0.0) throw Error(ErrorCode::precondition, "is_psd: negative tolerance");
  return is_psd(sym_eigen(m), m, tol);
}

/// Applies the pseudo-inverse built from eigenvalues above eig_threshold.
/// Returns nullopt when the part of v outside the retained eigenspace has
/// norm above range_tol * (1 + |v|).
inline std::optional<Vector> spectral_solve(const EigenDecomposition& eig, std::span<const double> v,
                                            double eig_threshold, double range_tol,
                                            bool positive_only) {
  const std::size_t n = v.size();
  Vector out(n, 0.0);
  Vector residual(v.begin(), v.end());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values[i];
    const bool keep = positive_only ? lam > eig_threshold : std::abs(lam) > eig_threshold;
    if (!keep) continue;
    const Vector& e = eig.vectors[i];
    const double coef = dot(e, v);
    for (std::size_t k = 0; k < n; ++k) {
      out[k] += coef / lam * e[k];
      residual[k] -= coef * e[k];
    }
  }
  if (norm2(residual) > range_tol * (1.0 + norm2(v))) return std::nullopt;
  return out;
}

/// A^+ v with eigenvalues |lambda| <= cutoff * max|lambda| discarded.
inline std::optional<Vector> pseudo_inverse_apply(const SymMatrix& m, std::span<const double> v,
                                                  double cutoff = kPinvCutoff) {
  require_dims(m.size(), v.size(), "pseudo_inverse_apply");
  const EigenDecomposition eig = sym_eigen(m);
  return spectral_solve(eig, v, cutoff * eig.max_abs_value(), cutoff, false);
}

/// Solves the dense square system M z = rhs (M row-major) by Gaussian
/// elimination with partial pivoting. Returns nullopt when a pivot falls
/// below pivot_tol times the largest entry of M.
inline std::optional<Vector> solve_dense(std::vector<double> mat, Vector rhs, double pivot_tol = 1e-12) {
  const std::size_t n = rhs.size();
  require_dims(n * n, mat.size(), "solve_dense");
  const double scale = std::max(norm_inf(mat), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(mat[r * n + col]) > std::abs(mat[piv * n + col])) piv = r;
    if (std::abs(mat[piv * n + col]) <= pivot_tol * scale) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(mat[piv * n + c], mat[col * n + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = mat[r * n + col] / mat[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) mat[r * n + c] -= f * mat[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  Vector z(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= mat[i * n + c] * z[c];
    z[i] = s / mat[i * n + i];
  }
  return z;
}

}  // namespace gordankit
