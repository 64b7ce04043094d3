#pragma once

// Brute-force references and seeded generators: the counter-based RNG,
// simplex lattices, regular-grid minimization, sphere and low-discrepancy
// samplers, and random family generators used by the tests.

#include <array>
#include <cstdint>
#include <limits>

#include "gordankit/quadratic.hpp"

namespace gordankit {

using Seed = std::uint64_t;

inline constexpr Seed kDefaultSeed = 0x5eed'0000'2024ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: output k of stream s under seed is
///   mix64(key + k * 0x9E3779B97F4A7C15),  key = mix64(mix64(seed) + s).
/// Streams are independent by construction, so parallel consumers can split
/// by stream index without sharing state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(Seed seed, std::uint64_t stream = 0) : key_(mix64(mix64(seed) + stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + counter_++ * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n; }

  /// Standard normal by Box-Muller (cosine branch only, two uniforms per draw).
  double normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Simplex lattice

inline constexpr std::uint64_t kLatticeBudget = 10'000'000;

/// C(r + m - 1, m - 1), saturating at max uint64.
inline std::uint64_t lattice_size(std::size_t m, std::size_t r) {
  if (m == 0) return 0;
  long double c = 1.0L;
  for (std::size_t i = 1; i < m; ++i) c = c * static_cast<long double>(r + i) / static_cast<long double>(i);
  if (c > 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(c + 0.5L);
}

/// Visits every weight with denominator r in lexicographic order (first
/// coordinate ascending). The visitor receives a span valid for the call.
template <class Visitor>
void for_each_simplex_lattice(std::size_t m, std::size_t r, Visitor&& visit) {
  if (m == 0 || r == 0) throw Error(ErrorCode::precondition, "simplex_lattice: m and r must be positive");
  if (lattice_size(m, r) > kLatticeBudget)
    throw Error(ErrorCode::budget_exceeded, "simplex_lattice: more than 1e7 lattice points");
  std::vector<std::size_t> counts(m, 0);
  Vector t(m, 0.0);
  const double rr = static_cast<double>(r);
  // counts[0..m-2] free, counts[m-1] = remainder
  while (true) {
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) used += counts[i];
    counts[m - 1] = r - used;
    for (std::size_t i = 0; i < m; ++i) t[i] = static_cast<double>(counts[i]) / rr;
    visit(std::span<const double>(t));
    // advance: odometer on counts[0..m-2], last position fastest
    if (m == 1) return;
    std::size_t pos = m - 2;
    while (true) {
      std::size_t before = 0;
      for (std::size_t i = 0; i < pos; ++i) before += counts[i];
      if (before + counts[pos] < r) {
        ++counts[pos];
        for (std::size_t i = pos + 1; i + 1 < m; ++i) counts[i] = 0;
        break;
      }
      if (pos == 0) return;
      counts[pos] = 0;
      --pos;
    }
  }
}

inline std::vector<SimplexWeight> simplex_lattice(std::size_t m, std::size_t r) {
  std::vector<SimplexWeight> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(lattice_size(m, r), kLatticeBudget)));
  for_each_simplex_lattice(m, r, [&](std::span<const double> t) {
    out.push_back(SimplexWeight::make(Vector(t.begin(), t.end())));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Regular grid minimum

inline constexpr std::uint64_t kGridBudget = 10'000'000;

struct GridMinResult {
  double value;
  Vector argmin;
};

/// Minimum of f over the regular grid on box with resolution[k] points along
/// axis k (endpoints included). Ties go to the lexicographically smallest
/// grid index.
template <class F>
GridMinResult grid_min(F&& f, const Box& box, std::span<const std::size_t> resolution) {
  const std::size_t n = box.lo.size();
  require_dims(n, resolution.size(), "grid_min resolution");
  std::uint64_t total = 1;
  for (std::size_t r : resolution) {
    if (r < 2) throw Error(ErrorCode::precondition, "grid_min: resolution must be at least 2 per axis");
    if (total > kGridBudget / r) throw Error(ErrorCode::budget_exceeded, "grid_min: more than 1e7 grid points");
    total *= r;
  }
  std::vector<std::size_t> idx(n, 0);
  Vector x(n);
  GridMinResult best{std::numeric_limits<double>::infinity(), {}};
  for (std::uint64_t count = 0; count < total; ++count) {
    for (std::size_t k = 0; k < n; ++k)
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * static_cast<double>(idx[k]) /
                             static_cast<double>(resolution[k] - 1);
    const double v = f(std::span<const double>(x));
    if (v < best.value || best.argmin.empty()) {
      best.value = v;
      best.argmin = x;
    }
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < resolution[k]) break;
      idx[k] = 0;
    }
  }
  return best;
}

template <class F>
GridMinResult grid_min(F&& f, const Box& box, std::size_t resolution) {
  std::vector<std::size_t> res(box.lo.size(), resolution);
  return grid_min(std::forward<F>(f), box, std::span<const std::size_t>(res));
}

// ---------------------------------------------------------------------------
// Samplers

/// Unit vectors by Gaussian normalization.
inline std::vector<Vector> sphere_sample(std::size_t n, std::size_t count, Seed seed) {
  if (n == 0 || count == 0) throw Error(ErrorCode::precondition, "sphere_sample: n and count must be positive");
  CounterRng rng(seed, 0x5F3E2E);
  std::vector<Vector> out;
  out.reserve(count);
  while (out.size() < count) {
    Vector v(n);
    for (double& x : v) x = rng.normal();
    const double r = norm2(v);
    if (r < 1e-300) continue;
    for (double& x : v) x /= r;
    out.push_back(std::move(v));
  }
  return out;
}

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

/// Halton points in [lo, hi] with a seeded Cranley-Patterson rotation.
inline std::vector<Vector> halton_box(std::span<const double> lo, std::span<const double> hi, std::size_t count,
                                      Seed seed) {
  static constexpr std::array<std::uint64_t, 32> primes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,  31,
                                                           37, 41, 43, 47, 53, 59, 61, 67, 71, 73,  79,
                                                           83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  const std::size_t n = lo.size();
  CounterRng rng(seed, 0x4A170);
  Vector shift(n);
  for (double& s : shift) s = rng.uniform01();
  std::vector<Vector> out(count, Vector(n));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double u = (k < primes.size() ? radical_inverse(i + 1, primes[k]) : rng.uniform01()) + shift[k];
      u -= std::floor(u);
      out[i][k] = lo[k] + (hi[k] - lo[k]) * u;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

/// Random family whose bordered matrices are Z-matrices: off-diagonal A in
/// [-2, 0], diagonal A in [-2, 2], b in [-2, 0], c in [-2, 2].
inline QuadraticFamily random_z_family(std::size_t n, std::size_t m, Seed seed) {
  if (n == 0 || m == 0) throw Error(ErrorCode::precondition, "random_z_family: n and m must be positive");
  CounterRng rng(seed, 0x2F4A11);
  std::vector<QuadraticFunction> members;
  for (std::size_t j = 0; j < m; ++j) {
    SymMatrix a(n);
    for (std::size_t k = 0; k < n; ++k) {
      a.set(k, k, rng.uniform(-2.0, 2.0));
      for (std::size_t l = k + 1; l < n; ++l) a.set(k, l, rng.uniform(-2.0, 0.0));
    }
    Vector b(n);
    for (double& v : b) v = rng.uniform(-2.0, 0.0);
    members.emplace_back(std::move(a), std::move(b), rng.uniform(-2.0, 2.0));
  }
  return QuadraticFamily(std::move(members));
}

/// Symmetric matrix with independent standard normal entries (upper triangle).
inline SymMatrix random_symmetric(std::size_t n, CounterRng& rng, double scale = 1.0) {
  SymMatrix a(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) a.set(k, l, scale * rng.normal());
  return a;
}

/// B B^T / n with B standard normal: PSD, generically positive definite.
inline SymMatrix random_psd(std::size_t n, CounterRng& rng, std::size_t rank = 0) {
  const std::size_t r = rank == 0 ? n : rank;
  std::vector<Vector> bm(n, Vector(r));
  for (auto& row : bm)
    for (double& v : row) v = rng.normal();
  SymMatrix a(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) a.set(k, l, dot(bm[k], bm[l]) / static_cast<double>(r));
  return a;
}

inline Vector random_vector(std::size_t n, CounterRng& rng, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// Family of convex quadratics (PSD Hessians), b and c uniform.
inline QuadraticFamily random_convex_family(std::size_t n, std::size_t m, CounterRng& rng) {
  std::vector<QuadraticFunction> members;
  for (std::size_t j = 0; j < m; ++j)
    members.emplace_back(random_psd(n, rng), random_vector(n, rng, -2.0, 2.0), rng.uniform(-2.0, 2.0));
  return QuadraticFamily(std::move(members));
}

}  // namespace gordankit
