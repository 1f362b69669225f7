#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "haplomin/rng.hpp"

namespace haplomin {

// General sparse element with a real value (noise matrices hold ±2).
struct SparseEntry {
  std::int32_t row;
  std::int32_t col;
  double value;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Scales to unit norm in place; returns the original norm (0 if degenerate,
// in which case the vector is left untouched).
inline double normalize(std::vector<double>& a) {
  double n = norm2(a);
  if (n > 0.0) {
    for (auto& x : a) x /= n;
  }
  return n;
}

struct SingularTriple {
  double sigma = 0.0;
  std::vector<double> u;  // length m
  std::vector<double> v;  // length n
  int iterations = 0;
};

// Top singular triple by alternating matrix-vector products. The operator is
// supplied as a pair of callables so sparse layouts, deflated operators, and
// raw triple lists all share one implementation. Convergence is measured by
// the relative change of the singular value estimate. A zero operator comes
// back with sigma == 0.
template <class ApplyFn, class ApplyTFn>
SingularTriple power_top_singular(int m, int n, ApplyFn&& A, ApplyTFn&& At,
                                  std::vector<double> v0, int max_iters,
                                  double rel_tol) {
  if (static_cast<int>(v0.size()) != n) {
    throw std::invalid_argument("power_top_singular: bad start vector length");
  }
  SingularTriple out;
  out.u.assign(m, 0.0);
  out.v = std::move(v0);
  if (normalize(out.v) == 0.0) return out;

  double sigma_prev = -1.0;
  for (int it = 0; it < max_iters; ++it) {
    out.iterations = it + 1;
    out.u = A(out.v);
    double su = normalize(out.u);
    if (su == 0.0) {
      out.sigma = 0.0;
      return out;
    }
    out.v = At(out.u);
    double sv = normalize(out.v);
    out.sigma = sv;
    if (sv == 0.0) return out;
    if (sigma_prev >= 0.0 &&
        std::abs(sv - sigma_prev) <= rel_tol * std::max(sv, 1e-300)) {
      break;
    }
    sigma_prev = sv;
  }
  // One more half-step so u corresponds to the returned v.
  out.u = A(out.v);
  out.sigma = normalize(out.u);
  return out;
}

inline std::vector<double> random_unit_vector(int n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
  if (normalize(v) == 0.0) {
    v.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  }
  return v;
}

// Spectral norm of a matrix given as raw triples.
inline double spectral_norm(int m, int n, const std::vector<SparseEntry>& entries,
                            std::uint64_t seed, int max_iters = 300,
                            double rel_tol = 1e-10) {
  Rng rng(seed);
  auto v0 = random_unit_vector(n, rng);
  auto A = [&](const std::vector<double>& v) {
    std::vector<double> x(m, 0.0);
    for (const auto& e : entries) x[e.row] += e.value * v[e.col];
    return x;
  };
  auto At = [&](const std::vector<double>& u) {
    std::vector<double> y(n, 0.0);
    for (const auto& e : entries) y[e.col] += e.value * u[e.row];
    return y;
  };
  return power_top_singular(m, n, A, At, std::move(v0), max_iters, rel_tol).sigma;
}

}  // namespace haplomin
