#include "haplomin/svt.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "haplomin/linalg.hpp"
#include "haplomin/rng.hpp"

namespace haplomin {

namespace {

constexpr std::uint64_t kSvtStream = 0x737674;  // "svt"

struct Partial {
  std::vector<double> sigma;           // values above tau, descending
  std::vector<std::vector<double>> u;  // matching left vectors
  std::vector<std::vector<double>> v;  // matching right vectors
};

}  // namespace

SvtResult svt_complete(const FragmentMatrix& F, const SvtConfig& cfg) {
  const int m = F.rows();
  const int n = F.cols();
  const std::size_t nnz = F.nnz();
  if (nnz == 0) {
    throw std::invalid_argument("svt_complete needs at least one observation");
  }
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("svt_complete: max_iterations must be positive");
  }

  const double tau =
      cfg.tau > 0.0 ? cfg.tau
                    : 5.0 * std::sqrt(static_cast<double>(m) * n);
  const double step = cfg.step > 0.0 ? cfg.step : 1.2 / F.sample_probability();
  const int max_rank =
      std::min(cfg.max_rank > 0 ? cfg.max_rank : std::min(m, n), std::min(m, n));

  // Flat offsets so the dual values align with the column spans.
  std::vector<std::size_t> offs(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 0; j < n; ++j) offs[j + 1] = offs[j] + F.column(j).size();

  const double observed_norm = std::sqrt(static_cast<double>(nnz));

  // Warm start: jump the dual far enough that the first shrinkage is nonzero.
  Rng rng = Rng::substream(cfg.seed, kSvtStream);
  auto Fv = [&](const std::vector<double>& v) { return matvec(F, v); };
  auto Ftx = [&](const std::vector<double>& x) { return matvec_transpose(F, x); };
  double sigma1 = power_top_singular(m, n, Fv, Ftx, random_unit_vector(n, rng),
                                     cfg.power_iterations, cfg.power_tolerance)
                      .sigma;
  if (sigma1 <= 0.0) {
    throw std::invalid_argument("svt_complete: observed matrix has no spectrum");
  }
  const double k0 = std::ceil(tau / (step * sigma1));
  std::vector<double> y(nnz);
  for (int j = 0; j < n; ++j) {
    auto col = F.column(j);
    for (std::size_t t = 0; t < col.size(); ++t) {
      y[offs[j] + t] = k0 * step * col[t].value;
    }
  }

  auto Yv = [&](const std::vector<double>& v) {
    std::vector<double> x(m, 0.0);
    for (int j = 0; j < n; ++j) {
      auto col = F.column(j);
      const double vj = v[j];
      for (std::size_t t = 0; t < col.size(); ++t) {
        x[col[t].index] += y[offs[j] + t] * vj;
      }
    }
    return x;
  };
  auto Ytx = [&](const std::vector<double>& x) {
    std::vector<double> w(n, 0.0);
    for (int j = 0; j < n; ++j) {
      auto col = F.column(j);
      double s = 0.0;
      for (std::size_t t = 0; t < col.size(); ++t) {
        s += y[offs[j] + t] * x[col[t].index];
      }
      w[j] = s;
    }
    return w;
  };

  SvtResult res;
  Partial svd;
  std::vector<std::vector<double>> warm;  // right vectors from the last pass
  std::vector<double> xval(nnz);          // current iterate on the support

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    res.iterations = it;

    // Partial SVD of the dual: all values above tau plus the first one below,
    // by deflated power iterations.
    svd.sigma.clear();
    svd.u.clear();
    svd.v.clear();
    std::vector<std::vector<double>> next_warm;
    for (int k = 0; k <= max_rank; ++k) {
      auto Ak = [&](const std::vector<double>& v) {
        auto x = Yv(v);
        for (std::size_t l = 0; l < svd.sigma.size(); ++l) {
          const double c = svd.sigma[l] * dot(svd.v[l], v);
          for (int i = 0; i < m; ++i) x[i] -= c * svd.u[l][i];
        }
        return x;
      };
      auto Atk = [&](const std::vector<double>& x) {
        auto w = Ytx(x);
        for (std::size_t l = 0; l < svd.sigma.size(); ++l) {
          const double c = svd.sigma[l] * dot(svd.u[l], x);
          for (int j = 0; j < n; ++j) w[j] -= c * svd.v[l][j];
        }
        return w;
      };
      std::vector<double> v0 = k < static_cast<int>(warm.size())
                                   ? warm[k]
                                   : random_unit_vector(n, rng);
      auto trip = power_top_singular(m, n, Ak, Atk, std::move(v0),
                                     cfg.power_iterations, cfg.power_tolerance);
      next_warm.push_back(trip.v);
      if (trip.sigma <= tau || k == max_rank) break;
      svd.sigma.push_back(trip.sigma);
      svd.u.push_back(std::move(trip.u));
      svd.v.push_back(std::move(trip.v));
    }
    // Slot k keeps the k-th right vector for the next pass; directions move
    // little between dual steps, so the restarts converge in a few products.
    warm = std::move(next_warm);
    res.rank = static_cast<int>(svd.sigma.size());

    // Shrunk iterate on the observed support, residual, dual ascent.
    double sq = 0.0;
    for (int j = 0; j < n; ++j) {
      auto col = F.column(j);
      for (std::size_t t = 0; t < col.size(); ++t) {
        const int i = col[t].index;
        double x = 0.0;
        for (std::size_t l = 0; l < svd.sigma.size(); ++l) {
          x += (svd.sigma[l] - tau) * svd.u[l][i] * svd.v[l][j];
        }
        xval[offs[j] + t] = x;
        const double r = col[t].value - x;
        sq += r * r;
      }
    }
    res.relative_residual = std::sqrt(sq) / observed_norm;
    res.residual_trace.push_back(res.relative_residual);

    if (res.relative_residual <= cfg.tolerance) {
      res.converged = true;
      break;
    }
    const std::size_t done = res.residual_trace.size();
    if (cfg.stall_window > 0 &&
        done > static_cast<std::size_t>(cfg.stall_window)) {
      const double before =
          res.residual_trace[done - 1 - cfg.stall_window];
      if (before - res.relative_residual < cfg.stall_improvement) break;
    }

    for (int j = 0; j < n; ++j) {
      auto col = F.column(j);
      for (std::size_t t = 0; t < col.size(); ++t) {
        y[offs[j] + t] += step * (col[t].value - xval[offs[j] + t]);
      }
    }
  }

  // Materialize the final iterate densely.
  res.completed.assign(static_cast<std::size_t>(m) * n, 0.0);
  for (std::size_t l = 0; l < svd.sigma.size(); ++l) {
    const double s = svd.sigma[l] - tau;
    for (int i = 0; i < m; ++i) {
      const double ui = s * svd.u[l][i];
      double* row = res.completed.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) row[j] += ui * svd.v[l][j];
    }
  }
  if (!svd.sigma.empty()) {
    // The shrinkage keeps the singular order, so the largest shrunk value is
    // the first one found.
    res.top_u = svd.u.front();
    res.top_v = svd.v.front();
  }
  return res;
}

std::vector<std::int8_t> round_to_sign(const std::vector<double>& dense) {
  std::vector<std::int8_t> out(dense.size());
  for (std::size_t k = 0; k < dense.size(); ++k) {
    out[k] = dense[k] >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
  }
  return out;
}

}  // namespace haplomin
