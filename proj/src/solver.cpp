#include "haplomin/solver.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "haplomin/format.hpp"
#include "haplomin/linalg.hpp"
#include "haplomin/metrics.hpp"
#include "haplomin/rng.hpp"

namespace haplomin {

namespace {

// Substream tag for the power-iteration start vector.
constexpr std::uint64_t kInitStream = 0x696e6974;  // "init"

Haplotype round_to_haplotype(const std::vector<double>& u) {
  std::vector<std::int8_t> signs(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    signs[i] = u[i] >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
  }
  return Haplotype(std::move(signs));
}

std::vector<std::int8_t> round_to_signs(const std::vector<double>& v) {
  std::vector<std::int8_t> signs(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    signs[j] = v[j] >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
  }
  return signs;
}

bool all_finite(const std::vector<double>& x) {
  for (double a : x) {
    if (!std::isfinite(a)) return false;
  }
  return true;
}

double effective_sample_prob(const FragmentMatrix& F, const SolverConfig& cfg) {
  double p = cfg.sample_prob.value_or(F.sample_probability());
  if (!(p > 0.0) || p > 1.0) {
    throw std::invalid_argument("sample probability must lie in (0, 1]");
  }
  return p;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::least_squares:
      return "least_squares";
    case Algorithm::hard:
      return "hard";
    case Algorithm::soft:
      return "soft";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "least_squares" || name == "ls") return Algorithm::least_squares;
  if (name == "hard") return Algorithm::hard;
  if (name == "soft") return Algorithm::soft;
  return std::nullopt;
}

double logistic_pm1(double x) {
  if (x > 700.0) return 1.0;
  if (x < -700.0) return -1.0;
  // expm1 keeps full precision near zero, where e^x - 1 would cancel.
  return std::expm1(x) / (std::exp(x) + 1.0);
}

std::vector<double> init_power_clip(const FragmentMatrix& F,
                                    const SolverConfig& cfg,
                                    SolverTrace* trace) {
  if (F.nnz() == 0) {
    throw SolverError("initialization needs at least one observation");
  }
  const int m = F.rows();
  const int n = F.cols();
  const double p_hat = effective_sample_prob(F, cfg);

  Rng rng = Rng::substream(cfg.seed, kInitStream);
  auto v0 = random_unit_vector(n, rng);
  auto A = [&](const std::vector<double>& v) { return matvec(F, v); };
  auto At = [&](const std::vector<double>& x) { return matvec_transpose(F, x); };
  auto top = power_top_singular(m, n, A, At, std::move(v0),
                                cfg.power_iterations, cfg.power_tolerance);
  if (top.sigma <= 0.0) {
    throw SolverError("initialization found an empty spectrum");
  }

  // Zero out rows the rank-one model cannot weight this heavily; they are
  // artifacts of uneven coverage, not signal.
  const double bound = cfg.clip_factor / std::sqrt(static_cast<double>(m));
  int clipped = 0;
  for (double& x : top.u) {
    if (std::abs(x) > bound) {
      x = 0.0;
      ++clipped;
    }
  }
  if (normalize(top.u) <= 1e-12) {
    throw SolverError("clipping removed the whole initial vector");
  }

  if (trace != nullptr) {
    trace->power_iterations = top.iterations;
    trace->clipped_entries = clipped;
    trace->sigma_estimate = top.sigma / p_hat;
  }
  return top.u;
}

std::vector<double> update_v_least_squares(const FragmentMatrix& F,
                                           const std::vector<double>& u,
                                           int* zero_count) {
  if (static_cast<int>(u.size()) != F.rows()) {
    throw std::invalid_argument("update_v_least_squares: bad vector length");
  }
  std::vector<double> v(F.cols(), 0.0);
  for (int j = 0; j < F.cols(); ++j) {
    double num = 0.0, den = 0.0;
    for (const auto& obs : F.column(j)) {
      num += obs.value * u[obs.index];
      den += u[obs.index] * u[obs.index];
    }
    if (den > 0.0) {
      v[j] = num / den;
    } else if (zero_count != nullptr) {
      ++*zero_count;
    }
  }
  return v;
}

std::vector<double> update_u_least_squares(const FragmentMatrix& F,
                                           const std::vector<double>& v,
                                           int* zero_count) {
  if (static_cast<int>(v.size()) != F.cols()) {
    throw std::invalid_argument("update_u_least_squares: bad vector length");
  }
  std::vector<double> u(F.rows(), 0.0);
  for (int i = 0; i < F.rows(); ++i) {
    double num = 0.0, den = 0.0;
    for (const auto& obs : F.row(i)) {
      num += obs.value * v[obs.index];
      den += v[obs.index] * v[obs.index];
    }
    if (den > 0.0) {
      u[i] = num / den;
    } else if (zero_count != nullptr) {
      ++*zero_count;
    }
  }
  return u;
}

std::vector<double> update_v_hard(const FragmentMatrix& F,
                                  const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != F.rows()) {
    throw std::invalid_argument("update_v_hard: bad vector length");
  }
  std::vector<double> v(F.cols());
  for (int j = 0; j < F.cols(); ++j) {
    v[j] = column_dot(F, j, u) >= 0.0 ? 1.0 : -1.0;
  }
  return v;
}

std::vector<double> update_u_hard(const FragmentMatrix& F,
                                  const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != F.cols()) {
    throw std::invalid_argument("update_u_hard: bad vector length");
  }
  std::vector<double> u(F.rows());
  for (int i = 0; i < F.rows(); ++i) {
    u[i] = row_dot(F, i, v) >= 0.0 ? 1.0 : -1.0;
  }
  return u;
}

std::vector<double> update_v_soft(const FragmentMatrix& F,
                                  const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != F.rows()) {
    throw std::invalid_argument("update_v_soft: bad vector length");
  }
  const double scale = 1.0 / static_cast<double>(F.rows());
  std::vector<double> v(F.cols());
  for (int j = 0; j < F.cols(); ++j) {
    v[j] = logistic_pm1(scale * column_dot(F, j, u));
  }
  return v;
}

std::vector<double> update_u_soft(const FragmentMatrix& F,
                                  const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != F.cols()) {
    throw std::invalid_argument("update_u_soft: bad vector length");
  }
  const double scale = 1.0 / static_cast<double>(F.cols());
  std::vector<double> u(F.rows());
  for (int i = 0; i < F.rows(); ++i) {
    u[i] = logistic_pm1(scale * row_dot(F, i, v));
  }
  return u;
}

std::string SolverTrace::csv() const {
  std::string out = "iteration,dist_u,mec,delta\n";
  const std::size_t iters = delta.size();
  const bool with_dist = dist_u.size() == iters + 1;
  out += "0,";
  if (with_dist) out += format_g(dist_u[0]);
  out += ",,\n";
  for (std::size_t t = 0; t < iters; ++t) {
    out += std::to_string(t + 1);
    out += ',';
    if (with_dist) out += format_g(dist_u[t + 1]);
    out += ',';
    out += std::to_string(mec[t]);
    out += ',';
    out += format_g(delta[t]);
    out += '\n';
  }
  return out;
}

AssemblyResult assemble(const FragmentMatrix& F, const SolverConfig& cfg,
                        const GroundTruth* truth) {
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be positive");
  }
  if (truth != nullptr && truth->snps() != F.rows()) {
    throw std::invalid_argument("ground truth has the wrong dimension");
  }

  AssemblyResult res;
  std::vector<double> u;
  if (cfg.initial_u.has_value()) {
    if (static_cast<int>(cfg.initial_u->size()) != F.rows()) {
      throw std::invalid_argument("initial_u has the wrong length");
    }
    u = *cfg.initial_u;
    if (normalize(u) == 0.0) {
      throw SolverError("initial vector is zero");
    }
  } else {
    u = init_power_clip(F, cfg, &res.trace);
  }

  std::vector<double> truth_u;
  if (truth != nullptr) {
    truth_u.resize(truth->snps());
    for (int i = 0; i < truth->snps(); ++i) truth_u[i] = truth->haplotype[i];
    res.trace.dist_u.push_back(principal_angle_dist(u, truth_u));
  }

  const bool is_ls = cfg.algorithm == Algorithm::least_squares;
  std::vector<double> v(F.cols(), 0.0);
  std::vector<double> u_prev = u;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    int zeros = 0;
    switch (cfg.algorithm) {
      case Algorithm::least_squares:
        v = update_v_least_squares(F, u, &zeros);
        break;
      case Algorithm::hard:
        v = update_v_hard(F, u);
        break;
      case Algorithm::soft:
        v = update_v_soft(F, u);
        break;
    }
    if (!all_finite(v)) throw SolverError("read factor diverged");
    if (normalize(v) == 0.0) {
      throw SolverError("read factor collapsed to zero");
    }
    switch (cfg.algorithm) {
      case Algorithm::least_squares:
        u = update_u_least_squares(F, v, &zeros);
        break;
      case Algorithm::hard:
        u = update_u_hard(F, v);
        break;
      case Algorithm::soft:
        u = update_u_soft(F, v);
        break;
    }
    if (!all_finite(u)) throw SolverError("haplotype factor diverged");
    if (normalize(u) == 0.0) {
      throw SolverError("haplotype factor collapsed to zero");
    }

    double delta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      double d = u[i] - u_prev[i];
      delta += d * d;
    }
    delta = std::sqrt(delta);

    if (truth != nullptr) {
      res.trace.dist_u.push_back(principal_angle_dist(u, truth_u));
    }
    res.trace.mec.push_back(mec_score(F, round_to_haplotype(u)));
    res.trace.delta.push_back(delta);
    if (is_ls) res.trace.ls_zero_flags.push_back(zeros);
    res.iterations = it;
    u_prev = u;
    if (delta < cfg.tolerance) {
      res.converged = true;
      break;
    }
  }

  // Canonical form: flip the whole factorization so the first SNP reads +1.
  if (u[0] < 0.0) {
    for (auto& x : u) x = -x;
    for (auto& x : v) x = -x;
  }
  res.haplotype = round_to_haplotype(u);
  res.membership = round_to_signs(v);
  res.u = std::move(u);
  res.v = std::move(v);
  return res;
}

}  // namespace haplomin
