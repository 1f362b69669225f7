#include "haplomin/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "haplomin/linalg.hpp"
#include "haplomin/metrics.hpp"
#include "haplomin/simulate.hpp"

namespace haplomin {

double TheoryParams::sigma_star() const {
  return std::sqrt(static_cast<double>(m) * n);
}

void TheoryParams::validate() const {
  if (m < 1 || n < m) {
    throw std::invalid_argument("theory params need n >= m >= 1");
  }
  if (error_rate < 0.0 || error_rate >= 1.0) {
    throw std::invalid_argument("error rate must lie in [0, 1)");
  }
  if (noise_max <= 0.0) {
    throw std::invalid_argument("noise_max must be positive");
  }
  if (epsilon <= 0.0) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (mu <= 0.0 || C <= 0.0 || C_prime <= 0.0) {
    throw std::invalid_argument("mu, C, C_prime must be positive");
  }
  const double lim = delta2_max();
  if (lim <= 0.0) {
    throw std::invalid_argument("delta2 range is empty at this error rate");
  }
  if (delta2 < 0.0 || delta2 > lim) {
    throw std::invalid_argument("delta2 outside its admissible range");
  }
}

double sample_prob_threshold(const TheoryParams& tp) {
  tp.validate();
  if (tp.delta2 <= 0.0) {
    throw std::invalid_argument("sample_prob_threshold needs delta2 > 0");
  }
  const double log_accuracy = std::log(tp.sigma_star() / tp.epsilon);
  return tp.C * (std::sqrt(tp.alpha()) / (tp.m * tp.delta2 * tp.delta2)) *
         std::log(static_cast<double>(tp.n)) * log_accuracy *
         (tp.error_rate + 64.0 / 3.0 * tp.delta2);
}

double coverage_requirement(const TheoryParams& tp) {
  return sample_prob_threshold(tp) * tp.n;
}

double noise_spectral_bound(const TheoryParams& tp) {
  tp.validate();
  return 2.0 * tp.noise_max * tp.error_rate * tp.sigma_star();
}

double error_bound(const TheoryParams& tp) {
  tp.validate();
  if (tp.delta2 <= 0.0) {
    throw std::invalid_argument("error_bound needs delta2 > 0");
  }
  return tp.epsilon + 16.0 * tp.error_rate * tp.sigma_star() /
                          (3.0 * tp.delta2) *
                          (2.0 + (2.0 + 3.0 * tp.noise_max) * tp.delta2);
}

double mec_bound(const TheoryParams& tp, double noise_frobenius_norm) {
  return (error_bound(tp) + noise_frobenius_norm) / tp.sigma_star();
}

double plateau_bound(const TheoryParams& tp) {
  tp.validate();
  if (tp.delta2 <= 0.0) {
    throw std::invalid_argument("plateau_bound needs delta2 > 0");
  }
  return 0.5 * tp.epsilon / tp.sigma_star() +
         4.0 * tp.mu1() * tp.error_rate / (3.0 * tp.delta2);
}

ContractionReport contraction_check(const std::vector<double>& dist_trace,
                                    const TheoryParams& tp, double floor,
                                    double slack) {
  tp.validate();
  double offset = 0.0;
  if (tp.error_rate > 0.0) {
    if (tp.delta2 <= 0.0) {
      throw std::invalid_argument("contraction offset needs delta2 > 0");
    }
    offset = tp.mu1() * tp.error_rate / tp.delta2;
  }
  ContractionReport report;
  for (std::size_t t = 1; t < dist_trace.size(); ++t) {
    const double prev = dist_trace[t - 1];
    if (prev < floor) break;
    ++report.checked;
    if (dist_trace[t] > 0.25 * prev + offset + slack) {
      report.violations.push_back(static_cast<int>(t));
    }
  }
  return report;
}

double ValidationSummary::pass_rate() const {
  if (checks.empty()) return 0.0;
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c.pass;
  return static_cast<double>(passed) / checks.size();
}

ValidationSummary validate_noise_bound(const TheoryParams& tp,
                                       double sample_prob, int replicates,
                                       std::uint64_t seed) {
  tp.validate();
  if (!(sample_prob > 0.0) || sample_prob > 1.0) {
    throw std::invalid_argument("sample probability must lie in (0, 1]");
  }
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be positive");
  }
  ValidationSummary out;
  const double bound = noise_spectral_bound(tp);
  for (int rep = 0; rep < replicates; ++rep) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(rep);
    auto truth = generate_truth(tp.m, tp.n, s);
    auto F = observe_uniform(truth, sample_prob, tp.error_rate, s);
    auto entries = noise_entries(F, truth);
    const double measured =
        spectral_norm(tp.m, tp.n, entries, s) / sample_prob;
    out.checks.push_back({measured, bound, measured <= bound});
  }
  return out;
}

ErrorBoundReport validate_error_bound(const TheoryParams& tp,
                                      double sample_prob, int replicates,
                                      std::uint64_t seed, Algorithm algorithm) {
  tp.validate();
  if (!(sample_prob > 0.0) || sample_prob > 1.0) {
    throw std::invalid_argument("sample probability must lie in (0, 1]");
  }
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be positive");
  }
  ErrorBoundReport out;
  const double frob_bound = error_bound(tp);
  for (int rep = 0; rep < replicates; ++rep) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(rep);
    auto truth = generate_truth(tp.m, tp.n, s);
    auto F = observe_uniform(truth, sample_prob, tp.error_rate, s);

    SolverConfig cfg;
    cfg.algorithm = algorithm;
    cfg.seed = s;
    AssemblyResult res;
    bool solved = true;
    try {
      res = assemble(F, cfg);
    } catch (const SolverError&) {
      solved = false;
    }

    if (!solved) {
      out.frobenius.checks.push_back({-1.0, frob_bound, false});
      out.mec.checks.push_back(
          {-1.0, mec_bound(tp, noise_frobenius(F, truth)), false});
      continue;
    }

    // ||M - h_hat b_hat^T||_F: entries differ by exactly 2 where the sign
    // products disagree.
    std::int64_t row_match = 0, col_match = 0;
    for (int i = 0; i < tp.m; ++i) {
      row_match += res.haplotype[i] == truth.haplotype[i];
    }
    for (int j = 0; j < tp.n; ++j) {
      col_match += res.membership[j] == truth.membership[j];
    }
    const std::int64_t agree =
        row_match * col_match +
        (tp.m - row_match) * (static_cast<std::int64_t>(tp.n) - col_match);
    const std::int64_t total = static_cast<std::int64_t>(tp.m) * tp.n;
    const double frob = 2.0 * std::sqrt(static_cast<double>(total - agree));
    out.frobenius.checks.push_back({frob, frob_bound, frob <= frob_bound});

    // Normalized raw mismatch count of the rounded estimate on the support.
    std::int64_t mismatches = 0;
    for (int j = 0; j < tp.n; ++j) {
      for (const auto& obs : F.column(j)) {
        const int predicted = res.haplotype[obs.index] * res.membership[j];
        mismatches += predicted != obs.value;
      }
    }
    const double measured_mec = static_cast<double>(mismatches) / total;
    const double bound = mec_bound(tp, noise_frobenius(F, truth));
    out.mec.checks.push_back({measured_mec, bound, measured_mec <= bound});
  }
  return out;
}

}  // namespace haplomin
