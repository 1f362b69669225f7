#pragma once

#include <cstdint>
#include <vector>

#include "haplomin/solver.hpp"

namespace haplomin {

// Closed-form guarantees for the alternating solver on the rank-one ±1 model,
// plus empirical validators that replay simulated runs against them. All
// formulas treat the planted matrix as u* sigma* v*^T with sigma* = sqrt(mn)
// and noise entries of magnitude at most noise_max.
struct TheoryParams {
  int m = 0;
  int n = 0;
  double error_rate = 0.0;  // per observed entry flip probability
  double noise_max = 2.0;   // flip changes an entry by 2
  double delta2 = 0.1;      // analysis slack, in [0, delta2_max()]
  double epsilon = 1.0;     // target reconstruction accuracy (Frobenius)
  double mu = 1.0;          // incoherence of the planted factors
  double C = 1.0;           // global constant in the sampling condition
  double C_prime = 1.0;     // global constant in the delta2 range

  double alpha() const { return static_cast<double>(n) / m; }
  double sigma_star() const;
  double mu1() const { return 8.0 * mu; }  // iterate incoherence after clipping
  double delta2_max() const {
    return (3.93 - C_prime * noise_max * error_rate) / 21.0;
  }

  // Throws std::invalid_argument when any field is out of range (requires
  // n >= m >= 1, error_rate in [0,1), delta2 in [0, delta2_max()],
  // epsilon > 0, positive constants).
  void validate() const;
};

// Smallest sample probability the convergence guarantee asks for:
// C * sqrt(alpha)/(m*delta2^2) * ln n * ln(sigma*/epsilon)
//   * (error_rate + 64/3 * delta2).
// Requires delta2 > 0. Values above 1 mean the guarantee is out of reach at
// this size.
double sample_prob_threshold(const TheoryParams& tp);

// The same condition expressed as expected reads covering one SNP:
// sample_prob_threshold * n.
double coverage_requirement(const TheoryParams& tp);

// High-probability bound on ||P_Omega(N)||_2 / p for the flip-noise model:
// 2 * noise_max * error_rate * sqrt(mn).
double noise_spectral_bound(const TheoryParams& tp);

// Frobenius guarantee for the assembled rank-one estimate:
// epsilon + 16*error_rate*sigma*/(3*delta2) * (2 + (2+3*noise_max)*delta2).
double error_bound(const TheoryParams& tp);

// Normalized-MEC guarantee for the sign-rounded estimate, counting raw
// observed mismatches over mn: error_bound/sigma* plus the observed noise
// Frobenius norm over sigma*.
double mec_bound(const TheoryParams& tp, double noise_frobenius_norm);

// Where the distance trace is guaranteed to settle:
// epsilon/(2*sigma*) + 4*mu1*error_rate/(3*delta2).
double plateau_bound(const TheoryParams& tp);

// Checks a per-iteration distance trace (dist_u from SolverTrace, entry 0 the
// initialization) against the affine contraction
//   dist[t] <= 1/4 * dist[t-1] + mu1*error_rate/delta2 (+ slack).
// Transitions are examined until the previous distance drops below `floor`.
struct ContractionReport {
  int checked = 0;              // transitions examined
  std::vector<int> violations;  // 1-based trace indices that broke the bound
  bool compliant() const { return violations.empty(); }
};
ContractionReport contraction_check(const std::vector<double>& dist_trace,
                                    const TheoryParams& tp,
                                    double floor = 1e-10, double slack = 1e-6);

struct BoundCheck {
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ValidationSummary {
  std::vector<BoundCheck> checks;
  double pass_rate() const;
};

// Draws `replicates` uniform-observation instances at the given sample
// probability and checks ||P_Omega(N)||_2 / p against noise_spectral_bound.
ValidationSummary validate_noise_bound(const TheoryParams& tp,
                                       double sample_prob, int replicates,
                                       std::uint64_t seed);

// Runs the assembler on `replicates` simulated instances and checks both
// guarantees: ||M - M_hat||_F against error_bound, and the normalized
// observed-mismatch count of the rounded estimate against mec_bound.
struct ErrorBoundReport {
  ValidationSummary frobenius;
  ValidationSummary mec;
};
ErrorBoundReport validate_error_bound(const TheoryParams& tp,
                                      double sample_prob, int replicates,
                                      std::uint64_t seed,
                                      Algorithm algorithm = Algorithm::soft);

}  // namespace haplomin
