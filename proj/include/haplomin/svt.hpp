#pragma once

#include <cstdint>
#include <vector>

#include "haplomin/fragment_matrix.hpp"

namespace haplomin {

// Singular value thresholding: iterative trace-norm completion used as the
// comparison baseline. Dual variable lives on the observed support only; the
// per-iteration shrinkage keeps every singular value above tau, computed by
// deflated power iterations warm-started from the previous pass.
struct SvtConfig {
  double tau = 0.0;         // threshold; 0 picks 5*sqrt(m*n)
  double step = 0.0;        // dual step; 0 picks 1.2 / sample probability
  double tolerance = 1e-4;  // stop: relative residual on observed entries
  int max_iterations = 300;
  int max_rank = 50;  // partial SVD budget per iteration
  // Stop early when the relative residual improves by less than
  // stall_improvement over the last stall_window iterations.
  double stall_improvement = 5e-4;
  int stall_window = 10;
  int power_iterations = 60;
  double power_tolerance = 1e-6;
  std::uint64_t seed = 0;  // start vectors for the partial SVDs
};

struct SvtResult {
  std::vector<double> completed;  // m*n, row-major
  // Leading singular direction of the completed matrix; empty when the final
  // iterate is zero. Rounding top_u gives the haplotype the completion
  // implies.
  std::vector<double> top_u;
  std::vector<double> top_v;
  int iterations = 0;
  int rank = 0;  // singular values above tau at the final iterate
  bool converged = false;  // reached the residual tolerance
  double relative_residual = 1.0;
  std::vector<double> residual_trace;  // one value per iteration
};

SvtResult svt_complete(const FragmentMatrix& F, const SvtConfig& cfg = {});

// Entrywise signs of a dense matrix; zeros round to +1.
std::vector<std::int8_t> round_to_sign(const std::vector<double>& dense);

}  // namespace haplomin
