#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "haplomin/fragment_matrix.hpp"
#include "haplomin/haplotype.hpp"
#include "haplomin/simulate.hpp"

namespace haplomin {

// The three alternating update families. All share the spectral
// initialization; they differ in how a half-step maps the opposite factor.
enum class Algorithm {
  least_squares,  // per-coordinate least squares on the observed residual
  hard,           // sign of the correlation, ties to +1
  soft,           // (e^x - 1)/(e^x + 1) of the scaled correlation
};

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::soft;
  int max_iterations = 100;
  double tolerance = 1e-6;     // stop when the normalized iterate moves less
  int power_iterations = 200;  // initialization budget
  double power_tolerance = 1e-10;
  double clip_factor = 2.0;    // zero init entries above clip_factor/sqrt(m)
  std::uint64_t seed = 0;      // drives the power-iteration start vector
  std::optional<double> sample_prob;            // override for |Omega|/(mn)
  std::optional<std::vector<double>> initial_u;  // skip initialization
};

// Initialization or numerical breakdown. Distinct from std::invalid_argument,
// which covers malformed inputs.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverTrace {
  int power_iterations = 0;
  int clipped_entries = 0;
  double sigma_estimate = 0.0;  // power sigma divided by the sample probability
  // dist_u[0] is the distance right after initialization, then one value per
  // iteration; only filled when ground truth is supplied.
  std::vector<double> dist_u;
  std::vector<std::int64_t> mec;   // MEC of the rounded iterate, per iteration
  std::vector<double> delta;       // change of the normalized iterate
  std::vector<int> ls_zero_flags;  // zero-denominator updates hit, per iteration

  std::string csv() const;
};

struct AssemblyResult {
  Haplotype haplotype;
  std::vector<std::int8_t> membership;
  std::vector<double> u;  // final left iterate, unit norm, canonical sign
  std::vector<double> v;  // final right iterate, unit norm, canonical sign
  int iterations = 0;
  bool converged = false;
  SolverTrace trace;
};

// Top singular vector of the observed matrix with entries above
// clip_factor/sqrt(m) zeroed and the rest rescaled to unit norm. Throws
// SolverError when the observation set is empty, the spectrum vanishes, or
// clipping removes all mass.
std::vector<double> init_power_clip(const FragmentMatrix& F,
                                    const SolverConfig& cfg,
                                    SolverTrace* trace = nullptr);

// v_j = sum(R_ij u_i) / sum(u_i^2) over the observed rows of column j.
// Columns with a zero denominator yield 0 and bump *zero_count.
std::vector<double> update_v_least_squares(const FragmentMatrix& F,
                                           const std::vector<double>& u,
                                           int* zero_count = nullptr);
std::vector<double> update_u_least_squares(const FragmentMatrix& F,
                                           const std::vector<double>& v,
                                           int* zero_count = nullptr);

// Sign of the correlation with the current factor; sign(0) = +1, so empty
// columns land on +1.
std::vector<double> update_v_hard(const FragmentMatrix& F,
                                  const std::vector<double>& u);
std::vector<double> update_u_hard(const FragmentMatrix& F,
                                  const std::vector<double>& v);

// Smooth surrogate: logistic_pm1 of the correlation scaled by 1/m (resp.
// 1/n). Expects the incoming factor normalized; outputs lie in (-1, 1) and
// the caller renormalizes.
std::vector<double> update_v_soft(const FragmentMatrix& F,
                                  const std::vector<double>& u);
std::vector<double> update_u_soft(const FragmentMatrix& F,
                                  const std::vector<double>& v);

// (e^x - 1)/(e^x + 1), saturating cleanly for |x| > 700.
double logistic_pm1(double x);

// Full pipeline: initialize, alternate updates until the normalized iterate
// moves less than cfg.tolerance or max_iterations is reached, round to signs,
// canonicalize so the first SNP is +1. Ground truth, when given, only feeds
// the per-iteration distance trace.
AssemblyResult assemble(const FragmentMatrix& F, const SolverConfig& cfg,
                        const GroundTruth* truth = nullptr);

}  // namespace haplomin
