#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haplomin/solver.hpp"

namespace haplomin {

// Coverage-grid benchmark: contiguous-model instances at a fixed SNP count,
// swept over (error rate x coverage), each cell averaged over replicates.
// Every listed algorithm runs on identical instances within a cell.
struct BenchSpec {
  std::vector<double> error_rates{0.0, 0.1, 0.2, 0.3};
  std::vector<double> coverages{3.0, 5.0, 8.0, 10.0};
  int replicates = 100;
  int snp_count = 700;
  std::vector<Algorithm> algorithms{Algorithm::soft};
  std::uint64_t seed_base = 0;
  // Solver budget per replicate. Rare noiseless instances converge as a slow
  // wavefront across the banded matrix and need several hundred iterations;
  // the default solver budget of 100 truncates them mid-flight.
  int max_iterations = 1500;
};

struct BenchCell {
  double error_rate = 0.0;
  double coverage = 0.0;
  Algorithm algorithm = Algorithm::soft;
  int replicates = 0;
  double mean_rate = 0.0;      // reconstruction rate against the planted truth
  double sd_rate = 0.0;        // sample standard deviation of the rate
  double mean_mec_norm = 0.0;  // MEC / (m*n)
  double mean_runtime_ms = 0.0;  // wall clock around the solve call only
  // Fraction of replicates whose observed noise satisfies the spectral bound
  // 2 * N_max * p_e * sqrt(mn) after scaling by the observed density. An
  // instance-level verdict, so it is identical across algorithms of a cell.
  double bound_pass_rate = 0.0;
};

// Size-sweep comparison: the alternating solver against the SVT baseline on
// identical uniform-model instances near the sampling threshold, where the
// two methods actually separate (away from it both recover the planted
// matrix exactly and every metric ties).
struct ComparisonSpec {
  int snp_count = 250;
  int read_count = 500;
  std::vector<double> sample_probs;  // empty picks default_sample_probs
  double error_rate = 0.05;
  int replicates = 100;
  Algorithm algorithm = Algorithm::soft;
  std::uint64_t seed_base = 0;
};

struct ComparisonRow {
  int snp_count = 0;
  int read_count = 0;
  double sample_prob = 0.0;
  std::string method;  // algorithm_name(...) or "svt"
  int replicates = 0;
  double mean_rate = 0.0;
  double sd_rate = 0.0;
  double mean_mec_norm = 0.0;
  double mean_runtime_ms = 0.0;
  double bound_pass_rate = 0.0;
};

// Near-threshold sample-probability grids, frozen per instance size after
// measuring where completion succeeds only part of the time. Unknown sizes
// get a geometric grid spanning the same regime.
std::vector<double> default_sample_probs(int snp_count, int read_count);

std::vector<BenchCell> run_coverage_grid(const BenchSpec& spec);
std::vector<ComparisonRow> run_comparison(const ComparisonSpec& spec);

// Pure hash of (seed base, suite, cell, replicate); lets any replicate be
// regenerated without running the ones before it.
std::uint64_t replicate_seed(std::uint64_t seed_base, std::uint64_t suite,
                             std::uint64_t cell, std::uint64_t replicate);

// CSV serialization. When `timestamp` is set a `# generated <utc>` line is
// prepended; suppressing it keeps identical runs byte-identical.
std::string coverage_grid_csv(const std::vector<BenchCell>& cells,
                              bool timestamp);
std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           bool timestamp);

}  // namespace haplomin
