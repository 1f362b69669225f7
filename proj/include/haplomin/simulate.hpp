#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "haplomin/fragment_matrix.hpp"
#include "haplomin/haplotype.hpp"
#include "haplomin/linalg.hpp"

namespace haplomin {

// Planted rank-one instance: M_ij = haplotype_i * membership_j.
struct GroundTruth {
  Haplotype haplotype;                  // SNP signs, length m
  std::vector<std::int8_t> membership;  // read signs, length n

  int snps() const { return static_cast<int>(haplotype.size()); }
  int reads() const { return static_cast<int>(membership.size()); }
  double sigma_star() const;
  int matrix_entry(int i, int j) const {
    return haplotype[i] * membership[j];
  }
};

// Uniform ±1 haplotype and memberships. Requires m, n >= 2.
GroundTruth generate_truth(int snp_count, int read_count, std::uint64_t seed);

// Observes each cell independently with probability sample_prob; an observed
// value is flipped with probability error_rate. Observed values stay ±1.
FragmentMatrix observe_uniform(const GroundTruth& truth, double sample_prob,
                               double error_rate, std::uint64_t seed);

struct ContiguousReads {
  FragmentMatrix matrix;
  std::vector<std::int8_t> membership;  // one planted sign per generated read
};

struct UniformModel {
  int read_count = 0;
  double sample_prob = 0.0;
};

// Read layout for the contiguous model. Lengths are uniform integers in the
// given ranges, clipped at the ends of the SNP range; no read ever observes
// fewer than 2 SNPs. Reads are laid in three passes:
//   1. scaffold sweep: long reads left to right, each starting
//      scaffold_overlap SNPs before the previous read's end;
//   2. short sweep: the same sweep with short reads, overlap
//      min(2, len_lo - 1);
//   3. top-up: uniformly placed reads (edge overhang allowed, then clipped,
//      so per-SNP inclusion stays uniform) until mean per-SNP coverage
//      |Omega|/m reaches the target.
// The sweeps guarantee every SNP is observed and chained to its neighbours;
// without them, low-coverage instances routinely leave SNPs unobserved or
// split the reads into disconnected groups, and no solver can recover those.
struct ContiguousModel {
  double coverage = 0.0;
  int len_lo = 3;             // short-read lengths (pass 2)
  int len_hi = 5;
  int scaffold_lo = 120;      // long-read lengths (pass 1)
  int scaffold_hi = 200;
  int scaffold_overlap = 15;  // must stay below scaffold_lo
  int topup_lo = 150;         // top-up lengths (pass 3)
  int topup_hi = 250;
};

// Generates reads as contiguous SNP intervals per the model's three passes.
// The number of reads is an output, not an input.
ContiguousReads observe_contiguous(const Haplotype& haplotype,
                                   const ContiguousModel& model,
                                   double error_rate, std::uint64_t seed);

struct SimulationSpec {
  int snp_count = 0;
  std::variant<UniformModel, ContiguousModel> model;
  double error_rate = 0.0;
  std::uint64_t seed = 0;
};

struct SimulatedInstance {
  FragmentMatrix matrix;
  GroundTruth truth;
};

// One-stop generation: truth plus observation under the chosen model. For the
// contiguous model the truth's membership holds the generated read signs.
SimulatedInstance simulate(const SimulationSpec& spec);

// The additive noise N = R - M restricted to observed cells; zero cells are
// omitted, so each entry is -2 M_ij at a flipped observation.
std::vector<SparseEntry> noise_entries(const FragmentMatrix& F,
                                       const GroundTruth& truth);

// Frobenius norm of the observed noise, i.e. 2 * sqrt(flip count).
double noise_frobenius(const FragmentMatrix& F, const GroundTruth& truth);

}  // namespace haplomin
