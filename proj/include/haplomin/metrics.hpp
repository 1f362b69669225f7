#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "haplomin/fragment_matrix.hpp"
#include "haplomin/haplotype.hpp"
#include "haplomin/simulate.hpp"

namespace haplomin {

// Minimum error correction score: each read is charged its generalized
// Hamming distance (observed positions only) to the nearer of h and -h.
std::int64_t mec_score(const FragmentMatrix& F, const Haplotype& h);

// mec_score / (m*n).
double normalized_mec(const FragmentMatrix& F, const Haplotype& h);

struct BruteforceResult {
  std::int64_t mec = 0;
  Haplotype haplotype;  // an optimum, oriented so the first SNP is +1
};

// Exact optimum by enumerating all sign vectors with the first entry pinned
// to +1 (the complement pair shares its score). Requires rows <= 22.
BruteforceResult mec_bruteforce(const FragmentMatrix& F);

// 1 - min over the two pairings of the haplotype pair, as a fraction of 2m.
// Both arguments stand for their complementary pairs, so the result is flip
// invariant and never below 1/2.
double reconstruction_rate(const Haplotype& truth, const Haplotype& estimate);

// sin of the principal angle between span(u) and span(w). Computed from the
// projection residual, which stays accurate for angles near zero; exactly
// symmetric and sign-invariant. Throws on zero vectors or length mismatch.
double principal_angle_dist(const std::vector<double>& u,
                            const std::vector<double>& w);

// sqrt(m) * max|u_i| for a unit vector (norm within 1e-9 of 1).
double incoherence(const std::vector<double>& u);

// Observed cells whose sign disagrees with a dense row-major estimate
// (sign(0) counts as +1). This is the matrix-level MEC used for estimates
// that are not rank-one, e.g. thresholded completions.
std::int64_t observed_mismatches(const FragmentMatrix& F,
                                 const std::vector<double>& dense_row_major);

struct EvalReport {
  std::int64_t mec = 0;
  double normalized_mec = 0.0;
  std::optional<double> reconstruction;
  std::optional<double> dist_u;
  std::optional<double> dist_v;
  std::optional<double> incoherence_u;
  std::optional<double> incoherence_v;

  static std::string csv_header();
  std::string csv_row() const;
};

// Scores an assembled haplotype; truth-dependent fields are filled only when
// truth is given. dist_v and the incoherence fields are left to callers that
// hold the real-valued iterates.
EvalReport evaluate(const FragmentMatrix& F, const Haplotype& estimate,
                    const GroundTruth* truth);

}  // namespace haplomin
