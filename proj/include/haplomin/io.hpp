#pragma once

#include <map>
#include <string>

#include "haplomin/haplotype.hpp"
#include "haplomin/simulate.hpp"

namespace haplomin {

// Sidecar carrying the planted instance next to a simulated fragment file.
// Line-oriented text: '#' comments, then `haplotype <0/1 string>`,
// `membership <space-separated +1/-1>`, and any number of `key value` lines
// (seed, error rate, ...) preserved verbatim in `info`.
struct TruthRecord {
  GroundTruth truth;
  std::map<std::string, std::string> info;
};

void write_truth_file(const std::string& path, const GroundTruth& truth,
                      const std::map<std::string, std::string>& info = {});
TruthRecord read_truth_file(const std::string& path);

// Haplotype file: '#' comments, then one line with the allele string (0 = +1
// allele, 1 = -1 allele).
void write_haplotype_file(const std::string& path, const Haplotype& h);
Haplotype read_haplotype_file(const std::string& path);

// Overwrites `path` with `text` (used for trace and bench CSV output).
void write_text_file(const std::string& path, const std::string& text);

}  // namespace haplomin
