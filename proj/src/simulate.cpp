#include "haplomin/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "haplomin/rng.hpp"

namespace haplomin {

namespace {

// Distinct substream tags keep truth generation and the observation models
// decorrelated even when a caller reuses one seed for both.
constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
constexpr std::uint64_t kUniformStream = 0x756e6966ULL;
constexpr std::uint64_t kContigStream = 0x636f6e74ULL;

void check_prob(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

double GroundTruth::sigma_star() const {
  return std::sqrt(static_cast<double>(snps()) * static_cast<double>(reads()));
}

GroundTruth generate_truth(int snp_count, int read_count, std::uint64_t seed) {
  if (snp_count < 2 || read_count < 2) {
    throw std::invalid_argument("truth requires at least 2 SNPs and 2 reads");
  }
  Rng rng = Rng::substream(seed, kTruthStream);
  std::vector<std::int8_t> h(snp_count), v(read_count);
  for (auto& s : h) s = static_cast<std::int8_t>(rng.rademacher());
  for (auto& s : v) s = static_cast<std::int8_t>(rng.rademacher());
  return GroundTruth{Haplotype(std::move(h)), std::move(v)};
}

FragmentMatrix observe_uniform(const GroundTruth& truth, double sample_prob,
                               double error_rate, std::uint64_t seed) {
  check_prob(sample_prob, "sample_prob");
  check_prob(error_rate, "error_rate");

  Rng rng = Rng::substream(seed, kUniformStream);
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(
      sample_prob * truth.snps() * truth.reads() * 1.1) + 16);
  for (int i = 0; i < truth.snps(); ++i) {
    for (int j = 0; j < truth.reads(); ++j) {
      if (!rng.bernoulli(sample_prob)) continue;
      int value = truth.matrix_entry(i, j);
      if (rng.bernoulli(error_rate)) value = -value;
      entries.push_back({i, j, static_cast<std::int8_t>(value)});
    }
  }
  return FragmentMatrix(truth.snps(), truth.reads(), entries);
}

ContiguousReads observe_contiguous(const Haplotype& haplotype,
                                   const ContiguousModel& model,
                                   double error_rate, std::uint64_t seed) {
  const int m = static_cast<int>(haplotype.size());
  if (m < 2) throw std::invalid_argument("haplotype must have at least 2 SNPs");
  if (!(model.coverage > 0.0)) {
    throw std::invalid_argument("coverage must be positive");
  }
  auto check_lengths = [](int lo, int hi, const char* what) {
    if (lo < 2 || hi < lo) {
      throw std::invalid_argument(std::string(what) +
                                  " length bounds must satisfy 2 <= lo <= hi");
    }
  };
  check_lengths(model.len_lo, model.len_hi, "read");
  check_lengths(model.scaffold_lo, model.scaffold_hi, "scaffold");
  check_lengths(model.topup_lo, model.topup_hi, "top-up");
  if (model.scaffold_overlap < 0 ||
      model.scaffold_overlap >= model.scaffold_lo) {
    throw std::invalid_argument(
        "scaffold overlap must lie in [0, scaffold_lo)");
  }
  check_prob(error_rate, "error_rate");

  Rng rng = Rng::substream(seed, kContigStream);
  std::vector<Entry> entries;
  std::vector<std::int8_t> membership;

  auto emit_read = [&](int start, int len) {
    auto sign = static_cast<std::int8_t>(rng.rademacher());
    auto read_id = static_cast<std::int32_t>(membership.size());
    membership.push_back(sign);
    for (int i = start; i < start + len; ++i) {
      int value = haplotype[i] * sign;
      if (rng.bernoulli(error_rate)) value = -value;
      entries.push_back({i, read_id, static_cast<std::int8_t>(value)});
    }
  };

  // Left-to-right sweep; each read starts `overlap` SNPs before the previous
  // end, so consecutive reads share SNPs and every SNP is observed. A clipped
  // tail shorter than 2 becomes the final interval [m-2, m). Progress per
  // read is at least lo - overlap, which validation keeps positive.
  auto shingle = [&](int lo, int hi, int overlap) {
    for (int next = 0; next < m;) {
      int start = next > overlap ? next - overlap : 0;
      int len = static_cast<int>(rng.uniform_int(lo, hi));
      if (start + len > m) {
        len = m - start;
        if (len < 2) {
          start = m - 2;
          len = 2;
        }
      }
      emit_read(start, len);
      next = start + len;
    }
  };

  shingle(model.scaffold_lo, model.scaffold_hi, model.scaffold_overlap);
  shingle(model.len_lo, model.len_hi, std::min(2, model.len_lo - 1));

  // Top-up pass: uniformly placed reads until the mean coverage target.
  // Placement allows overhang past either edge and clips, so per-SNP
  // inclusion probability stays flat; plain in-range starts would starve the
  // first and last read-length's worth of SNPs.
  const double target = model.coverage * m;
  while (static_cast<double>(entries.size()) < target) {
    int len = static_cast<int>(rng.uniform_int(model.topup_lo, model.topup_hi));
    if (len > m) len = m;
    auto offset = static_cast<long long>(rng.uniform_int(0, m + len - 4));
    long long a = offset - (len - 2);
    int start = a < 0 ? 0 : static_cast<int>(a);
    int end = static_cast<int>(std::min<long long>(m, a + len));
    if (end - start >= 2) emit_read(start, end - start);
  }

  FragmentMatrix F(m, static_cast<int>(membership.size()), entries);
  return ContiguousReads{std::move(F), std::move(membership)};
}

SimulatedInstance simulate(const SimulationSpec& spec) {
  if (const auto* u = std::get_if<UniformModel>(&spec.model)) {
    auto truth = generate_truth(spec.snp_count, u->read_count, spec.seed);
    auto F = observe_uniform(truth, u->sample_prob, spec.error_rate, spec.seed);
    return SimulatedInstance{std::move(F), std::move(truth)};
  }
  const auto& c = std::get<ContiguousModel>(spec.model);
  // Membership signs come from read generation; only the haplotype is drawn
  // up front (the placeholder second read sign is discarded).
  auto seeded = generate_truth(spec.snp_count, 2, spec.seed);
  auto reads = observe_contiguous(seeded.haplotype, c, spec.error_rate,
                                  spec.seed);
  GroundTruth truth{std::move(seeded.haplotype), std::move(reads.membership)};
  return SimulatedInstance{std::move(reads.matrix), std::move(truth)};
}

std::vector<SparseEntry> noise_entries(const FragmentMatrix& F,
                                       const GroundTruth& truth) {
  if (F.rows() != truth.snps() || F.cols() != truth.reads()) {
    throw std::invalid_argument("noise_entries: matrix and truth shape mismatch");
  }
  std::vector<SparseEntry> noise;
  for (int j = 0; j < F.cols(); ++j) {
    for (const auto& obs : F.column(j)) {
      int planted = truth.matrix_entry(obs.index, j);
      if (static_cast<int>(obs.value) != planted) {
        noise.push_back({obs.index, j, -2.0 * planted});
      }
    }
  }
  return noise;
}

double noise_frobenius(const FragmentMatrix& F, const GroundTruth& truth) {
  double sq = 0.0;
  for (const auto& e : noise_entries(F, truth)) sq += e.value * e.value;
  return std::sqrt(sq);
}

}  // namespace haplomin
