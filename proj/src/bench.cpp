#include "haplomin/bench.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "haplomin/linalg.hpp"
#include "haplomin/metrics.hpp"
#include "haplomin/rng.hpp"
#include "haplomin/simulate.hpp"
#include "haplomin/svt.hpp"

namespace haplomin {

namespace {

constexpr std::uint64_t kCoverageSuite = 0x636f7647ULL;
constexpr std::uint64_t kComparisonSuite = 0x636d7053ULL;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Welford-free accumulator: replicate counts are tiny, two-pass is overkill
// and the naive sum of squares is fine at these magnitudes.
struct RateStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  int count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double sd() const {
    if (count < 2) return 0.0;
    double var = (sum_sq - sum * sum / count) / (count - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

// Observed noise spectral norm scaled by the observed density, against the
// closed-form bound 2 * N_max * p_e * sqrt(mn).
bool noise_bound_holds(const FragmentMatrix& F, const GroundTruth& truth,
                       double error_rate, std::uint64_t seed) {
  const double mn = static_cast<double>(F.rows()) * F.cols();
  const double bound = 2.0 * 2.0 * error_rate * std::sqrt(mn);
  auto noise = noise_entries(F, truth);
  if (noise.empty()) return true;
  double density = static_cast<double>(F.nnz()) / mn;
  double measured = spectral_norm(F.rows(), F.cols(), noise, seed) / density;
  return measured <= bound;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_preamble(bool timestamp) {
  if (!timestamp) return {};
  std::time_t now = std::time(nullptr);
  std::tm utc;
  gmtime_r(&now, &utc);
  char buf[48];
  std::strftime(buf, sizeof buf, "# generated %Y-%m-%dT%H:%M:%SZ\n", &utc);
  return buf;
}

// Cell tags hash the cell's parameter values, not its grid position, so a
// sub-grid run reproduces exactly the replicates the full grid would use.
std::uint64_t value_tag(double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  return splitmix64(bits);
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t seed_base, std::uint64_t suite,
                             std::uint64_t cell, std::uint64_t replicate) {
  std::uint64_t state = seed_base;
  state = splitmix64(state) ^ (suite * 0x9e3779b97f4a7c15ULL);
  state = splitmix64(state) ^ (cell * 0xbf58476d1ce4e5b9ULL);
  state = splitmix64(state) ^ (replicate * 0x94d049bb133111ebULL);
  return splitmix64(state);
}

std::vector<double> default_sample_probs(int snp_count, int read_count) {
  if (snp_count == 50 && read_count == 100) {
    return {0.035, 0.040, 0.045, 0.050, 0.055, 0.060};
  }
  if (snp_count == 250 && read_count == 500) {
    return {0.008, 0.010, 0.012, 0.015, 0.018, 0.022};
  }
  // Geometric sweep over the same near-threshold regime: a few multiples of
  // (m+n)/(mn), the scale where a rank-one factorization has about as many
  // observations as unknowns.
  double unit = (static_cast<double>(snp_count) + read_count) /
                (static_cast<double>(snp_count) * read_count);
  std::vector<double> probs;
  double factor = 1.2;
  for (int k = 0; k < 6; ++k) {
    probs.push_back(std::min(1.0, unit * factor));
    factor *= 1.35;
  }
  return probs;
}

std::vector<BenchCell> run_coverage_grid(const BenchSpec& spec) {
  if (spec.replicates < 1) {
    throw std::invalid_argument("replicates must be at least 1");
  }
  if (spec.error_rates.empty() || spec.coverages.empty() ||
      spec.algorithms.empty()) {
    throw std::invalid_argument("bench grid must be non-empty");
  }

  std::vector<BenchCell> cells;
  for (std::size_t ei = 0; ei < spec.error_rates.size(); ++ei) {
    for (std::size_t ci = 0; ci < spec.coverages.size(); ++ci) {
      const double error_rate = spec.error_rates[ei];
      const double coverage = spec.coverages[ci];
      const std::uint64_t cell_tag =
          value_tag(error_rate) ^ (value_tag(coverage) * 0x9e3779b97f4a7c15ULL);

      std::vector<RateStats> rate(spec.algorithms.size());
      std::vector<double> mec_sum(spec.algorithms.size(), 0.0);
      std::vector<double> ms_sum(spec.algorithms.size(), 0.0);
      int bound_passes = 0;

      for (int rep = 0; rep < spec.replicates; ++rep) {
        const std::uint64_t seed = replicate_seed(
            spec.seed_base, kCoverageSuite, cell_tag,
            static_cast<std::uint64_t>(rep));

        SimulationSpec sim;
        sim.snp_count = spec.snp_count;
        ContiguousModel model;
        model.coverage = coverage;
        sim.model = model;
        sim.error_rate = error_rate;
        sim.seed = seed;
        auto instance = simulate(sim);

        if (noise_bound_holds(instance.matrix, instance.truth, error_rate,
                              seed)) {
          ++bound_passes;
        }

        for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
          SolverConfig cfg;
          cfg.algorithm = spec.algorithms[ai];
          cfg.max_iterations = spec.max_iterations;
          cfg.seed = seed;
          auto start = std::chrono::steady_clock::now();
          auto result = assemble(instance.matrix, cfg);
          ms_sum[ai] += elapsed_ms(start);
          rate[ai].add(
              reconstruction_rate(instance.truth.haplotype, result.haplotype));
          mec_sum[ai] += normalized_mec(instance.matrix, result.haplotype);
        }
      }

      for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
        BenchCell cell;
        cell.error_rate = error_rate;
        cell.coverage = coverage;
        cell.algorithm = spec.algorithms[ai];
        cell.replicates = spec.replicates;
        cell.mean_rate = rate[ai].mean();
        cell.sd_rate = rate[ai].sd();
        cell.mean_mec_norm = mec_sum[ai] / spec.replicates;
        cell.mean_runtime_ms = ms_sum[ai] / spec.replicates;
        cell.bound_pass_rate =
            static_cast<double>(bound_passes) / spec.replicates;
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<ComparisonRow> run_comparison(const ComparisonSpec& spec) {
  if (spec.replicates < 1) {
    throw std::invalid_argument("replicates must be at least 1");
  }
  auto probs = spec.sample_probs.empty()
                   ? default_sample_probs(spec.snp_count, spec.read_count)
                   : spec.sample_probs;
  if (probs.empty()) {
    throw std::invalid_argument("sample probability grid must be non-empty");
  }

  std::vector<ComparisonRow> rows;
  for (double p : probs) {
    RateStats altmin_rate, svt_rate;
    double altmin_mec = 0.0, svt_mec = 0.0;
    double altmin_ms = 0.0, svt_ms = 0.0;
    int bound_passes = 0;

    for (int rep = 0; rep < spec.replicates; ++rep) {
      const std::uint64_t seed =
          replicate_seed(spec.seed_base, kComparisonSuite, value_tag(p),
                         static_cast<std::uint64_t>(rep));

      auto truth = generate_truth(spec.snp_count, spec.read_count, seed);
      auto F = observe_uniform(truth, p, spec.error_rate, seed);

      if (noise_bound_holds(F, truth, spec.error_rate, seed)) {
        ++bound_passes;
      }

      SolverConfig cfg;
      cfg.algorithm = spec.algorithm;
      cfg.seed = seed;
      auto start = std::chrono::steady_clock::now();
      auto result = assemble(F, cfg);
      altmin_ms += elapsed_ms(start);
      altmin_rate.add(reconstruction_rate(truth.haplotype, result.haplotype));
      altmin_mec += normalized_mec(F, result.haplotype);

      SvtConfig svt_cfg;
      svt_cfg.seed = seed;
      start = std::chrono::steady_clock::now();
      auto svt = svt_complete(F, svt_cfg);
      svt_ms += elapsed_ms(start);
      // The haplotype the completion implies; a degenerate zero iterate
      // scores as the all-plus haplotype.
      Haplotype svt_hap = svt.top_u.empty()
                              ? Haplotype(std::vector<std::int8_t>(
                                    static_cast<std::size_t>(spec.snp_count), 1))
                              : Haplotype(round_to_sign(svt.top_u));
      svt_rate.add(reconstruction_rate(truth.haplotype, svt_hap));
      svt_mec += normalized_mec(F, svt_hap);
    }

    ComparisonRow base;
    base.snp_count = spec.snp_count;
    base.read_count = spec.read_count;
    base.sample_prob = p;
    base.replicates = spec.replicates;
    base.bound_pass_rate = static_cast<double>(bound_passes) / spec.replicates;

    ComparisonRow altmin = base;
    altmin.method = algorithm_name(spec.algorithm);
    altmin.mean_rate = altmin_rate.mean();
    altmin.sd_rate = altmin_rate.sd();
    altmin.mean_mec_norm = altmin_mec / spec.replicates;
    altmin.mean_runtime_ms = altmin_ms / spec.replicates;
    rows.push_back(std::move(altmin));

    ComparisonRow svt_row = base;
    svt_row.method = "svt";
    svt_row.mean_rate = svt_rate.mean();
    svt_row.sd_rate = svt_rate.sd();
    svt_row.mean_mec_norm = svt_mec / spec.replicates;
    svt_row.mean_runtime_ms = svt_ms / spec.replicates;
    rows.push_back(std::move(svt_row));
  }
  return rows;
}

std::string coverage_grid_csv(const std::vector<BenchCell>& cells,
                              bool timestamp) {
  std::string out = csv_preamble(timestamp);
  out +=
      "error_rate,coverage,algorithm,replicates,mean_rate,sd_rate,"
      "mean_mec_norm,mean_runtime_ms,bound_pass_rate\n";
  for (const auto& c : cells) {
    out += format_number(c.error_rate) + "," + format_number(c.coverage) +
           "," + algorithm_name(c.algorithm) + "," +
           std::to_string(c.replicates) + "," + format_number(c.mean_rate) +
           "," + format_number(c.sd_rate) + "," +
           format_number(c.mean_mec_norm) + "," +
           format_number(c.mean_runtime_ms) + "," +
           format_number(c.bound_pass_rate) + "\n";
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           bool timestamp) {
  std::string out = csv_preamble(timestamp);
  out +=
      "m,n,sample_prob,algorithm,replicates,mean_rate,sd_rate,"
      "mean_mec_norm,mean_runtime_ms,bound_pass_rate\n";
  for (const auto& r : rows) {
    out += std::to_string(r.snp_count) + "," + std::to_string(r.read_count) +
           "," + format_number(r.sample_prob) + "," + r.method + "," +
           std::to_string(r.replicates) + "," + format_number(r.mean_rate) +
           "," + format_number(r.sd_rate) + "," +
           format_number(r.mean_mec_norm) + "," +
           format_number(r.mean_runtime_ms) + "," +
           format_number(r.bound_pass_rate) + "\n";
  }
  return out;
}

}  // namespace haplomin
