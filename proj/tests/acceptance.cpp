// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit when
// any criterion fails. Every parameter and tolerance is pinned here on
// purpose; nothing is read from the environment.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "haplomin/bench.hpp"
#include "haplomin/metrics.hpp"
#include "haplomin/simulate.hpp"
#include "haplomin/solver.hpp"
#include "haplomin/theory.hpp"

using namespace haplomin;

namespace {

constexpr std::uint64_t kSeedBase = 42;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// 1. Fully observed, noiseless instances are recovered exactly by all three
//    algorithms, 100/100 seeds, under a second per instance.
Outcome criterion_exact_recovery() {
  constexpr int kSeeds = 100;
  const std::vector<std::pair<int, int>> sizes{
      {10, 15},   {25, 50},   {50, 40},   {80, 80},   {100, 200},
      {150, 120}, {250, 250}, {400, 500}, {700, 640}, {1000, 1000}};
  int exact = 0;
  double max_instance_ms = 0.0;
  std::string first_miss;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    auto [m, n] = sizes[static_cast<std::size_t>(seed - 1) % sizes.size()];
    auto truth = generate_truth(m, n, static_cast<std::uint64_t>(seed));
    auto F = observe_uniform(truth, 1.0, 0.0,
                             static_cast<std::uint64_t>(seed) * 7 + 1);
    bool ok = true;
    double instance_ms = 0.0;
    for (auto alg :
         {Algorithm::least_squares, Algorithm::hard, Algorithm::soft}) {
      SolverConfig cfg;
      cfg.algorithm = alg;
      cfg.seed = static_cast<std::uint64_t>(seed);
      auto t0 = std::chrono::steady_clock::now();
      auto res = assemble(F, cfg);
      instance_ms += elapsed_s(t0) * 1e3;
      if (reconstruction_rate(truth.haplotype, res.haplotype) != 1.0 ||
          mec_score(F, res.haplotype) != 0) {
        ok = false;
        if (first_miss.empty()) {
          first_miss = fmt(" first miss: seed %d (%dx%d) %s", seed, m, n,
                           algorithm_name(alg));
        }
      }
    }
    max_instance_ms = std::max(max_instance_ms, instance_ms);
    exact += ok ? 1 : 0;
  }
  bool pass = exact == kSeeds && max_instance_ms < 1000.0;
  return {pass, fmt("%d/%d instances exact for ls/hard/soft, slowest "
                    "instance %.1f ms%s",
                    exact, kSeeds, max_instance_ms, first_miss.c_str())};
}

// 2. Coverage-grid reproduction at m=700: noiseless rows >= 0.999, the
//    0.1/0.2 rows within +-0.05 of the reference column (with floors 0.98 at
//    (0.1,10X) and 0.93 at (0.2,10X)), the 0.3 row monotone in coverage.
Outcome criterion_coverage_grid() {
  BenchSpec spec;  // defaults are the pinned grid: m=700, 100 reps, soft
  spec.seed_base = kSeedBase;
  auto t0 = std::chrono::steady_clock::now();
  auto cells = run_coverage_grid(spec);
  const double seconds = elapsed_s(t0);

  // Reference mean rates for the soft solver at 3X/5X/8X/10X.
  const std::vector<double> ref_01{0.935, 0.979, 0.996, 0.999};
  const std::vector<double> ref_02{0.735, 0.864, 0.943, 0.966};
  auto cell_rate = [&](double pe, double cov) {
    for (const auto& c : cells) {
      if (c.error_rate == pe && c.coverage == cov) return c.mean_rate;
    }
    return -1.0;
  };
  const std::vector<double> covs{3.0, 5.0, 8.0, 10.0};
  std::string bad;
  int in_window = 0;
  for (std::size_t k = 0; k < covs.size(); ++k) {
    double r0 = cell_rate(0.0, covs[k]);
    double r1 = cell_rate(0.1, covs[k]);
    double r2 = cell_rate(0.2, covs[k]);
    bool ok0 = r0 >= 0.999;
    bool ok1 = std::abs(r1 - ref_01[k]) <= 0.05 && (k != 3 || r1 >= 0.98);
    bool ok2 = std::abs(r2 - ref_02[k]) <= 0.05 && (k != 3 || r2 >= 0.93);
    in_window += ok0 + ok1 + ok2;
    if (!ok0 && bad.empty()) bad = fmt(" bad (0.0,%gX)=%.4f", covs[k], r0);
    if (!ok1 && bad.empty()) bad = fmt(" bad (0.1,%gX)=%.4f", covs[k], r1);
    if (!ok2 && bad.empty()) bad = fmt(" bad (0.2,%gX)=%.4f", covs[k], r2);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < covs.size(); ++k) {
    if (cell_rate(0.3, covs[k]) < cell_rate(0.3, covs[k - 1])) {
      monotone = false;
    }
  }
  bool pass = in_window == 12 && monotone && seconds < 1800.0;
  return {pass, fmt("%d/12 cells in window, 0.3-row %s, grid in %.1f s "
                    "(budget 1800)%s",
                    in_window, monotone ? "monotone" : "NOT monotone", seconds,
                    bad.c_str())};
}

// 3. Mean MEC-per-SNP ordering between the soft and hard update rules on
//    chromosome-scale instances (m=700, 5X, p_e=0.05), shared instances and
//    shared solver budget.
Outcome criterion_soft_vs_hard() {
  constexpr int kReps = 50;
  constexpr int kSnps = 700;
  double soft_sum = 0.0, hard_sum = 0.0;
  int soft_wins = 0, ties = 0;
  for (int rep = 0; rep < kReps; ++rep) {
    std::uint64_t seed =
        replicate_seed(kSeedBase, 3, 0, static_cast<std::uint64_t>(rep));
    SimulationSpec sim;
    sim.snp_count = kSnps;
    ContiguousModel model;
    model.coverage = 5.0;
    sim.model = model;
    sim.error_rate = 0.05;
    sim.seed = seed;
    auto inst = simulate(sim);
    double mec[2] = {0.0, 0.0};
    int k = 0;
    for (auto alg : {Algorithm::soft, Algorithm::hard}) {
      SolverConfig cfg;
      cfg.algorithm = alg;
      cfg.seed = seed;
      cfg.max_iterations = 1500;
      auto res = assemble(inst.matrix, cfg);
      mec[k++] = static_cast<double>(mec_score(inst.matrix, res.haplotype)) /
                 kSnps;
    }
    soft_sum += mec[0];
    hard_sum += mec[1];
    soft_wins += mec[0] < mec[1] ? 1 : 0;
    ties += mec[0] == mec[1] ? 1 : 0;
  }
  double soft_mean = soft_sum / kReps;
  double hard_mean = hard_sum / kReps;
  return {soft_mean <= hard_mean,
          fmt("soft mean MEC/SNP %.4f vs hard %.4f over %d instances "
              "(soft lower on %d, ties %d)",
              soft_mean, hard_mean, kReps, soft_wins, ties)};
}

// 4. Alternating solver vs SVT across the near-threshold sample grids at
//    (50,100) and (250,500): lower normalized MEC on >= 90% of points, a
//    wider mean gap at the larger size, and less runtime at the larger size.
//    The gap is measured per observed entry (MEC/|Omega|): that normalizer
//    is scale-free, so the two sizes are comparable on one axis, while
//    per-cell MEC/(mn) divides the larger size's errors by 25x as many
//    cells. The per-point ordering is the same under any normalizer.
Outcome criterion_svt_comparison() {
  struct SizeResult {
    int points = 0;
    int alt_below = 0;
    double gap = 0.0;  // mean svt - alt MEC per observed entry
    double alt_ms = 0.0;
    double svt_ms = 0.0;
  };
  auto run_size = [](int m, int n) {
    ComparisonSpec spec;
    spec.snp_count = m;
    spec.read_count = n;
    spec.seed_base = kSeedBase;
    auto rows = run_comparison(spec);
    SizeResult r;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
      const auto& alt = rows[i];
      const auto& svt = rows[i + 1];
      ++r.points;
      r.alt_below += alt.mean_mec_norm < svt.mean_mec_norm ? 1 : 0;
      r.gap += (svt.mean_mec_norm - alt.mean_mec_norm) / alt.sample_prob;
      r.alt_ms += alt.mean_runtime_ms;
      r.svt_ms += svt.mean_runtime_ms;
    }
    r.gap /= r.points;
    r.alt_ms /= r.points;
    r.svt_ms /= r.points;
    return r;
  };
  auto small = run_size(50, 100);
  auto large = run_size(250, 500);
  int points = small.points + large.points;
  int below = small.alt_below + large.alt_below;
  int needed = static_cast<int>(std::ceil(0.9 * points));
  bool pass = below >= needed && large.gap > small.gap &&
              large.alt_ms < large.svt_ms;
  return {pass,
          fmt("solver below SVT on %d/%d points (need %d), mean per-entry "
              "gap %.3f -> %.3f, runtime at (250,500) %.1f vs %.1f ms",
              below, points, needed, small.gap, large.gap, large.alt_ms,
              large.svt_ms)};
}

// 5. Solver MEC vs the exhaustive optimum on 500 small instances.
Outcome criterion_bruteforce() {
  constexpr int kReps = 500;
  int beats = 0;
  int noiseless = 0, noiseless_eq = 0;
  int noisy = 0, noisy_eq = 0;
  const double error_rates[3] = {0.0, 0.05, 0.1};
  for (int rep = 0; rep < kReps; ++rep) {
    int m = 4 + rep % 9;
    int n = 2 * m;
    double p = 0.4 + 0.15 * (rep % 5);
    double pe = error_rates[rep % 3];
    std::uint64_t seed =
        replicate_seed(kSeedBase, 5, 0, static_cast<std::uint64_t>(rep));
    auto truth = generate_truth(m, n, seed);
    auto F = observe_uniform(truth, p, pe, seed + 1);
    auto best = mec_bruteforce(F);
    std::int64_t solver_mec = -1;
    try {
      SolverConfig cfg;
      cfg.seed = seed;
      auto res = assemble(F, cfg);
      solver_mec = mec_score(F, res.haplotype);
    } catch (const SolverError&) {
      solver_mec = std::numeric_limits<std::int64_t>::max();  // honest miss
    }
    if (solver_mec < best.mec) ++beats;
    if (pe == 0.0) {
      ++noiseless;
      noiseless_eq += solver_mec == best.mec ? 1 : 0;
    } else {
      ++noisy;
      noisy_eq += solver_mec == best.mec ? 1 : 0;
    }
  }
  bool pass = beats == 0 && noiseless_eq == noiseless &&
              noisy_eq >= static_cast<int>(std::ceil(0.9 * noisy));
  return {pass, fmt("optimum beaten %d times; equal on %d/%d noiseless and "
                    "%d/%d noisy instances",
                    beats, noiseless_eq, noiseless, noisy_eq, noisy)};
}

// 6. Per-iteration contraction of the distance trace on noiseless instances
//    sampled above the guarantee threshold.
Outcome criterion_contraction() {
  TheoryParams tp;
  tp.m = 1000;
  tp.n = 1000;
  tp.error_rate = 0.0;
  tp.delta2 = 0.185;
  tp.epsilon = tp.sigma_star() / std::exp(1.0);
  tp.validate();
  const double threshold = sample_prob_threshold(tp);
  const double p = 0.8;
  if (threshold > p) {
    return {false, fmt("sampling threshold %.4f exceeds p=%.2f", threshold, p)};
  }
  constexpr int kRuns = 20;
  int compliant = 0;
  for (int run = 1; run <= kRuns; ++run) {
    auto truth = generate_truth(tp.m, tp.n, static_cast<std::uint64_t>(run));
    auto F = observe_uniform(truth, p, 0.0,
                             static_cast<std::uint64_t>(run) + 100);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::least_squares;
    cfg.max_iterations = 80;
    cfg.tolerance = 1e-14;
    cfg.seed = static_cast<std::uint64_t>(run);
    auto res = assemble(F, cfg, &truth);
    auto report = contraction_check(res.trace.dist_u, tp);
    compliant += report.compliant() ? 1 : 0;
  }
  return {compliant >= 18, fmt("%d/20 runs contract at ratio <= 0.25 "
                               "(threshold p %.4f < %.2f)",
                               compliant, threshold, p)};
}

// 7. Spectral noise bound across repeated draws.
Outcome criterion_noise_bound() {
  TheoryParams tp;
  tp.m = 200;
  tp.n = 200;
  tp.error_rate = 0.05;
  auto summary = validate_noise_bound(tp, 0.5, 50, 7);
  double worst = 0.0;
  for (const auto& check : summary.checks) {
    worst = std::max(worst, check.measured);
  }
  double rate = summary.pass_rate();
  return {rate >= 0.95, fmt("bound %.1f held on %.0f%% of 50 draws "
                            "(worst measured %.2f)",
                            noise_spectral_bound(tp), rate * 100.0, worst)};
}

// 8. Frobenius and MEC guarantees on repeated assembled instances.
Outcome criterion_error_bounds() {
  TheoryParams tp;
  tp.m = 200;
  tp.n = 400;
  tp.error_rate = 0.02;
  tp.delta2 = tp.delta2_max() / 2.0;
  tp.epsilon = 0.05 * tp.sigma_star();
  tp.validate();
  auto report = validate_error_bound(tp, 0.5, 50, 8, Algorithm::soft);
  double frob = report.frobenius.pass_rate();
  double mec = report.mec.pass_rate();
  return {frob >= 0.95 && mec >= 0.95,
          fmt("Frobenius bound %.0f%% and MEC bound %.0f%% of 50 runs "
              "(delta2 %.4f)",
              frob * 100.0, mec * 100.0, tp.delta2)};
}

// 9. The module property suites themselves, replayed end to end.
Outcome criterion_property_suites() {
  const std::vector<std::string> suites{
      "test_fragment_matrix", "test_simulate", "test_metrics",
      "test_solver",          "test_svt",      "test_theory",
      "test_io",              "test_bench",    "test_cli"};
  auto t0 = std::chrono::steady_clock::now();
  int green = 0;
  std::string first_red;
  for (const auto& name : suites) {
    std::string cmd =
        std::string(ACCEPTANCE_BIN_DIR) + "/" + name + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
    green += ok ? 1 : 0;
    if (!ok && first_red.empty()) first_red = " first red: " + name;
  }
  double seconds = elapsed_s(t0);
  bool pass = green == static_cast<int>(suites.size()) && seconds < 300.0;
  return {pass, fmt("%d/%zu suites green in %.1f s (budget 300)%s", green,
                    suites.size(), seconds, first_red.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {1, "exact recovery on fully observed noiseless instances",
       criterion_exact_recovery},
      {2, "coverage-grid reconstruction rates at m=700",
       criterion_coverage_grid},
      {3, "soft mean MEC at or below hard on chromosome-scale instances",
       criterion_soft_vs_hard},
      {4, "alternating solver beats SVT near the sampling threshold",
       criterion_svt_comparison},
      {5, "solver matches the exhaustive MEC optimum on small instances",
       criterion_bruteforce},
      {6, "noiseless distance traces contract at ratio 1/4",
       criterion_contraction},
      {7, "spectral noise bound validator", criterion_noise_bound},
      {8, "Frobenius and MEC bound validators", criterion_error_bounds},
      {9, "module property suites", criterion_property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s — %s\n",
                outcome.pass ? "PASS" : "FAIL", c.number, c.title,
                outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failing\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passing\n", criteria.size());
  return 0;
}
