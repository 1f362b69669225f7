// Command-line front end: simulate / assemble / evaluate / bench / theory.
// Exit codes: 0 success, 1 internal error, 2 input error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "haplomin/bench.hpp"
#include "haplomin/format.hpp"
#include "haplomin/io.hpp"
#include "haplomin/metrics.hpp"
#include "haplomin/simulate.hpp"
#include "haplomin/solver.hpp"
#include "haplomin/theory.hpp"

namespace {

using namespace haplomin;

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

// "-" or empty means stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::string replace_extension(const std::string& path, const char* ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

// ---- simulate ----

struct SimulateOpts {
  int m = 0;
  std::string model = "contiguous";
  double coverage = 5.0;
  int reads = 0;
  double sample_prob = 0.0;
  double error_rate = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;
  ContiguousModel lengths;  // length knobs only; coverage is set separately
};

void run_simulate(const SimulateOpts& o) {
  SimulationSpec spec;
  spec.snp_count = o.m;
  spec.error_rate = o.error_rate;
  spec.seed = o.seed;
  std::map<std::string, std::string> info{
      {"model", o.model},
      {"error_rate", format_g(o.error_rate)},
      {"seed", std::to_string(o.seed)},
  };
  if (o.model == "uniform") {
    if (o.reads < 2 || o.sample_prob <= 0.0) {
      throw std::invalid_argument(
          "uniform model needs --reads >= 2 and --sample-prob > 0");
    }
    spec.model = UniformModel{o.reads, o.sample_prob};
    info["sample_prob"] = format_g(o.sample_prob);
  } else {
    ContiguousModel c = o.lengths;
    c.coverage = o.coverage;
    spec.model = c;
    info["coverage"] = format_g(o.coverage);
  }

  SimulatedInstance inst = simulate(spec);

  std::filesystem::create_directories(o.out_dir);
  auto frag_path = (std::filesystem::path(o.out_dir) / "reads.frag").string();
  auto truth_path = (std::filesystem::path(o.out_dir) / "truth.txt").string();
  write_fragments_file(frag_path, inst.matrix);
  write_truth_file(truth_path, inst.truth, info);
  std::cout << "wrote " << frag_path << " (" << inst.matrix.rows() << " x "
            << inst.matrix.cols() << ", " << inst.matrix.nnz()
            << " observed cells) and " << truth_path << "\n";
}

// ---- assemble ----

struct AssembleOpts {
  std::string input;
  std::string algorithm = "soft";
  SolverConfig cfg;
  double sample_prob = 0.0;  // 0 keeps the observed density
  std::string out;
  std::string trace;
};

void run_assemble(const AssembleOpts& o) {
  SolverConfig cfg = o.cfg;
  cfg.algorithm = *algorithm_from_name(o.algorithm);  // choices pre-checked
  if (o.sample_prob > 0.0) cfg.sample_prob = o.sample_prob;

  ParsedFragments parsed = parse_fragments_file(o.input);
  AssemblyResult result = assemble(parsed.matrix, cfg);

  std::string out = o.out.empty() ? replace_extension(o.input, ".hap") : o.out;
  write_haplotype_file(out, result.haplotype);
  if (!o.trace.empty()) write_text_file(o.trace, result.trace.csv());
  std::cout << "algorithm=" << algorithm_name(cfg.algorithm)
            << " iterations=" << result.iterations
            << " converged=" << (result.converged ? 1 : 0)
            << " mec=" << mec_score(parsed.matrix, result.haplotype)
            << " out=" << out << "\n";
}

// ---- evaluate ----

struct EvaluateOpts {
  std::string input;
  std::string haplotype;
  std::string truth;
  std::string out = "-";
};

void run_evaluate(const EvaluateOpts& o) {
  ParsedFragments parsed = parse_fragments_file(o.input);
  Haplotype estimate = read_haplotype_file(o.haplotype);
  if (static_cast<int>(estimate.size()) != parsed.matrix.rows()) {
    throw std::invalid_argument(
        "haplotype length " + std::to_string(estimate.size()) +
        " does not match the fragment file's " +
        std::to_string(parsed.matrix.rows()) + " SNPs");
  }
  std::optional<TruthRecord> truth;
  if (!o.truth.empty()) {
    truth = read_truth_file(o.truth);
    if (truth->truth.snps() != parsed.matrix.rows()) {
      throw std::invalid_argument(
          "truth haplotype length " + std::to_string(truth->truth.snps()) +
          " does not match the fragment file's " +
          std::to_string(parsed.matrix.rows()) + " SNPs");
    }
  }
  EvalReport report =
      evaluate(parsed.matrix, estimate, truth ? &truth->truth : nullptr);
  emit(o.out, EvalReport::csv_header() + "\n" + report.csv_row() + "\n");
}

// ---- bench ----

struct BenchOpts {
  std::string suite = "coverage";
  BenchSpec grid;
  ComparisonSpec comparison;
  std::vector<std::string> algorithms{"soft"};
  std::string algorithm = "soft";
  std::uint64_t seed = 0;
  std::string out = "-";
  bool no_timestamp = false;
  bool reproducible = false;  // also zeroes the wall-clock column
};

void run_bench(const BenchOpts& o) {
  bool timestamp = !(o.no_timestamp || o.reproducible);
  std::string csv;
  if (o.suite == "coverage") {
    BenchSpec spec = o.grid;
    spec.seed_base = o.seed;
    spec.algorithms.clear();
    for (const auto& name : o.algorithms) {
      spec.algorithms.push_back(*algorithm_from_name(name));
    }
    auto cells = run_coverage_grid(spec);
    if (o.reproducible) {
      for (auto& c : cells) c.mean_runtime_ms = 0.0;
    }
    csv = coverage_grid_csv(cells, timestamp);
  } else {
    ComparisonSpec spec = o.comparison;
    spec.seed_base = o.seed;
    spec.algorithm = *algorithm_from_name(o.algorithm);
    auto rows = run_comparison(spec);
    if (o.reproducible) {
      for (auto& r : rows) r.mean_runtime_ms = 0.0;
    }
    csv = comparison_csv(rows, timestamp);
  }
  emit(o.out, csv);
}

// ---- theory ----

struct TheoryOpts {
  TheoryParams tp;
  bool delta2_given = false;
  std::string validate;  // "", "noise", or "error"
  double sample_prob = 0.0;
  int replicates = 50;
  std::string algorithm = "soft";
  std::uint64_t seed = 0;
  std::string out = "-";
};

void run_theory(const TheoryOpts& o) {
  TheoryParams tp = o.tp;
  if (!o.delta2_given) tp.delta2 = tp.delta2_max() / 2.0;
  tp.validate();

  std::string text = "key,value\n";
  auto kv = [&text](const char* key, double value) {
    text += std::string(key) + "," + format_g(value, 12) + "\n";
  };
  kv("delta2", tp.delta2);
  kv("delta2_max", tp.delta2_max());
  kv("sample_prob_threshold", sample_prob_threshold(tp));
  kv("coverage_requirement", coverage_requirement(tp));
  kv("noise_spectral_bound", noise_spectral_bound(tp));
  kv("error_bound", error_bound(tp));
  kv("plateau_bound", plateau_bound(tp));

  if (!o.validate.empty()) {
    if (o.sample_prob <= 0.0 || o.sample_prob > 1.0) {
      throw std::invalid_argument("--validate needs --sample-prob in (0,1]");
    }
    text += "validator,replicates,pass_rate\n";
    if (o.validate == "noise") {
      auto summary =
          validate_noise_bound(tp, o.sample_prob, o.replicates, o.seed);
      text += "noise," + std::to_string(o.replicates) + "," +
              format_g(summary.pass_rate()) + "\n";
    } else {
      auto report = validate_error_bound(tp, o.sample_prob, o.replicates,
                                         o.seed,
                                         *algorithm_from_name(o.algorithm));
      text += "frobenius," + std::to_string(o.replicates) + "," +
              format_g(report.frobenius.pass_rate()) + "\n";
      text += "mec," + std::to_string(o.replicates) + "," +
              format_g(report.mec.pass_rate()) + "\n";
    }
  }
  emit(o.out, text);
}

const std::vector<std::string> kAlgorithmChoices{"ls", "least_squares", "hard",
                                                 "soft"};

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "RNG seed (default 0)");
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "haplomin: single-individual haplotype assembly via rank-one +-1 "
      "matrix completion"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "read flag defaults from a key=value file ([subcommand] "
                 "sections select the command)");
  std::string format = "csv";

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand(
      "simulate", "generate a planted instance: fragment file + truth sidecar");
  c_sim->add_option("--m", sim.m, "number of SNPs")
      ->required()
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--model", sim.model, "read layout model")
      ->check(CLI::IsMember({"contiguous", "uniform"}))
      ->capture_default_str();
  c_sim->add_option("--coverage", sim.coverage,
                    "mean reads per SNP (contiguous model)")
      ->capture_default_str();
  c_sim->add_option("--reads", sim.reads, "number of reads (uniform model)");
  c_sim->add_option("--sample-prob", sim.sample_prob,
                    "per-cell observation probability (uniform model)");
  c_sim->add_option("--error-rate", sim.error_rate,
                    "flip probability per observed cell")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  c_sim->add_option("--len-lo", sim.lengths.len_lo, "short-read length low");
  c_sim->add_option("--len-hi", sim.lengths.len_hi, "short-read length high");
  c_sim->add_option("--scaffold-lo", sim.lengths.scaffold_lo,
                    "scaffold-read length low");
  c_sim->add_option("--scaffold-hi", sim.lengths.scaffold_hi,
                    "scaffold-read length high");
  c_sim->add_option("--scaffold-overlap", sim.lengths.scaffold_overlap,
                    "scaffold sweep overlap");
  c_sim->add_option("--topup-lo", sim.lengths.topup_lo, "top-up length low");
  c_sim->add_option("--topup-hi", sim.lengths.topup_hi, "top-up length high");
  add_seed(c_sim, sim.seed);
  c_sim->add_option("--out", sim.out_dir, "output directory")->required();
  c_sim->callback([&sim] { run_simulate(sim); });

  AssembleOpts asm_;
  auto* c_asm = app.add_subcommand(
      "assemble", "run the alternating solver on a fragment file");
  c_asm->add_option("--input", asm_.input, "fragment file")->required();
  c_asm->add_option("--algorithm", asm_.algorithm, "update rule")
      ->check(CLI::IsMember(kAlgorithmChoices))
      ->capture_default_str();
  c_asm->add_option("--max-iters", asm_.cfg.max_iterations,
                    "iteration budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_asm->add_option("--tolerance", asm_.cfg.tolerance,
                    "stop when the normalized iterate moves less")
      ->capture_default_str();
  c_asm->add_option("--power-iters", asm_.cfg.power_iterations,
                    "initialization power-iteration budget")
      ->capture_default_str();
  c_asm->add_option("--clip-factor", asm_.cfg.clip_factor,
                    "zero init entries above clip_factor/sqrt(m)")
      ->capture_default_str();
  c_asm->add_option("--sample-prob", asm_.sample_prob,
                    "override the observed density used by initialization");
  add_seed(c_asm, asm_.cfg.seed);
  c_asm->add_option("--out", asm_.out,
                    "haplotype output file (default: input with .hap)");
  c_asm->add_option("--trace", asm_.trace, "write per-iteration trace CSV");
  c_asm->callback([&asm_] { run_assemble(asm_); });

  EvaluateOpts eval;
  auto* c_eval = app.add_subcommand(
      "evaluate", "score an assembled haplotype against fragments and truth");
  c_eval->add_option("--input", eval.input, "fragment file")->required();
  c_eval->add_option("--haplotype", eval.haplotype, "assembled haplotype file")
      ->required();
  c_eval->add_option("--truth", eval.truth, "truth sidecar (optional)");
  c_eval->add_option("--out", eval.out, "output file, - for stdout")
      ->capture_default_str();
  add_format(c_eval, format);
  std::uint64_t eval_seed = 0;  // evaluation is deterministic; kept for
  add_seed(c_eval, eval_seed);  // interface uniformity
  c_eval->callback([&eval] { run_evaluate(eval); });

  BenchOpts bench;
  auto* c_bench = app.add_subcommand(
      "bench", "replicated benchmark suites, CSV per grid cell");
  c_bench->add_option("--suite", bench.suite,
                      "coverage: (error rate x coverage) grid on contiguous "
                      "instances; comparison: solver vs SVT over sample "
                      "probabilities on uniform instances")
      ->check(CLI::IsMember({"coverage", "comparison"}))
      ->capture_default_str();
  c_bench->add_option("--error-rates", bench.grid.error_rates,
                      "coverage-suite error rates")
      ->delimiter(',');
  c_bench->add_option("--coverages", bench.grid.coverages,
                      "coverage-suite coverages")
      ->delimiter(',');
  auto* bench_reps = c_bench
                         ->add_option("--replicates", bench.grid.replicates,
                                      "instances per grid cell")
                         ->check(CLI::PositiveNumber)
                         ->capture_default_str();
  auto* bench_m = c_bench
                      ->add_option("--m", bench.grid.snp_count,
                                   "number of SNPs (comparison default: 250)")
                      ->check(CLI::PositiveNumber)
                      ->capture_default_str();
  c_bench->add_option("--algorithms", bench.algorithms,
                      "coverage-suite update rules")
      ->delimiter(',')
      ->check(CLI::IsMember(kAlgorithmChoices));
  c_bench->add_option("--max-iters", bench.grid.max_iterations,
                      "solver budget per replicate")
      ->capture_default_str();
  c_bench->add_option("--n", bench.comparison.read_count,
                      "comparison-suite read count")
      ->capture_default_str();
  c_bench->add_option("--sample-probs", bench.comparison.sample_probs,
                      "comparison-suite sample probabilities "
                      "(default: near-threshold grid)")
      ->delimiter(',');
  c_bench->add_option("--error-rate", bench.comparison.error_rate,
                      "comparison-suite error rate")
      ->capture_default_str();
  c_bench->add_option("--algorithm", bench.algorithm,
                      "comparison-suite update rule")
      ->check(CLI::IsMember(kAlgorithmChoices))
      ->capture_default_str();
  add_seed(c_bench, bench.seed);
  c_bench->add_option("--out", bench.out, "output file, - for stdout")
      ->capture_default_str();
  c_bench->add_flag("--no-timestamp", bench.no_timestamp,
                    "omit the '# generated' header line");
  c_bench->add_flag("--reproducible", bench.reproducible,
                    "byte-identical output: no timestamp, wall-clock column "
                    "written as 0");
  add_format(c_bench, format);
  c_bench->callback([&bench, bench_m, bench_reps] {
    // --m and --replicates are shared flags; each suite keeps its own
    // default when they are not given.
    if (bench_m->count() > 0) bench.comparison.snp_count = bench.grid.snp_count;
    if (bench_reps->count() > 0) {
      bench.comparison.replicates = bench.grid.replicates;
    }
    run_bench(bench);
  });

  TheoryOpts theory;
  auto* c_theory = app.add_subcommand(
      "theory", "closed-form guarantees and empirical bound validators");
  c_theory->add_option("--m", theory.tp.m, "number of SNPs")
      ->required()
      ->check(CLI::PositiveNumber);
  c_theory->add_option("--n", theory.tp.n, "number of reads")
      ->required()
      ->check(CLI::PositiveNumber);
  c_theory->add_option("--error-rate", theory.tp.error_rate,
                       "flip probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  c_theory->add_option("--noise-max", theory.tp.noise_max,
                       "largest noise magnitude")
      ->capture_default_str();
  auto* delta2_opt = c_theory->add_option(
      "--delta2", theory.tp.delta2, "analysis slack (default: delta2_max/2)");
  c_theory->add_option("--epsilon", theory.tp.epsilon,
                       "target Frobenius accuracy")
      ->capture_default_str();
  c_theory->add_option("--mu", theory.tp.mu, "planted incoherence")
      ->capture_default_str();
  c_theory->add_option("--C", theory.tp.C, "sampling-condition constant")
      ->capture_default_str();
  c_theory->add_option("--C-prime", theory.tp.C_prime,
                       "delta2-range constant")
      ->capture_default_str();
  c_theory->add_option("--validate", theory.validate,
                       "run an empirical validator")
      ->check(CLI::IsMember({"noise", "error"}));
  c_theory->add_option("--sample-prob", theory.sample_prob,
                       "observation probability for the validators");
  c_theory->add_option("--replicates", theory.replicates, "validator draws")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_theory->add_option("--algorithm", theory.algorithm,
                       "update rule for the error validator")
      ->check(CLI::IsMember(kAlgorithmChoices))
      ->capture_default_str();
  add_seed(c_theory, theory.seed);
  c_theory->add_option("--out", theory.out, "output file, - for stdout")
      ->capture_default_str();
  add_format(c_theory, format);
  c_theory->callback([&theory, delta2_opt] {
    theory.delta2_given = delta2_opt->count() > 0;
    run_theory(theory);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  } catch (const haplomin::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const haplomin::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
