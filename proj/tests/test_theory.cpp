#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "haplomin/simulate.hpp"
#include "haplomin/solver.hpp"
#include "haplomin/theory.hpp"

using namespace haplomin;

namespace {

// The formulas below were evaluated independently at these parameters and the
// results frozen here to full double precision.
TheoryParams hand_params() {
  TheoryParams tp;
  tp.m = 100;
  tp.n = 300;
  tp.error_rate = 0.03;
  tp.delta2 = 0.1;
  tp.epsilon = 1.0;
  tp.C = 1.3;
  tp.C_prime = 0.9;
  return tp;
}

}  // namespace

TEST_CASE("hand values: delta2 range") {
  auto tp = hand_params();
  CHECK(tp.delta2_max() == doctest::Approx(0.184571428571429).epsilon(1e-12));
  CHECK(tp.alpha() == doctest::Approx(3.0));
  CHECK(tp.sigma_star() == doctest::Approx(std::sqrt(30000.0)));
  CHECK(tp.mu1() == doctest::Approx(8.0));
}

TEST_CASE("hand values: sampling condition") {
  auto tp = hand_params();
  CHECK(sample_prob_threshold(tp) ==
        doctest::Approx(143.210521380827).epsilon(1e-12));
  CHECK(coverage_requirement(tp) ==
        doctest::Approx(42963.1564142482).epsilon(1e-12));
}

TEST_CASE("hand values: error, mec, plateau bounds") {
  auto tp = hand_params();
  CHECK(error_bound(tp) == doctest::Approx(776.958761790857).epsilon(1e-12));
  CHECK(mec_bound(tp, 7.5) == doctest::Approx(4.52907477288112).epsilon(1e-12));
  CHECK(plateau_bound(tp) == doctest::Approx(3.20288675134595).epsilon(1e-12));
}

TEST_CASE("hand values: large noiseless instance") {
  TheoryParams tp;
  tp.m = 1000;
  tp.n = 1000;
  tp.error_rate = 0.0;
  tp.delta2 = 0.185;
  tp.epsilon = 1000.0 / std::exp(1.0);  // makes the accuracy log equal 1
  CHECK(sample_prob_threshold(tp) ==
        doctest::Approx(0.796569978116859).epsilon(1e-12));
}

TEST_CASE("hand values: mid-range slack on a 200x400 instance") {
  TheoryParams tp;
  tp.m = 200;
  tp.n = 400;
  tp.error_rate = 0.02;
  CHECK(tp.delta2_max() == doctest::Approx(0.185238095238095).epsilon(1e-12));
  tp.delta2 = tp.delta2_max() / 2.0;
  tp.epsilon = 0.05 * tp.sigma_star();
  CHECK(tp.delta2 == doctest::Approx(0.0926190476190476).epsilon(1e-12));
  CHECK(sample_prob_threshold(tp) ==
        doctest::Approx(29.5293086262006).epsilon(1e-12));
  CHECK(error_bound(tp) == doctest::Approx(906.984721675574).epsilon(1e-12));
  // At this size the sampling condition exceeds 1 and the Frobenius guarantee
  // exceeds ||M||_F, so both hold for any estimate.
  CHECK(sample_prob_threshold(tp) > 1.0);
  CHECK(error_bound(tp) > tp.sigma_star());
}

TEST_CASE("noise spectral bound formula") {
  TheoryParams tp;
  tp.m = 200;
  tp.n = 200;
  tp.error_rate = 0.05;
  CHECK(noise_spectral_bound(tp) == doctest::Approx(40.0).epsilon(1e-12));
  tp.error_rate = 0.0;
  CHECK(noise_spectral_bound(tp) == 0.0);
}

TEST_CASE("threshold scales linearly in C and shrinks with m") {
  auto tp = hand_params();
  auto scaled = tp;
  scaled.C = 2.0 * tp.C;
  CHECK(sample_prob_threshold(scaled) ==
        doctest::Approx(2.0 * sample_prob_threshold(tp)).epsilon(1e-12));

  TheoryParams small;
  small.m = 100;
  small.n = 400;
  TheoryParams big;
  big.m = 200;
  big.n = 800;
  CHECK(sample_prob_threshold(big) < sample_prob_threshold(small));
}

TEST_CASE("bounds grow with the error rate") {
  TheoryParams lo;
  lo.m = 100;
  lo.n = 200;
  lo.error_rate = 0.01;
  TheoryParams hi = lo;
  hi.error_rate = 0.1;
  CHECK(sample_prob_threshold(hi) > sample_prob_threshold(lo));
  CHECK(error_bound(hi) > error_bound(lo));
  CHECK(noise_spectral_bound(hi) > noise_spectral_bound(lo));
  CHECK(plateau_bound(hi) > plateau_bound(lo));
}

TEST_CASE("noiseless limits") {
  TheoryParams tp;
  tp.m = 50;
  tp.n = 120;
  tp.error_rate = 0.0;
  tp.epsilon = 0.25;
  CHECK(error_bound(tp) == 0.25);  // exact: the noise term vanishes
  CHECK(noise_spectral_bound(tp) == 0.0);
  CHECK(plateau_bound(tp) ==
        doctest::Approx(0.25 / (2.0 * tp.sigma_star())).epsilon(1e-12));
  CHECK(mec_bound(tp, 3.0) ==
        doctest::Approx((0.25 + 3.0) / tp.sigma_star()).epsilon(1e-12));
}

TEST_CASE("parameter validation rejects out-of-range fields") {
  auto ok = hand_params();
  CHECK_NOTHROW(ok.validate());

  auto bad = ok;
  bad.n = bad.m - 1;  // wider than tall is required
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.error_rate = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.delta2 = bad.delta2_max() + 1e-9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.delta2 = -0.01;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.delta2 = 0.0;
  CHECK_NOTHROW(bad.validate());  // zero slack is legal for the bounds below
  CHECK_THROWS_AS(sample_prob_threshold(bad), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(bad), std::invalid_argument);
  CHECK_THROWS_AS(plateau_bound(bad), std::invalid_argument);
}

TEST_CASE("contraction check on synthetic traces") {
  TheoryParams tp;
  tp.m = 100;
  tp.n = 100;
  tp.error_rate = 0.0;
  tp.delta2 = 0.185;

  SUBCASE("geometric decay at exactly 1/4 passes") {
    std::vector<double> trace = {1.0, 0.25, 0.0625, 0.015625};
    auto rep = contraction_check(trace, tp);
    CHECK(rep.compliant());
    CHECK(rep.checked == 3);
  }

  SUBCASE("a slow step is flagged with its trace index") {
    std::vector<double> trace = {1.0, 0.25, 0.2, 0.05};
    auto rep = contraction_check(trace, tp);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0] == 2);
    CHECK(rep.checked == 3);
  }

  SUBCASE("transitions below the floor are ignored") {
    std::vector<double> trace = {1.0, 0.25, 1e-12, 5e-12};
    auto rep = contraction_check(trace, tp, 1e-10);
    CHECK(rep.checked == 2);  // the 1e-12 -> 5e-12 step is never examined
    CHECK(rep.compliant());
  }

  SUBCASE("noisy model adds an affine offset") {
    auto noisy = tp;
    noisy.error_rate = 0.05;
    noisy.delta2 = 0.1;
    // offset = 8 * 0.05 / 0.1 = 4, so even a flat trace complies
    std::vector<double> trace = {1.0, 1.0, 1.0};
    CHECK(contraction_check(trace, noisy).compliant());
    CHECK_FALSE(contraction_check(trace, tp).compliant());
  }

  SUBCASE("empty and singleton traces check nothing") {
    CHECK(contraction_check({}, tp).checked == 0);
    CHECK(contraction_check({1.0}, tp).checked == 0);
  }
}

TEST_CASE("contraction check accepts a real noiseless run") {
  auto truth = generate_truth(200, 200, 77);
  auto F = observe_uniform(truth, 0.8, 0.0, 77);

  SolverConfig cfg;
  cfg.algorithm = Algorithm::least_squares;
  cfg.seed = 77;
  auto res = assemble(F, cfg, &truth);

  TheoryParams tp;
  tp.m = 200;
  tp.n = 200;
  tp.error_rate = 0.0;
  tp.delta2 = 0.185;
  auto rep = contraction_check(res.trace.dist_u, tp);
  CHECK(rep.checked >= 2);
  CHECK(rep.compliant());
}

TEST_CASE("noise bound validator") {
  TheoryParams tp;
  tp.m = 200;
  tp.n = 200;
  tp.error_rate = 0.05;

  auto summary = validate_noise_bound(tp, 0.5, 10, 4242);
  REQUIRE(summary.checks.size() == 10);
  for (const auto& c : summary.checks) {
    CHECK(c.bound == doctest::Approx(40.0));
    CHECK(c.measured > 0.0);
  }
  CHECK(summary.pass_rate() == doctest::Approx(1.0));

  // determinism
  auto again = validate_noise_bound(tp, 0.5, 10, 4242);
  for (std::size_t i = 0; i < summary.checks.size(); ++i) {
    CHECK(summary.checks[i].measured == again.checks[i].measured);
  }

  CHECK_THROWS_AS(validate_noise_bound(tp, 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(validate_noise_bound(tp, 0.5, 0, 1), std::invalid_argument);
}

TEST_CASE("error bound validator on a comfortably solvable instance") {
  TheoryParams tp;
  tp.m = 200;
  tp.n = 400;
  tp.error_rate = 0.02;
  tp.delta2 = tp.delta2_max() / 2.0;
  tp.epsilon = 0.05 * tp.sigma_star();

  auto report = validate_error_bound(tp, 0.5, 8, 910);
  REQUIRE(report.frobenius.checks.size() == 8);
  REQUIRE(report.mec.checks.size() == 8);
  CHECK(report.frobenius.pass_rate() == doctest::Approx(1.0));
  CHECK(report.mec.pass_rate() == doctest::Approx(1.0));
  for (const auto& c : report.frobenius.checks) {
    CHECK(c.measured >= 0.0);
    CHECK(c.bound == doctest::Approx(906.984721675574));
  }
  // the measured mec is a mismatch fraction over all cells
  for (const auto& c : report.mec.checks) {
    CHECK(c.measured >= 0.0);
    CHECK(c.measured <= 1.0);
  }
}

TEST_CASE("pass rate of an empty summary is zero") {
  ValidationSummary s;
  CHECK(s.pass_rate() == 0.0);
}
