#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "isingdiv/errors.hpp"
#include "isingdiv/estimators.hpp"
#include "isingdiv/exact.hpp"
#include "isingdiv/graphs.hpp"
#include "isingdiv/instances.hpp"

using namespace isingdiv;

namespace {

IsingModel single_vertex(double h) { return IsingModel(1, {}, {h}); }

ModelPair single_vertex_pair(double h_nu, double h_mu) {
  return ModelPair(single_vertex(h_nu), single_vertex(h_mu));
}

ModelPair k2_pair() { return unified_pair(2, complete_graph(2), 1.0, 4.0); }

EstimatorConfig practical(std::uint64_t samples, std::uint64_t seed, double eps = 0.3) {
  EstimatorConfig cfg;
  cfg.mode = EstimatorMode::Practical;
  cfg.t_override = samples;
  cfg.seed = seed;
  cfg.epsilon = eps;
  return cfg;
}

int successes_within(const ModelPair& pair, DivergenceKind kind, std::uint64_t samples,
                     double eps, int trials, std::uint64_t seed) {
  const OracleBundle bundle;
  const double exact = exact_divergence(pair, kind);
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    EstimatorConfig cfg = practical(samples, derive_seed(seed, static_cast<std::uint64_t>(t)), eps);
    const Estimate est = estimate(pair, kind, cfg, bundle);
    ok += est.value >= exact * std::exp(-eps) && est.value <= exact * std::exp(eps);
  }
  return ok;
}

}  // namespace

TEST_CASE("regime routing") {
  const OracleBundle bundle;
  SUBCASE("identical models go small and return exactly zero") {
    const ModelPair same = single_vertex_pair(0.25, 0.25);
    for (const char* spec : {"chi:1", "chi:2", "kl", "js", "renyi", "alpha:2", "hellinger2", "tv"}) {
      const Estimate est = estimate(same, DivergenceKind::parse(spec), practical(100, 7), bundle);
      CHECK(est.regime == Regime::SmallDistance);
      CHECK(est.value == 0.0);
      CHECK(est.d_par == 0.0);
    }
  }
  SUBCASE("well separated unified pair goes large") {
    const Estimate est = estimate(k2_pair(), DivergenceKind::chi(2), practical(1000, 7), bundle);
    CHECK(est.regime == Regime::LargeDistance);
    CHECK(est.d_par == doctest::Approx(std::log(2.0)).epsilon(1e-13));
    CHECK(est.theta == doctest::Approx(1.0 / 50.0).epsilon(1e-13));
  }
  SUBCASE("single vertex below threshold goes small") {
    const Estimate est =
        estimate(single_vertex_pair(0.0, 0.005), DivergenceKind::chi(2), practical(1000, 7),
                 bundle);
    CHECK(est.regime == Regime::SmallDistance);
    CHECK(est.theta == doctest::Approx(0.1).epsilon(1e-15));
  }
  SUBCASE("distance exactly at threshold goes large") {
    const ModelPair pair = single_vertex_pair(0.1, 0.0);
    CHECK(pair.parameter_distance() == pair.theta());
    const Estimate est = estimate(pair, DivergenceKind::chi(1), practical(1000, 7), bundle);
    CHECK(est.regime == Regime::LargeDistance);
  }
  SUBCASE("closed-form kinds report ClosedForm in the large regime") {
    CHECK(estimate(k2_pair(), DivergenceKind::alpha_div(2), practical(10, 7), bundle).regime ==
          Regime::ClosedForm);
    CHECK(estimate(k2_pair(), DivergenceKind::hellinger2(), practical(10, 7), bundle).regime ==
          Regime::ClosedForm);
  }
}

TEST_CASE("config validation") {
  const OracleBundle bundle;
  EstimatorConfig cfg;
  cfg.mode = EstimatorMode::Practical;  // no sample count
  CHECK_THROWS_AS(estimate_small(k2_pair(), DivergenceKind::chi(2), cfg, bundle), InputError);
  cfg.t_override = 100;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(estimate_small(k2_pair(), DivergenceKind::chi(2), cfg, bundle), InputError);
  cfg.epsilon = 1.0;
  CHECK_THROWS_AS(estimate_small(k2_pair(), DivergenceKind::chi(2), cfg, bundle), InputError);

  CHECK_THROWS_AS(estimate_chi_alpha_large(k2_pair(), 0, practical(10, 1), bundle), InputError);
  CHECK_THROWS_AS(estimate_alpha_div_large(k2_pair(), 1.0, practical(10, 1), bundle), InputError);
  CHECK_THROWS_AS(estimate_alpha_div_large(k2_pair(), 0.0, practical(10, 1), bundle), InputError);
  CHECK_THROWS_AS(
      estimate_kl_family_large(k2_pair(), DivergenceKind::chi(2), practical(10, 1), bundle),
      InputError);
}

TEST_CASE("theory-faithful sample formulas") {
  // alpha = 1 has witness F = 1, so T = 2^12 1e3 (n+3m)^2 / (b^4 eps^2).
  const double t = small_distance_theory_samples(DivergenceKind::chi(1), 1, 0, 0.5, 0.5);
  CHECK(t == doctest::Approx(4096000.0 / (0.0625 * 0.25)).epsilon(1e-12));

  const double t2 = small_distance_theory_samples(DivergenceKind::chi(2), 1, 0, 0.5, 0.5);
  const double witness = 2.0 * (8.0 / 0.25);  // F(zeta) = 2 zeta at zeta = 8(n+3m)/b^2
  CHECK(t2 == doctest::Approx(4096000.0 * witness * witness / (0.0625 * 0.25)).epsilon(1e-12));

  CHECK(default_count_repetitions(1) == 17);
  CHECK(default_count_repetitions(2) == 17);
  CHECK(default_count_repetitions(20) == 21);
  CHECK(default_count_repetitions(1) % 2 == 1);

  // Theory mode refuses astronomical sample counts and points at practical.
  OracleBundle bundle;
  EstimatorConfig cfg;
  cfg.mode = EstimatorMode::TheoryFaithful;
  cfg.epsilon = 0.3;
  CHECK_THROWS_WITH_AS(
      estimate_small(single_vertex_pair(0.0, 0.002), DivergenceKind::chi(2), cfg, bundle),
      doctest::Contains("practical"), CapacityError);
  CHECK_THROWS_AS(estimate_chi_alpha_large(k2_pair(), 2, cfg, bundle), CapacityError);
}

TEST_CASE("small-distance estimator accuracy on a lone vertex" * doctest::timeout(120)) {
  const ModelPair pair = single_vertex_pair(0.002, 0.0);
  SUBCASE("chi-squared") {
    CHECK(successes_within(pair, DivergenceKind::chi(2), 100000, 0.3, 10, 301) >= 7);
  }
  SUBCASE("kl") {
    CHECK(successes_within(pair, DivergenceKind::kl(), 100000, 0.3, 10, 302) >= 7);
  }
}

TEST_CASE("theory-faithful smoke run at stretched epsilon" * doctest::timeout(300)) {
  // chi:1 on a lone-vertex pair is the one theory-mode configuration small
  // enough to execute: F = 1 keeps T below 1e9.
  const ModelPair pair = single_vertex_pair(0.0, 0.02);
  OracleBundle bundle;
  EstimatorConfig cfg;
  cfg.mode = EstimatorMode::TheoryFaithful;
  cfg.epsilon = 0.9;
  cfg.seed = 99;
  const Estimate est = estimate(pair, DivergenceKind::tv(), cfg, bundle);
  const double exact = exact_tv(pair);
  CHECK(est.regime == Regime::SmallDistance);
  CHECK(est.value >= exact * std::exp(-0.9));
  CHECK(est.value <= exact * std::exp(0.9));
}

TEST_CASE("chi large-distance estimator") {
  const OracleBundle bundle;
  SUBCASE("identical models: every indicator ties, value is exactly zero") {
    const ModelPair same = single_vertex_pair(0.3, 0.3);
    const Estimate est = estimate_chi_alpha_large(same, 2, practical(500, 11), bundle);
    CHECK(est.value == 0.0);
  }
  SUBCASE("accuracy against brute force") {
    CHECK(successes_within(k2_pair(), DivergenceKind::chi(2), 10000, 0.3, 10, 303) >= 7);
  }
  SUBCASE("alpha = 1 estimates the tv distance") {
    const double exact = exact_tv(k2_pair());
    const Estimate est = estimate_chi_alpha_large(k2_pair(), 1, practical(20000, 304), bundle);
    CHECK(std::abs(std::log(est.value / exact)) <= 0.3);
  }
  SUBCASE("signed sum converges to the even-alpha identity value") {
    const double identity = exact_even_alpha_expansion(k2_pair(), 2);
    const Estimate est = estimate_chi_alpha_large(k2_pair(), 2, practical(1000000, 305), bundle);
    CHECK(est.value == doctest::Approx(identity).epsilon(0.01));
  }
}

TEST_CASE("chi large estimator is unbiased with the exact backend" * doctest::timeout(300)) {
  const ModelPair pair = k2_pair();
  const double exact = exact_divergence(pair, DivergenceKind::chi(2));
  const OracleBundle bundle;
  const int runs = 10000;
  const std::uint64_t samples = 1000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < runs; ++r) {
    const Estimate est =
        estimate_chi_alpha_large(pair, 2, practical(samples, derive_seed(306, r)), bundle);
    sum += est.value;
    sum_sq += est.value * est.value;
  }
  const double mean = sum / runs;
  const double variance = std::max(0.0, sum_sq / runs - mean * mean);
  const double standard_error = std::sqrt(variance / runs);
  CHECK(std::abs(mean - exact) <= 3.0 * standard_error);
}

TEST_CASE("kl family large-distance estimator") {
  const OracleBundle bundle;
  SUBCASE("identical distributions give exactly zero") {
    const ModelPair same = single_vertex_pair(0.3, 0.3);
    const Estimate est =
        estimate_kl_family_large(same, DivergenceKind::kl(), practical(100, 21), bundle);
    CHECK(est.value == 0.0);
  }
  SUBCASE("kl accuracy") {
    CHECK(successes_within(k2_pair(), DivergenceKind::kl(), 10000, 0.3, 10, 307) >= 7);
  }
  SUBCASE("js accuracy") {
    CHECK(successes_within(k2_pair(), DivergenceKind::js(), 10000, 0.3, 10, 308) >= 7);
  }
  SUBCASE("renyi accuracy") {
    CHECK(successes_within(k2_pair(), DivergenceKind::renyi(), 10000, 0.3, 10, 309) >= 7);
  }
}

TEST_CASE("kl family flags broken counting oracles") {
  // Deliberately large counting noise (delta floored at 2) so the noisy
  // backend's failure branch pushes |h| past the marginal-bound cap; scan
  // seeds until one lands in the 1% failure branch.
  OracleBundle bundle;
  bundle.backend = Backend::NoisyExact;
  bundle.counting_repetitions = 1;
  const ModelPair pair = single_vertex_pair(0.3, 0.0);
  bool flagged = false;
  for (std::uint64_t seed = 0; seed < 2000 && !flagged; ++seed) {
    EstimatorConfig cfg = practical(50, seed);
    cfg.practical_delta_floor = 2.0;
    try {
      estimate_kl_family_large(pair, DivergenceKind::kl(), cfg, bundle);
    } catch (const OracleFailure&) {
      flagged = true;
    }
  }
  CHECK(flagged);
}

TEST_CASE("closed-form estimators") {
  const OracleBundle bundle;
  SUBCASE("alpha divergence equals brute force with the exact backend") {
    for (double alpha : {2.0, 0.5, -1.0}) {
      const Estimate est = estimate_alpha_div_large(k2_pair(), alpha, practical(1, 31), bundle);
      const double exact = exact_divergence(k2_pair(), DivergenceKind::alpha_div(alpha));
      CHECK(est.value == doctest::Approx(exact).epsilon(1e-10));
    }
  }
  SUBCASE("squared Hellinger equals brute force with the exact backend") {
    const Estimate est = estimate_hellinger_large(k2_pair(), practical(1, 32), bundle);
    CHECK(est.value ==
          doctest::Approx(exact_divergence(k2_pair(), DivergenceKind::hellinger2())).epsilon(1e-10));
  }
  SUBCASE("identical models give zero") {
    const ModelPair same = single_vertex_pair(0.2, 0.2);
    CHECK(estimate_hellinger_large(same, practical(1, 33), bundle).value <= 1e-12);
  }
  SUBCASE("noisy backend stays within the relative target") {
    OracleBundle noisy;
    noisy.backend = Backend::NoisyExact;
    const double exact = exact_divergence(k2_pair(), DivergenceKind::hellinger2());
    int ok = 0;
    for (int t = 0; t < 10; ++t) {
      const Estimate est =
          estimate_hellinger_large(k2_pair(), practical(1, derive_seed(310, t)), noisy);
      ok += est.value >= exact * std::exp(-0.3) && est.value <= exact * std::exp(0.3);
    }
    CHECK(ok >= 7);
  }
}

TEST_CASE("doubling samples does not degrade accuracy" * doctest::timeout(120)) {
  const ModelPair pair = k2_pair();
  const DivergenceKind kind = DivergenceKind::chi(2);
  const double exact = exact_divergence(pair, kind);
  const OracleBundle bundle;
  const int seeds = 40;
  double previous_median = HUGE_VAL;
  for (std::uint64_t samples : {250, 2000, 16000}) {
    std::vector<double> errors;
    for (int s = 0; s < seeds; ++s) {
      const Estimate est =
          estimate_chi_alpha_large(pair, 2, practical(samples, derive_seed(311, s)), bundle);
      errors.push_back(std::abs(std::log(std::max(est.value, 1e-300) / exact)));
    }
    std::nth_element(errors.begin(), errors.begin() + seeds / 2, errors.end());
    const double median = errors[seeds / 2];
    CHECK(median <= previous_median);
    previous_median = median;
  }
}

TEST_CASE("estimates are independent of the worker count") {
  const OracleBundle bundle;
  for (const char* spec : {"chi:2", "kl", "js"}) {
    const DivergenceKind kind = DivergenceKind::parse(spec);
    EstimatorConfig one = practical(20000, 41);
    one.threads = 1;
    EstimatorConfig eight = practical(20000, 41);
    eight.threads = 8;
    const Estimate a = estimate(k2_pair(), kind, one, bundle);
    const Estimate b = estimate(k2_pair(), kind, eight, bundle);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("diagnostics payload") {
  const OracleBundle bundle;
  const Estimate est = estimate_chi_alpha_large(k2_pair(), 2, practical(1000, 51), bundle);
  CHECK(est.samples_used == 2 * 1000 * 3);
  CHECK(est.b == doctest::Approx(0.2).epsilon(1e-12));
  bool found_ratio = false;
  for (const auto& term : est.terms) found_ratio = found_ratio || term.label == "k=2:z_ratio";
  CHECK(found_ratio);
}
