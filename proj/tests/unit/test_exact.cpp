#include <cmath>

#include "doctest.h"
#include "isingdiv/errors.hpp"
#include "isingdiv/exact.hpp"
#include "isingdiv/graphs.hpp"
#include "isingdiv/instances.hpp"

using namespace isingdiv;

namespace {

IsingModel single_vertex(double h) { return IsingModel(1, {}, {h}); }

ModelPair single_vertex_pair(double h_nu, double h_mu) {
  return ModelPair(single_vertex(h_nu), single_vertex(h_mu));
}

// Probability of spin +1 for a lone vertex with field h.
double lone_plus_probability(double h) { return std::exp(h) / (2.0 * std::cosh(h)); }

}  // namespace

TEST_CASE("partition function closed cases") {
  CHECK(partition_function(single_vertex(0.0)).z == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(partition_function(single_vertex(0.5)).z ==
        doctest::Approx(std::exp(0.5) + std::exp(-0.5)).epsilon(1e-14));
  CHECK(partition_function(IsingModel::unified(2, complete_graph(2), 2.0)).z ==
        doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("partition function is thread-count independent, bit for bit") {
  Rng rng(21);
  const IsingModel model =
      random_model(9, random_graph(9, 0.5, rng), {-1.5, 1.5}, {-1.5, 1.5}, rng);
  const double one = partition_function(model, {}, 1).log_z;
  const double four = partition_function(model, {}, 4).log_z;
  CHECK(one == four);
}

TEST_CASE("capacity limit") {
  const IsingModel big(5, {}, std::vector<double>(5, 0.0));
  CHECK_THROWS_AS(partition_function(big, ExactLimit{4}), CapacityError);
  CHECK_THROWS_AS(exact_divergence(ModelPair(big, big), DivergenceKind::kl(), ExactLimit{4}),
                  CapacityError);
}

TEST_CASE("gibbs probabilities") {
  CHECK(gibbs_probability(single_vertex(0.0), Configuration::from_index(1, 1)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  const IsingModel k2 = IsingModel::unified(2, complete_graph(2), 2.0);
  CHECK(gibbs_probability(k2, Configuration::from_index(3, 2)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(gibbs_probability(k2, Configuration::from_index(1, 2)) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("gibbs probabilities sum to one") {
  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 3 + 3 * trial;  // up to 12
    const IsingModel model =
        random_model(n, random_graph(n, 0.4, rng), {-1.0, 1.0}, {-1.0, 1.0}, rng);
    const double log_z = partition_function(model).log_z;
    double total = 0.0;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      total += std::exp(model.log_weight(Configuration::from_index(i, n)) - log_z);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact divergence basics") {
  const ModelPair same = single_vertex_pair(0.3, 0.3);
  for (const char* spec : {"chi:1", "chi:2", "kl", "renyi", "js", "alpha:2", "hellinger2", "tv"}) {
    CHECK(exact_divergence(same, DivergenceKind::parse(spec)) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }

  // chi^2 between lone vertices with h = 0 and h = 0.5, by direct two-term
  // arithmetic: sum_s mu(s) (nu(s)/mu(s) - 1)^2 / 2.
  const double p = lone_plus_probability(0.5);
  const double expected =
      0.5 * (p * (0.5 / p - 1.0) * (0.5 / p - 1.0) +
             (1.0 - p) * (0.5 / (1.0 - p) - 1.0) * (0.5 / (1.0 - p) - 1.0));
  CHECK(exact_divergence(single_vertex_pair(0.0, 0.5), DivergenceKind::chi(2)) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("exact tv") {
  CHECK(exact_tv(single_vertex_pair(0.2, 0.2)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(exact_tv(single_vertex_pair(10.0, -10.0)) == doctest::Approx(1.0).epsilon(1e-8));
  const double p = lone_plus_probability(0.5);
  CHECK(exact_tv(single_vertex_pair(0.0, 0.5)) ==
        doctest::Approx(std::abs(p - 0.5)).epsilon(1e-13));
  // TV equals the chi:1 divergence.
  Rng rng(41);
  for (int i = 0; i < 5; ++i) {
    const ModelPair pair = random_test_pair(2, 6, rng);
    CHECK(exact_tv(pair) ==
          doctest::Approx(exact_divergence(pair, DivergenceKind::chi(1))).epsilon(1e-12));
  }
}

TEST_CASE("exact marginal") {
  CHECK(exact_marginal(single_vertex(0.0), {0}, 0, +1) == doctest::Approx(0.5).epsilon(1e-14));
  const IsingModel k2 = IsingModel::unified(2, complete_graph(2), 2.0);
  CHECK(exact_marginal(k2, {0, -1}, 0, +1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(exact_marginal(k2, {0, +1}, 0, +1) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(exact_marginal(k2, {+1, -1}, 0, +1), InputError);
  CHECK_THROWS_AS(exact_marginal(k2, {0, -1}, 0, 2), InputError);
}

TEST_CASE("exact sampling") {
  SUBCASE("lone vertex is a fair coin") {
    const ExactGibbs gibbs(single_vertex(0.0));
    Rng rng(51);
    int plus = 0;
    for (int i = 0; i < 100000; ++i) plus += gibbs.sample(rng).spin(0) == +1;
    CHECK(plus / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("unified edge hits 1/3 on ++") {
    const ExactGibbs gibbs(IsingModel::unified(2, complete_graph(2), 2.0));
    Rng rng(52);
    int both = 0;
    for (int i = 0; i < 100000; ++i) both += gibbs.sample(rng).index() == 3;
    CHECK(both / 100000.0 == doctest::Approx(1.0 / 3.0).epsilon(0.03));
  }
  SUBCASE("fixed seed reproduces the sample sequence") {
    const ExactGibbs gibbs(IsingModel::unified(2, complete_graph(2), 2.0));
    Rng a(53), b(53);
    for (int i = 0; i < 100; ++i) CHECK(gibbs.sample(a).index() == gibbs.sample(b).index());
  }
}

TEST_CASE("moment sums") {
  const ModelPair same = single_vertex_pair(0.1, 0.1);
  CHECK(exact_moment_sum(same, 1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(exact_moment_sum(same, 3) == doctest::Approx(8.0).epsilon(1e-13));

  // Two-term enumeration by hand for h = 0 vs 0.5, alpha = 2.
  const double p = lone_plus_probability(0.5);
  const double expected = p * std::pow(0.5 / p + 1.0, 2.0) +
                          (1.0 - p) * std::pow(0.5 / (1.0 - p) + 1.0, 2.0);
  CHECK(exact_moment_sum(single_vertex_pair(0.0, 0.5), 2) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("moment-sum partition identity") {
  const ModelPair k2 = unified_pair(2, complete_graph(2), 1.0, 2.0);
  for (int k : {0, 1}) {
    const RatioIdentity sides = exact_ratio_identity(k2, k);
    CHECK(sides.direct_sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sides.partition_ratio == doctest::Approx(1.0).epsilon(1e-13));
  }
  const RatioIdentity sides = exact_ratio_identity(k2, 2);
  CHECK(sides.direct_sum ==
        doctest::Approx(sides.partition_ratio).epsilon(1e-12));

  Rng rng(61);
  for (int i = 0; i < 10; ++i) {
    const ModelPair pair = random_test_pair(2, 8, rng);
    for (int k = 0; k <= 6; ++k) {
      const RatioIdentity s = exact_ratio_identity(pair, k);
      CHECK(s.direct_sum == doctest::Approx(s.partition_ratio).epsilon(1e-10));
    }
  }
}

TEST_CASE("even-alpha expansion equals the divergence") {
  Rng rng(71);
  for (int i = 0; i < 10; ++i) {
    const ModelPair pair = random_test_pair(2, 7, rng);
    for (int alpha : {2, 4}) {
      const double expansion = exact_even_alpha_expansion(pair, alpha);
      const double exact = exact_divergence(pair, DivergenceKind::chi(alpha));
      CHECK(expansion == doctest::Approx(exact).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(exact_even_alpha_expansion(single_vertex_pair(0, 0.1), 3), InputError);
}

TEST_CASE("weight ratio variance") {
  CHECK(exact_variance_weight_ratio(single_vertex_pair(0.4, 0.4)) <= 1e-12);

  // Hand enumeration for h_nu = 0, h_mu = 0.01: W(s) = exp(-0.01 s) under mu.
  const double p = lone_plus_probability(0.01);
  const double w_plus = std::exp(-0.01), w_minus = std::exp(0.01);
  const double mean = p * w_plus + (1.0 - p) * w_minus;
  const double second = p * w_plus * w_plus + (1.0 - p) * w_minus * w_minus;
  CHECK(exact_variance_weight_ratio(single_vertex_pair(0.0, 0.01)) ==
        doctest::Approx(second - mean * mean).epsilon(1e-10));

  // Bound (3n+9m)^2 d^2 in the near-identical regime.
  Rng rng(81);
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + static_cast<int>(rng.next_below(5));
    const EdgeList edges = random_graph(n, 0.5, rng);
    const IsingModel base = random_model(n, edges, {-1, 1}, {-1, 1}, rng);
    const double magnitude = 0.5 / (10.0 * (n + 3.0 * static_cast<double>(edges.size())));
    const ModelPair pair = perturbed_pair(base, magnitude, rng);
    const double d = pair.parameter_distance();
    const double size = pair.n() + 3.0 * pair.union_m();
    CHECK(pair.parameter_distance() < pair.theta());
    CHECK(exact_variance_weight_ratio(pair) <= 9.0 * size * size * d * d * (1.0 + 1e-9));
  }
}
