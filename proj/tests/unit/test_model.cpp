#include <cmath>

#include "doctest.h"
#include "isingdiv/errors.hpp"
#include "isingdiv/exact.hpp"
#include "isingdiv/graphs.hpp"
#include "isingdiv/instances.hpp"
#include "isingdiv/json_io.hpp"
#include "isingdiv/model.hpp"

using namespace isingdiv;

namespace {

Configuration config_of(std::initializer_list<int> spins) {
  Configuration c(static_cast<int>(spins.size()));
  int v = 0;
  for (int s : spins) c.set_spin(v++, s);
  return c;
}

IsingModel single_vertex(double h) { return IsingModel(1, {}, {h}); }

}  // namespace

TEST_CASE("log_weight on tiny hand-enumerable models") {
  CHECK(single_vertex(0.7).log_weight(config_of({+1})) == doctest::Approx(0.7).epsilon(1e-15));

  IsingModel k2(2, {{0, 1, 0.5}}, {0.0, 0.0});
  CHECK(k2.log_weight(config_of({+1, +1})) == doctest::Approx(0.5).epsilon(1e-15));

  IsingModel k2f(2, {{0, 1, 0.5}}, {0.2, -0.3});
  // -0.5 (edge) + 0.2 (field at +1) + 0.3 (field at -1)
  CHECK(k2f.log_weight(config_of({+1, -1})) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("log_weight invariant under edge endpoint order") {
  IsingModel a(3, {{0, 1, 0.4}, {1, 2, -0.7}}, {0.1, 0.2, 0.3});
  IsingModel b(3, {{1, 0, 0.4}, {2, 1, -0.7}}, {0.1, 0.2, 0.3});
  for (std::uint64_t i = 0; i < 8; ++i) {
    const Configuration c = Configuration::from_index(i, 3);
    CHECK(a.log_weight(c) == b.log_weight(c));
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(IsingModel(2, {{0, 1, 0.5}, {1, 0, 0.2}}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(IsingModel(2, {{0, 0, 0.5}}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(IsingModel(2, {{0, 2, 0.5}}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(IsingModel(2, {}, {0.0}), InputError);
  CHECK_THROWS_AS(single_vertex(0.7).log_weight(Configuration(2)), InputError);
}

TEST_CASE("max degree and adjacency") {
  IsingModel m(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}}, {0, 0, 0, 0});
  CHECK(m.max_degree() == 3);
  CHECK(m.degree(0) == 3);
  CHECK(m.degree(3) == 1);
  CHECK(m.coupling(2, 0) == 1.0);
  CHECK(m.coupling(1, 3) == 0.0);
}

TEST_CASE("parameter distance") {
  SUBCASE("identical models") {
    ModelPair pair(single_vertex(0.4), single_vertex(0.4));
    CHECK(pair.parameter_distance() == 0.0);
  }
  SUBCASE("field difference normalized by degree + 1") {
    ModelPair pair(single_vertex(1.0), single_vertex(0.0));
    CHECK(pair.parameter_distance() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("coupling term dominates") {
    IsingModel nu(2, {{0, 1, 0.5}}, {0.1, 0.1});
    IsingModel mu(2, {{0, 1, 0.2}}, {0.1, 0.1});
    CHECK(ModelPair(nu, mu).parameter_distance() == doctest::Approx(0.3).epsilon(1e-12));
  }
  SUBCASE("absent coupling treated as zero, union degree used") {
    IsingModel nu(2, {{0, 1, 0.5}}, {0.0, 0.0});
    IsingModel mu(2, {}, {1.0, 0.0});
    ModelPair pair(nu, mu);
    CHECK(pair.union_m() == 1);
    // max(|0.5 - 0|, 1.0 / (1+1))
    CHECK(pair.parameter_distance() == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("marginal lower bound closed cases") {
  CHECK(single_vertex(0.0).marginal_lower_bound() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(single_vertex(0.5 * std::log(3.0)).marginal_lower_bound() ==
        doctest::Approx(0.25).epsilon(1e-12));
  // Unified coupling beta = 2: worst pinning gives 1/(1+beta).
  CHECK(IsingModel::unified(2, complete_graph(2), 2.0).marginal_lower_bound() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("marginal lower bound dominated by every exact conditional marginal") {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(3));  // n in [2,4]
    const EdgeList edges = random_graph(n, 0.6, rng);
    const IsingModel model = random_model(n, edges, {-1.0, 1.0}, {-1.0, 1.0}, rng);
    const double b = model.marginal_lower_bound();
    // All pinning subsets, all assignments, all free vertices, both spins.
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n); ++subset) {
      for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << n); ++assign) {
        if ((assign & ~subset) != 0) continue;
        std::vector<int> pinning(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
          if (subset >> v & 1) pinning[static_cast<std::size_t>(v)] = (assign >> v & 1) ? +1 : -1;
        }
        for (int v = 0; v < n; ++v) {
          if (subset >> v & 1) continue;
          for (int c : {+1, -1}) {
            CHECK(exact_marginal(model, pinning, v, c) >= b * (1.0 - 1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("combine") {
  IsingModel nu(2, {{0, 1, 0.5}}, {0.3, -0.2});
  IsingModel mu(2, {{0, 1, 0.2}}, {-0.1, 0.4});
  ModelPair pair(nu, mu);

  SUBCASE("k = 1 returns nu, k = 0 returns mu") {
    CHECK(pair.combine(1.0).coupling(0, 1) == 0.5);
    CHECK(pair.combine(1.0).fields() == nu.fields());
    CHECK(pair.combine(0.0).coupling(0, 1) == 0.2);
    CHECK(pair.combine(0.0).fields() == mu.fields());
  }
  SUBCASE("k = 2 extrapolates") {
    CHECK(pair.combine(2.0).coupling(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("affine in k") {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      const double k = rng.next_in(-3.0, 3.0);
      CHECK(pair.combine(k).coupling(0, 1) ==
            doctest::Approx(k * 0.5 - (k - 1.0) * 0.2).epsilon(1e-14));
    }
  }
  SUBCASE("k = 1 projection is idempotent") {
    for (double k : {0.5, 2.0, -1.0}) {
      const IsingModel combined = pair.combine(k);
      const IsingModel again = ModelPair(combined, mu).combine(1.0);
      CHECK(again.fields() == combined.fields());
      CHECK(again.coupling(0, 1) == combined.coupling(0, 1));
    }
  }
  SUBCASE("k = 1/2 averages") {
    const IsingModel avg = pair.combine(0.5);
    CHECK(avg.coupling(0, 1) == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(avg.fields()[0] == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("unified model") {
  CHECK_THROWS_AS(IsingModel::unified(2, complete_graph(2), 0.0), InputError);
  CHECK_THROWS_AS(IsingModel::unified(2, complete_graph(2), -1.0), InputError);

  SUBCASE("beta = 1 is the uniform model") {
    const IsingModel m = IsingModel::unified(2, complete_graph(2), 1.0);
    CHECK(m.coupling(0, 1) == 0.0);
    CHECK(partition_function(m).z == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(partition_function(IsingModel::unified(4, cycle_graph(4), 1.0)).z ==
          doctest::Approx(16.0).epsilon(1e-12));
  }
  SUBCASE("beta = 2 on an edge: Z = 2 beta + 2") {
    const IsingModel m = IsingModel::unified(2, complete_graph(2), 2.0);
    CHECK(partition_function(m).z == doctest::Approx(6.0).epsilon(1e-12));
  }
  SUBCASE("weight / beta^{monochromatic count} is configuration independent") {
    const double beta = 2.7;
    const IsingModel m = IsingModel::unified(4, cycle_graph(4), beta);
    for (std::uint64_t i = 0; i < 16; ++i) {
      const Configuration c = Configuration::from_index(i, 4);
      int mono = 0;
      for (const auto& e : m.edges()) {
        if (c.spin(e.u) == c.spin(e.v)) ++mono;
      }
      const double ratio = std::exp(m.log_weight(c)) / std::pow(beta, mono);
      CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("configuration bit packing") {
  Configuration c = Configuration::from_index(0b1011, 4);
  CHECK(c.spin(0) == +1);
  CHECK(c.spin(1) == +1);
  CHECK(c.spin(2) == -1);
  CHECK(c.spin(3) == +1);
  CHECK(c.index() == 0b1011);
  c.flip(2);
  CHECK(c.spin(2) == +1);
  c.set_spin(0, -1);
  CHECK(c.index() == 0b1110);

  Configuration wide(90);
  wide.set_spin(77, +1);
  CHECK(wide.spin(77) == +1);
  CHECK(wide.spin(76) == -1);
}

TEST_CASE("model JSON round trip and strictness") {
  IsingModel nu(2, {{0, 1, 0.5}}, {0.25, -0.5});
  IsingModel mu(2, {{0, 1, -0.125}}, {0.0, 1.5});
  const ModelPair pair(nu, mu);

  const nlohmann::json j = pair_to_json(pair);
  const ModelPair back = pair_from_json(j);
  CHECK(back.nu() == nu);
  CHECK(back.mu() == mu);

  SUBCASE("extra key rejected") {
    nlohmann::json bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_WITH_AS(pair_from_json(bad), doctest::Contains("extra"), InputError);
  }
  SUBCASE("missing key rejected") {
    nlohmann::json bad = j;
    bad.erase("mu");
    CHECK_THROWS_WITH_AS(pair_from_json(bad), doctest::Contains("mu"), InputError);
  }
  SUBCASE("model extra key rejected, named") {
    nlohmann::json bad = j;
    bad["nu"]["weights"] = 1;
    CHECK_THROWS_WITH_AS(pair_from_json(bad), doctest::Contains("weights"), InputError);
  }
  SUBCASE("bad edge entry rejected") {
    nlohmann::json bad = j;
    bad["nu"]["edges"][0] = {0, 1};
    CHECK_THROWS_AS(pair_from_json(bad), InputError);
  }
  SUBCASE("fields must be numbers") {
    nlohmann::json bad = j;
    bad["nu"]["fields"][0] = "x";
    CHECK_THROWS_WITH_AS(pair_from_json(bad), doctest::Contains("fields"), InputError);
  }
}

TEST_CASE("graph generators") {
  CHECK(path_graph(1).empty());
  CHECK(path_graph(4).size() == 3);
  CHECK(cycle_graph(4).size() == 4);
  CHECK(complete_graph(4).size() == 6);
  CHECK(petersen_graph().size() == 15);

  Rng rng(5);
  const EdgeList regular = random_regular_graph(8, 3, rng);
  CHECK(regular.size() == 12);
  std::vector<int> deg(8, 0);
  for (auto [u, v] : regular) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  for (int d : deg) CHECK(d == 3);

  CHECK_THROWS_AS(random_regular_graph(5, 3, rng), InputError);  // odd n*delta
  CHECK_THROWS_AS(random_regular_graph(3, 3, rng), InputError);  // delta >= n
}
