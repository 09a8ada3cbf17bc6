#pragma once

#include "isingdiv/graphs.hpp"
#include "isingdiv/model.hpp"
#include "isingdiv/rng.hpp"

namespace isingdiv {

struct Interval {
  double lo;
  double hi;
};

/// Model on the given graph with couplings and fields drawn uniformly from the
/// given ranges.
IsingModel random_model(int n, const EdgeList& edges, Interval coupling_range,
                        Interval field_range, Rng& rng);

/// Two independently parameterized models over a shared graph.
ModelPair random_pair(int n, const EdgeList& edges, Interval coupling_range, Interval field_range,
                      Rng& rng);

/// Random graph + random pair: n drawn in [n_min, n_max], edges G(n, p) with
/// p drawn in [0.2, 0.7], parameters uniform in [-1, 1]. The workhorse
/// instance generator of the verification suites.
ModelPair random_test_pair(int n_min, int n_max, Rng& rng);

/// nu = mu plus a uniform perturbation of couplings and fields of magnitude at
/// most `magnitude` (guarantees parameter distance <= magnitude).
ModelPair perturbed_pair(const IsingModel& base, double magnitude, Rng& rng);

/// Pair of unified-coupling models (G, beta_nu) and (G, beta_mu).
ModelPair unified_pair(int n, const EdgeList& edges, double beta_nu, double beta_mu);

}  // namespace isingdiv
