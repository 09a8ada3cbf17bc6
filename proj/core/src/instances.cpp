#include "isingdiv/instances.hpp"

#include <algorithm>

namespace isingdiv {

IsingModel random_model(int n, const EdgeList& edges, Interval coupling_range,
                        Interval field_range, Rng& rng) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [u, v] : edges) es.push_back({u, v, rng.next_in(coupling_range.lo, coupling_range.hi)});
  std::vector<double> fields(static_cast<std::size_t>(n));
  for (auto& h : fields) h = rng.next_in(field_range.lo, field_range.hi);
  return IsingModel(n, std::move(es), std::move(fields));
}

ModelPair random_pair(int n, const EdgeList& edges, Interval coupling_range, Interval field_range,
                      Rng& rng) {
  IsingModel nu = random_model(n, edges, coupling_range, field_range, rng);
  IsingModel mu = random_model(n, edges, coupling_range, field_range, rng);
  return ModelPair(std::move(nu), std::move(mu));
}

ModelPair random_test_pair(int n_min, int n_max, Rng& rng) {
  const int n = n_min + static_cast<int>(rng.next_below(
                    static_cast<std::uint64_t>(n_max - n_min + 1)));
  const double p = rng.next_in(0.2, 0.7);
  EdgeList edges = random_graph(n, p, rng);
  return random_pair(n, edges, {-1.0, 1.0}, {-1.0, 1.0}, rng);
}

ModelPair perturbed_pair(const IsingModel& base, double magnitude, Rng& rng) {
  std::vector<Edge> es = base.edges();
  for (auto& e : es) e.coupling += rng.next_in(-magnitude, magnitude);
  std::vector<double> fields = base.fields();
  for (auto& h : fields) h += rng.next_in(-magnitude, magnitude);
  IsingModel nu(base.n(), std::move(es), std::move(fields), base.log_offset());
  return ModelPair(std::move(nu), base);
}

ModelPair unified_pair(int n, const EdgeList& edges, double beta_nu, double beta_mu) {
  return ModelPair(IsingModel::unified(n, edges, beta_nu), IsingModel::unified(n, edges, beta_mu));
}

}  // namespace isingdiv
