#include "isingdiv/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isingdiv/errors.hpp"

namespace isingdiv {

IsingModel::IsingModel(int n, std::vector<Edge> edges, std::vector<double> fields,
                       double log_offset)
    : n_(n), edges_(std::move(edges)), fields_(std::move(fields)), log_offset_(log_offset) {
  if (n_ < 1) throw InputError("model needs at least one vertex, got n=" + std::to_string(n_));
  if (static_cast<int>(fields_.size()) != n_) {
    throw InputError("fields length " + std::to_string(fields_.size()) +
                     " does not match n=" + std::to_string(n_));
  }
  for (auto& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") out of range for n=" + std::to_string(n_));
    }
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!std::isfinite(e.coupling)) throw InputError("non-finite coupling");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::pair{a.u, a.v} < std::pair{b.u, b.v}; });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v) {
      throw InputError("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                       std::to_string(edges_[i].v) + ")");
    }
  }
  for (double h : fields_) {
    if (!std::isfinite(h)) throw InputError("non-finite field");
  }

  std::vector<int> deg(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());

  adj_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int v = 0; v < n_; ++v) adj_offsets_[static_cast<std::size_t>(v) + 1] = adj_offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
  adj_.resize(static_cast<std::size_t>(adj_offsets_.back()));
  std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)]++)] = {e.v, e.coupling};
    adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)]++)] = {e.u, e.coupling};
  }
  for (int v = 0; v < n_; ++v) {
    std::sort(adj_.begin() + adj_offsets_[static_cast<std::size_t>(v)],
              adj_.begin() + adj_offsets_[static_cast<std::size_t>(v) + 1]);
  }
}

IsingModel IsingModel::unified(int n, const std::vector<std::pair<int, int>>& edges, double beta) {
  if (!(beta > 0.0)) throw InputError("unified model needs beta > 0");
  const double j = 0.5 * std::log(beta);
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [u, v] : edges) es.push_back({u, v, j});
  const double offset = 0.5 * static_cast<double>(edges.size()) * std::log(beta);
  return IsingModel(n, std::move(es), std::vector<double>(static_cast<std::size_t>(n), 0.0),
                    offset);
}

int IsingModel::degree(int v) const {
  return adj_offsets_[static_cast<std::size_t>(v) + 1] - adj_offsets_[static_cast<std::size_t>(v)];
}

double IsingModel::coupling(int u, int v) const {
  if (u == v) return 0.0;
  auto span = neighbors(u);
  auto it = std::lower_bound(span.begin(), span.end(), v,
                             [](const std::pair<int, double>& a, int b) { return a.first < b; });
  if (it != span.end() && it->first == v) return it->second;
  return 0.0;
}

std::span<const std::pair<int, double>> IsingModel::neighbors(int v) const {
  const auto lo = static_cast<std::size_t>(adj_offsets_[static_cast<std::size_t>(v)]);
  const auto hi = static_cast<std::size_t>(adj_offsets_[static_cast<std::size_t>(v) + 1]);
  return {adj_.data() + lo, hi - lo};
}

double IsingModel::log_weight(const Configuration& sigma) const {
  if (sigma.size() != n_) {
    throw InputError("configuration length " + std::to_string(sigma.size()) +
                     " does not match model n=" + std::to_string(n_));
  }
  double acc = log_offset_;
  for (const auto& e : edges_) acc += e.coupling * sigma.spin(e.u) * sigma.spin(e.v);
  for (int v = 0; v < n_; ++v) acc += fields_[static_cast<std::size_t>(v)] * sigma.spin(v);
  return acc;
}

double IsingModel::local_field(const Configuration& sigma, int v) const {
  double a = fields_[static_cast<std::size_t>(v)];
  for (const auto& [u, j] : neighbors(v)) a += j * sigma.spin(u);
  return a;
}

double IsingModel::coupling_sum(const Configuration& sigma) const {
  double acc = 0.0;
  for (const auto& e : edges_) acc += e.coupling * sigma.spin(e.u) * sigma.spin(e.v);
  return acc;
}

double IsingModel::marginal_lower_bound() const {
  double best = 0.5;
  for (int v = 0; v < n_; ++v) {
    for (int c : {+1, -1}) {
      // Worst pinning tau of v's neighborhood: tau_u = -c when J_uv > 0,
      // tau_u = c otherwise, which drives the local field against spin c.
      double a = fields_[static_cast<std::size_t>(v)];
      for (const auto& [u, j] : neighbors(v)) a += j * (j > 0.0 ? -c : c);
      // Conditional marginal exp(c a) / (2 cosh a) = 1 / (1 + exp(-2 c a)).
      const double value = 1.0 / (1.0 + std::exp(-2.0 * c * a));
      best = std::min(best, value);
    }
  }
  return best;
}

ModelPair::ModelPair(IsingModel nu, IsingModel mu) : nu_(std::move(nu)), mu_(std::move(mu)) {
  if (nu_.n() != mu_.n()) {
    throw InputError("pair models disagree on n: " + std::to_string(nu_.n()) + " vs " +
                     std::to_string(mu_.n()));
  }
  for (const auto& e : nu_.edges()) {
    if (e.coupling != 0.0) union_edges_.emplace_back(e.u, e.v);
  }
  for (const auto& e : mu_.edges()) {
    if (e.coupling != 0.0) union_edges_.emplace_back(e.u, e.v);
  }
  std::sort(union_edges_.begin(), union_edges_.end());
  union_edges_.erase(std::unique(union_edges_.begin(), union_edges_.end()), union_edges_.end());
  union_degree_.assign(static_cast<std::size_t>(n()), 0);
  for (auto [u, v] : union_edges_) {
    ++union_degree_[static_cast<std::size_t>(u)];
    ++union_degree_[static_cast<std::size_t>(v)];
  }
}

double ModelPair::parameter_distance() const {
  double d = 0.0;
  for (auto [u, v] : union_edges_) {
    d = std::max(d, std::abs(nu_.coupling(u, v) - mu_.coupling(u, v)));
  }
  for (int v = 0; v < n(); ++v) {
    const double dh = std::abs(nu_.fields()[static_cast<std::size_t>(v)] -
                               mu_.fields()[static_cast<std::size_t>(v)]);
    d = std::max(d, dh / (union_degree(v) + 1.0));
  }
  return d;
}

double ModelPair::marginal_lower_bound() const {
  return std::min(nu_.marginal_lower_bound(), mu_.marginal_lower_bound());
}

double ModelPair::theta() const { return 1.0 / (10.0 * (n() + 3.0 * union_m())); }

IsingModel ModelPair::combine(double k) const {
  std::vector<Edge> edges;
  edges.reserve(union_edges_.size());
  for (auto [u, v] : union_edges_) {
    edges.push_back({u, v, k * nu_.coupling(u, v) - (k - 1.0) * mu_.coupling(u, v)});
  }
  std::vector<double> fields(static_cast<std::size_t>(n()));
  for (int v = 0; v < n(); ++v) {
    fields[static_cast<std::size_t>(v)] = k * nu_.fields()[static_cast<std::size_t>(v)] -
                                          (k - 1.0) * mu_.fields()[static_cast<std::size_t>(v)];
  }
  const double offset = k * nu_.log_offset() - (k - 1.0) * mu_.log_offset();
  return IsingModel(n(), std::move(edges), std::move(fields), offset);
}

}  // namespace isingdiv
