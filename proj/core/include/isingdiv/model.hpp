#pragma once

#include <span>
#include <utility>
#include <vector>

#include "isingdiv/configuration.hpp"

namespace isingdiv {

struct Edge {
  int u;
  int v;
  double coupling;

  bool operator==(const Edge&) const = default;
};

/// An Ising model (G, J, h): a graph with one symmetric coupling per unordered
/// edge and an external field per vertex. The log-weight of a configuration is
///
///   log w(sigma) = sum_{(u,v) in E} J_uv sigma_u sigma_v
///                + sum_v h_v sigma_v + log_offset,
///
/// i.e. 1/2 sigma^T J sigma + h^T sigma with the symmetric J stored once per
/// unordered pair. `log_offset` is a configuration-independent constant; it is
/// zero for ordinary models and is used by `unified` so that the weight of
/// sigma equals beta^(#monochromatic edges) exactly.
///
/// Immutable after construction, safe to share across threads.
class IsingModel {
 public:
  IsingModel(int n, std::vector<Edge> edges, std::vector<double> fields, double log_offset = 0.0);

  /// Zero-field model with coupling ln(beta)/2 on every listed edge plus the
  /// constant (m/2) ln(beta), so that w(sigma) = beta^{m(sigma)} where
  /// m(sigma) counts monochromatic edges. Requires beta > 0.
  static IsingModel unified(int n, const std::vector<std::pair<int, int>>& edges, double beta);

  int n() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int max_degree() const { return max_degree_; }
  int degree(int v) const;
  double log_offset() const { return log_offset_; }

  /// Edges in canonical order: u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& fields() const { return fields_; }

  /// Coupling on {u,v}; 0 for absent edges.
  double coupling(int u, int v) const;

  /// Adjacency of v as (neighbor, coupling) pairs sorted by neighbor.
  std::span<const std::pair<int, double>> neighbors(int v) const;

  double log_weight(const Configuration& sigma) const;

  /// h_v + sum over neighbors u of J_uv sigma_u.
  double local_field(const Configuration& sigma, int v) const;

  /// sum_{(u,v) in E} J_uv sigma_u sigma_v (no fields, no offset).
  double coupling_sum(const Configuration& sigma) const;

  /// The largest b such that every conditional single-vertex marginal, under
  /// any pinning of other vertices, is at least b. Computed by evaluating the
  /// worst-case pinning of each vertex's neighborhood; O(n + m). Lies in (0, 1/2]
  /// for finite parameters (0 if couplings/fields overflow the exponential).
  double marginal_lower_bound() const;

  bool operator==(const IsingModel&) const = default;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<double> fields_;
  double log_offset_;
  int max_degree_ = 0;
  // CSR adjacency
  std::vector<int> adj_offsets_;
  std::vector<std::pair<int, double>> adj_;
};

/// Two models over the same vertex set. Edge sets may differ; all size and
/// degree quantities below refer to the union graph of both models'
/// nonzero-coupling edges, and absent couplings are treated as 0.
class ModelPair {
 public:
  ModelPair(IsingModel nu, IsingModel mu);

  const IsingModel& nu() const { return nu_; }
  const IsingModel& mu() const { return mu_; }

  int n() const { return nu_.n(); }
  const std::vector<std::pair<int, int>>& union_edges() const { return union_edges_; }
  int union_m() const { return static_cast<int>(union_edges_.size()); }
  int union_degree(int v) const { return union_degree_[static_cast<std::size_t>(v)]; }

  /// max( max_edge |J_nu - J_mu| , max_v |h_nu(v) - h_mu(v)| / (deg(v)+1) )
  /// with degrees taken in the union graph.
  double parameter_distance() const;

  /// min of the two models' marginal lower bounds.
  double marginal_lower_bound() const;

  /// Regime threshold 1 / (10 (n + 3m)).
  double theta() const;

  /// Model with J = k*J_nu - (k-1)*J_mu and h = k*h_nu - (k-1)*h_mu on the
  /// union edge set; k = 1 gives nu, k = 0 gives mu, k = 1/2 the averaged
  /// model. k may be any real.
  IsingModel combine(double k) const;

 private:
  IsingModel nu_;
  IsingModel mu_;
  std::vector<std::pair<int, int>> union_edges_;
  std::vector<int> union_degree_;
};

}  // namespace isingdiv
