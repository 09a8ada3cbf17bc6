#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isingdiv/divergences.hpp"
#include "isingdiv/exact.hpp"
#include "isingdiv/graphs.hpp"
#include "isingdiv/model.hpp"

namespace isingdiv {

/// (b^2 / 2) * d_par, a certified lower bound on the TV distance.
double tv_lower_bound(const ModelPair& pair);

struct FLowerBound {
  double from_parameter_distance;        // max{ f(1 - b^2 d/2), f(1 + b^2 d/2) }
  std::optional<double> from_exact_tv;   // max{ f(1 - tv), f(1 + tv) } when tv given
};

FLowerBound f_lower_bound(const ModelPair& pair, DivergenceKind kind,
                          std::optional<double> exact_tv = std::nullopt);

struct ChiLowerBound {
  double from_parameter_distance;        // (b^{2a} / 2) * d_par^a
  std::optional<double> from_exact_tv;   // 2^{a-1} tv^a when tv given
};

ChiLowerBound chi_alpha_lower_bound(const ModelPair& pair, int alpha,
                                    std::optional<double> exact_tv = std::nullopt);

/// The coefficient B relating the chi^alpha divergence to the moment sum
/// E_mu[(nu/mu + 1)^alpha] when the parameter distance is at least theta:
///
///   B = 1 / min_t [ 2(2+t)^a / (b^{2a} theta^a) + 2(1 + 2/t)^a ]
///     = (1/2) (t* / (t* + 2))^{a+1},  t* = (2 b^{2a} theta^a)^{1/(a+1)},
///
/// which is Theta(theta^a) as theta -> 0 and always < 1/2.
struct MomentBoundCoefficient {
  double value;
  double t_star;
};

MomentBoundCoefficient moment_bound_coefficient(int alpha, double b, double theta);

/// Independent numerical route to the same coefficient: grid scan plus
/// golden-section refinement of the objective above. Used to cross-check the
/// closed form.
double moment_bound_coefficient_numeric(int alpha, double b, double theta);

struct CheckReport {
  bool applicable = true;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs for >= checks
  std::string detail;
};

/// Verifies exactly that chi^alpha divergence >= B * moment sum, for d >= theta.
CheckReport moment_sandwich_check(const ModelPair& pair, int alpha, double theta,
                                  ExactLimit limit = {});

struct DominationStep {
  int k;
  double lhs_log;  // log(Z_mu * Z_{k+1})
  double rhs_log;  // log(Z_nu * Z_k / 2)
  bool holds;
};

struct DominationReport {
  bool holds = true;
  std::vector<DominationStep> steps;
};

/// For unified models (G, beta_nu), (G, beta_mu) with beta_mu > beta_nu > 0:
/// checks Z_mu Z_{k+1} >= (1/2) Z_nu Z_k for 0 <= k <= alpha-1, where Z_k is
/// the partition function of (G, beta_nu^k / beta_mu^{k-1}).
DominationReport domination_check(int n, const EdgeList& edges, double beta_nu, double beta_mu,
                                  int alpha, ExactLimit limit = {});

struct SandwichReport {
  bool holds = false;
  double ratio = 0.0;  // (Z_nu^a / Z_mu^{a-1}) * moment_sum / Z(G, beta)
  double upper = 0.0;  // 3^a
  double beta = 0.0;   // (beta_nu / beta_mu)^a * beta_mu
};

/// Checks Z(G,beta) <= (Z_nu^a / Z_mu^{a-1}) * E_mu[(nu/mu+1)^a] <= 3^a Z(G,beta)
/// with beta = (beta_nu/beta_mu)^a beta_mu, everything exact.
SandwichReport hardness_sandwich_check(int n, const EdgeList& edges, double beta_nu,
                                       double beta_mu, int alpha, ExactLimit limit = {});

struct BoundEntry {
  std::string name;
  double bound;
  std::optional<double> exact;
  std::optional<bool> holds;
  double slack = 0.0;
};

struct BoundsReport {
  double d_par = 0.0;
  double b = 0.0;
  double theta = 0.0;
  std::vector<BoundEntry> entries;
  bool all_hold = true;
};

/// Evaluates every closed-form lower bound for the pair (TV, each requested
/// f-divergence kind, chi^alpha for each requested order, and the moment-sum
/// coefficient inequality) and, when `with_exact`, compares against brute
/// force.
BoundsReport bounds_report(const ModelPair& pair, const std::vector<DivergenceKind>& kinds,
                           const std::vector<int>& chi_alphas, bool with_exact,
                           ExactLimit limit = {});

}  // namespace isingdiv
