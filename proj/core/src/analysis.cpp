#include "isingdiv/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "isingdiv/errors.hpp"

namespace isingdiv {

namespace {

double powi(double x, int k) {
  double acc = 1.0;
  double base = x;
  for (; k > 0; k >>= 1) {
    if (k & 1) acc *= base;
    base *= base;
  }
  return acc;
}

}  // namespace

double tv_lower_bound(const ModelPair& pair) {
  const double b = pair.marginal_lower_bound();
  return 0.5 * b * b * pair.parameter_distance();
}

FLowerBound f_lower_bound(const ModelPair& pair, DivergenceKind kind,
                          std::optional<double> exact_tv) {
  auto two_sided = [&](double t) {
    double best = f_value(kind, 1.0 + t);
    if (1.0 - t > 0.0) best = std::max(best, f_value(kind, 1.0 - t));
    return best;
  };
  FLowerBound out{two_sided(tv_lower_bound(pair)), std::nullopt};
  if (exact_tv) out.from_exact_tv = two_sided(*exact_tv);
  return out;
}

ChiLowerBound chi_alpha_lower_bound(const ModelPair& pair, int alpha,
                                    std::optional<double> exact_tv) {
  if (alpha < 1) throw InputError("chi lower bound needs alpha >= 1");
  const double b = pair.marginal_lower_bound();
  const double d = pair.parameter_distance();
  ChiLowerBound out{0.5 * powi(b, 2 * alpha) * powi(d, alpha), std::nullopt};
  if (exact_tv) out.from_exact_tv = powi(2.0, alpha - 1) * powi(*exact_tv, alpha);
  return out;
}

MomentBoundCoefficient moment_bound_coefficient(int alpha, double b, double theta) {
  if (alpha < 1) throw InputError("coefficient needs alpha >= 1");
  if (!(b > 0.0) || b > 1.0) throw InputError("coefficient needs b in (0, 1]");
  if (!(theta > 0.0) || theta > 1.0) throw InputError("coefficient needs theta in (0, 1]");
  // Stationary point of g: t^(alpha+1) = 2 b^(2 alpha) theta^alpha, at which
  // g collapses to 2 (1 + 2/t)^(alpha+1).
  const double c = powi(b, 2 * alpha) * powi(theta, alpha);
  const double t_star = std::pow(2.0 * c, 1.0 / (alpha + 1));
  const double value = 0.5 * std::pow(t_star / (t_star + 2.0), alpha + 1);
  return {value, t_star};
}

double moment_bound_coefficient_numeric(int alpha, double b, double theta) {
  const double base = powi(b, 2 * alpha) * powi(theta, alpha);
  auto objective = [&](double t) {
    return 2.0 * powi(2.0 + t, alpha) / base + 2.0 * powi(1.0 + 2.0 / t, alpha);
  };
  // Scan log t for a bracket, then golden-section to convergence. The
  // stationary point (2 b^{2a} theta^a)^{1/(a+1)} never exceeds sqrt(2) for
  // b, theta <= 1, so the window is generous.
  const double lo = std::log(1e-14), hi = std::log(10.0);
  constexpr int kGrid = 2000;
  double best_u = lo, best_g = HUGE_VAL;
  for (int i = 0; i <= kGrid; ++i) {
    const double u = lo + (hi - lo) * i / kGrid;
    const double g = objective(std::exp(u));
    if (g < best_g) {
      best_g = g;
      best_u = u;
    }
  }
  const double step = (hi - lo) / kGrid;
  double a = best_u - step, c = best_u + step;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - inv_phi * (c - a), x2 = a + inv_phi * (c - a);
  double g1 = objective(std::exp(x1)), g2 = objective(std::exp(x2));
  for (int it = 0; it < 200; ++it) {
    if (g1 < g2) {
      c = x2;
      x2 = x1;
      g2 = g1;
      x1 = c - inv_phi * (c - a);
      g1 = objective(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + inv_phi * (c - a);
      g2 = objective(std::exp(x2));
    }
  }
  return 1.0 / std::min(g1, g2);
}

CheckReport moment_sandwich_check(const ModelPair& pair, int alpha, double theta,
                                  ExactLimit limit) {
  CheckReport report;
  const double d = pair.parameter_distance();
  if (d < theta) {
    report.applicable = false;
    report.detail = "parameter distance below theta; bound not applicable";
    return report;
  }
  const double b = pair.marginal_lower_bound();
  const double coeff = moment_bound_coefficient(alpha, b, theta).value;
  report.lhs = exact_divergence(pair, DivergenceKind::chi(alpha), limit);
  report.rhs = coeff * exact_moment_sum(pair, alpha, limit);
  report.slack = report.lhs - report.rhs;
  report.holds = report.lhs >= report.rhs * (1.0 - 1e-12);
  return report;
}

DominationReport domination_check(int n, const EdgeList& edges, double beta_nu, double beta_mu,
                                  int alpha, ExactLimit limit) {
  if (!(beta_nu > 0.0) || !(beta_mu > beta_nu)) {
    throw InputError("domination check needs beta_mu > beta_nu > 0");
  }
  if (alpha < 1) throw InputError("domination check needs alpha >= 1");
  auto log_z_for = [&](int k) {
    const double log_beta_k = k * std::log(beta_nu) - (k - 1) * std::log(beta_mu);
    return partition_function(IsingModel::unified(n, edges, std::exp(log_beta_k)), limit).log_z;
  };
  const double log_z_mu = log_z_for(0);
  const double log_z_nu = log_z_for(1);
  DominationReport report;
  double log_z_k = log_z_mu;
  for (int k = 0; k < alpha; ++k) {
    const double log_z_k1 = log_z_for(k + 1);
    DominationStep step;
    step.k = k;
    step.lhs_log = log_z_mu + log_z_k1;
    step.rhs_log = std::log(0.5) + log_z_nu + log_z_k;
    step.holds = step.lhs_log >= step.rhs_log - 1e-12;
    report.holds = report.holds && step.holds;
    report.steps.push_back(step);
    log_z_k = log_z_k1;
  }
  return report;
}

SandwichReport hardness_sandwich_check(int n, const EdgeList& edges, double beta_nu,
                                       double beta_mu, int alpha, ExactLimit limit) {
  if (!(beta_nu > 0.0) || !(beta_mu > beta_nu)) {
    throw InputError("sandwich check needs beta_mu > beta_nu > 0");
  }
  if (alpha < 1) throw InputError("sandwich check needs alpha >= 1");
  SandwichReport report;
  const double log_beta = alpha * std::log(beta_nu) - (alpha - 1) * std::log(beta_mu);
  report.beta = std::exp(log_beta);
  report.upper = powi(3.0, alpha);

  const IsingModel nu = IsingModel::unified(n, edges, beta_nu);
  const IsingModel mu = IsingModel::unified(n, edges, beta_mu);
  const ModelPair pair(nu, mu);
  const double log_z_nu = partition_function(nu, limit).log_z;
  const double log_z_mu = partition_function(mu, limit).log_z;
  const double log_z_beta =
      partition_function(IsingModel::unified(n, edges, report.beta), limit).log_z;
  const double moment = exact_moment_sum(pair, alpha, limit);
  const double log_middle = alpha * log_z_nu - (alpha - 1) * log_z_mu + std::log(moment);
  report.ratio = std::exp(log_middle - log_z_beta);
  report.holds = report.ratio >= 1.0 - 1e-9 && report.ratio <= report.upper * (1.0 + 1e-9);
  return report;
}

BoundsReport bounds_report(const ModelPair& pair, const std::vector<DivergenceKind>& kinds,
                           const std::vector<int>& chi_alphas, bool with_exact,
                           ExactLimit limit) {
  BoundsReport report;
  report.d_par = pair.parameter_distance();
  report.b = pair.marginal_lower_bound();
  report.theta = pair.theta();

  auto push = [&](std::string name, double bound, std::optional<double> exact) {
    BoundEntry entry{std::move(name), bound, exact, std::nullopt, 0.0};
    if (exact) {
      entry.slack = *exact - bound;
      entry.holds = *exact >= bound * (1.0 - 1e-12) - 1e-300;
      report.all_hold = report.all_hold && *entry.holds;
    }
    report.entries.push_back(std::move(entry));
  };

  std::optional<double> tv;
  if (with_exact) tv = exact_tv(pair, limit);
  push("tv", tv_lower_bound(pair), tv);
  for (const auto& kind : kinds) {
    std::optional<double> exact;
    if (with_exact) exact = exact_divergence(pair, kind, limit);
    push(kind.spec_string(), f_lower_bound(pair, kind).from_parameter_distance, exact);
  }
  for (int alpha : chi_alphas) {
    std::optional<double> exact;
    if (with_exact) exact = exact_divergence(pair, DivergenceKind::chi(alpha), limit);
    push("chi:" + std::to_string(alpha) + ":parameter",
         chi_alpha_lower_bound(pair, alpha).from_parameter_distance, exact);
    if (with_exact) {
      push("chi:" + std::to_string(alpha) + ":tv",
           chi_alpha_lower_bound(pair, alpha, tv).from_exact_tv.value(), exact);
      const auto sandwich = moment_sandwich_check(pair, alpha, report.theta, limit);
      if (sandwich.applicable) {
        BoundEntry entry{"chi:" + std::to_string(alpha) + ":moment", sandwich.rhs, sandwich.lhs,
                         sandwich.holds, sandwich.slack};
        report.all_hold = report.all_hold && sandwich.holds;
        report.entries.push_back(std::move(entry));
      }
    }
  }
  return report;
}

}  // namespace isingdiv
