#include "isingdiv/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isingdiv/errors.hpp"
#include "isingdiv/parallel.hpp"

namespace isingdiv {

namespace {

void check_capacity(int n, const ExactLimit& limit, const char* op) {
  if (n > limit.max_n) {
    throw CapacityError(std::string(op) + ": n=" + std::to_string(n) +
                        " exceeds the enumeration limit max_n=" + std::to_string(limit.max_n));
  }
}

std::uint64_t config_count(int n) { return std::uint64_t{1} << n; }

// log(exp(a) + ... ) over all configurations of `term`, evaluated as a
// two-pass log-sum-exp with deterministic chunk order.
template <typename TermFn>
double log_sum_exp_over_configs(int n, int threads, TermFn&& term) {
  const std::uint64_t total = config_count(n);
  auto maxes = map_chunks<double>(total, kDefaultChunk, threads, [&](ChunkRange r) {
    double m = -HUGE_VAL;
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
      m = std::max(m, term(Configuration::from_index(i, n)));
    }
    return m;
  });
  double global_max = -HUGE_VAL;
  for (double m : maxes) global_max = std::max(global_max, m);
  if (!std::isfinite(global_max)) return global_max;

  auto sums = map_chunks<double>(total, kDefaultChunk, threads, [&](ChunkRange r) {
    double s = 0.0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
      s += std::exp(term(Configuration::from_index(i, n)) - global_max);
    }
    return s;
  });
  double s = 0.0;
  for (double p : sums) s += p;
  return global_max + std::log(s);
}

template <typename TermFn>
double sum_over_configs(int n, int threads, TermFn&& term) {
  const std::uint64_t total = config_count(n);
  auto sums = map_chunks<double>(total, kDefaultChunk, threads, [&](ChunkRange r) {
    double s = 0.0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) s += term(Configuration::from_index(i, n));
    return s;
  });
  double s = 0.0;
  for (double p : sums) s += p;
  return s;
}

double binomial(int n, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

}  // namespace

LogPartition partition_function(const IsingModel& model, ExactLimit limit, int threads) {
  check_capacity(model.n(), limit, "partition_function");
  const double log_z = log_sum_exp_over_configs(
      model.n(), threads, [&](const Configuration& c) { return model.log_weight(c); });
  return {log_z, std::exp(log_z)};
}

double gibbs_probability(const IsingModel& model, const Configuration& sigma, ExactLimit limit) {
  check_capacity(model.n(), limit, "gibbs_probability");
  const double log_z = partition_function(model, limit).log_z;
  return std::exp(model.log_weight(sigma) - log_z);
}

double exact_divergence(const ModelPair& pair, DivergenceKind kind, ExactLimit limit) {
  check_capacity(pair.n(), limit, "exact_divergence");
  const double log_z_nu = partition_function(pair.nu(), limit).log_z;
  const double log_z_mu = partition_function(pair.mu(), limit).log_z;
  return sum_over_configs(pair.n(), 1, [&](const Configuration& c) {
    const double log_mu = pair.mu().log_weight(c) - log_z_mu;
    const double log_nu = pair.nu().log_weight(c) - log_z_nu;
    return std::exp(log_mu) * f_value(kind, std::exp(log_nu - log_mu));
  });
}

double exact_tv(const ModelPair& pair, ExactLimit limit) {
  check_capacity(pair.n(), limit, "exact_tv");
  const double log_z_nu = partition_function(pair.nu(), limit).log_z;
  const double log_z_mu = partition_function(pair.mu(), limit).log_z;
  return 0.5 * sum_over_configs(pair.n(), 1, [&](const Configuration& c) {
           return std::abs(std::exp(pair.nu().log_weight(c) - log_z_nu) -
                           std::exp(pair.mu().log_weight(c) - log_z_mu));
         });
}

double exact_marginal(const IsingModel& model, const std::vector<int>& pinning, int v, int c,
                      ExactLimit limit) {
  check_capacity(model.n(), limit, "exact_marginal");
  if (static_cast<int>(pinning.size()) != model.n()) {
    throw InputError("pinning length does not match n");
  }
  if (v < 0 || v >= model.n()) throw InputError("marginal vertex out of range");
  if (pinning[static_cast<std::size_t>(v)] != 0) {
    throw InputError("vertex " + std::to_string(v) + " is pinned");
  }
  if (c != +1 && c != -1) throw InputError("spin must be +1 or -1");

  auto matches = [&](const Configuration& cfg) {
    for (int u = 0; u < model.n(); ++u) {
      const int p = pinning[static_cast<std::size_t>(u)];
      if (p != 0 && cfg.spin(u) != p) return false;
    }
    return true;
  };
  const double log_num = log_sum_exp_over_configs(model.n(), 1, [&](const Configuration& cfg) {
    return (matches(cfg) && cfg.spin(v) == c) ? model.log_weight(cfg) : -HUGE_VAL;
  });
  const double log_den = log_sum_exp_over_configs(model.n(), 1, [&](const Configuration& cfg) {
    return matches(cfg) ? model.log_weight(cfg) : -HUGE_VAL;
  });
  return std::exp(log_num - log_den);
}

ExactGibbs::ExactGibbs(const IsingModel& model, ExactLimit limit) : n_(model.n()) {
  check_capacity(n_, limit, "ExactGibbs");
  const std::uint64_t total = config_count(n_);
  std::vector<double> log_w(total);
  double max_lw = -HUGE_VAL;
  for (std::uint64_t i = 0; i < total; ++i) {
    log_w[i] = model.log_weight(Configuration::from_index(i, n_));
    max_lw = std::max(max_lw, log_w[i]);
  }
  cumulative_.resize(total);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < total; ++i) {
    acc += std::exp(log_w[i] - max_lw);
    cumulative_[i] = acc;
  }
  log_z_ = max_lw + std::log(acc);
  const double norm = cumulative_.back();
  for (auto& cdf : cumulative_) cdf /= norm;
  cumulative_.back() = 1.0;
}

double ExactGibbs::probability(std::uint64_t index) const {
  const double lo = index == 0 ? 0.0 : cumulative_[index - 1];
  return cumulative_[index] - lo;
}

Configuration ExactGibbs::sample(Rng& rng) const {
  const double u = rng.next_unit();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::uint64_t idx = static_cast<std::uint64_t>(
      it == cumulative_.end() ? cumulative_.size() - 1 : it - cumulative_.begin());
  return Configuration::from_index(idx, n_);
}

Configuration exact_sample(const IsingModel& model, Rng& rng, ExactLimit limit) {
  return ExactGibbs(model, limit).sample(rng);
}

double exact_moment_sum(const ModelPair& pair, int alpha, ExactLimit limit) {
  check_capacity(pair.n(), limit, "exact_moment_sum");
  if (alpha < 1) throw InputError("moment sum needs alpha >= 1");
  const double log_z_nu = partition_function(pair.nu(), limit).log_z;
  const double log_z_mu = partition_function(pair.mu(), limit).log_z;
  // log term = log mu + alpha * log(nu/mu + 1), the latter via softplus.
  const double log_sum = log_sum_exp_over_configs(pair.n(), 1, [&](const Configuration& c) {
    const double log_mu = pair.mu().log_weight(c) - log_z_mu;
    const double delta = pair.nu().log_weight(c) - log_z_nu - log_mu;
    const double softplus = delta > 30.0 ? delta : std::log1p(std::exp(delta));
    return log_mu + alpha * softplus;
  });
  return std::exp(log_sum);
}

RatioIdentity exact_ratio_identity(const ModelPair& pair, int k, ExactLimit limit) {
  check_capacity(pair.n(), limit, "exact_ratio_identity");
  const double log_z_nu = partition_function(pair.nu(), limit).log_z;
  const double log_z_mu = partition_function(pair.mu(), limit).log_z;
  const double log_direct = log_sum_exp_over_configs(pair.n(), 1, [&](const Configuration& c) {
    const double log_nu = pair.nu().log_weight(c) - log_z_nu;
    const double log_mu = pair.mu().log_weight(c) - log_z_mu;
    return k * log_nu - (k - 1) * log_mu;
  });
  const double log_z_k = partition_function(pair.combine(k), limit).log_z;
  const double log_ratio = (k - 1) * log_z_mu + log_z_k - k * log_z_nu;
  return {std::exp(log_direct), std::exp(log_ratio)};
}

double exact_even_alpha_expansion(const ModelPair& pair, int alpha, ExactLimit limit) {
  if (alpha < 2 || alpha % 2 != 0) throw InputError("expansion needs even alpha >= 2");
  check_capacity(pair.n(), limit, "exact_even_alpha_expansion");
  const double log_z_nu = partition_function(pair.nu(), limit).log_z;
  const double log_z_mu = partition_function(pair.mu(), limit).log_z;
  double acc = 0.0;
  for (int k = 0; k <= alpha; ++k) {
    const double log_z_k = partition_function(pair.combine(k), limit).log_z;
    const double ratio = std::exp((k - 1) * log_z_mu + log_z_k - k * log_z_nu);
    const double sign = ((alpha - k) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(alpha, k) * ratio;
  }
  return 0.5 * acc;
}

double exact_variance_weight_ratio(const ModelPair& pair, ExactLimit limit) {
  check_capacity(pair.n(), limit, "exact_variance_weight_ratio");
  const double log_z_mu = partition_function(pair.mu(), limit).log_z;
  auto moment = [&](double power) {
    return std::exp(log_sum_exp_over_configs(pair.n(), 1, [&](const Configuration& c) {
      const double log_mu = pair.mu().log_weight(c) - log_z_mu;
      const double delta_w = pair.nu().log_weight(c) - pair.mu().log_weight(c);
      return log_mu + power * delta_w;
    }));
  };
  const double m1 = moment(1.0);
  const double m2 = moment(2.0);
  return std::max(0.0, m2 - m1 * m1);
}

}  // namespace isingdiv
