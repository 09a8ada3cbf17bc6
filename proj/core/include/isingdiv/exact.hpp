#pragma once

#include <cstdint>
#include <vector>

#include "isingdiv/divergences.hpp"
#include "isingdiv/model.hpp"
#include "isingdiv/rng.hpp"

namespace isingdiv {

/// Hard cap on brute-force enumeration; 2^22 (~4M) configurations by default.
struct ExactLimit {
  int max_n = 22;
};

struct LogPartition {
  double log_z;
  double z;
};

/// Z = sum over all 2^n configurations of exp(log_weight), log-sum-exp
/// stabilized. Chunked deterministically, so the result is bit-stable for any
/// worker count.
LogPartition partition_function(const IsingModel& model, ExactLimit limit = {}, int threads = 1);

double gibbs_probability(const IsingModel& model, const Configuration& sigma,
                         ExactLimit limit = {});

/// sum_sigma mu(sigma) f(nu(sigma)/mu(sigma)), ratios formed in log domain.
double exact_divergence(const ModelPair& pair, DivergenceKind kind, ExactLimit limit = {});

/// (1/2) sum_sigma |nu(sigma) - mu(sigma)|.
double exact_tv(const ModelPair& pair, ExactLimit limit = {});

/// Conditional marginal P(sigma_v = c | pinning). `pinning` has one entry per
/// vertex: 0 = free, +1/-1 = pinned spin. v must be free.
double exact_marginal(const IsingModel& model, const std::vector<int>& pinning, int v, int c,
                      ExactLimit limit = {});

/// Precomputed Gibbs table over all 2^n configurations: exact probabilities
/// and inverse-CDF perfect sampling.
class ExactGibbs {
 public:
  ExactGibbs(const IsingModel& model, ExactLimit limit = {});

  double log_z() const { return log_z_; }
  int n() const { return n_; }
  double probability(std::uint64_t index) const;
  Configuration sample(Rng& rng) const;

 private:
  int n_;
  double log_z_;
  std::vector<double> cumulative_;  // normalized CDF over index order
};

/// One perfect sample; builds the full table, so prefer ExactGibbs to draw
/// many.
Configuration exact_sample(const IsingModel& model, Rng& rng, ExactLimit limit = {});

/// sum_sigma mu(sigma) (nu(sigma)/mu(sigma) + 1)^alpha.
double exact_moment_sum(const ModelPair& pair, int alpha, ExactLimit limit = {});

struct RatioIdentity {
  double direct_sum;       // sum_sigma nu^k(sigma) / mu^(k-1)(sigma)
  double partition_ratio;  // Z_mu^(k-1) Z_k / Z_nu^k
};

/// Both sides of the interpolation identity relating the k-th moment sum to
/// partition functions of the combined model.
RatioIdentity exact_ratio_identity(const ModelPair& pair, int k, ExactLimit limit = {});

/// Even alpha only: the signed binomial sum
/// (1/2) sum_k C(alpha,k) (-1)^(alpha-k) Z_mu^(k-1) Z_k / Z_nu^k,
/// which equals the chi^alpha divergence.
double exact_even_alpha_expansion(const ModelPair& pair, int alpha, ExactLimit limit = {});

/// Variance under mu of the weight ratio W = w_nu(sigma) / w_mu(sigma).
double exact_variance_weight_ratio(const ModelPair& pair, ExactLimit limit = {});

}  // namespace isingdiv
