#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "isingdiv/exact.hpp"
#include "isingdiv/model.hpp"
#include "isingdiv/rng.hpp"

namespace isingdiv {

enum class Backend { Exact, Glauber, NoisyExact };

Backend parse_backend(const std::string& name);
std::string backend_name(Backend backend);

/// Configuration of the sampling / approximate-counting oracle realizations.
///
///   Exact       perfect samples and exact log Z by enumeration (n capped).
///   Glauber     single-site heat-bath dynamics for sampling; annealed product
///               estimator for counting. No a-priori accuracy guarantee
///               outside rapid-mixing regimes; the sweep policy below is
///               configuration, not a correctness claim.
///   NoisyExact  exact backend plus injected noise that exercises exactly the
///               advertised oracle contracts, including the 1% counting
///               failure mode. For estimator robustness tests.
struct OracleBundle {
  Backend backend = Backend::Exact;

  /// Glauber sweep multiplier C: a sample runs ceil(C n ln(n/eps)) full
  /// sweeps, each sweep being n random-scan heat-bath updates.
  double glauber_sweep_multiplier = 20.0;

  /// Repetitions for count_median when the caller does not pass its own;
  /// must be odd. Unset = estimator-chosen default.
  std::optional<int> counting_repetitions;

  /// Annealed-counting caps (Glauber backend): levels L and per-level samples
  /// S are computed from the error target and clipped to these.
  int annealing_level_cap = 400;
  int annealing_sample_cap = 20000;

  ExactLimit exact_limit{};
};

struct CountEstimate {
  double log_z_hat;
  double epsilon_rel;
  Backend backend;
};

/// One sample within total-variation error eps_tv of the Gibbs distribution
/// (exactly for the Exact backend). Builds per-call state; use SamplerHandle
/// for repeated draws from one model.
Configuration oracle_sample(const OracleBundle& bundle, const IsingModel& model, double eps_tv,
                            Rng& rng);

/// Prepared sampler for repeated draws from a fixed model at a fixed error
/// level. Immutable after construction; draw() is safe to call concurrently
/// with independent Rng streams.
class SamplerHandle {
 public:
  SamplerHandle(const OracleBundle& bundle, const IsingModel& model, double eps_tv);
  Configuration draw(Rng& rng) const;

 private:
  Backend backend_;
  double eps_tv_;
  IsingModel model_;
  std::shared_ptr<const ExactGibbs> table_;  // Exact / NoisyExact
  std::uint64_t sweeps_ = 0;                 // Glauber
};

/// Estimate of log Z with relative error target eps_rel (in the e^{+-eps}
/// sense, with probability >= 0.99 per the oracle contract).
CountEstimate oracle_count(const OracleBundle& bundle, const IsingModel& model, double eps_rel,
                           Rng& rng);

/// Median of an odd number of independent count calls; failure probability
/// decays exponentially in `repetitions`.
CountEstimate oracle_count_median(const OracleBundle& bundle, const IsingModel& model,
                                  double eps_rel, int repetitions, Rng& rng);

/// One full Glauber sweep (n random-scan heat-bath updates) in place.
void glauber_sweep(const IsingModel& model, Configuration& sigma, Rng& rng);

}  // namespace isingdiv
