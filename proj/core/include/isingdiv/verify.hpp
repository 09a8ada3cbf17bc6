#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isingdiv/exact.hpp"
#include "isingdiv/model.hpp"

namespace isingdiv {

struct SuiteCheck {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  double worst = 0.0;  // worst observed margin; sign convention per check
  bool pass = false;
  std::string note;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool pass = true;

  void add(SuiteCheck check) {
    pass = pass && check.pass;
    checks.push_back(std::move(check));
  }
};

struct VerifyParams {
  int n_max = 8;
  std::uint64_t cases = 200;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Interpolation identities: the k-th moment sum vs the partition-ratio form
/// (relative 1e-10, k = 0..6), the even-alpha signed binomial expansion vs the
/// exact chi^alpha divergence (relative 1e-8, alpha in {2,4}), and the
/// closed-form alpha-divergence / squared-Hellinger estimators vs brute force
/// (relative 1e-10, exact backend).
SuiteResult run_identity_suite(const VerifyParams& params);

/// Closed-form lower bounds against brute force: TV vs (b^2/2) d, the
/// two-sided f bound for every catalog kind, the chi^alpha parameter bound,
/// the moment-sum coefficient bound (d >= theta cases), and the weight-ratio
/// variance / range bounds on perturbed pairs (d < theta cases).
SuiteResult run_lemma_suite(const VerifyParams& params);

/// Closed-form moment bound coefficient vs independent numeric minimization
/// (relative 1e-9) over a grid of (alpha, b, theta), and the <= 1/2 cap.
SuiteResult run_bcoeff_suite(const VerifyParams& params);

/// Numeric witness condition x f'(1 + zeta x) / f(1 + x) <= F(zeta) + 1e-9
/// over random draws with zeta in [1, 500], plus the second-derivative bounds
/// L <= f'' <= U on [1/2, 3/2] and the exact witness-coefficient table.
SuiteResult run_condition_suite(const VerifyParams& params);

/// Partition-function domination and sandwich inequalities for unified-model
/// pairs on path / cycle / complete / Petersen graphs.
SuiteResult run_hardness_suite(const VerifyParams& params);

/// Oracle contracts: exact-backend sampler empirical TV, noisy-backend count
/// success fraction, and median-boosted counting.
SuiteResult run_oracle_suite(const VerifyParams& params);

/// End-to-end estimator contract on the two fixed reference instances
/// (small-distance single-vertex pair, large-distance two-vertex pair):
/// at least 20 of 30 seeded trials inside e^{+-0.3} of brute force for each
/// catalog kind, exact backend.
SuiteResult run_estimator_contract_suite(const VerifyParams& params);

/// Every suite above, in order.
std::vector<SuiteResult> run_all_suites(const VerifyParams& params);

/// Suite lookup by name: identities, lemmas, bcoeff, condition, hardness,
/// oracles, estimators.
SuiteResult run_suite(const std::string& name, const VerifyParams& params);

}  // namespace isingdiv
