#include "isingdiv/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "isingdiv/errors.hpp"

namespace isingdiv {

namespace {

Configuration uniform_configuration(int n, Rng& rng) {
  Configuration c(n);
  for (int v = 0; v < n; ++v) c.set_spin(v, rng.next_bool() ? +1 : -1);
  return c;
}

std::uint64_t glauber_sweeps_for(const IsingModel& model, double multiplier, double eps_tv) {
  const double n = model.n();
  const double raw = multiplier * n * std::log(n / eps_tv);
  return raw <= 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(raw));
}

}  // namespace

Backend parse_backend(const std::string& name) {
  if (name == "exact") return Backend::Exact;
  if (name == "glauber") return Backend::Glauber;
  if (name == "noisy") return Backend::NoisyExact;
  throw InputError("unknown backend \"" + name + "\" (expected exact, glauber, noisy)");
}

std::string backend_name(Backend backend) {
  switch (backend) {
    case Backend::Exact: return "exact";
    case Backend::Glauber: return "glauber";
    case Backend::NoisyExact: return "noisy";
  }
  return "?";
}

void glauber_sweep(const IsingModel& model, Configuration& sigma, Rng& rng) {
  const int n = model.n();
  for (int step = 0; step < n; ++step) {
    const int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const double a = model.local_field(sigma, v);
    // Heat bath: P(sigma_v = +1 | rest) = 1 / (1 + exp(-2a)).
    const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * a));
    sigma.set_spin(v, rng.next_unit() < p_plus ? +1 : -1);
  }
}

SamplerHandle::SamplerHandle(const OracleBundle& bundle, const IsingModel& model, double eps_tv)
    : backend_(bundle.backend), eps_tv_(eps_tv), model_(model) {
  if (!(eps_tv > 0.0)) throw InputError("sampling oracle needs eps_tv > 0");
  switch (backend_) {
    case Backend::Exact:
    case Backend::NoisyExact:
      table_ = std::make_shared<ExactGibbs>(model_, bundle.exact_limit);
      break;
    case Backend::Glauber:
      sweeps_ = glauber_sweeps_for(model_, bundle.glauber_sweep_multiplier, eps_tv);
      break;
  }
}

Configuration SamplerHandle::draw(Rng& rng) const {
  switch (backend_) {
    case Backend::Exact:
      return table_->sample(rng);
    case Backend::NoisyExact: {
      // Adversarial resample with probability eps_tv; perfect otherwise.
      if (rng.next_unit() < eps_tv_) return uniform_configuration(model_.n(), rng);
      return table_->sample(rng);
    }
    case Backend::Glauber: {
      Configuration c = uniform_configuration(model_.n(), rng);
      for (std::uint64_t s = 0; s < sweeps_; ++s) glauber_sweep(model_, c, rng);
      return c;
    }
  }
  return Configuration(model_.n());
}

Configuration oracle_sample(const OracleBundle& bundle, const IsingModel& model, double eps_tv,
                            Rng& rng) {
  return SamplerHandle(bundle, model, eps_tv).draw(rng);
}

namespace {

// Annealed product estimator along the path that scales all couplings (and
// the log offset) by t while keeping the fields, so level 0 has the closed
// form Z_0 = prod_v 2 cosh(h_v). Consecutive ratios Z_{t+1}/Z_t are estimated
// as empirical means of exp(dt * (coupling_sum + offset)) over heat-bath
// samples at level t, warm-started level to level. Accuracy is heuristic;
// validated empirically in the test suite.
double annealed_log_partition(const OracleBundle& bundle, const IsingModel& model, double eps_rel,
                              Rng& rng) {
  const int n = model.n();
  const int m = model.num_edges();
  const std::uint64_t levels_raw =
      static_cast<std::uint64_t>(n + m) * static_cast<std::uint64_t>(std::ceil(1.0 / eps_rel));
  const int levels = static_cast<int>(std::min<std::uint64_t>(
      levels_raw, static_cast<std::uint64_t>(bundle.annealing_level_cap)));
  const double samples_raw = 64.0 * levels / (eps_rel * eps_rel);
  const int samples = static_cast<int>(std::min(samples_raw,
      static_cast<double>(bundle.annealing_sample_cap)));

  double log_z = 0.0;
  for (double h : model.fields()) log_z += std::log(2.0 * std::cosh(h));
  if (m == 0 && model.log_offset() == 0.0) return log_z;

  const double dt = 1.0 / levels;
  const double burn_raw = bundle.glauber_sweep_multiplier *
                          std::log(std::max(2, n) * levels / eps_rel);
  const std::uint64_t burn = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(burn_raw));

  // Level-t model: couplings t*J, fields h, offset t*c.
  auto level_model = [&](double t) {
    std::vector<Edge> es = model.edges();
    for (auto& e : es) e.coupling *= t;
    return IsingModel(n, std::move(es), model.fields(), t * model.log_offset());
  };

  Configuration sigma = uniform_configuration(n, rng);
  for (int j = 0; j < levels; ++j) {
    const IsingModel current = level_model(j * dt);
    for (std::uint64_t s = 0; s < burn; ++s) glauber_sweep(current, sigma, rng);
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      glauber_sweep(current, sigma, rng);
      acc += std::exp(dt * (model.coupling_sum(sigma) + model.log_offset()));
    }
    log_z += std::log(acc / samples);
  }
  return log_z;
}

}  // namespace

CountEstimate oracle_count(const OracleBundle& bundle, const IsingModel& model, double eps_rel,
                           Rng& rng) {
  if (!(eps_rel > 0.0)) throw InputError("counting oracle needs eps_rel > 0");
  switch (bundle.backend) {
    case Backend::Exact:
      return {partition_function(model, bundle.exact_limit).log_z, eps_rel, bundle.backend};
    case Backend::NoisyExact: {
      const double log_z = partition_function(model, bundle.exact_limit).log_z;
      const bool ok = rng.next_unit() < 0.99;
      const double noise = ok ? rng.next_in(-eps_rel, eps_rel) : 3.0 * eps_rel;
      return {log_z + noise, eps_rel, bundle.backend};
    }
    case Backend::Glauber:
      return {annealed_log_partition(bundle, model, eps_rel, rng), eps_rel, bundle.backend};
  }
  throw InputError("unknown backend");
}

CountEstimate oracle_count_median(const OracleBundle& bundle, const IsingModel& model,
                                  double eps_rel, int repetitions, Rng& rng) {
  if (repetitions < 1 || repetitions % 2 == 0) {
    throw InputError("count_median needs an odd repetition count >= 1");
  }
  std::vector<double> values(static_cast<std::size_t>(repetitions));
  for (auto& v : values) {
    Rng sub(rng.next_u64());
    v = oracle_count(bundle, model, eps_rel, sub).log_z_hat;
  }
  auto mid = values.begin() + repetitions / 2;
  std::nth_element(values.begin(), mid, values.end());
  return {*mid, eps_rel, bundle.backend};
}

}  // namespace isingdiv
