#include "isingdiv/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "isingdiv/analysis.hpp"
#include "isingdiv/errors.hpp"
#include "isingdiv/parallel.hpp"
#include "isingdiv/rng.hpp"

namespace isingdiv {

namespace {

constexpr std::uint64_t kSampleStream = 0x53;
constexpr std::uint64_t kCountStream = 0xC0;

struct PairContext {
  double d;
  double theta;
  double b;
  int n;
  int m;
};

PairContext make_context(const ModelPair& pair) {
  PairContext ctx;
  ctx.d = pair.parameter_distance();
  ctx.theta = pair.theta();
  ctx.b = pair.marginal_lower_bound();
  ctx.n = pair.n();
  ctx.m = pair.union_m();
  if (!(ctx.b > 0.0)) {
    throw CapacityError("marginal lower bound underflows to zero; parameters too extreme");
  }
  return ctx;
}

void validate_config(const EstimatorConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 1.0)) {
    throw InputError("estimator epsilon must be in (0, 1)");
  }
}

std::uint64_t resolve_samples(const EstimatorConfig& cfg, double theory_value, const char* what) {
  if (cfg.mode == EstimatorMode::Practical) {
    if (!cfg.t_override || *cfg.t_override == 0) {
      throw InputError(std::string(what) + ": practical mode needs an explicit sample count");
    }
    return *cfg.t_override;
  }
  if (!(theory_value <= cfg.theory_sample_cap)) {
    throw CapacityError(std::string(what) + ": theory-faithful sample count " +
                        std::to_string(theory_value) +
                        " exceeds the cap; rerun in practical mode with an explicit sample count");
  }
  return static_cast<std::uint64_t>(std::ceil(theory_value));
}

double resolve_count_error(const EstimatorConfig& cfg, double theory_delta) {
  if (cfg.mode == EstimatorMode::Practical) {
    return std::max(theory_delta, cfg.practical_delta_floor);
  }
  return theory_delta;
}

int resolve_repetitions(const OracleBundle& bundle, int alpha) {
  if (bundle.counting_repetitions) {
    const int reps = *bundle.counting_repetitions;
    if (reps < 1 || reps % 2 == 0) throw InputError("counting repetitions must be odd and >= 1");
    return reps;
  }
  return default_count_repetitions(alpha);
}

double count_log_z(const OracleBundle& bundle, const IsingModel& model, double delta, int reps,
                   std::uint64_t seed, std::uint64_t label) {
  Rng rng(derive_seed(seed, kCountStream, label));
  return oracle_count_median(bundle, model, delta, reps, rng).log_z_hat;
}

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

Estimate base_estimate(const PairContext& ctx, Regime regime) {
  Estimate est;
  est.regime = regime;
  est.d_par = ctx.d;
  est.theta = ctx.theta;
  est.b = ctx.b;
  return est;
}

}  // namespace

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::SmallDistance: return "small_distance";
    case Regime::LargeDistance: return "large_distance";
    case Regime::ClosedForm: return "closed_form";
  }
  return "?";
}

DivergenceKind normalize_kind(DivergenceKind kind) {
  return kind.tag == DivergenceKind::Tag::TotalVariation ? DivergenceKind::chi(1) : kind;
}

double small_distance_theory_samples(DivergenceKind kind, int n, int m, double b, double eps) {
  const double size = n + 3.0 * m;
  const double witness = condition_witness(normalize_kind(kind))(8.0 * size / (b * b));
  return 4096.0 * 1000.0 * witness * witness * size * size / (b * b * b * b * eps * eps);
}

double chi_alpha_theory_samples(int alpha, double b, double theta, double eps) {
  const double coeff = moment_bound_coefficient(alpha, b, theta).value;
  return 8.0e4 * (alpha + 1.0) / (eps * eps * coeff * coeff);
}

double chi_alpha_count_error_target(int alpha, double b, double theta, double eps) {
  const double coeff = moment_bound_coefficient(alpha, b, theta).value;
  return coeff * eps / (20.0 * (alpha + 1.0));
}

double kl_family_additive_target(DivergenceKind kind, double b, double theta, double eps) {
  return eps * f_value(kind, 1.0 + 0.5 * b * b * theta);
}

int default_count_repetitions(int alpha) {
  return 2 * static_cast<int>(std::ceil(std::log(alpha + 2.0))) + 13;
}

Estimate estimate(const ModelPair& pair, DivergenceKind kind, const EstimatorConfig& cfg,
                  const OracleBundle& bundle) {
  const DivergenceKind k = normalize_kind(kind);
  const PairContext ctx = make_context(pair);
  if (ctx.d < ctx.theta) return estimate_small(pair, k, cfg, bundle);
  switch (k.tag) {
    case DivergenceKind::Tag::ChiAlpha:
      return estimate_chi_alpha_large(pair, k.chi_order, cfg, bundle);
    case DivergenceKind::Tag::KL:
    case DivergenceKind::Tag::Renyi:
    case DivergenceKind::Tag::JensenShannon:
      return estimate_kl_family_large(pair, k, cfg, bundle);
    case DivergenceKind::Tag::AlphaDiv:
      return estimate_alpha_div_large(pair, k.alpha, cfg, bundle);
    case DivergenceKind::Tag::SquaredHellinger:
      return estimate_hellinger_large(pair, cfg, bundle);
    case DivergenceKind::Tag::TotalVariation:
      break;  // normalized away above
  }
  throw InputError("unsupported divergence kind");
}

Estimate estimate_small(const ModelPair& pair, DivergenceKind kind, const EstimatorConfig& cfg,
                        const OracleBundle& bundle) {
  validate_config(cfg);
  const DivergenceKind k = normalize_kind(kind);
  const PairContext ctx = make_context(pair);
  const std::uint64_t samples = resolve_samples(
      cfg, small_distance_theory_samples(k, ctx.n, ctx.m, ctx.b, cfg.epsilon), "estimate_small");

  const double eps_tv = 1.0 / (100.0 * static_cast<double>(samples));
  const SamplerHandle sampler(bundle, pair.mu(), eps_tv);
  const IsingModel& nu = pair.nu();
  const IsingModel& mu = pair.mu();

  auto weight_ratio = [&](std::uint64_t i) {
    Rng rng(derive_seed(cfg.seed, kSampleStream, 0, i));
    const Configuration sigma = sampler.draw(rng);
    return std::exp(nu.log_weight(sigma) - mu.log_weight(sigma));
  };

  // Two passes over the same per-sample streams: first the mean of W, then the
  // mean of f(W_i / mean). Avoids storing T ratios; chunk-ordered reduction
  // keeps the result independent of the worker count.
  auto sums = map_chunks<double>(samples, kDefaultChunk, cfg.threads, [&](ChunkRange r) {
    double s = 0.0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) s += weight_ratio(i);
    return s;
  });
  double total = 0.0;
  for (double s : sums) total += s;
  const double mean_ratio = total / static_cast<double>(samples);

  auto f_sums = map_chunks<double>(samples, kDefaultChunk, cfg.threads, [&](ChunkRange r) {
    double s = 0.0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) s += f_value(k, weight_ratio(i) / mean_ratio);
    return s;
  });
  double f_total = 0.0;
  for (double s : f_sums) f_total += s;

  Estimate est = base_estimate(ctx, Regime::SmallDistance);
  est.value = f_total / static_cast<double>(samples);
  est.samples_used = samples;
  est.terms.push_back({"mean_weight_ratio", mean_ratio});
  return est;
}

Estimate estimate_chi_alpha_large(const ModelPair& pair, int alpha, const EstimatorConfig& cfg,
                                  const OracleBundle& bundle) {
  validate_config(cfg);
  if (alpha < 1) throw InputError("chi estimator needs integer alpha >= 1");
  const PairContext ctx = make_context(pair);
  const MomentBoundCoefficient coeff = moment_bound_coefficient(alpha, ctx.b, ctx.theta);
  if (!(coeff.value > 0.0)) {
    throw CapacityError("moment bound coefficient underflows; instance too extreme");
  }
  const std::uint64_t samples = resolve_samples(
      cfg, chi_alpha_theory_samples(alpha, ctx.b, ctx.theta, cfg.epsilon), "estimate_chi_alpha");
  const double delta = resolve_count_error(
      cfg, chi_alpha_count_error_target(alpha, ctx.b, ctx.theta, cfg.epsilon));
  const int reps = resolve_repetitions(bundle, alpha);

  std::vector<double> log_z_hat(static_cast<std::size_t>(alpha) + 1);
  std::vector<IsingModel> members;
  members.reserve(static_cast<std::size_t>(alpha) + 1);
  for (int k = 0; k <= alpha; ++k) {
    members.push_back(pair.combine(k));
    log_z_hat[static_cast<std::size_t>(k)] =
        count_log_z(bundle, members.back(), delta, reps, cfg.seed, static_cast<std::uint64_t>(k));
  }

  // nu_hat(x) > mu_hat(x)  <=>  log w_nu - log w_mu > log Zhat_1 - log Zhat_0.
  const double threshold = log_z_hat[1] - log_z_hat[0];
  const double eps_tv = 1.0 / (200.0 * static_cast<double>(samples) * (alpha + 1.0));

  Estimate est = base_estimate(ctx, Regime::LargeDistance);
  double signed_sum = 0.0;
  double binom = 1.0;  // C(alpha, k), updated incrementally
  for (int k = 0; k <= alpha; ++k) {
    const SamplerHandle sampler(bundle, members[static_cast<std::size_t>(k)], eps_tv);
    struct Counts {
      std::uint64_t plus = 0;
      std::uint64_t minus = 0;
    };
    auto partials = map_chunks<Counts>(
        2 * samples, kDefaultChunk, cfg.threads, [&](ChunkRange r) {
          Counts c;
          for (std::uint64_t i = r.begin; i < r.end; ++i) {
            Rng rng(derive_seed(cfg.seed, kSampleStream, static_cast<std::uint64_t>(k), i));
            const Configuration sigma = sampler.draw(rng);
            const double delta_w = pair.nu().log_weight(sigma) - pair.mu().log_weight(sigma);
            if (i < samples) {
              if (delta_w > threshold) ++c.plus;
            } else {
              if (delta_w < threshold) ++c.minus;
            }
          }
          return c;
        });
    Counts counts;
    for (const auto& c : partials) {
      counts.plus += c.plus;
      counts.minus += c.minus;
    }
    const double z_ratio = std::exp((k - 1) * log_z_hat[0] +
                                    log_z_hat[static_cast<std::size_t>(k)] - k * log_z_hat[1]);
    const double w_plus = z_ratio * static_cast<double>(counts.plus) / static_cast<double>(samples);
    const double w_minus =
        z_ratio * static_cast<double>(counts.minus) / static_cast<double>(samples);
    const double sign_k = ((alpha - k) % 2 == 0) ? 1.0 : -1.0;
    const double sign_alpha = (alpha % 2 == 0) ? 1.0 : -1.0;
    signed_sum += sign_k * binom * (w_plus + sign_alpha * w_minus);
    const std::string prefix = "k=" + std::to_string(k);
    est.terms.push_back({prefix + ":w_plus", w_plus});
    est.terms.push_back({prefix + ":w_minus", w_minus});
    est.terms.push_back({prefix + ":z_ratio", z_ratio});
    binom = binom * (alpha - k) / (k + 1.0);
  }
  est.terms.push_back({"signed_sum_raw", 0.5 * signed_sum});
  est.value = std::max(0.0, 0.5 * signed_sum);
  est.samples_used = 2 * samples * (static_cast<std::uint64_t>(alpha) + 1);
  return est;
}

Estimate estimate_kl_family_large(const ModelPair& pair, DivergenceKind kind,
                                  const EstimatorConfig& cfg, const OracleBundle& bundle) {
  validate_config(cfg);
  using Tag = DivergenceKind::Tag;
  if (kind.tag != Tag::KL && kind.tag != Tag::Renyi && kind.tag != Tag::JensenShannon) {
    throw InputError("estimator covers kl, renyi and js only");
  }
  const PairContext ctx = make_context(pair);
  const double eps_add = kl_family_additive_target(kind, ctx.b, ctx.theta, cfg.epsilon);
  const double log_b_inv = std::log(1.0 / ctx.b);
  const double theory_samples =
      ctx.n * log_b_inv * ctx.n * log_b_inv * 9.0e4 / (eps_add * eps_add);
  const std::uint64_t samples = resolve_samples(cfg, theory_samples, "estimate_kl_family");
  const double delta = resolve_count_error(cfg, eps_add / 8.0);
  const int reps = resolve_repetitions(bundle, 1);

  const double log_z_nu = count_log_z(bundle, pair.nu(), delta, reps, cfg.seed, 0);
  const double log_z_mu = count_log_z(bundle, pair.mu(), delta, reps, cfg.seed, 1);
  const double log_ratio = log_z_mu - log_z_nu;  // log(Zhat_mu / Zhat_nu)
  const double h_cap = ctx.n * log_b_inv + 2.0 * delta + 1e-9;

  enum class Transform { LogRatio, LogAverageRatio };
  struct Term {
    const IsingModel* from;
    Transform transform;
    double coefficient;
    const char* label;
  };
  std::vector<Term> terms;
  switch (kind.tag) {
    case Tag::KL:
      terms = {{&pair.nu(), Transform::LogRatio, 1.0, "E_nu[log nu/mu]"}};
      break;
    case Tag::Renyi:
      terms = {{&pair.mu(), Transform::LogRatio, -1.0, "E_mu[log nu/mu]"}};
      break;
    default:  // Jensen-Shannon three-term split
      terms = {{&pair.nu(), Transform::LogRatio, 0.5, "E_nu[log nu/mu]"},
               {&pair.nu(), Transform::LogAverageRatio, -0.5, "E_nu[log (nu+mu)/2mu]"},
               {&pair.mu(), Transform::LogAverageRatio, -0.5, "E_mu[log (nu+mu)/2mu]"}};
      break;
  }

  const double eps_tv = 1.0 / (100.0 * static_cast<double>(samples));
  Estimate est = base_estimate(ctx, Regime::LargeDistance);
  double value = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const Term& term = terms[t];
    const SamplerHandle sampler(bundle, *term.from, eps_tv);
    auto partials = map_chunks<double>(samples, kDefaultChunk, cfg.threads, [&](ChunkRange r) {
      double s = 0.0;
      for (std::uint64_t i = r.begin; i < r.end; ++i) {
        Rng rng(derive_seed(cfg.seed, kSampleStream, t, i));
        const Configuration sigma = sampler.draw(rng);
        const double h = pair.nu().log_weight(sigma) - pair.mu().log_weight(sigma) + log_ratio;
        const double v =
            term.transform == Transform::LogRatio ? h : softplus(h) - std::log(2.0);
        if (std::abs(v) > h_cap) {
          throw OracleFailure("per-sample log ratio " + std::to_string(v) +
                              " exceeds the marginal-bound cap " + std::to_string(h_cap) +
                              "; counting oracle failure suspected");
        }
        s += v;
      }
      return s;
    });
    double total = 0.0;
    for (double s : partials) total += s;
    const double mean = total / static_cast<double>(samples);
    est.terms.push_back({term.label, mean});
    value += term.coefficient * mean;
  }
  est.terms.push_back({"value_raw", value});
  est.value = std::max(0.0, value);
  est.samples_used = samples * terms.size();
  return est;
}

Estimate estimate_alpha_div_large(const ModelPair& pair, double alpha, const EstimatorConfig& cfg,
                                  const OracleBundle& bundle) {
  validate_config(cfg);
  if (alpha == 0.0 || alpha == 1.0) {
    throw InputError("alpha estimator needs alpha outside {0,1}; use kl (alpha->1 analogue) "
                     "or renyi (alpha->0 analogue) instead");
  }
  const DivergenceKind kind = DivergenceKind::alpha_div(alpha);
  const PairContext ctx = make_context(pair);
  const double theory_delta = cfg.epsilon * f_value(kind, 1.0 + 0.5 * ctx.b * ctx.b * ctx.theta) /
                              (8.0 * (std::abs(alpha) + 2.0));
  const double delta = resolve_count_error(cfg, theory_delta);
  const int reps =
      resolve_repetitions(bundle, std::max(1, static_cast<int>(std::ceil(std::abs(alpha)))));

  const double log_z_nu = count_log_z(bundle, pair.nu(), delta, reps, cfg.seed, 0);
  const double log_z_mu = count_log_z(bundle, pair.mu(), delta, reps, cfg.seed, 1);
  const double log_z_alpha = count_log_z(bundle, pair.combine(alpha), delta, reps, cfg.seed, 2);
  const double log_moment = (alpha - 1.0) * log_z_mu + log_z_alpha - alpha * log_z_nu;

  Estimate est = base_estimate(ctx, Regime::ClosedForm);
  est.value = std::max(0.0, std::expm1(log_moment) / (alpha * (alpha - 1.0)));
  est.terms.push_back({"log_z_nu", log_z_nu});
  est.terms.push_back({"log_z_mu", log_z_mu});
  est.terms.push_back({"log_z_alpha", log_z_alpha});
  est.terms.push_back({"log_moment_ratio", log_moment});
  return est;
}

Estimate estimate_hellinger_large(const ModelPair& pair, const EstimatorConfig& cfg,
                                  const OracleBundle& bundle) {
  validate_config(cfg);
  const DivergenceKind kind = DivergenceKind::hellinger2();
  const PairContext ctx = make_context(pair);
  const double theory_delta =
      cfg.epsilon * f_value(kind, 1.0 + 0.5 * ctx.b * ctx.b * ctx.theta) / 8.0;
  const double delta = resolve_count_error(cfg, theory_delta);
  const int reps = resolve_repetitions(bundle, 1);

  const double log_z_nu = count_log_z(bundle, pair.nu(), delta, reps, cfg.seed, 0);
  const double log_z_mu = count_log_z(bundle, pair.mu(), delta, reps, cfg.seed, 1);
  const double log_z_avg = count_log_z(bundle, pair.combine(0.5), delta, reps, cfg.seed, 2);
  const double log_affinity = log_z_avg - 0.5 * log_z_nu - 0.5 * log_z_mu;

  Estimate est = base_estimate(ctx, Regime::ClosedForm);
  est.value = std::max(0.0, -std::expm1(log_affinity));
  est.terms.push_back({"log_z_nu", log_z_nu});
  est.terms.push_back({"log_z_mu", log_z_mu});
  est.terms.push_back({"log_z_avg", log_z_avg});
  est.terms.push_back({"log_affinity", log_affinity});
  return est;
}

}  // namespace isingdiv
