#include "isingdiv/divergences.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "isingdiv/errors.hpp"

namespace isingdiv {

namespace {

constexpr double kAlphaCap = 64.0;  // |alpha| cap for real-exponent powers

// x^k for integer k >= 0 by binary exponentiation; tighter than std::pow for
// the small exponents used here.
double powi(double x, int k) {
  double acc = 1.0;
  double base = x;
  for (; k > 0; k >>= 1) {
    if (k & 1) acc *= base;
    base *= base;
  }
  return acc;
}

[[noreturn]] void domain_error(const DivergenceKind& kind, double x, const char* why) {
  throw InputError(kind.spec_string() + ": " + why + " at x=" + std::to_string(x));
}

}  // namespace

DivergenceKind DivergenceKind::chi(int alpha) {
  if (alpha < 1) throw InputError("chi divergence needs integer alpha >= 1");
  return {Tag::ChiAlpha, alpha, 0.0};
}

DivergenceKind DivergenceKind::alpha_div(double alpha) {
  if (!std::isfinite(alpha) || alpha == 0.0 || alpha == 1.0) {
    throw InputError("alpha divergence needs finite alpha outside {0,1}");
  }
  if (std::abs(alpha) > kAlphaCap) {
    throw InputError("alpha divergence |alpha| capped at " + std::to_string(kAlphaCap));
  }
  return {Tag::AlphaDiv, 0, alpha};
}

DivergenceKind DivergenceKind::parse(std::string_view spec) {
  if (spec == "kl") return kl();
  if (spec == "renyi") return renyi();
  if (spec == "js") return js();
  if (spec == "hellinger2") return hellinger2();
  if (spec == "tv") return tv();
  auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const std::string head(spec.substr(0, colon));
    const std::string arg(spec.substr(colon + 1));
    try {
      if (head == "chi") return chi(std::stoi(arg));
      if (head == "alpha") return alpha_div(std::stod(arg));
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw InputError("bad divergence parameter in \"" + std::string(spec) + "\"");
    }
  }
  throw InputError("unknown divergence spec \"" + std::string(spec) +
                   "\" (expected chi:<int>, kl, renyi, js, alpha:<real>, hellinger2, tv)");
}

std::string DivergenceKind::spec_string() const {
  switch (tag) {
    case Tag::ChiAlpha: return "chi:" + std::to_string(chi_order);
    case Tag::KL: return "kl";
    case Tag::Renyi: return "renyi";
    case Tag::JensenShannon: return "js";
    case Tag::AlphaDiv: {
      std::string s = std::to_string(alpha);
      return "alpha:" + s;
    }
    case Tag::SquaredHellinger: return "hellinger2";
    case Tag::TotalVariation: return "tv";
  }
  return "?";
}

double f_value(DivergenceKind kind, double x) {
  if (!(x > 0.0)) domain_error(kind, x, "generator defined for x > 0 only");
  switch (kind.tag) {
    case DivergenceKind::Tag::ChiAlpha:
      return 0.5 * powi(std::abs(x - 1.0), kind.chi_order);
    case DivergenceKind::Tag::KL:
      return x * std::log(x) - x + 1.0;
    case DivergenceKind::Tag::Renyi:
      return -std::log(x) + x - 1.0;
    case DivergenceKind::Tag::JensenShannon:
      return 0.5 * (x * std::log(x) - (x + 1.0) * std::log(0.5 * (x + 1.0)));
    case DivergenceKind::Tag::AlphaDiv: {
      const double a = kind.alpha;
      if (a == 2.0) {
        const double u = x - 1.0;
        return 0.5 * u * u;
      }
      // (x^a - a x + a - 1) loses all significance near x = 1 when evaluated
      // term by term; (x^a - 1) - a (x - 1) via expm1 keeps the u^2 scale.
      return (std::expm1(a * std::log(x)) - a * (x - 1.0)) / (a * (a - 1.0));
    }
    case DivergenceKind::Tag::SquaredHellinger: {
      const double s = std::sqrt(x) - 1.0;
      return 0.5 * s * s;
    }
    case DivergenceKind::Tag::TotalVariation:
      return 0.5 * std::abs(x - 1.0);
  }
  return 0.0;
}

FDerivatives f_derivatives(DivergenceKind kind, double x) {
  if (!(x > 0.0)) domain_error(kind, x, "derivatives defined for x > 0 only");
  switch (kind.tag) {
    case DivergenceKind::Tag::ChiAlpha: {
      const int a = kind.chi_order;
      if (x == 1.0 && (a % 2 == 1)) domain_error(kind, x, "not differentiable");
      const double u = x - 1.0;
      const double sign = u < 0.0 ? -1.0 : 1.0;
      const double first = 0.5 * a * powi(std::abs(u), a - 1) * sign;
      const double second = a >= 2 ? 0.5 * a * (a - 1) * powi(std::abs(u), a - 2) : 0.0;
      return {first, second};
    }
    case DivergenceKind::Tag::KL:
      return {std::log(x), 1.0 / x};
    case DivergenceKind::Tag::Renyi:
      return {1.0 - 1.0 / x, 1.0 / (x * x)};
    case DivergenceKind::Tag::JensenShannon:
      return {0.5 * std::log(2.0 * x / (x + 1.0)), 0.5 / (x * (x + 1.0))};
    case DivergenceKind::Tag::AlphaDiv: {
      const double a = kind.alpha;
      const double first = a == 2.0 ? x - 1.0
                                    : std::expm1((a - 1.0) * std::log(x)) / (a - 1.0);
      return {first, std::pow(x, a - 2.0)};
    }
    case DivergenceKind::Tag::SquaredHellinger:
      // Catalog convention: the second derivative is tabulated as 1/(2 sqrt(x)),
      // the value that produces the witness bounds L = 1/sqrt(6), U = 1/sqrt(2)
      // and F = 2 sqrt(3) zeta below.
      return {0.5 * (1.0 - 1.0 / std::sqrt(x)), 0.5 / std::sqrt(x)};
    case DivergenceKind::Tag::TotalVariation: {
      if (x == 1.0) domain_error(kind, x, "not differentiable");
      return {x > 1.0 ? 0.5 : -0.5, 0.0};
    }
  }
  return {0.0, 0.0};
}

double ConditionWitness::operator()(double zeta) const {
  return coefficient * std::pow(zeta, zeta_power);
}

ConditionWitness condition_witness(DivergenceKind kind) {
  switch (kind.tag) {
    case DivergenceKind::Tag::ChiAlpha: {
      const double a = kind.chi_order;
      return {a, a - 1.0, std::nullopt, std::nullopt};
    }
    case DivergenceKind::Tag::KL:
      return {6.0, 1.0, 2.0 / 3.0, 2.0};
    case DivergenceKind::Tag::Renyi:
      return {18.0, 1.0, 4.0 / 9.0, 4.0};
    case DivergenceKind::Tag::JensenShannon:
      return {10.0, 1.0, 2.0 / 15.0, 2.0 / 3.0};
    case DivergenceKind::Tag::AlphaDiv: {
      const double e = std::abs(kind.alpha - 2.0);
      return {2.0 * std::pow(4.0, e), 1.0, std::pow(2.0, -e), std::pow(2.0, e)};
    }
    case DivergenceKind::Tag::SquaredHellinger:
      return {2.0 * std::sqrt(3.0), 1.0, 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(2.0)};
    case DivergenceKind::Tag::TotalVariation:
      throw InputError("no condition witness for tv; use chi:1");
  }
  throw InputError("unknown divergence kind");
}

}  // namespace isingdiv
