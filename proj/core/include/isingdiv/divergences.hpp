#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace isingdiv {

/// Catalog of divergence generators f (convex, f(1) = 0):
///
///   chi^alpha          f(x) = |x-1|^alpha / 2       (alpha >= 1 integer; alpha=1 is TV)
///   kl                 f(x) = x ln x - x + 1
///   renyi              f(x) = -ln x + x - 1          (reverse-KL generator)
///   js                 f(x) = (x ln x - (x+1) ln((x+1)/2)) / 2
///   alpha:<a>          f(x) = (x^a - a x - (1-a)) / (a(a-1)),  a not in {0,1}
///   hellinger2         f(x) = (sqrt(x) - 1)^2 / 2
///   tv                 f(x) = |x-1| / 2              (estimators treat it as chi:1)
struct DivergenceKind {
  enum class Tag { ChiAlpha, KL, Renyi, JensenShannon, AlphaDiv, SquaredHellinger, TotalVariation };

  Tag tag = Tag::KL;
  int chi_order = 0;    // ChiAlpha only
  double alpha = 0.0;   // AlphaDiv only

  static DivergenceKind chi(int alpha);
  static DivergenceKind kl() { return {Tag::KL, 0, 0.0}; }
  static DivergenceKind renyi() { return {Tag::Renyi, 0, 0.0}; }
  static DivergenceKind js() { return {Tag::JensenShannon, 0, 0.0}; }
  static DivergenceKind alpha_div(double alpha);
  static DivergenceKind hellinger2() { return {Tag::SquaredHellinger, 0, 0.0}; }
  static DivergenceKind tv() { return {Tag::TotalVariation, 0, 0.0}; }

  /// Parses the CLI spec strings: chi:<int>, kl, renyi, js, alpha:<real>,
  /// hellinger2, tv.
  static DivergenceKind parse(std::string_view spec);
  std::string spec_string() const;

  bool operator==(const DivergenceKind&) const = default;
};

/// f(x); requires x > 0.
double f_value(DivergenceKind kind, double x);

struct FDerivatives {
  double first;
  double second;
};

/// Closed-form f'(x) and f''(x) from the catalog table; x > 0, and x != 1 for
/// the kinds that are not differentiable there (tv and odd-order chi^alpha).
FDerivatives f_derivatives(DivergenceKind kind, double x);

/// Witness for the small-distance sampling condition: a function
/// F(zeta) = coefficient * zeta^zeta_power such that
/// x f'(1 + zeta x) / f(1 + x) <= F(zeta) for zeta >= 1, 0 < |x| < 1/(2 zeta).
/// For the table-derived kinds F = (2U/L) zeta with L <= f'' <= U on [1/2, 3/2];
/// chi^alpha uses F(zeta) = alpha zeta^(alpha-1) directly and carries no L, U.
struct ConditionWitness {
  double coefficient;
  double zeta_power;
  std::optional<double> second_derivative_lower;  // L
  std::optional<double> second_derivative_upper;  // U

  double operator()(double zeta) const;
};

/// Not available for TotalVariation (use chi:1).
ConditionWitness condition_witness(DivergenceKind kind);

}  // namespace isingdiv
