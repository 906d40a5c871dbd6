#pragma once

// Super-solutions u* of the prescribed curvature equation,
//
//   -Δu* + S0 - f e^{2u*/n} >= 0,
//
// which bound the flow from above for initial data below them.
//
//   case 1 (f <= 0, f ≢ 0):   u* = v0 + a v1 + b,  Δv1 = f̄ - f
//   case 2 (f = f0 + λ):      u* = v0 + a v2 + b,  Δv2 = f̄0 - f0,  v2 >= 1
//
// Constants c0∓ = min/max v0, c1⁻ = min v1, c2∓ = min/max v2.

#include <optional>
#include <string_view>
#include <vector>

#include "chernflow/error.hpp"
#include "chernflow/problem.hpp"

namespace chernflow {

enum class CaseTag { Case1, Case2, External };
std::string_view to_string(CaseTag tag) noexcept;

// Margin added to a (relatively) and b (absolutely) in the constructions.
inline constexpr double kSuperSolutionMargin = 1e-6;
// slack_min a certificate may fall short of zero by.
inline constexpr double kSlackTolerance = 1e-10;

struct SuperSolutionCertificate {
  ScalarField u_star;
  // -Δu* + S0 - f e^{2u*/n} per node.
  ScalarField slack;
  CaseTag case_tag = CaseTag::External;
  double a = 0.0;
  double b = 0.0;
  std::optional<double> lambda;      // case 2
  std::optional<double> lambda_max;  // case 2
  double slack_min = 0.0;
  double c0_minus = 0.0;
  double c0_plus = 0.0;
  std::optional<double> c1_minus;
  std::optional<double> c2_minus;
  std::optional<double> c2_plus;

  bool valid() const noexcept { return slack_min >= -kSlackTolerance; }
};

// Case 1: a = max(S̄0/f̄, 1)(1 + margin), b = (n/2) ln a - c0⁻ - a c1⁻ + margin.
// Throws Error(DegenerateF) for f ≡ 0 and Error(WrongSign) if some f > 0.
SuperSolutionCertificate construct_case1(const Background& bg);

struct SignSplit {
  ScalarField f0;  // f - λ, maximum exactly 0
  double lambda;   // max f
};

// Throws Error(NotSignChanging) unless f has both positive and negative nodes.
SignSplit split_sign_changing(const ScalarField& f);

// Scalars entering the case-2 inequalities for a given S0 and f0.
struct Case2Constants {
  int complex_dim = 0;
  double s0_mean = 0.0;
  double f0_mean = 0.0;
  double c0_minus = 0.0;
  double c0_plus = 0.0;
  double c2_minus = 0.0;
  double c2_plus = 0.0;
};

// b with the first case-2 constraint at equality: e^{2b/n} = a e^{-(2/n)(c0⁻ + a c2⁻)}.
double case2_b(const Case2Constants& k, double a);
// (S̄0 - a f̄0) e^{-(2/n)(c0⁺ + a c2⁺ + b)}: the largest admissible λ for (a, b).
double case2_lambda_bound(const Case2Constants& k, double a, double b);
// a_i = (S̄0/f̄0) 100^{i/points}, i = 1..points.
std::vector<double> case2_a_grid(const Case2Constants& k, int points);

struct Case2Search {
  Case2Constants constants;
  ScalarField v2;
  double a = 0.0;
  double b = 0.0;
  double lambda_max = 0.0;
};

// Maximises λ_max over the a-grid for background data (S0, f0) (bg0.f() is f0;
// ties go to the smaller a). Throws Error(DegenerateF) for f0 ≡ 0,
// Error(WrongSign) if max f0 > 0 and Error(BadConfig) for points < 1.
Case2Search search_case2(const Background& bg0, int a_search_points);

class LambdaTooLargeError : public Error {
 public:
  LambdaTooLargeError(double lambda, double lambda_max);
  double lambda() const noexcept { return lambda_; }
  double lambda_max() const noexcept { return lambda_max_; }

 private:
  double lambda_;
  double lambda_max_;
};

// Splits bg.f() into f0 + λ, runs search_case2 and certifies u* = v0 + a v2 + b
// against the full f. Throws LambdaTooLargeError if λ > λ_max.
SuperSolutionCertificate construct_case2(const Background& bg, int a_search_points);

struct Case3Result {
  double theta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// With g = f e^{2v0/n}:  ∫g⁺/‖g‖∞ <= C_M (∫g⁻/‖g‖∞)^θ,  θ = (π - 2πχ + 1)/(π - 1).
// Throws Error(WrongDimension) unless n = 1 and Error(DegenerateF) if g ≡ 0.
Case3Result case3_predicate(const Background& bg, int euler_char, double c_m);

// min over nodes of -Δu* + S0 - f e^{2u*/n}.
double verify_supersolution(const ScalarField& u_star, const Background& bg);

}  // namespace chernflow
