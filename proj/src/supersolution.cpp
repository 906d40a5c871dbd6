#include "chernflow/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chernflow/kernels.hpp"
#include "chernflow/poisson.hpp"

namespace chernflow {

std::string_view to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::Case1: return "case1";
    case CaseTag::Case2: return "case2";
    case CaseTag::External: return "external";
  }
  return "unknown";
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void certify(SuperSolutionCertificate& cert, const Background& bg) {
  cert.slack = residual(cert.u_star, bg);
  cert.slack_min = cert.slack.min();
}

}  // namespace

SuperSolutionCertificate construct_case1(const Background& bg) {
  const ScalarField& f = bg.f();
  if (!(bg.f_sup_norm() > 0.0)) throw Error(ErrorCode::DegenerateF, "case 1 needs f ≢ 0");
  if (f.max() > 0.0) throw Error(ErrorCode::WrongSign, "case 1 needs f <= 0, max f = " + num(f.max()));

  const ScalarField v1 = solve_mean_zero(ScalarField::constant(f.grid(), bg.f_mean()) - f);
  const ScalarField& v0 = bg.v0();
  const double c0m = v0.min();
  const double c1m = v1.min();
  const double a = std::max(bg.degree() / bg.f_mean(), 1.0) * (1.0 + kSuperSolutionMargin);
  const double b = bg.half_dim() * std::log(a) - c0m - a * c1m + kSuperSolutionMargin;

  SuperSolutionCertificate cert{v0 + a * v1 + b, ScalarField::constant(f.grid(), 0.0)};
  cert.case_tag = CaseTag::Case1;
  cert.a = a;
  cert.b = b;
  cert.c0_minus = c0m;
  cert.c0_plus = v0.max();
  cert.c1_minus = c1m;
  certify(cert, bg);
  return cert;
}

SignSplit split_sign_changing(const ScalarField& f) {
  const double hi = f.max();
  const double lo = f.min();
  if (!(hi > 0.0 && lo < 0.0)) {
    throw Error(ErrorCode::NotSignChanging, "f ranges over [" + num(lo) + ", " + num(hi) + "]");
  }
  return SignSplit{f - hi, hi};
}

double case2_b(const Case2Constants& k, double a) {
  const double half_n = 0.5 * k.complex_dim;
  return half_n * std::log(a) - (k.c0_minus + a * k.c2_minus);
}

double case2_lambda_bound(const Case2Constants& k, double a, double b) {
  const double rate = 2.0 / k.complex_dim;
  return (k.s0_mean - a * k.f0_mean) * std::exp(-rate * (k.c0_plus + a * k.c2_plus + b));
}

std::vector<double> case2_a_grid(const Case2Constants& k, int points) {
  const double lo = k.s0_mean / k.f0_mean;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 1; i <= points; ++i) grid.push_back(lo * std::pow(100.0, static_cast<double>(i) / points));
  return grid;
}

Case2Search search_case2(const Background& bg0, int a_search_points) {
  if (a_search_points < 1) throw Error(ErrorCode::BadConfig, "supersolution.a_search_points must be >= 1");
  const ScalarField& f0 = bg0.f();
  if (!(bg0.f_sup_norm() > 0.0)) throw Error(ErrorCode::DegenerateF, "case 2 needs f0 ≢ 0");
  if (f0.max() > 0.0) throw Error(ErrorCode::WrongSign, "case 2 needs max f0 = 0, got " + num(f0.max()));

  ScalarField v2 = solve_positive(ScalarField::constant(f0.grid(), bg0.f_mean()) - f0);
  Case2Constants k;
  k.complex_dim = bg0.complex_dim();
  k.s0_mean = bg0.degree();
  k.f0_mean = bg0.f_mean();
  k.c0_minus = bg0.v0().min();
  k.c0_plus = bg0.v0().max();
  k.c2_minus = v2.min();
  k.c2_plus = v2.max();

  Case2Search best{k, std::move(v2)};
  best.lambda_max = -std::numeric_limits<double>::infinity();
  for (double a : case2_a_grid(k, a_search_points)) {
    const double b = case2_b(k, a);
    const double lm = case2_lambda_bound(k, a, b);
    if (lm > best.lambda_max) {
      best.a = a;
      best.b = b;
      best.lambda_max = lm;
    }
  }
  return best;
}

LambdaTooLargeError::LambdaTooLargeError(double lambda, double lambda_max)
    : Error(ErrorCode::LambdaTooLarge, "lambda " + num(lambda) + " exceeds lambda_max " + num(lambda_max)),
      lambda_(lambda),
      lambda_max_(lambda_max) {}

SuperSolutionCertificate construct_case2(const Background& bg, int a_search_points) {
  SignSplit split = split_sign_changing(bg.f());
  const Background bg0 = build_background(bg.s0(), split.f0);
  Case2Search s = search_case2(bg0, a_search_points);
  if (split.lambda > s.lambda_max) throw LambdaTooLargeError(split.lambda, s.lambda_max);

  SuperSolutionCertificate cert{bg.v0() + s.a * s.v2 + s.b, ScalarField::constant(bg.grid(), 0.0)};
  cert.case_tag = CaseTag::Case2;
  cert.a = s.a;
  cert.b = s.b;
  cert.lambda = split.lambda;
  cert.lambda_max = s.lambda_max;
  cert.c0_minus = s.constants.c0_minus;
  cert.c0_plus = s.constants.c0_plus;
  cert.c2_minus = s.constants.c2_minus;
  cert.c2_plus = s.constants.c2_plus;
  certify(cert, bg);
  return cert;
}

Case3Result case3_predicate(const Background& bg, int euler_char, double c_m) {
  if (bg.complex_dim() != 1) {
    throw Error(ErrorCode::WrongDimension,
                "case 3 predicate needs complex dimension 1, got " + std::to_string(bg.complex_dim()));
  }
  const std::size_t n = bg.grid().size();
  std::vector<double> e(n);
  kernels::exp_scaled(e, bg.v0().values(), bg.conformal_rate());
  std::vector<double> g(n), pos(n), neg(n);
  kernels::mul(g, bg.f().values(), e);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = std::max(bg.f()[i], 0.0) * e[i];
    neg[i] = std::max(-bg.f()[i], 0.0) * e[i];
  }
  const double gs = kernels::max_abs(g);
  if (!(gs > 0.0)) throw Error(ErrorCode::DegenerateF, "case 3 needs f e^{2v0/n} ≢ 0");
  const double vol = bg.grid().cell_volume();
  const double pi = std::numbers::pi;

  Case3Result r;
  r.theta = (pi - 2.0 * pi * euler_char + 1.0) / (pi - 1.0);
  r.lhs = vol * kernels::sum(pos) / gs;
  r.rhs = c_m * std::pow(vol * kernels::sum(neg) / gs, r.theta);
  r.holds = r.lhs <= r.rhs;
  return r;
}

double verify_supersolution(const ScalarField& u_star, const Background& bg) {
  return residual(u_star, bg).min();
}

}  // namespace chernflow
