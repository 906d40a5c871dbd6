#include "chernflow/scenario.hpp"

#include <cmath>

#include "chernflow/error.hpp"
#include "chernflow/expression.hpp"

namespace chernflow {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

TorusGrid make_scenario_grid(const ScenarioSpec& spec) {
  const auto axes = static_cast<std::size_t>(2 * std::max(spec.complex_dim, 0));
  std::vector<int> points = spec.points;
  if (points.empty()) points.assign(axes, 8);
  if (points.size() == 1) points.assign(axes, points.front());
  std::vector<double> periods = spec.periods;
  if (periods.empty()) periods.assign(axes, 1.0);
  return make_grid(spec.complex_dim, std::move(points), std::move(periods));
}

namespace {

// Random band-limited field scaled to sup-norm 1.
ScalarField unit_random(const TorusGrid& grid, std::uint64_t seed, std::uint64_t stream) {
  const ScalarField r = random_band_limited(grid, derive_seed(seed, stream));
  return (1.0 / r.sup_norm()) * r;
}

ScalarField from_expression(const TorusGrid& grid, const std::string& text, const char* key) {
  const Expression e = Expression::parse(text, grid.axes());
  std::optional<ScalarField> field;
  try {
    field.emplace(ScalarField::from_function(grid, [&](std::span<const double> x) { return e.evaluate(x); }));
  } catch (const Error& err) {
    throw Error(ErrorCode::BadRecipe, std::string(key) + " = \"" + text + "\": " + err.what());
  }
  const double beyond = amplitude_beyond_band_limit(*field);
  if (beyond > 1e-10 * (1.0 + field->sup_norm())) {
    throw Error(ErrorCode::BadRecipe, std::string(key) + " = \"" + text +
                                          "\" is not band-limited on this grid (amplitude " +
                                          std::to_string(beyond) + " above a third of Nyquist)");
  }
  return std::move(*field);
}

}  // namespace

Scenario make_scenario(const ScenarioSpec& spec) {
  const std::string& p = spec.preset;
  if (p != "constant" && p != "case1" && p != "rough-start" && p != "case2") {
    throw Error(ErrorCode::BadRecipe,
                "background.preset must be constant, case1, case2 or rough-start, got '" + p + "'");
  }
  const TorusGrid grid = make_scenario_grid(spec);

  std::optional<ScalarField> s0, f, u0;
  if (p == "constant") {
    s0 = ScalarField::constant(grid, -1.0);
    f = ScalarField::constant(grid, -1.0);
    u0 = ScalarField::constant(grid, 0.5);
  } else {
    s0 = 0.5 * unit_random(grid, spec.seed, 1) - 1.0;
    const ScalarField g = unit_random(grid, spec.seed, 2);
    f = g - g.max();
    u0 = p == "rough-start" ? 2.0 * unit_random(grid, spec.seed, 3) : ScalarField::constant(grid, 0.0);
  }
  if (!spec.s0_expr.empty()) s0 = from_expression(grid, spec.s0_expr, "background.s0_expr");
  if (!spec.f_expr.empty()) f = from_expression(grid, spec.f_expr, "background.f_expr");
  const bool custom_u0 = !spec.u0_expr.empty();
  if (custom_u0) u0 = from_expression(grid, spec.u0_expr, "background.u0_expr");

  if (p != "case2") {
    Scenario sc{p, build_background(std::move(*s0), std::move(*f)), std::move(*u0), std::nullopt, {}, std::nullopt};
    try {
      sc.certificate = construct_case1(sc.background);
    } catch (const Error& e) {
      sc.certificate_error = e.what();
    }
    return sc;
  }

  // case2: f currently holds f0.
  const Background bg0 = build_background(*s0, *f);
  const Case2Search search = search_case2(bg0, spec.a_search_points);
  const double lambda = spec.lambda.value_or(0.5 * search.lambda_max);
  Scenario sc{p, build_background(std::move(*s0), *f + lambda), ScalarField::constant(grid, 0.0), std::nullopt, {}, std::nullopt};
  sc.lambda_max = search.lambda_max;
  try {
    // Above λ_max f may no longer change sign; report the λ violation itself.
    if (lambda > search.lambda_max) throw LambdaTooLargeError(lambda, search.lambda_max);
    sc.certificate = construct_case2(sc.background, spec.a_search_points);
  } catch (const Error& e) {
    sc.certificate_error = e.what();
  }
  if (custom_u0) {
    sc.u0 = std::move(*u0);
  } else {
    // Below the searched u* even when λ exceeds λ_max and no certificate exists.
    sc.u0 = (sc.background.v0() + search.a * search.v2 + search.b) - 1.0;
  }
  return sc;
}

}  // namespace chernflow
