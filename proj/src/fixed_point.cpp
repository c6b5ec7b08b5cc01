#include "udmac/fixed_point.hpp"

#include <cmath>

#include "udmac/errors.hpp"

namespace udmac {

namespace {

ScalarFixedPoint picard(const std::function<double(double)>& map, double start,
                        const SolverOptions& options, int used) {
  ScalarFixedPoint best{start, std::abs(start - map(start)), used};
  double x = start;
  for (int it = used; it < options.max_iterations; ++it) {
    const double fx = map(x);
    const double residual = std::abs(x - fx);
    if (residual < best.residual) best = {x, residual, it};
    if (residual <= options.tolerance) return {x, residual, it};
    x = (1.0 - options.damping) * x + options.damping * fx;
    if (!std::isfinite(x)) break;
  }
  return best;
}

}  // namespace

ScalarFixedPoint solve_unit_fixed_point(const std::function<double(double)>& map,
                                        const SolverOptions& options, const std::string& what) {
  auto gap = [&](double x) { return x - map(x); };
  double lo = 0.0;
  double hi = 1.0;
  const double g_lo = gap(lo);
  const double g_hi = gap(hi);
  int iterations = 0;
  ScalarFixedPoint result;

  if (g_lo == 0.0) return {lo, 0.0, 0};
  if (g_hi == 0.0) return {hi, 0.0, 0};
  if (g_lo < 0.0 && g_hi > 0.0) {
    while (iterations < options.max_iterations) {
      ++iterations;
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double g = gap(mid);
      if (g == 0.0) return {mid, 0.0, iterations};
      (g < 0.0 ? lo : hi) = mid;
    }
    const double r_lo = std::abs(gap(lo));
    const double r_hi = std::abs(gap(hi));
    result = r_lo <= r_hi ? ScalarFixedPoint{lo, r_lo, iterations}
                          : ScalarFixedPoint{hi, r_hi, iterations};
    if (result.residual <= options.tolerance) return result;
    result = picard(map, result.value, options, iterations);
  } else {
    result = picard(map, 0.5, options, iterations);
  }
  if (result.residual <= options.tolerance && std::isfinite(result.value)) return result;
  throw ConvergenceError(what + ": fixed point not reached (residual " +
                             std::to_string(result.residual) + ")",
                         result.residual);
}

}  // namespace udmac
