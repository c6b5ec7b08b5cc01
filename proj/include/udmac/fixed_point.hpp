#pragma once

#include <functional>
#include <string>

namespace udmac {

struct SolverOptions {
  double tolerance = 1e-12;
  int max_iterations = 100000;
  double damping = 0.5;  // Picard fallback: x <- (1 - damping) x + damping F(x)
};

struct ScalarFixedPoint {
  double value = 0.0;
  double residual = 0.0;  // |x - F(x)|
  int iterations = 0;
};

// Solves x = F(x) on [0, 1]. Bisection on x - F(x) when the endpoints
// bracket a root, damped Picard iteration otherwise (or when bisection
// stalls above tolerance). Throws ConvergenceError naming `what` if neither
// reaches the tolerance within the iteration cap.
ScalarFixedPoint solve_unit_fixed_point(const std::function<double(double)>& map,
                                        const SolverOptions& options, const std::string& what);

}  // namespace udmac
