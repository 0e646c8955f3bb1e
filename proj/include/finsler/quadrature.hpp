#pragma once

#include <functional>
#include <vector>

namespace finsler {

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int max_depth = 48);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Golub-Welsch); cached per n.
const GaussLegendreRule& gauss_legendre(int n);

}  // namespace finsler
