#pragma once

#include "atollpr/grid.hpp"

namespace atollpr {

struct EigenResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // relative change of the last eigenvalue update
};

// Smallest nonzero eigenvalue of the 5-point Neumann Laplacian on a
// 4-connected mask. Inverse iteration with the constant vector deflated.
EigenResult neumann_lambda2(const DomainMask& mask, double tol = 1e-8, int max_iter = 10000);

// Largest mu with B u = mu (M + K) u: B the boundary quadrature weights, M
// the cell areas, K the Dirichlet form. sqrt(mu) bounds the trace constant.
EigenResult trace_rayleigh_max(const DomainMask& mask, double tol = 1e-10, int max_iter = 10000);

}  // namespace atollpr
