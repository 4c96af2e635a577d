#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chsolver/time_mesh.hpp"

namespace chs {

// Discrete orthogonal (DOC) and complementary (DCC) convolution kernels of
// the variable-step BDF2 operator. Both are verification machinery: the
// stepper never needs them.
//
// Storage convention for a kernel of level n: element j-1 holds the weight
// attached to step j, i.e. theta^{(n)}_{n-j} for j = 1..n.

/// theta^{(n)}: sum_{j=k}^{n} theta^{(n)}_{n-j} b^{(j)}_{j-k} = [n == k].
/// Throws SingularKernel when some b0 is not positive.
std::vector<double> doc_kernels(const TimeMesh& mesh, std::size_t n);

/// p^{(n)}: sum_{j=k}^{n} p^{(n)}_{n-j} b^{(j)}_{j-k} = 1.
std::vector<double> dcc_kernels(const TimeMesh& mesh, std::size_t n);

/// Residuals of the defining triangular systems, indexed by k = 1..n
/// (element k-1). Useful for audits; tests use their own oracles.
std::vector<double> doc_residuals(const TimeMesh& mesh, std::size_t n,
                                  std::span<const double> theta);
std::vector<double> dcc_residuals(const TimeMesh& mesh, std::size_t n, std::span<const double> p);

struct QuadraticFormCheck {
  double lhs;
  double rhs;
  bool pass;
};

/// Positivity chain for the DOC quadratic form over the first w.size() steps:
///   lhs = 2 sum_k w_k sum_{j<=k} theta^{(k)}_{k-j} w_j
///   rhs = (margin/20) sum_k (sum_{s>=k} theta^{(s)}_{s-k} w_s)^2 / tau_k
/// pass iff lhs >= rhs >= 0 up to 1e-10. Throws MeshViolatesA1.
QuadraticFormCheck quadratic_form_check(const TimeMesh& mesh, std::span<const double> w,
                                        double margin = kDefaultRatioMargin);

}  // namespace chs
