#include "chsolver/kernels.hpp"

#include <cmath>
#include <string>

#include "chsolver/errors.hpp"

namespace chs {
namespace {

// b^{(j)}_{j-k}; only the first two weights of each step are nonzero.
double conv_weight(const std::vector<BdfCoeffs>& c, std::size_t j, std::size_t k) {
  if (j == k) return c[j - 1].b0;
  if (j == k + 1) return c[j - 1].b1;
  return 0.0;
}

std::vector<BdfCoeffs> coefficients_up_to(const TimeMesh& mesh, std::size_t n) {
  if (n < 1 || n > mesh.count())
    throw IndexOutOfRange("kernel level " + std::to_string(n) + " outside 1.." +
                          std::to_string(mesh.count()));
  std::vector<BdfCoeffs> c(n);
  for (std::size_t j = 1; j <= n; ++j) {
    c[j - 1] = bdf_coeffs(mesh, j);
    if (!(c[j - 1].b0 > 0.0) || !std::isfinite(c[j - 1].b0))
      throw SingularKernel("b0 at step " + std::to_string(j) + " is not positive");
  }
  return c;
}

// Back substitution on the bidiagonal system with right-hand side rhs(k).
template <typename Rhs>
std::vector<double> solve_kernel(const std::vector<BdfCoeffs>& c, std::size_t n, Rhs rhs) {
  std::vector<double> kernel(n);
  kernel[n - 1] = rhs(n) / c[n - 1].b0;
  for (std::size_t k = n - 1; k >= 1; --k)
    kernel[k - 1] = (rhs(k) - kernel[k] * c[k].b1) / c[k - 1].b0;
  return kernel;
}

template <typename Target>
std::vector<double> residuals(const TimeMesh& mesh, std::size_t n, std::span<const double> kernel,
                              Target target) {
  auto c = coefficients_up_to(mesh, n);
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) {
    double sum = 0.0;
    for (std::size_t j = k; j <= n; ++j) sum += kernel[j - 1] * conv_weight(c, j, k);
    out[k - 1] = sum - target(k);
  }
  return out;
}

}  // namespace

std::vector<double> doc_kernels(const TimeMesh& mesh, std::size_t n) {
  auto c = coefficients_up_to(mesh, n);
  return solve_kernel(c, n, [n](std::size_t k) { return k == n ? 1.0 : 0.0; });
}

std::vector<double> dcc_kernels(const TimeMesh& mesh, std::size_t n) {
  auto c = coefficients_up_to(mesh, n);
  return solve_kernel(c, n, [](std::size_t) { return 1.0; });
}

std::vector<double> doc_residuals(const TimeMesh& mesh, std::size_t n,
                                  std::span<const double> theta) {
  return residuals(mesh, n, theta, [n](std::size_t k) { return k == n ? 1.0 : 0.0; });
}

std::vector<double> dcc_residuals(const TimeMesh& mesh, std::size_t n, std::span<const double> p) {
  return residuals(mesh, n, p, [](std::size_t) { return 1.0; });
}

QuadraticFormCheck quadratic_form_check(const TimeMesh& mesh, std::span<const double> w,
                                        double margin) {
  mesh.require_a1(margin);
  const std::size_t n = w.size();
  if (n == 0) return {0.0, 0.0, true};
  if (n > mesh.count()) throw IndexOutOfRange("quadratic_form_check: more weights than steps");

  // theta[k-1][j-1] = theta^{(k)}_{k-j}
  std::vector<std::vector<double>> theta(n);
  for (std::size_t k = 1; k <= n; ++k) theta[k - 1] = doc_kernels(mesh, k);

  double lhs = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double inner = 0.0;
    for (std::size_t j = 1; j <= k; ++j) inner += theta[k - 1][j - 1] * w[j - 1];
    lhs += w[k - 1] * inner;
  }
  lhs *= 2.0;

  double rhs = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double inner = 0.0;
    for (std::size_t s = k; s <= n; ++s) inner += theta[s - 1][k - 1] * w[s - 1];
    rhs += inner * inner / mesh.step(k);
  }
  rhs *= margin / 20.0;

  constexpr double slack = 1e-10;
  return {lhs, rhs, lhs >= rhs - slack && rhs >= -slack};
}

}  // namespace chs
