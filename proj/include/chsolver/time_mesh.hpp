#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chs {

/// Default margin below r_max in the step-ratio condition.
inline constexpr double kDefaultRatioMargin = 0.01;
/// Lower bound of the random step weights; ratios of such weights stay below
/// 4.86, under r_max.
inline constexpr double kRandomWeightFloor = 1.0 / 4.86;

/// Finite sequence of positive steps tau_1..tau_K. Indices are 1-based to
/// match the usual t_n = tau_1 + ... + tau_n bookkeeping; t_0 = 0.
class TimeMesh {
 public:
  explicit TimeMesh(std::vector<double> steps);

  std::size_t count() const { return steps_.size(); }
  double step(std::size_t k) const;
  /// tau_k / tau_{k-1} for k >= 2, and 0 for k = 1.
  double ratio(std::size_t k) const;
  double time(std::size_t n) const;
  double horizon() const { return times_.back(); }
  double max_step() const;
  /// Largest r_k over k >= 2; 0 for single-step meshes.
  double max_ratio() const;
  std::span<const double> steps() const { return steps_; }

  /// 0 < r_k <= r_max - margin for every k >= 2.
  bool satisfies_a1(double margin = kDefaultRatioMargin) const;
  /// Throws MeshViolatesA1 naming the first offending step.
  void require_a1(double margin = kDefaultRatioMargin) const;

 private:
  std::vector<double> steps_;
  std::vector<double> times_;
};

/// Weights of the variable-step BDF2 formula at step n and of the matching
/// extrapolation (1 + r_n) u^{n-1} - r_n u^{n-2}.
struct BdfCoeffs {
  double b0;
  double b1;
  double extrap_plus;
  double extrap_minus;
};

/// Coefficients from the current step and its ratio to the previous one.
/// ratio = 0 gives the BDF1 start: b0 = 1/tau, b1 = 0.
BdfCoeffs bdf_coeffs(double tau, double ratio);
/// Coefficients for step n of the mesh (1 <= n <= K). Throws IndexOutOfRange.
BdfCoeffs bdf_coeffs(const TimeMesh& mesh, std::size_t n);

/// B u^{n-1}: prev1 at n = 1, (1 + r_n) prev1 - r_n prev2 otherwise.
template <typename T>
T extrapolate(const T& prev1, const T& prev2, std::size_t n, const TimeMesh& mesh) {
  if (n <= 1) return prev1;
  const double r = mesh.ratio(n);
  return (1.0 + r) * prev1 - r * prev2;
}

/// Variable-step BDF2 difference D2 u^n for a sequence u^0..u^K (u[0] = u^0).
double bdf_difference(const TimeMesh& mesh, std::span<const double> u, std::size_t n);

/// Real root of x^3 = (2x + 1)^2, approximately 4.8645.
double r_max_root();

/// tau_k = T theta_k / sum(theta) with theta_k ~ Uniform(1/4.86, 1).
/// Deterministic for a fixed seed.
TimeMesh random_mesh(double horizon, std::size_t count, std::uint64_t seed);
/// Same normalization with caller-supplied weights.
TimeMesh mesh_from_weights(double horizon, std::span<const double> weights);

}  // namespace chs
