#include "chsolver/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "chsolver/errors.hpp"

namespace chs {

TimeMesh::TimeMesh(std::vector<double> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ValidationError("time mesh needs at least one step");
  times_.resize(steps_.size() + 1);
  times_[0] = 0.0;
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    if (!(steps_[k] > 0.0) || !std::isfinite(steps_[k]))
      throw ValidationError("time step " + std::to_string(k + 1) + " is not positive");
    times_[k + 1] = times_[k] + steps_[k];
  }
}

double TimeMesh::step(std::size_t k) const {
  if (k < 1 || k > steps_.size())
    throw IndexOutOfRange("step index " + std::to_string(k) + " outside 1.." +
                          std::to_string(steps_.size()));
  return steps_[k - 1];
}

double TimeMesh::ratio(std::size_t k) const {
  double tau = step(k);
  return k == 1 ? 0.0 : tau / steps_[k - 2];
}

double TimeMesh::time(std::size_t n) const {
  if (n > steps_.size())
    throw IndexOutOfRange("time index " + std::to_string(n) + " beyond " + std::to_string(steps_.size()));
  return times_[n];
}

double TimeMesh::max_step() const { return *std::max_element(steps_.begin(), steps_.end()); }

double TimeMesh::max_ratio() const {
  double worst = 0.0;
  for (std::size_t k = 2; k <= steps_.size(); ++k) worst = std::max(worst, ratio(k));
  return worst;
}

bool TimeMesh::satisfies_a1(double margin) const {
  const double bound = r_max_root() - margin;
  for (std::size_t k = 2; k <= steps_.size(); ++k) {
    double r = ratio(k);
    if (!(r > 0.0) || r > bound) return false;
  }
  return true;
}

void TimeMesh::require_a1(double margin) const {
  const double bound = r_max_root() - margin;
  for (std::size_t k = 2; k <= steps_.size(); ++k) {
    double r = ratio(k);
    if (!(r > 0.0) || r > bound) {
      std::ostringstream msg;
      msg << "step ratio r_" << k << " = " << r << " violates 0 < r <= " << bound;
      throw MeshViolatesA1(msg.str());
    }
  }
}

BdfCoeffs bdf_coeffs(double tau, double ratio) {
  const double denom = tau * (1.0 + ratio);
  return BdfCoeffs{(1.0 + 2.0 * ratio) / denom, -(ratio * ratio) / denom, 1.0 + ratio, ratio};
}

BdfCoeffs bdf_coeffs(const TimeMesh& mesh, std::size_t n) {
  return bdf_coeffs(mesh.step(n), mesh.ratio(n));
}

double bdf_difference(const TimeMesh& mesh, std::span<const double> u, std::size_t n) {
  if (n < 1 || n >= u.size()) throw IndexOutOfRange("bdf_difference: n outside the sequence");
  BdfCoeffs c = bdf_coeffs(mesh, n);
  double out = c.b0 * (u[n] - u[n - 1]);
  if (n >= 2) out += c.b1 * (u[n - 1] - u[n - 2]);
  return out;
}

double r_max_root() {
  // x^3 - 4x^2 - 4x - 1 changes sign on [4, 5].
  auto p = [](double x) { return ((x - 4.0) * x - 4.0) * x - 1.0; };
  double lo = 4.0;
  double hi = 5.0;
  while (hi - lo > 1e-15 * hi) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (p(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TimeMesh mesh_from_weights(double horizon, std::span<const double> weights) {
  if (!(horizon > 0.0)) throw ValidationError("mesh horizon must be positive");
  if (weights.empty()) throw ValidationError("mesh needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("mesh weights must be positive");
    total += w;
  }
  std::vector<double> steps(weights.size());
  for (std::size_t k = 0; k < steps.size(); ++k) steps[k] = horizon * weights[k] / total;
  return TimeMesh(std::move(steps));
}

TimeMesh random_mesh(double horizon, std::size_t count, std::uint64_t seed) {
  if (count < 2) throw ValidationError("random mesh needs at least two steps");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(kRandomWeightFloor, 1.0);
  std::vector<double> weights(count);
  for (auto& w : weights) w = theta(rng);
  return mesh_from_weights(horizon, weights);
}

}  // namespace chs
