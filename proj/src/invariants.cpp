#include "chsolver/invariants.hpp"

#include <cmath>
#include <sstream>

namespace chs {

InvariantLimits limits_for(const GsavState& initial, double max_ratio) {
  InvariantLimits limits;
  limits.volume = initial.phi_bar_prev1.grid().volume();
  limits.initial_gamma = initial.initial_gamma;
  limits.initial_mass = initial.initial_mass;
  limits.has_initial_state = true;
  limits.max_ratio = max_ratio;
  return limits;
}

std::vector<std::string> check_invariants(std::span<const StepRecord> records,
                                          const InvariantLimits& limits) {
  std::vector<std::string> out;
  if (records.empty()) return out;
  auto report = [&](std::size_t n, const std::string& what) {
    std::ostringstream msg;
    msg << "step " << n << ": " << what;
    out.push_back(msg.str());
  };

  const double gamma0 = limits.has_initial_state ? limits.initial_gamma : records.front().gamma;
  const double mass0 = limits.has_initial_state ? limits.initial_mass : records.front().mass;
  double prev_gamma = limits.has_initial_state ? limits.initial_gamma : std::nan("");

  for (std::size_t i = 0; i < records.size(); ++i) {
    const StepRecord& r = records[i];
    if (!(r.gamma > 0.0)) report(r.n, "gamma is not positive");
    if (!(r.xi > 0.0)) report(r.n, "xi is not positive");
    if (!(r.dissipation >= 0.0)) report(r.n, "negative dissipation");
    if (!std::isnan(prev_gamma)) {
      if (r.gamma > prev_gamma + limits.gamma_slack * gamma0) report(r.n, "gamma increased");
      const double gap = std::abs((prev_gamma - r.gamma) - r.dissipation);
      if (gap > limits.identity_tol * prev_gamma) report(r.n, "dissipation identity broken");
    }
    if (std::abs(r.mass - mass0) / limits.volume >= limits.mass_tol) report(r.n, "mass drifted");
    if (limits.max_ratio > 0.0 && i > 0 && r.tau > limits.max_ratio * records[i - 1].tau * (1 + 1e-12))
      report(r.n, "step ratio above bound");
    prev_gamma = r.gamma;
  }
  return out;
}

}  // namespace chs
