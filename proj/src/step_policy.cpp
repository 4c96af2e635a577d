#include "chsolver/step_policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chsolver/errors.hpp"

namespace chs {

AdaptiveStep make_adaptive(double tau_min, double tau_max, double alpha, double margin) {
  return AdaptiveStep{tau_min, tau_max, alpha, r_max_root() - margin};
}

void validate(const StepPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedStep>(&policy)) {
    if (!(fixed->tau > 0.0)) throw ValidationError("fixed step tau must be positive");
  } else if (const auto* adaptive = std::get_if<AdaptiveStep>(&policy)) {
    if (!(adaptive->tau_min > 0.0)) throw ValidationError("tau_min must be positive");
    if (!(adaptive->tau_min <= adaptive->tau_max))
      throw ValidationError("tau_min must not exceed tau_max");
    if (!(adaptive->alpha >= 0.0)) throw ValidationError("alpha must be non-negative");
    if (!(adaptive->max_ratio > 0.0) || adaptive->max_ratio > r_max_root())
      throw ValidationError("adaptive max ratio must lie in (0, r_max]");
  }
}

double adaptive_proposal(const AdaptiveStep& policy, double energy_rate) {
  return policy.tau_max / std::sqrt(1.0 + policy.alpha * energy_rate * energy_rate);
}

double next_step(const StepPolicy& policy, std::size_t n, double prev_tau, double prev_gamma,
                 double curr_gamma) {
  if (const auto* fixed = std::get_if<FixedStep>(&policy)) return fixed->tau;
  if (const auto* prescribed = std::get_if<PrescribedMesh>(&policy)) {
    if (n > prescribed->mesh.count())
      throw MeshExhausted("prescribed mesh has only " + std::to_string(prescribed->mesh.count()) +
                          " steps");
    return prescribed->mesh.step(n);
  }
  const auto& adaptive = std::get<AdaptiveStep>(policy);
  if (n <= 1) return adaptive.tau_min;
  if (!(prev_tau > 0.0)) throw ValidationError("previous step must be positive");
  const double rate = (curr_gamma - prev_gamma) / prev_tau;
  const double proposal = adaptive_proposal(adaptive, rate);
  return std::min({std::max(proposal, adaptive.tau_min), adaptive.tau_max,
                   adaptive.max_ratio * prev_tau});
}

RunResult run_with_policy(const GsavState& initial, const StepPolicy& policy, double horizon,
                          const StepObserver& observer) {
  validate(policy);
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  RunResult out{initial, {}};
  GsavState& state = out.state;
  double prev_gamma = state.gamma;
  const double landing = horizon * (1.0 - 1e-12);

  while (state.time < landing) {
    double tau = next_step(policy, state.step_index + 1, state.prev_tau, prev_gamma, state.gamma);
    bool last = state.time + tau >= landing;
    if (last) tau = horizon - state.time;
    prev_gamma = state.gamma;
    auto [next, record] = advance(state, tau);
    state = std::move(next);
    if (last) {
      state.time = horizon;
      record.t = horizon;
    }
    out.records.push_back(record);
    if (observer) observer(state, record);
  }
  return out;
}

}  // namespace chs
