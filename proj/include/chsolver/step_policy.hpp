#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "chsolver/stepper.hpp"
#include "chsolver/time_mesh.hpp"

namespace chs {

struct FixedStep {
  double tau;
};

struct PrescribedMesh {
  TimeMesh mesh;
};

/// Energy-rate controller: propose tau_max / sqrt(1 + alpha |dE/dt|^2) with
/// dE/dt = (gamma^n - gamma^{n-1}) / tau_n, then clamp into
/// [tau_min, min(tau_max, max_ratio * tau_n)].
struct AdaptiveStep {
  double tau_min;
  double tau_max;
  double alpha;
  double max_ratio;  // at most r_max - margin
};

using StepPolicy = std::variant<FixedStep, PrescribedMesh, AdaptiveStep>;

/// Adaptive policy with max_ratio = r_max - margin.
AdaptiveStep make_adaptive(double tau_min, double tau_max, double alpha,
                           double margin = kDefaultRatioMargin);

/// Throws ValidationError when the policy parameters are inconsistent.
void validate(const StepPolicy& policy);

/// Unclamped controller proposal.
double adaptive_proposal(const AdaptiveStep& policy, double energy_rate);

/// Size of step n (1-based). For n = 1 the adaptive policy starts at tau_min
/// and prev_tau/gammas are ignored. Throws MeshExhausted past the end of a
/// prescribed mesh.
double next_step(const StepPolicy& policy, std::size_t n, double prev_tau, double prev_gamma,
                 double curr_gamma);

struct RunResult {
  GsavState state;
  std::vector<StepRecord> records;
};

/// Called after every step with the new state and its record.
using StepObserver = std::function<void(const GsavState&, const StepRecord&)>;

/// Advances until t reaches the horizon. A proposal that would overshoot (or
/// land within round-off of) the horizon is shortened to land on it exactly.
RunResult run_with_policy(const GsavState& initial, const StepPolicy& policy, double horizon,
                          const StepObserver& observer = {});

}  // namespace chs
