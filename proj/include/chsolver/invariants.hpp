#pragma once

#include <span>
#include <string>
#include <vector>

#include "chsolver/stepper.hpp"
#include "chsolver/time_mesh.hpp"

namespace chs {

/// Thresholds of the run-level invariant suite.
struct InvariantLimits {
  /// |Omega|; mass drift is measured as |m_n - m_0| / volume.
  double volume = 1.0;
  /// gamma^0 when known; otherwise the first record's gamma is used as the
  /// scale, and the first record's mass as m_0.
  double initial_gamma = 0.0;
  double initial_mass = 0.0;
  bool has_initial_state = false;
  double gamma_slack = 1e-13;     // times gamma^0
  double identity_tol = 1e-12;    // times gamma^{n-1}
  double mass_tol = 1e-10;
  /// Upper bound on tau_{n+1}/tau_n; 0 disables the check.
  double max_ratio = 0.0;
};

/// Checks a record stream for: gamma non-increasing, gamma and xi positive,
/// non-negative dissipation, gamma^{n-1} - gamma^n = dissipation, mass
/// conservation and the step-ratio bound. Returns one message per violation.
std::vector<std::string> check_invariants(std::span<const StepRecord> records,
                                          const InvariantLimits& limits);

/// Limits seeded from an initial stepper state.
InvariantLimits limits_for(const GsavState& initial, double max_ratio = 0.0);

}  // namespace chs
