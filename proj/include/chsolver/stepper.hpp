#pragma once

#include <cstddef>

#include "chsolver/spectral_field.hpp"
#include "chsolver/time_mesh.hpp"

namespace chs {

/// Stepper state after n-1 completed steps: two levels of the intermediate
/// solution phi_bar (fed to the BDF2 difference) and of the relaxed solution
/// phi (fed to the extrapolated nonlinearity), plus the modified energy.
struct GsavState {
  SpectralField phi_bar_prev1;
  SpectralField phi_bar_prev2;
  SpectralField phi_prev1;
  SpectralField phi_prev2;
  double gamma = 0.0;
  double initial_gamma = 0.0;
  double initial_mass = 0.0;
  double eps = 0.0;
  double time = 0.0;
  /// Size of the last completed step; 0 before the first one.
  double prev_tau = 0.0;
  std::size_t step_index = 0;
  bool dealias = false;
};

/// Diagnostics emitted after every step.
struct StepRecord {
  std::size_t n = 0;
  double t = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
  double energy = 0.0;  // E(phi_bar^n)
  double xi = 0.0;
  double eta = 0.0;
  double mass = 0.0;         // (phi_bar^n, 1)
  double dissipation = 0.0;  // tau_n xi^n ||grad mu^n||^2
};

/// Ginzburg-Landau energy 1/2 ||grad u||^2 + ||u^2 - 1||^2 / (4 eps^2). The
/// gradient part is evaluated in coefficient space, the quartic part by
/// quadrature on the collocation points.
double energy(const SpectralField& field, double eps);

/// phi^0 = phi_bar^0 = P_N phi0 with the unpaired -N/2 modes removed;
/// gamma^0 = E(phi^0) + 1.
GsavState init_state(const SpectralField& phi0, double eps, bool dealias = false);

/// B phi^{n-1} for a step of size tau.
SpectralField extrapolated_phi(const GsavState& state, double tau);

/// Solves (D2 phi_bar^n) + Delta^2 phi_bar^n - Delta f(B phi^{n-1}) = 0 mode by
/// mode. Throws NonfiniteField on NaN/Inf output.
SpectralField linear_solve(const GsavState& state, double tau);

struct GammaUpdate {
  double gamma;
  double grad_mu_sq;
  double energy;
};

/// gamma_prev / (1 + tau * grad_mu_sq / (energy + 1)).
double next_gamma(double gamma_prev, double tau, double grad_mu_sq, double energy);

/// Modified-energy update for a freshly solved phi_bar^n, with
/// mu^n = -Delta phi_bar^n + f(B phi^{n-1}).
GammaUpdate gamma_update(const GsavState& state, const SpectralField& phi_bar_n, double tau);

struct Relaxation {
  double xi;
  double eta;
  SpectralField phi;
};

/// xi = gamma_n / (E(phi_bar^n) + 1), eta = xi (2 - xi), phi^n = eta phi_bar^n.
Relaxation relax(const GsavState& state, const SpectralField& phi_bar_n, double gamma_n);

struct Advanced {
  GsavState state;
  StepRecord record;
};

/// One full step of size tau. The first step uses BDF1 automatically.
Advanced advance(const GsavState& state, double tau);

}  // namespace chs
