#include "chsolver/stepper.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chsolver/errors.hpp"

namespace chs {
namespace {

double step_ratio(const GsavState& state, double tau) {
  return state.step_index == 0 ? 0.0 : tau / state.prev_tau;
}

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("step size must be positive");
}

SpectralField nonlinear_coefficients(const GsavState& state, double tau) {
  return to_coefficients(nonlinearity(extrapolated_phi(state, tau), state.eps, state.dealias));
}

SpectralField solve_modes(const GsavState& state, double tau, const SpectralField& f_hat) {
  const BdfCoeffs c = bdf_coeffs(tau, step_ratio(state, tau));
  const Grid& g = state.phi_bar_prev1.grid();
  const auto& ksq = g.k_squared();
  auto prev1 = state.phi_bar_prev1.coefficients();
  auto prev2 = state.phi_bar_prev2.coefficients();
  auto f = f_hat.coefficients();

  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k2 = ksq[i];
    out[i] = (c.b0 * prev1[i] - c.b1 * (prev1[i] - prev2[i]) - k2 * f[i]) / (c.b0 + k2 * k2);
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
      throw NonfiniteField("non-finite coefficient after the linear solve at step " +
                           std::to_string(state.step_index + 1));
  }
  return to_physical(SpectralField::from_coefficients(g, std::move(out)));
}

// ||grad mu||^2 with mu_hat = |k|^2 phi_bar_hat + f_hat.
double chemical_potential_grad_sq(const SpectralField& phi_bar_n, const SpectralField& f_hat) {
  const Grid& g = phi_bar_n.grid();
  const auto& ksq = g.k_squared();
  auto phi = phi_bar_n.coefficients();
  auto f = f_hat.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) sum += ksq[i] * std::norm(ksq[i] * phi[i] + f[i]);
  return g.volume() * sum;
}

double relaxation_eta(double xi) { return xi * (2.0 - xi); }

}  // namespace

double energy(const SpectralField& field, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("energy: eps must be positive");
  SpectralField f = field.has_physical() ? field : to_physical(field);
  double quartic = 0.0;
  for (double u : f.physical()) {
    double w = u * u - 1.0;
    quartic += w * w;
  }
  quartic *= f.grid().cell_volume() / (4.0 * eps * eps);
  return 0.5 * grad_norm_sq(f) + quartic;
}

GsavState init_state(const SpectralField& phi0, double eps, bool dealias) {
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  SpectralField start =
      to_physical(drop_nyquist(project(phi0, phi0.grid().modes())));
  GsavState s{start, start, start, start};
  s.eps = eps;
  s.dealias = dealias;
  s.gamma = energy(start, eps) + 1.0;
  s.initial_gamma = s.gamma;
  s.initial_mass = mass(start);
  return s;
}

SpectralField extrapolated_phi(const GsavState& state, double tau) {
  require_tau(tau);
  if (state.step_index == 0) return state.phi_prev1;
  const double r = step_ratio(state, tau);
  return (1.0 + r) * state.phi_prev1 - r * state.phi_prev2;
}

SpectralField linear_solve(const GsavState& state, double tau) {
  return solve_modes(state, tau, nonlinear_coefficients(state, tau));
}

double next_gamma(double gamma_prev, double tau, double grad_mu_sq, double energy) {
  return gamma_prev / (1.0 + tau * grad_mu_sq / (energy + 1.0));
}

GammaUpdate gamma_update(const GsavState& state, const SpectralField& phi_bar_n, double tau) {
  require_tau(tau);
  SpectralField phi_bar = to_physical(phi_bar_n.has_coefficients() ? phi_bar_n
                                                                   : to_coefficients(phi_bar_n));
  const double grad_mu_sq =
      chemical_potential_grad_sq(phi_bar, nonlinear_coefficients(state, tau));
  const double e = energy(phi_bar, state.eps);
  return {next_gamma(state.gamma, tau, grad_mu_sq, e), grad_mu_sq, e};
}

Relaxation relax(const GsavState& state, const SpectralField& phi_bar_n, double gamma_n) {
  if (!(gamma_n > 0.0)) throw std::invalid_argument("relax: gamma must be positive");
  const double xi = gamma_n / (energy(phi_bar_n, state.eps) + 1.0);
  const double eta = relaxation_eta(xi);
  return {xi, eta, eta * phi_bar_n};
}

Advanced advance(const GsavState& state, double tau) {
  require_tau(tau);
  const SpectralField f_hat = nonlinear_coefficients(state, tau);
  SpectralField phi_bar = solve_modes(state, tau, f_hat);

  const double grad_mu_sq = chemical_potential_grad_sq(phi_bar, f_hat);
  const double e = energy(phi_bar, state.eps);
  const double gamma = next_gamma(state.gamma, tau, grad_mu_sq, e);
  const double xi = gamma / (e + 1.0);
  const double eta = relaxation_eta(xi);
  if (!std::isfinite(gamma) || !std::isfinite(e))
    throw NonfiniteField("non-finite energy at step " + std::to_string(state.step_index + 1));

  GsavState next{phi_bar, state.phi_bar_prev1, eta * phi_bar, state.phi_prev1};
  next.gamma = gamma;
  next.initial_gamma = state.initial_gamma;
  next.initial_mass = state.initial_mass;
  next.eps = state.eps;
  next.dealias = state.dealias;
  next.time = state.time + tau;
  next.prev_tau = tau;
  next.step_index = state.step_index + 1;

  StepRecord rec;
  rec.n = next.step_index;
  rec.t = next.time;
  rec.tau = tau;
  rec.gamma = gamma;
  rec.energy = e;
  rec.xi = xi;
  rec.eta = eta;
  rec.mass = mass(phi_bar);
  rec.dissipation = tau * xi * grad_mu_sq;
  return {std::move(next), rec};
}

}  // namespace chs
