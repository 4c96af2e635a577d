#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "chsolver/errors.hpp"
#include "chsolver/experiments.hpp"
#include "chsolver/initial_conditions.hpp"

using namespace chs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

double at(const SpectralField& f, int i, int j) {
  return f.physical()[static_cast<std::size_t>(i) * f.grid().modes() + j];
}

SpectralField from_mask(const Grid& g, const std::vector<std::size_t>& positive) {
  std::vector<double> v(g.size(), -1.0);
  for (auto p : positive) v[p] = 1.0;
  return SpectralField::from_physical(g, std::move(v));
}

}  // namespace

TEST_CASE("bubble initial condition", "[initial]") {
  Grid g(2, 32, 2.0 * kPi);
  auto f = ic_bubble(g, 0.2);
  CHECK_THAT(at(f, 16, 16), WithinAbs(std::tanh(1.5 / 0.8), 1e-14));
  CHECK_THAT(at(f, 0, 0), WithinAbs(-1.0, 0.05));
  // Radial symmetry about the centre.
  for (int d = 1; d < 16; ++d) {
    CHECK_THAT(at(f, 16 + d, 16), WithinAbs(at(f, 16 - d, 16), 1e-14));
    CHECK_THAT(at(f, 16, 16 + d), WithinAbs(at(f, 16 + d, 16), 1e-14));
  }
  CHECK_THROWS_AS(ic_bubble(Grid(3, 8, 2.0 * kPi), 0.2), DimMismatch);
  CHECK_THROWS_AS(ic_bubble(g, 0.0), ValidationError);
}

TEST_CASE("kissing bubbles initial condition", "[initial]") {
  Grid g(2, 64, 2.0 * kPi);
  auto f = ic_kissing(g, 0.1);
  for (int i = 1; i < 64; ++i)
    for (int j = 1; j < 64; ++j) {
      REQUIRE_THAT(at(f, i, j), WithinAbs(at(f, 64 - i, j), 1e-13));
      REQUIRE_THAT(at(f, i, j), WithinAbs(at(f, i, 64 - j), 1e-13));
    }
  // Inside a bubble, in the matrix, and at the contact point.
  const int centre_left = 32 - static_cast<int>(std::lround(64 / (2 * kPi)));
  CHECK(at(f, centre_left, 32) > 0.9);
  const double near = std::hypot(kPi - 1.0, kPi);
  const double far = std::hypot(kPi + 1.0, kPi);
  CHECK_THAT(at(f, 0, 0),
             WithinAbs(1.0 + std::tanh((1.0 - near) / 0.4) + std::tanh((1.0 - far) / 0.4), 1e-14));
  CHECK_THAT(at(f, 0, 0), WithinAbs(-1.0, 1e-5));
  CHECK(at(f, 32, 32) > -1.0);

  KissingOptions bare;
  bare.offset = 0.0;
  auto b = ic_kissing(g, 0.1, bare);
  CHECK_THAT(at(b, 5, 7), WithinAbs(at(f, 5, 7) - 1.0, 1e-14));
  CHECK_THROWS_AS(ic_kissing(Grid(3, 8, 2.0 * kPi), 0.1), DimMismatch);
}

TEST_CASE("random initial condition", "[initial]") {
  Grid g(2, 64, 2.0 * kPi);
  auto f = ic_random(g, 7);
  double mean = 0.0;
  for (double v : f.physical()) {
    REQUIRE(v >= 0.05);
    REQUIRE(v < 0.65);
    mean += v;
  }
  CHECK_THAT(mean / static_cast<double>(g.size()), WithinAbs(0.35, 0.01));

  auto again = ic_random(g, 7);
  auto other = ic_random(g, 8);
  CHECK(std::equal(f.physical().begin(), f.physical().end(), again.physical().begin()));
  CHECK_FALSE(std::equal(f.physical().begin(), f.physical().end(), other.physical().begin()));

  auto unit = ic_random(g, 7, RandRange::Unit);
  for (double v : unit.physical()) {
    REQUIRE(v >= 0.35);
    REQUIRE(v < 0.65);
  }
}

TEST_CASE("connected components of the positive phase", "[initial]") {
  Grid g(2, 8, 2.0 * kPi);
  CHECK(count_positive_components(from_mask(g, {})) == 0);
  CHECK(count_positive_components(from_mask(g, {0 * 8 + 1, 0 * 8 + 2, 4 * 8 + 4})) == 2);
  // Diagonal neighbours are not adjacent.
  CHECK(count_positive_components(from_mask(g, {1 * 8 + 1, 2 * 8 + 2})) == 2);
  // A blob wrapping the periodic boundary is one component.
  CHECK(count_positive_components(from_mask(g, {3 * 8 + 0, 3 * 8 + 7, 0 * 8 + 5, 7 * 8 + 5})) == 2);
  CHECK(count_positive_components(ic_constant(g, 1.0)) == 1);

  Grid g3(3, 4, 2.0 * kPi);
  CHECK(count_positive_components(from_mask(g3, {0, 3 * 16, 2 * 16 + 2 * 4 + 2})) == 2);

  // Works from coefficients as well.
  auto bubble = to_coefficients(ic_bubble(Grid(2, 32, 2.0 * kPi), 0.2));
  auto coeffs = bubble.coefficients();
  auto spectral_only = SpectralField::from_coefficients(
      bubble.grid(), std::vector<Complex>(coeffs.begin(), coeffs.end()));
  CHECK(count_positive_components(spectral_only) == 1);
}

TEST_CASE("observed order", "[order]") {
  CHECK_THAT(order_of(4e-4, 1e-4, 2e-3, 1e-3), WithinAbs(2.0, 1e-14));
  CHECK_THAT(order_of(8e-3, 1e-3, 4e-2, 1e-2), WithinAbs(1.5, 1e-14));
  CHECK_THAT(order_of(1.0, 1.0, 2.0, 1.0), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(order_of(2.0, 1.0, 1e-3, 1e-3), DegenerateRatio);
  CHECK_THROWS_AS(order_of(0.0, 1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(order_of(1.0, 1.0, -2.0, 1.0), std::invalid_argument);
}

TEST_CASE("scenario defaults and names", "[scenario]") {
  auto conv = default_scenario(ScenarioKind::Convergence);
  CHECK(conv.eps == 0.2);
  CHECK(conv.horizon == 0.1);
  REQUIRE(std::holds_alternative<PrescribedMesh>(conv.policy));
  CHECK(std::get<PrescribedMesh>(conv.policy).mesh.count() == 400);

  auto kiss = default_scenario(ScenarioKind::KissingBubbles);
  CHECK_THAT(kiss.eps * kiss.eps, WithinRel(0.1, 1e-15));
  REQUIRE(std::holds_alternative<AdaptiveStep>(kiss.policy));
  const auto& a = std::get<AdaptiveStep>(kiss.policy);
  CHECK(a.tau_min == 1e-4);
  CHECK(a.tau_max == 7e-3);
  CHECK(a.alpha == 0.01);

  auto c2 = default_scenario(ScenarioKind::Coarsening2d);
  CHECK(c2.eps == 0.3);
  CHECK(c2.horizon == 3.0);
  CHECK(c2.initial.kind == InitialKind::Random);

  auto c3 = default_scenario(ScenarioKind::Coarsening3d);
  CHECK(c3.dim == 3);
  CHECK(c3.modes == 48);
  CHECK_THAT(c3.eps, WithinRel(2.0 * kPi / 48.0, 1e-15));
  CHECK(std::get<AdaptiveStep>(c3.policy).alpha == 1.0);

  for (auto kind : {ScenarioKind::Convergence, ScenarioKind::KissingBubbles,
                    ScenarioKind::Coarsening2d, ScenarioKind::Coarsening3d})
    CHECK(scenario_from_string(to_string(kind)) == kind);
  for (auto kind : {InitialKind::Bubble, InitialKind::Kissing, InitialKind::Random,
                    InitialKind::Constant})
    CHECK(initial_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(scenario_from_string("coarsening4d"), ValidationError);
  CHECK_THROWS_AS(initial_from_string("square"), ValidationError);
}

TEST_CASE("scenario runs serve snapshots and keep the invariants", "[scenario]") {
  Scenario s = default_scenario(ScenarioKind::Coarsening2d);
  s.modes = 32;
  s.horizon = 0.01;
  s.policy = FixedStep{1e-3};
  s.snapshot_times = {0.005, 0.0, 0.00549, 0.01};

  int steps_seen = 0;
  int sunk = 0;
  auto result = run_scenario(
      s, [&](const GsavState&, const StepRecord&) { ++steps_seen; },
      [&](const Snapshot&) { ++sunk; });
  REQUIRE(result.records.size() == 10);
  CHECK(steps_seen == 10);
  REQUIRE(result.snapshots.size() == 4);
  CHECK(sunk == 4);
  CHECK(result.snapshots[0].t == 0.0);
  CHECK_THAT(result.snapshots[1].t, WithinAbs(0.005, 1e-15));
  // Served by the first state at or past the requested time.
  CHECK_THAT(result.snapshots[2].t, WithinAbs(0.006, 1e-15));
  CHECK(result.snapshots[3].t == 0.01);
  CHECK(result.final_state.time == 0.01);

  const double m0 = result.final_state.initial_mass;
  double prev = result.final_state.initial_gamma;
  for (const auto& r : result.records) {
    CHECK(r.gamma <= prev);
    CHECK(std::abs(r.mass - m0) < 1e-10 * s.grid().volume());
    prev = r.gamma;
  }
}

TEST_CASE("convergence study structure", "[convergence]") {
  ConvergenceSetup setup;
  setup.modes = 16;
  setup.horizon = 0.02;
  setup.base_steps = 8;
  setup.levels = 3;
  setup.threads = 1;
  auto serial = run_convergence(setup);
  REQUIRE(serial.rows.size() == 3);
  CHECK(serial.reference_steps == 32 * 32);
  CHECK(serial.reference_gamma > 1.0);
  for (std::size_t l = 0; l < 3; ++l) {
    const auto& row = serial.rows[l];
    CHECK(row.steps == (8u << l));
    CHECK(row.h1_error > 0.0);
    CHECK(row.max_ratio < r_max_root());
    if (l == 0) {
      CHECK(std::isnan(row.h1_order));
      CHECK(std::isnan(row.gamma_order));
      CHECK(std::isnan(row.xi_order));
    } else {
      CHECK(row.h1_error < serial.rows[l - 1].h1_error);
      CHECK_THAT(row.h1_order, WithinAbs(order_of(serial.rows[l - 1].h1_error, row.h1_error,
                                                  serial.rows[l - 1].tau_max, row.tau_max),
                                         1e-14));
    }
  }

  setup.threads = 3;
  auto parallel = run_convergence(setup);
  REQUIRE(parallel.rows.size() == 3);
  CHECK(parallel.reference_gamma == serial.reference_gamma);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(parallel.rows[l].h1_error == serial.rows[l].h1_error);
    CHECK(parallel.rows[l].gamma_error == serial.rows[l].gamma_error);
  }

  setup.reference_steps = 500;
  CHECK(run_convergence(setup).reference_steps == 500);
  setup.base_steps = 1;
  CHECK_THROWS_AS(run_convergence(setup), ValidationError);
}

TEST_CASE("worker count from the environment", "[convergence]") {
  ::setenv("CHSOLVER_THREADS", "5", 1);
  CHECK(worker_threads() == 5);
  ::setenv("CHSOLVER_THREADS", "zero", 1);
  CHECK(worker_threads() >= 1);
  ::unsetenv("CHSOLVER_THREADS");
  CHECK(worker_threads() >= 1);
}
