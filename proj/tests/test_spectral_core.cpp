#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "chsolver/errors.hpp"
#include "chsolver/spectral_field.hpp"
#include "oracles.hpp"

using namespace chs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

Grid grid2(int n) { return Grid(2, n, 2.0 * kPi); }

SpectralField sample(const Grid& g, const std::function<double(double, double)>& u) {
  std::vector<double> v(g.size());
  const double h = g.spacing();
  for (int i = 0; i < g.modes(); ++i)
    for (int j = 0; j < g.modes(); ++j) v[i * g.modes() + j] = u(i * h, j * h);
  return SpectralField::from_physical(g, std::move(v));
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double quadrature_l2(const SpectralField& f) {
  double s = 0.0;
  for (double v : f.physical()) s += v * v;
  return s * f.grid().cell_volume();
}

}  // namespace

TEST_CASE("grid rejects invalid shapes", "[grid]") {
  CHECK_THROWS_AS(Grid(2, 7, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid(2, 2, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid(4, 8, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid(2, 8, 0.0), ValidationError);
  CHECK_NOTHROW(Grid(3, 4, 1.0));
}

TEST_CASE("grid wavenumbers are symmetric apart from the unpaired mode", "[grid]") {
  Grid g(2, 16, 3.0);
  CHECK_THAT(g.cell_volume(), WithinRel(std::pow(3.0 / 16, 2), 1e-15));
  for (int m = 1; m < 8; ++m)
    CHECK(g.wavenumber(g.storage_index(m)) == -g.wavenumber(g.storage_index(-m)));
  CHECK(g.signed_mode(8) == -8);
  CHECK(g.is_nyquist(g.storage_index(-8)));

  auto expected = oracle::k_squared(g);
  const auto& ksq = g.k_squared();
  REQUIRE(ksq.size() == expected.size());
  for (std::size_t i = 0; i < ksq.size(); ++i) CHECK_THAT(ksq[i], WithinAbs(expected[i], 1e-12));
}

TEST_CASE("forward transform of simple fields", "[transform]") {
  Grid g = grid2(8);
  auto flat = to_coefficients(sample(g, [](double, double) { return 2.5; }));
  auto c = flat.coefficients();
  CHECK_THAT(c[0].real(), WithinAbs(2.5, 1e-15));
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-15);

  auto cosx = to_coefficients(sample(g, [](double x, double) { return std::cos(x); }));
  auto cc = cosx.coefficients();
  const std::size_t plus = static_cast<std::size_t>(g.storage_index(1)) * 8;
  const std::size_t minus = static_cast<std::size_t>(g.storage_index(-1)) * 8;
  for (std::size_t i = 0; i < cc.size(); ++i) {
    const double want = (i == plus || i == minus) ? 0.5 : 0.0;
    CHECK_THAT(std::abs(cc[i] - want), WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("forward transform matches the explicit DFT sum", "[transform][oracle]") {
  std::mt19937_64 rng(11);
  for (int dim : {2, 3}) {
    Grid g(dim, 8, 2.0 * kPi);
    auto values = oracle::white_noise(g, rng, -1.0, 1.0);
    auto expected = oracle::dft_coefficients(g, values);
    auto field = to_coefficients(SpectralField::from_physical(g, values));
    auto got = field.coefficients();
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-12);
  }
}

TEST_CASE("round trip, conjugate symmetry and Parseval on random fields", "[transform][property]") {
  std::mt19937_64 rng(2024);
  const int sizes[] = {8, 16, 32};
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 2 + trial % 2;
    const int n = sizes[(trial / 2) % 3];
    Grid g(dim, n, 1.0 + trial % 5);
    auto values = oracle::white_noise(g, rng, -3.0, 3.0);
    SpectralField f = SpectralField::from_physical(g, values);
    SpectralField c = to_coefficients(f);
    SpectralField back = to_physical(SpectralField::from_coefficients(
        g, std::vector<Complex>(c.coefficients().begin(), c.coefficients().end())));

    const double scale = max_abs(values);
    double err = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      err = std::max(err, std::abs(back.physical()[i] - values[i]));
    REQUIRE(err <= 1e-12 * scale);

    if (trial % 50 == 0) {
      auto coeffs = c.coefficients();
      std::vector<int> idx(dim), neg(dim);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        g.unravel(i, idx.data());
        bool paired = true;
        for (int a = 0; a < dim; ++a) {
          paired = paired && !g.is_nyquist(idx[a]);
          neg[a] = (n - idx[a]) % n;
        }
        if (!paired) continue;
        std::size_t j = 0;
        for (int a = 0; a < dim; ++a) j = j * n + neg[a];
        REQUIRE(std::abs(coeffs[j] - std::conj(coeffs[i])) < 1e-13 * scale);
      }
    }
    REQUIRE_THAT(l2_norm_sq(c), WithinRel(quadrature_l2(f), 1e-10));
  }
}

TEST_CASE("inverse transform", "[transform]") {
  Grid g = grid2(8);
  std::vector<Complex> unit(g.size());
  unit[0] = 1.0;
  auto one = to_physical(SpectralField::from_coefficients(g, unit));
  for (double v : one.physical()) CHECK_THAT(v, WithinAbs(1.0, 1e-15));

  std::vector<Complex> cosx(g.size());
  cosx[g.storage_index(1) * 8] = 0.5;
  cosx[g.storage_index(-1) * 8] = 0.5;
  auto expected = sample(g, [](double x, double) { return std::cos(x); });
  auto got = to_physical(SpectralField::from_coefficients(g, cosx));
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK_THAT(got.physical()[i], WithinAbs(expected.physical()[i], 1e-12));

  std::vector<Complex> lopsided(g.size());
  lopsided[g.storage_index(1) * 8] = Complex(0.0, 1.0);
  CHECK_THROWS_AS(to_physical(SpectralField::from_coefficients(g, lopsided)), ImaginaryResidue);
}

TEST_CASE("stale representations are refused", "[field]") {
  Grid g = grid2(8);
  auto f = SpectralField::from_physical(g, std::vector<double>(g.size(), 1.0));
  CHECK_THROWS_AS(f.coefficients(), std::logic_error);
  auto c = SpectralField::from_coefficients(g, std::vector<Complex>(g.size()));
  CHECK_THROWS_AS(c.physical(), std::logic_error);
  CHECK_THROWS(SpectralField::from_physical(g, std::vector<double>(3)));
}

TEST_CASE("diagonal differential operators", "[symbol]") {
  Grid g = grid2(16);
  auto cosx = sample(g, [](double x, double) { return std::cos(x); });
  auto lap = to_physical(apply_symbol(cosx, 1));
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK_THAT(lap.physical()[i], WithinAbs(-cosx.physical()[i], 1e-12));

  auto cos2x = sample(g, [](double x, double) { return std::cos(2 * x); });
  auto bih = to_physical(apply_symbol(cos2x, 2));
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK_THAT(bih.physical()[i], WithinAbs(16.0 * cos2x.physical()[i], 1e-11));

  auto flat = to_physical(apply_symbol(sample(g, [](double, double) { return 3.0; }), 1));
  CHECK(max_abs(flat.physical()) < 1e-14);
  CHECK_THROWS_AS(apply_symbol(cosx, 3), std::invalid_argument);
}

TEST_CASE("spectral Laplacian agrees with the five-point stencil at second order",
          "[symbol][property]") {
  auto u = [](double x, double y) { return std::exp(std::sin(x)) * std::cos(y); };
  std::vector<double> errors;
  for (int n : {16, 32, 64}) {
    Grid g = grid2(n);
    auto f = sample(g, u);
    auto lap = to_physical(apply_symbol(f, 1));
    const double h = g.spacing();
    auto at = [&](int i, int j) {
      i = (i + n) % n;
      j = (j + n) % n;
      return f.physical()[i * n + j];
    };
    double err = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double stencil =
            (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / (h * h);
        err = std::max(err, std::abs(stencil - lap.physical()[i * n + j]));
      }
    errors.push_back(err);
  }
  for (std::size_t k = 1; k < errors.size(); ++k)
    CHECK(std::log2(errors[k - 1] / errors[k]) >= 1.9);
}

TEST_CASE("norms of closed-form fields", "[norms]") {
  Grid g = grid2(16);
  const double area = 4.0 * kPi * kPi;
  auto one = sample(g, [](double, double) { return 1.0; });
  auto cosx = sample(g, [](double x, double) { return std::cos(x); });
  auto zero = SpectralField(g);

  CHECK_THAT(l2_norm_sq(one), WithinRel(area, 1e-14));
  CHECK_THAT(l2_norm_sq(cosx), WithinRel(2.0 * kPi * kPi, 1e-14));
  CHECK_THAT(grad_norm_sq(one), WithinAbs(0.0, 1e-14));
  CHECK_THAT(grad_norm_sq(cosx), WithinRel(2.0 * kPi * kPi, 1e-14));
  CHECK(h1_norm(zero) == 0.0);
  CHECK_THAT(h1_norm(one), WithinRel(2.0 * kPi, 1e-14));
  CHECK_THAT(h1_norm(cosx), WithinRel(2.0 * kPi, 1e-14));
  CHECK_THAT(mass(one), WithinRel(area, 1e-14));
  CHECK_THAT(inner_product(cosx, cosx), WithinRel(l2_norm_sq(cosx), 1e-14));
}

TEST_CASE("gradient norm matches quadrature of the analytic gradient", "[norms][oracle]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Grid g(2, 16, 2.0 + trial % 3);
    const double w = 2.0 * kPi / g.length();
    struct Term {
      int kx, ky;
      double a, phase;
    };
    std::vector<Term> terms;
    for (int t = 0; t < 5; ++t)
      terms.push_back({static_cast<int>(coef(rng) * 7), static_cast<int>(coef(rng) * 7), coef(rng),
                       3.0 * coef(rng)});
    auto f = sample(g, [&](double x, double y) {
      double s = 0.0;
      for (auto& t : terms) s += t.a * std::cos(w * (t.kx * x + t.ky * y) + t.phase);
      return s;
    });
    double quad = 0.0;
    const double h = g.spacing();
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        double gx = 0.0, gy = 0.0;
        for (auto& t : terms) {
          double s = -t.a * std::sin(w * (t.kx * i * h + t.ky * j * h) + t.phase);
          gx += s * w * t.kx;
          gy += s * w * t.ky;
        }
        quad += gx * gx + gy * gy;
      }
    quad *= g.cell_volume();
    CHECK_THAT(grad_norm_sq(f), WithinRel(quad, 1e-10));
  }
}

TEST_CASE("pointwise nonlinearity", "[nonlinearity]") {
  Grid g = grid2(8);
  for (bool dealias : {false, true}) {
    auto ones = nonlinearity(sample(g, [](double, double) { return 1.0; }), 0.3, dealias);
    CHECK(max_abs(to_physical(ones).physical()) < 1e-13);
    auto zeros = nonlinearity(SpectralField(g), 0.3, dealias);
    CHECK(max_abs(to_physical(zeros).physical()) < 1e-13);
    auto twos = to_physical(nonlinearity(sample(g, [](double, double) { return 2.0; }), 0.5, dealias));
    for (double v : twos.physical()) CHECK_THAT(v, WithinAbs(24.0, 1e-12));
  }
}

TEST_CASE("padded cube keeps out-of-band content off the resolved modes", "[nonlinearity]") {
  // cos^3(2x) - cos(2x) = (cos 6x - cos 2x)/4. On N = 8 the 6x term aliases
  // onto 2x and cancels it; on the padded grid it is simply truncated.
  Grid g = grid2(8);
  auto f = sample(g, [](double x, double) { return std::cos(2 * x); });
  auto plain_field = to_coefficients(nonlinearity(f, 1.0, false));
  auto padded_field = to_coefficients(nonlinearity(f, 1.0, true));
  auto plain = plain_field.coefficients();
  auto padded = padded_field.coefficients();
  const std::size_t two = static_cast<std::size_t>(g.storage_index(2)) * 8;
  CHECK_THAT(std::abs(plain[two]), WithinAbs(0.0, 1e-13));
  CHECK_THAT(padded[two].real(), WithinAbs(-0.125, 1e-13));

  // Resolved input gives identical results either way.
  auto low = sample(g, [](double x, double) { return std::cos(x); });
  auto a = to_coefficients(nonlinearity(low, 1.0, false));
  auto b = to_coefficients(nonlinearity(low, 1.0, true));
  CHECK(max_coefficient_difference(a, b) < 1e-14);
}

TEST_CASE("projection is idempotent and self-adjoint", "[project][property]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 2;
    Grid g(dim, 16, 2.0 * kPi);
    auto u = to_coefficients(SpectralField::from_physical(g, oracle::white_noise(g, rng, -1, 1)));
    auto v = to_coefficients(SpectralField::from_physical(g, oracle::white_noise(g, rng, -1, 1)));
    const int cutoff = 2 * (2 + trial % 7);
    auto pu = project(u, cutoff);
    CHECK(max_coefficient_difference(project(pu, cutoff), pu) == 0.0);
    CHECK(max_coefficient_difference(project(u, 16), u) == 0.0);
    CHECK_THAT(inner_product(pu, v), WithinAbs(inner_product(u, project(v, cutoff)), 1e-12));
  }
  Grid g = grid2(16);
  auto high = sample(g, [](double x, double) { return std::cos(5 * x); });
  CHECK(l2_norm_sq(project(high, 8)) < 1e-28);
  CHECK_THROWS(project(high, 18));
}

TEST_CASE("field arithmetic", "[field]") {
  Grid g = grid2(8);
  auto a = sample(g, [](double x, double) { return std::sin(x); });
  auto b = sample(g, [](double, double y) { return std::cos(y); });
  auto sum = a + b;
  auto diff = sum - b;
  auto scaled = 2.0 * a;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK_THAT(diff.physical()[i], WithinAbs(a.physical()[i], 1e-15));
    CHECK(scaled.physical()[i] == 2.0 * a.physical()[i]);
  }
  CHECK_THROWS(a + SpectralField(grid2(16)));
}

TEST_CASE("drop_nyquist removes every unpaired coefficient", "[project]") {
  std::mt19937_64 rng(3);
  Grid g(3, 8, 1.0);
  auto u = to_coefficients(SpectralField::from_physical(g, oracle::white_noise(g, rng, -1, 1)));
  auto d = drop_nyquist(u);
  const auto& touches = g.touches_nyquist();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (touches[i])
      CHECK(d.coefficients()[i] == Complex(0.0));
    else
      CHECK(d.coefficients()[i] == u.coefficients()[i]);
  }
  CHECK_NOTHROW(to_physical(d));
}
