#include "chsolver/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "chsolver/errors.hpp"
#include "chsolver/fft.hpp"

namespace chs {

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(int dim, int modes, double length) : dim_(dim), modes_(modes), length_(length) {
  if (dim != 2 && dim != 3) throw ValidationError("grid dim must be 2 or 3, got " + std::to_string(dim));
  if (modes < 4 || modes % 2 != 0)
    throw ValidationError("grid N must be even and >= 4, got " + std::to_string(modes));
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("grid length must be positive");

  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(modes);

  auto ksq = std::make_shared<std::vector<double>>(size_, 0.0);
  auto nyq = std::make_shared<std::vector<bool>>(size_, false);
  int idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < size_; ++flat) {
    unravel(flat, idx);
    double sum = 0.0;
    bool touches = false;
    for (int d = 0; d < dim; ++d) {
      if (is_nyquist(idx[d])) {
        touches = true;
        continue;
      }
      double k = wavenumber(idx[d]);
      sum += k * k;
    }
    (*ksq)[flat] = sum;
    (*nyq)[flat] = touches;
  }
  k_squared_ = std::move(ksq);
  touches_nyquist_ = std::move(nyq);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::volume() const { return std::pow(length_, dim_); }

double Grid::wavenumber(int index) const {
  return 2.0 * std::numbers::pi * signed_mode(index) / length_;
}

void Grid::unravel(std::size_t flat, int* idx) const {
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(modes_));
    flat /= static_cast<std::size_t>(modes_);
  }
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(Grid grid)
    : grid_(grid),
      physical_(grid.size(), 0.0),
      coeffs_(grid.size(), Complex{}),
      has_physical_(true),
      has_coefficients_(true) {}

SpectralField::SpectralField(Grid grid, std::vector<double> values, std::vector<Complex> coeffs,
                             bool has_physical, bool has_coefficients)
    : grid_(std::move(grid)),
      physical_(std::move(values)),
      coeffs_(std::move(coeffs)),
      has_physical_(has_physical),
      has_coefficients_(has_coefficients) {}

SpectralField SpectralField::from_physical(Grid grid, std::vector<double> values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("physical values do not match grid size");
  return SpectralField(std::move(grid), std::move(values), {}, true, false);
}

SpectralField SpectralField::from_coefficients(Grid grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.size())
    throw std::invalid_argument("coefficients do not match grid size");
  return SpectralField(std::move(grid), {}, std::move(coeffs), false, true);
}

std::span<const double> SpectralField::physical() const {
  if (!has_physical_) throw std::logic_error("physical representation is not current");
  return physical_;
}

std::span<const Complex> SpectralField::coefficients() const {
  if (!has_coefficients_) throw std::logic_error("coefficient representation is not current");
  return coeffs_;
}

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

const SpectralField& with_coefficients(const SpectralField& f,
                                      std::optional<SpectralField>& storage) {
  if (f.has_coefficients()) return f;
  storage = to_coefficients(f);
  return *storage;
}

}  // namespace

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  bool phys = a.has_physical_ && b.has_physical_;
  bool coef = a.has_coefficients_ && b.has_coefficients_;
  if (!phys && !coef) return to_coefficients(a) + to_coefficients(b);
  std::vector<double> p;
  std::vector<Complex> c;
  if (phys) {
    p.resize(a.physical_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = a.physical_[i] + b.physical_[i];
  }
  if (coef) {
    c.resize(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
  }
  return SpectralField(a.grid_, std::move(p), std::move(c), phys, coef);
}

SpectralField operator*(double s, const SpectralField& a) {
  std::vector<double> p;
  std::vector<Complex> c;
  if (a.has_physical_) {
    p = a.physical_;
    for (auto& v : p) v *= s;
  }
  if (a.has_coefficients_) {
    c = a.coeffs_;
    for (auto& v : c) v *= s;
  }
  return SpectralField(a.grid_, std::move(p), std::move(c), a.has_physical_, a.has_coefficients_);
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) { return a + (-1.0) * b; }

SpectralField to_coefficients(const SpectralField& field) {
  if (field.has_coefficients()) return field;
  const Grid& g = field.grid();
  auto values = field.physical();
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(g.size());
  fft::transform(g.dim(), g.modes(), -1, in, out);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : out) c *= scale;
  return SpectralField(g, std::vector<double>(values.begin(), values.end()), std::move(out), true,
                       true);
}

SpectralField to_physical(const SpectralField& field) {
  if (field.has_physical()) return field;
  const Grid& g = field.grid();
  auto coeffs = field.coefficients();
  std::vector<Complex> out(g.size());
  fft::transform(g.dim(), g.modes(), +1, coeffs, out);

  double magnitude = 0.0;
  double residue = 0.0;
  for (const auto& z : out) {
    magnitude = std::max(magnitude, std::abs(z));
    residue = std::max(residue, std::abs(z.imag()));
  }
  if (residue > 1e-8 * magnitude)
    throw ImaginaryResidue("inverse transform has imaginary residue " + std::to_string(residue) +
                           " relative to magnitude " + std::to_string(magnitude));
  std::vector<double> values(g.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = out[i].real();
  return SpectralField(g, std::move(values), std::vector<Complex>(coeffs.begin(), coeffs.end()),
                       true, true);
}

SpectralField apply_symbol(const SpectralField& field, int power) {
  if (power != 1 && power != 2) throw std::invalid_argument("symbol power must be 1 or 2");
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  const auto& ksq = f.grid().k_squared();
  auto c = f.coefficients();
  std::vector<Complex> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    double symbol = power == 1 ? -ksq[i] : ksq[i] * ksq[i];
    out[i] = symbol * c[i];
  }
  return SpectralField::from_coefficients(f.grid(), std::move(out));
}

double l2_norm_sq(const SpectralField& field) {
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  double sum = 0.0;
  for (const auto& c : f.coefficients()) sum += std::norm(c);
  return f.grid().volume() * sum;
}

double grad_norm_sq(const SpectralField& field) {
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  const auto& ksq = f.grid().k_squared();
  auto c = f.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += ksq[i] * std::norm(c[i]);
  return f.grid().volume() * sum;
}

double h1_norm(const SpectralField& field) {
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  return std::sqrt(l2_norm_sq(f) + grad_norm_sq(f));
}

double inner_product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  std::optional<SpectralField> su, sv;
  const auto& a = with_coefficients(u, su);
  const auto& b = with_coefficients(v, sv);
  auto ca = a.coefficients();
  auto cb = b.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) sum += (ca[i] * std::conj(cb[i])).real();
  return u.grid().volume() * sum;
}

double mass(const SpectralField& field) {
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  return f.grid().volume() * f.coefficients()[0].real();
}

namespace {

double cubic_term(double u, double inv_eps2) { return (u * u * u - u) * inv_eps2; }

// Copies coefficients of the coarse grid into a finer grid of padded_modes
// per direction. Nyquist coefficients are split evenly between +-N/2 so the
// padded field stays real.
std::vector<Complex> pad_coefficients(const Grid& coarse, std::span<const Complex> c,
                                      const Grid& fine) {
  std::vector<Complex> out(fine.size(), Complex{});
  const int dim = coarse.dim();
  const int n = coarse.modes();
  int idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    if (c[flat] == Complex{}) continue;
    coarse.unravel(flat, idx);
    int nyq_count = 0;
    for (int d = 0; d < dim; ++d) nyq_count += coarse.is_nyquist(idx[d]) ? 1 : 0;
    const Complex share = c[flat] / static_cast<double>(1 << nyq_count);
    // Enumerate sign choices for the Nyquist directions.
    for (int mask = 0; mask < (1 << nyq_count); ++mask) {
      std::size_t dest = 0;
      int bit = 0;
      for (int d = 0; d < dim; ++d) {
        int mode = coarse.signed_mode(idx[d]);
        if (coarse.is_nyquist(idx[d])) {
          mode = (mask >> bit) & 1 ? n / 2 : -n / 2;
          ++bit;
        }
        dest = dest * static_cast<std::size_t>(fine.modes()) +
               static_cast<std::size_t>(fine.storage_index(mode));
      }
      out[dest] += share;
    }
  }
  return out;
}

// Restriction back to the coarse grid; +N/2 folds onto -N/2 as sampling does.
std::vector<Complex> truncate_coefficients(const Grid& fine, std::span<const Complex> c,
                                           const Grid& coarse) {
  std::vector<Complex> out(coarse.size(), Complex{});
  const int dim = fine.dim();
  const int n = coarse.modes();
  int idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    fine.unravel(flat, idx);
    std::size_t dest = 0;
    bool keep = true;
    for (int d = 0; d < dim; ++d) {
      int mode = fine.signed_mode(idx[d]);
      if (mode == n / 2) mode = -n / 2;
      if (mode < -n / 2 || mode > n / 2 - 1) {
        keep = false;
        break;
      }
      dest = dest * static_cast<std::size_t>(n) + static_cast<std::size_t>(coarse.storage_index(mode));
    }
    if (keep) out[dest] += c[flat];
  }
  return out;
}

}  // namespace

SpectralField nonlinearity(const SpectralField& field, double eps, bool dealias) {
  if (!(eps > 0.0)) throw std::invalid_argument("nonlinearity: eps must be positive");
  const double inv_eps2 = 1.0 / (eps * eps);
  const Grid& g = field.grid();
  if (!dealias) {
    std::optional<SpectralField> storage;
    const SpectralField* f = &field;
    if (!field.has_physical()) {
      storage = to_physical(field);
      f = &*storage;
    }
    auto u = f->physical();
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = cubic_term(u[i], inv_eps2);
    return SpectralField::from_physical(g, std::move(out));
  }

  int padded = (3 * g.modes()) / 2;
  if (padded % 2 != 0) ++padded;
  Grid fine(g.dim(), padded, g.length());
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  auto fine_field = to_physical(
      SpectralField::from_coefficients(fine, pad_coefficients(g, f.coefficients(), fine)));
  auto u = fine_field.physical();
  std::vector<double> cubed(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) cubed[i] = cubic_term(u[i], inv_eps2);
  auto fine_coeffs = to_coefficients(SpectralField::from_physical(fine, std::move(cubed)));
  return SpectralField::from_coefficients(g, truncate_coefficients(fine, fine_coeffs.coefficients(), g));
}

SpectralField project(const SpectralField& field, int cutoff) {
  const Grid& g = field.grid();
  if (cutoff > g.modes() || cutoff < 0)
    throw std::invalid_argument("project: cutoff must lie in [0, N]");
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  if (cutoff == g.modes()) return f;
  auto c = f.coefficients();
  std::vector<Complex> out(c.begin(), c.end());
  int idx[3] = {0, 0, 0};
  const int lo = -cutoff / 2;
  const int hi = cutoff / 2 - 1;
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    g.unravel(flat, idx);
    for (int d = 0; d < g.dim(); ++d) {
      int m = g.signed_mode(idx[d]);
      if (m < lo || m > hi) {
        out[flat] = Complex{};
        break;
      }
    }
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

SpectralField drop_nyquist(const SpectralField& field) {
  std::optional<SpectralField> storage;
  const auto& f = with_coefficients(field, storage);
  const auto& nyq = f.grid().touches_nyquist();
  auto c = f.coefficients();
  std::vector<Complex> out(c.begin(), c.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (nyq[i]) out[i] = Complex{};
  return SpectralField::from_coefficients(f.grid(), std::move(out));
}

double max_coefficient_difference(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  std::optional<SpectralField> sa, sb;
  auto ca = with_coefficients(a, sa).coefficients();
  auto cb = with_coefficients(b, sb).coefficients();
  double worst = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
  return worst;
}

}  // namespace chs
