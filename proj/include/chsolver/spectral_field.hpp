#pragma once

#include <complex>
#include <span>
#include <vector>

#include "chsolver/grid.hpp"

namespace chs {

using Complex = std::complex<double>;

/// Real scalar field on a periodic grid, held in physical space, in Fourier
/// coefficient space, or both.
///
/// Coefficients follow u_hat = (1/|Omega|) * integral of u exp(-i k.x), so the
/// zero mode is the mean and ||u||^2 = |Omega| * sum |u_hat|^2. Fields are
/// values; every operation returns a new field.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);  // zero field, both representations valid

  static SpectralField from_physical(Grid grid, std::vector<double> values);
  static SpectralField from_coefficients(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  bool has_physical() const { return has_physical_; }
  bool has_coefficients() const { return has_coefficients_; }

  /// Throws std::logic_error when the representation is not current.
  std::span<const double> physical() const;
  std::span<const Complex> coefficients() const;

  friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b);
  friend SpectralField operator*(double s, const SpectralField& a);
  friend SpectralField to_coefficients(const SpectralField& field);
  friend SpectralField to_physical(const SpectralField& field);

 private:
  SpectralField(Grid grid, std::vector<double> values, std::vector<Complex> coeffs,
                bool has_physical, bool has_coefficients);

  Grid grid_;
  std::vector<double> physical_;
  std::vector<Complex> coeffs_;
  bool has_physical_ = false;
  bool has_coefficients_ = false;
};

/// Forward transform; the result carries both representations. Returns the
/// field unchanged when its coefficients are already current.
SpectralField to_coefficients(const SpectralField& field);

/// Inverse transform; a no-op when physical values are current. Throws
/// ImaginaryResidue when the synthesized values have an imaginary part above
/// 1e-8 of the field magnitude.
SpectralField to_physical(const SpectralField& field);

/// Multiplies coefficients by (-|k|^2)^power, power in {1, 2}.
SpectralField apply_symbol(const SpectralField& field, int power);

double l2_norm_sq(const SpectralField& field);
double grad_norm_sq(const SpectralField& field);
double h1_norm(const SpectralField& field);
/// (u, v) in L2, evaluated in coefficient space.
double inner_product(const SpectralField& u, const SpectralField& v);
/// (u, 1) = |Omega| * mean.
double mass(const SpectralField& field);

/// Pointwise (u^3 - u)/eps^2 on the collocation points. With dealias set the
/// cube is formed on a 3/2-padded grid and truncated back.
SpectralField nonlinearity(const SpectralField& field, double eps, bool dealias = false);

/// Zeroes every coefficient with an index outside [-cutoff/2, cutoff/2 - 1].
SpectralField project(const SpectralField& field, int cutoff);

/// Zeroes every coefficient sitting on the unpaired -N/2 mode in any direction.
SpectralField drop_nyquist(const SpectralField& field);

/// Largest pointwise |a - b| in coefficient space.
double max_coefficient_difference(const SpectralField& a, const SpectralField& b);

}  // namespace chs
