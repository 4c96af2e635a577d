#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace chs {

/// Uniform periodic grid on the cube (0, L)^dim with N points per direction.
///
/// Physical values are stored row-major with the first coordinate slowest:
/// in 2D the value at (x_i, y_j) lives at i*N + j. Coefficients use the same
/// layout in FFT order, so storage index i corresponds to the signed mode
/// i for i < N/2 and i - N otherwise. The unpaired mode -N/2 sits at N/2.
class Grid {
 public:
  Grid(int dim, int modes, double length);

  int dim() const { return dim_; }
  int modes() const { return modes_; }
  double length() const { return length_; }
  double spacing() const { return length_ / modes_; }
  double cell_volume() const;
  double volume() const;
  std::size_t size() const { return size_; }

  /// Signed mode number for a storage index in [0, N).
  int signed_mode(int index) const { return index < modes_ / 2 ? index : index - modes_; }
  /// Storage index for a signed mode in [-N/2, N/2).
  int storage_index(int mode) const { return mode >= 0 ? mode : mode + modes_; }
  bool is_nyquist(int index) const { return index == modes_ / 2; }
  /// 2*pi*m/L for the storage index.
  double wavenumber(int index) const;

  /// Derivative-ready |k|^2 per coefficient. A direction whose index is the
  /// unpaired -N/2 mode contributes zero, which is what the spectral
  /// derivative with the Nyquist mode removed produces.
  const std::vector<double>& k_squared() const { return *k_squared_; }
  /// True where at least one direction sits on the -N/2 mode.
  const std::vector<bool>& touches_nyquist() const { return *touches_nyquist_; }

  /// Multi-index (storage order) of a flat position.
  void unravel(std::size_t flat, int* idx) const;

  bool operator==(const Grid& other) const {
    return dim_ == other.dim_ && modes_ == other.modes_ && length_ == other.length_;
  }

 private:
  int dim_;
  int modes_;
  double length_;
  std::size_t size_;
  std::shared_ptr<const std::vector<double>> k_squared_;
  std::shared_ptr<const std::vector<bool>> touches_nyquist_;
};

}  // namespace chs
