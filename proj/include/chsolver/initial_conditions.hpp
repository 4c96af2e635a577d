#pragma once

#include <cstddef>
#include <cstdint>

#include "chsolver/spectral_field.hpp"

namespace chs {

/// -tanh((|x - c| - 1.5) / (4 eps)) centred at (pi, pi) of the 2D domain.
/// Throws DimMismatch on a 3D grid.
SpectralField ic_bubble(const Grid& grid, double eps);

struct KissingOptions {
  /// tanh(r - d/(4 eps^2)) instead of tanh((r - d)/(4 eps^2)).
  bool verbatim_grouping = false;
  /// Added to the sum of the two profiles so both bubbles sit at +1 inside a
  /// -1 matrix; 0 reproduces the bare sum.
  double offset = 1.0;
};

/// Two unit-radius bubbles centred at (L/2 - 1, L/2) and (L/2 + 1, L/2).
SpectralField ic_kissing(const Grid& grid, double eps2, const KissingOptions& options = {});

enum class RandRange { Symmetric, Unit };  // Uniform(-1, 1) or Uniform(0, 1)

/// 0.35 + 0.3 * Rand(x), iid per grid point, deterministic per seed.
SpectralField ic_random(const Grid& grid, std::uint64_t seed,
                        RandRange range = RandRange::Symmetric);

SpectralField ic_constant(const Grid& grid, double value);

/// Connected components of {u > 0} under periodic 4-neighbour adjacency.
std::size_t count_positive_components(const SpectralField& field);

}  // namespace chs
