#pragma once

#include <complex>
#include <span>

namespace chs::fft {

/// Unnormalized multi-dimensional complex DFT on an N^dim cube. Plans are
/// created once per shape and shared; execution is safe from any thread.
/// sign = -1 is the forward transform, +1 the inverse.
void transform(int dim, int modes, int sign, std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);

}  // namespace chs::fft
