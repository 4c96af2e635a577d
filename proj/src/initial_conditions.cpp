#include "chsolver/initial_conditions.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "chsolver/errors.hpp"

namespace chs {
namespace {

void require_2d(const Grid& grid, const char* what) {
  if (grid.dim() != 2) throw DimMismatch(std::string(what) + " needs a 2D grid");
}

template <typename Profile>
SpectralField sample_2d(const Grid& grid, Profile profile) {
  const int n = grid.modes();
  const double h = grid.spacing();
  std::vector<double> values(grid.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) values[static_cast<std::size_t>(i) * n + j] = profile(i * h, j * h);
  return SpectralField::from_physical(grid, std::move(values));
}

}  // namespace

SpectralField ic_bubble(const Grid& grid, double eps) {
  require_2d(grid, "ic_bubble");
  if (!(eps > 0.0)) throw ValidationError("ic_bubble: eps must be positive");
  const double c = 0.5 * grid.length();
  return sample_2d(grid, [=](double x, double y) {
    return -std::tanh((std::hypot(x - c, y - c) - 1.5) / (4.0 * eps));
  });
}

SpectralField ic_kissing(const Grid& grid, double eps2, const KissingOptions& options) {
  require_2d(grid, "ic_kissing");
  if (!(eps2 > 0.0)) throw ValidationError("ic_kissing: eps^2 must be positive");
  const double c = 0.5 * grid.length();
  const double centres[2] = {c - 1.0, c + 1.0};
  const double radius = 1.0;
  const double width = 4.0 * eps2;
  return sample_2d(grid, [&](double x, double y) {
    double sum = options.offset;
    for (double cx : centres) {
      const double d = std::hypot(x - cx, y - c);
      sum += options.verbatim_grouping ? std::tanh(radius - d / width)
                                       : std::tanh((radius - d) / width);
    }
    return sum;
  });
}

SpectralField ic_random(const Grid& grid, std::uint64_t seed, RandRange range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rand(range == RandRange::Symmetric ? -1.0 : 0.0, 1.0);
  std::vector<double> values(grid.size());
  for (auto& v : values) v = 0.35 + 0.3 * rand(rng);
  return SpectralField::from_physical(grid, std::move(values));
}

SpectralField ic_constant(const Grid& grid, double value) {
  return SpectralField::from_physical(grid, std::vector<double>(grid.size(), value));
}

std::size_t count_positive_components(const SpectralField& field) {
  SpectralField f = field.has_physical() ? field : to_physical(field);
  const Grid& g = f.grid();
  auto u = f.physical();
  const std::size_t total = g.size();
  const int n = g.modes();
  const int dim = g.dim();
  std::vector<char> seen(total, 0);
  std::vector<std::size_t> stack;
  std::size_t components = 0;
  int idx[3] = {0, 0, 0};

  for (std::size_t start = 0; start < total; ++start) {
    if (seen[start] || !(u[start] > 0.0)) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      g.unravel(cur, idx);
      for (int d = 0; d < dim; ++d) {
        for (int step : {-1, 1}) {
          int nb[3] = {idx[0], idx[1], idx[2]};
          nb[d] = (nb[d] + step + n) % n;
          std::size_t flat = 0;
          for (int e = 0; e < dim; ++e) flat = flat * static_cast<std::size_t>(n) + nb[e];
          if (!seen[flat] && u[flat] > 0.0) {
            seen[flat] = 1;
            stack.push_back(flat);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace chs
