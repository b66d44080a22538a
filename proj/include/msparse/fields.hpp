#pragma once

#include <cstdint>

#include "msparse/grid.hpp"

namespace msparse {

/// Seeded random real field whose Fourier support is {|m| <= kmax} (m the
/// integer mode vector), normalized to unit sup norm.
ScalarField random_band_limited_scalar(const Grid3& grid, double kmax, std::uint64_t seed);

/// Seeded random divergence-free field with Fourier support {|m| <= kmax} and
/// zero mean, normalized to unit sup norm.
VectorField random_band_limited_field(const Grid3& grid, double kmax, std::uint64_t seed);

/// Samples fn(x, y, z) -> Eigen::Vector3d at every voxel center.
template <typename Fn>
VectorField sample_field(const Grid3& grid, Fn&& fn) {
  VectorField out(grid);
  for (Eigen::Index f = 0; f < grid.size(); ++f) {
    const Point x = grid.center(grid.unflat(f));
    const Eigen::Vector3d v = fn(x[0], x[1], x[2]);
    out.data().row(f) = v.transpose().array();
  }
  return out;
}

template <typename Fn>
ScalarField sample_scalar(const Grid3& grid, Fn&& fn) {
  ScalarField out(grid);
  for (Eigen::Index f = 0; f < grid.size(); ++f) {
    const Point x = grid.center(grid.unflat(f));
    out.data()[f] = fn(x[0], x[1], x[2]);
  }
  return out;
}

}  // namespace msparse
