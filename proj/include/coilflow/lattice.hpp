#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace coilflow {

inline constexpr int kQ = 27;

struct Rational {
  std::int64_t num;
  std::int64_t den;
};

/// D3Q27 velocity set.
///
/// Direction ordering is fixed and part of the checkpoint format:
///   0        rest
///   1..6     faces   (+x, -x, +y, -y, +z, -z)
///   7..18    edges
///   19..26   corners
/// Every non-rest direction is immediately followed by its opposite, so
/// opposite(i) = i + 1 for odd i and i - 1 for even i > 0.
struct LatticeDescriptor {
  std::array<std::array<int, 3>, kQ> velocities;
  std::array<double, kQ> weights;
  std::array<Rational, kQ> weight_fractions;
  std::array<int, kQ> opposite;
  double cs2;
  Rational cs2_fraction;

  static constexpr std::string_view ordering_tag = "D3Q27/rest-face-edge-corner/v1";
};

namespace lattice {

inline constexpr std::array<int, kQ> cx = {0, 1, -1, 0, 0,  0, 0,  1, -1, 1,  -1, 1, -1, 1,
                                           -1, 0, 0, 0, 0, 1, -1, 1, -1, 1, -1, -1, 1};
inline constexpr std::array<int, kQ> cy = {0, 0, 0, 1,  -1, 0,  0, 1, -1, -1, 1, 0,  0, 0,
                                           0, 1, -1, 1, -1, 1, -1, 1, -1, -1, 1, 1, -1};
inline constexpr std::array<int, kQ> cz = {0, 0,  0, 0,  0, 1, -1, 0, 0, 0,  0, 1, -1, -1,
                                           1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, 1, -1};

inline constexpr double kW0 = 8.0 / 27.0;
inline constexpr double kWFace = 2.0 / 27.0;
inline constexpr double kWEdge = 1.0 / 54.0;
inline constexpr double kWCorner = 1.0 / 216.0;

inline constexpr std::array<double, kQ> w = {
    kW0,      kWFace,   kWFace,   kWFace,   kWFace,   kWFace,   kWFace,   kWEdge,  kWEdge,
    kWEdge,   kWEdge,   kWEdge,   kWEdge,   kWEdge,   kWEdge,   kWEdge,   kWEdge,  kWEdge,
    kWEdge,   kWCorner, kWCorner, kWCorner, kWCorner, kWCorner, kWCorner, kWCorner, kWCorner};

inline constexpr double cs2 = 1.0 / 3.0;

constexpr int opposite(int i) { return i == 0 ? 0 : (i % 2 == 1 ? i + 1 : i - 1); }

}  // namespace lattice

/// The canonical D3Q27 descriptor.
constexpr LatticeDescriptor d3q27() {
  LatticeDescriptor d{};
  for (int i = 0; i < kQ; ++i) {
    d.velocities[i] = {lattice::cx[i], lattice::cy[i], lattice::cz[i]};
    d.weights[i] = lattice::w[i];
    d.opposite[i] = lattice::opposite(i);
    const int nonzero = (lattice::cx[i] != 0) + (lattice::cy[i] != 0) + (lattice::cz[i] != 0);
    switch (nonzero) {
      case 0: d.weight_fractions[i] = {8, 27}; break;
      case 1: d.weight_fractions[i] = {2, 27}; break;
      case 2: d.weight_fractions[i] = {1, 54}; break;
      default: d.weight_fractions[i] = {1, 216}; break;
    }
  }
  d.cs2 = lattice::cs2;
  d.cs2_fraction = {1, 3};
  return d;
}

/// Direction index for a velocity with components in {-1, 0, 1}; -1 if none.
int direction_index(int x, int y, int z);

}  // namespace coilflow
