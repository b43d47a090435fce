#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "riesz/geometry.hpp"

namespace riesz {

/// A closed subset K of one part of A whose relative boundary has zero
/// H_d-measure. Points on the boundary of a cell belong to it.
struct TestCell {
  enum class Shape {
    Cap,       // B(center, chord_radius) ∩ part
    ParamBox,  // chart-parameter box [lo, hi] (angles wrap)
    Shell,     // lo[0] <= |x - c| <= hi[0] inside a ball part
  };

  Shape shape = Shape::Cap;
  SetDescriptor part;
  std::size_t part_index = 0;
  Point center;
  double chord_radius = 0.0;
  std::vector<double> lo, hi;
  double measure = 0.0;
};

/// Closed cap B(center, chord_radius) ∩ A_part. `center` must lie on the part.
TestCell cap_cell(const SetDescriptor& set, std::size_t part, std::span<const double> center, double chord_radius);
/// Cap on a circle, arc or sphere part described by its angular radius.
TestCell angular_cap_cell(const SetDescriptor& set, std::size_t part, std::span<const double> center, double angle);
/// Box in chart parameters. Circles and arcs take one angle; S^2 takes
/// (polar, azimuth); S^d for d >= 3 takes the polar angle only; segments one
/// abscissa; cubes local coordinates.
TestCell param_box_cell(const SetDescriptor& set, std::size_t part, std::vector<double> lo, std::vector<double> hi);
/// Spherical shell of a ball part.
TestCell shell_cell(const SetDescriptor& set, std::size_t part, double inner, double outer);

bool contains(const TestCell& cell, std::span<const double> x);

struct CellFamily {
  enum class Kind { RandomCaps, Partition };
  Kind kind = Kind::RandomCaps;
  std::size_t count = 16;
  // RandomCaps: angular radius range on circles/arcs/spheres, chord radius
  // range as a fraction of the part scale elsewhere.
  double min_size = 0.1;
  double max_size = 1.5;
};

/// Random closed caps, or a partition of every part into `count` cells with
/// measure-zero overlaps and measures summing to measure(A).
std::vector<TestCell> make_test_cells(const SetDescriptor& set, const CellFamily& family, std::uint64_t seed);

}  // namespace riesz
