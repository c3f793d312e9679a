#pragma once

#include "siren/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace siren {

//! Uniform bucket grid over [-extent, extent]^2. Each cell keeps the indices of
//! its points in ascending order; points outside the square are not indexed.
class BucketGrid
{
public:
  BucketGrid(std::span<const Point> points, double cell_size = 0.5, double extent = 3.0);

  //! Indices of all indexed points whose cell meets the box [lo, hi], ascending.
  std::vector<std::uint32_t> query(Point lo, Point hi) const;

  int cells_per_axis() const { return cells_; }
  std::size_t indexed_count() const { return indexed_; }

private:
  int cell_of(double c) const;

  double cell_size_;
  double extent_;
  int cells_;
  std::size_t indexed_ = 0;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

} // namespace siren
