#include "siren/bucket_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace siren {

BucketGrid::BucketGrid(std::span<const Point> points, double cell_size, double extent)
  : cell_size_(cell_size)
  , extent_(extent)
  , cells_(static_cast<int>(std::ceil(2.0 * extent / cell_size)))
  , buckets_(static_cast<std::size_t>(cells_) * static_cast<std::size_t>(cells_))
{
  if (!(cell_size > 0.0) || !(extent > 0.0))
    throw std::invalid_argument("bucket grid needs positive cell size and extent");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point p = points[i];
    if (std::abs(p.x) > extent_ || std::abs(p.y) > extent_)
      continue;
    int cx = cell_of(p.x);
    int cy = cell_of(p.y);
    buckets_[static_cast<std::size_t>(cy) * cells_ + cx].push_back(static_cast<std::uint32_t>(i));
    ++indexed_;
  }
}

int BucketGrid::cell_of(double c) const
{
  int k = static_cast<int>(std::floor((c + extent_) / cell_size_));
  return std::clamp(k, 0, cells_ - 1);
}

std::vector<std::uint32_t> BucketGrid::query(Point lo, Point hi) const
{
  std::vector<std::uint32_t> out;
  if (hi.x < -extent_ || hi.y < -extent_ || lo.x > extent_ || lo.y > extent_)
    return out;
  const int x0 = cell_of(lo.x), x1 = cell_of(hi.x);
  const int y0 = cell_of(lo.y), y1 = cell_of(hi.y);
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx) {
      const auto& b = buckets_[static_cast<std::size_t>(cy) * cells_ + cx];
      out.insert(out.end(), b.begin(), b.end());
    }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace siren
