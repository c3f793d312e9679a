#pragma once

#include "siren/geometry.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace siren {

//! Observations (X_i, Y_i), i = 1..n. Immutable after construction.
class Sample
{
public:
  Sample(std::vector<Point> xs, std::vector<double> ys);

  std::size_t size() const { return xs_.size(); }
  std::span<const Point> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }

  //! Same design, responses replaced.
  Sample with_responses(std::vector<double> ys) const;

private:
  std::vector<Point> xs_;
  std::vector<double> ys_;
};

//! Density g of the design points, with a certified lower bound on [-3, 3]^2.
struct DesignDensity
{
  std::function<double(Point)> evaluator;
  double g_lower_on_core;
  double sup_bound;

  double operator()(Point x) const { return evaluator(x); }

  static DesignDensity uniform_box(double half_width);
};

//! Error with the 1-based line number of the offending CSV row.
class CsvError : public std::runtime_error
{
public:
  CsvError(const std::string& what, std::size_t line)
    : std::runtime_error(what)
    , line_(line)
  {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

//! Reads a CSV whose header is exactly the given column names and whose
//! values are all finite.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in,
                                                  const std::vector<std::string>& header);

//! CSV with header `x1,x2,y`.
Sample read_sample_csv(std::istream& in);
Sample read_sample_csv(const std::string& path);
void write_sample_csv(std::ostream& out, const Sample& s);

//! CSV with header `t1,t2`.
std::vector<Point> read_points_csv(const std::string& path);

} // namespace siren
