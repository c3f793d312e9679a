#include "siren/sample.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace siren {

Sample::Sample(std::vector<Point> xs, std::vector<double> ys)
  : xs_(std::move(xs))
  , ys_(std::move(ys))
{
  if (xs_.size() != ys_.size())
    throw std::invalid_argument("sample needs as many responses as design points");
  if (xs_.empty())
    throw std::invalid_argument("sample must not be empty");
}

Sample Sample::with_responses(std::vector<double> ys) const
{
  return Sample(xs_, std::move(ys));
}

DesignDensity DesignDensity::uniform_box(double half_width)
{
  if (half_width < 3.0)
    throw std::invalid_argument("uniform design must cover [-3, 3]^2");
  const double density = 1.0 / (4.0 * half_width * half_width);
  return { [half_width, density](Point x) {
            return (std::abs(x.x) <= half_width && std::abs(x.y) <= half_width) ? density : 0.0;
          },
           density, density };
}

namespace {

std::string trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
    out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, std::size_t line)
{
  // strtod accepts inf/nan so the finiteness check below catches them
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw CsvError("line " + std::to_string(line) + ": cannot parse '" + cell + "'", line);
  if (!std::isfinite(v))
    throw CsvError("line " + std::to_string(line) + ": non-finite value '" + cell + "'", line);
  return v;
}

} // namespace

std::vector<std::vector<double>> read_numeric_csv(std::istream& in,
                                                  const std::vector<std::string>& header)
{
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    auto cells = split(trim(line));
    if (!have_header) {
      if (cells != header) {
        std::string want;
        for (const auto& h : header)
          want += (want.empty() ? "" : ",") + h;
        throw CsvError("line " + std::to_string(lineno) + ": expected header '" + want + "'",
                       lineno);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != header.size())
      throw CsvError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " columns, got " +
                       std::to_string(cells.size()),
                     lineno);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells)
      row.push_back(parse_double(c, lineno));
    rows.push_back(std::move(row));
  }
  if (!have_header)
    throw CsvError("empty CSV input", 0);
  return rows;
}

Sample read_sample_csv(std::istream& in)
{
  auto rows = read_numeric_csv(in, { "x1", "x2", "y" });
  if (rows.empty())
    throw CsvError("sample CSV has no data rows", 1);
  std::vector<Point> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    xs.push_back({ r[0], r[1] });
    ys.push_back(r[2]);
  }
  return Sample(std::move(xs), std::move(ys));
}

Sample read_sample_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  return read_sample_csv(in);
}

void write_sample_csv(std::ostream& out, const Sample& s)
{
  out << "x1,x2,y\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i)
    out << s.xs()[i].x << ',' << s.xs()[i].y << ',' << s.ys()[i] << '\n';
}

std::vector<Point> read_points_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::vector<Point> pts;
  for (const auto& r : read_numeric_csv(in, { "t1", "t2" }))
    pts.push_back({ r[0], r[1] });
  return pts;
}

} // namespace siren
