#include "siren/links.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace siren {

LinkFunction constant_link(double c)
{
  return { [c](double) { return c; }, { "constant", 1e9, 0.0, 1.0, std::abs(c) }, {} };
}

LinkFunction linear_link(double slope)
{
  return { [slope](double z) { return slope * z; },
           { "linear", 1e9, std::abs(slope), 1.0, std::abs(slope) * 6.0 },
           {} };
}

LinkFunction power_link(double a)
{
  if (!(a > 0.0))
    throw std::invalid_argument("power link needs a > 0");
  return { [a](double z) { return std::pow(std::abs(z), a); },
           { "power", a, 1.0, std::min(a, 1.0), std::pow(5.0, a) + 1.0 },
           { 0.0 } };
}

LinkFunction holder_link(double beta, double L)
{
  if (!(beta > 0.0) || beta > 2.0 || !(L > 0.0))
    throw std::invalid_argument("holder link needs beta in (0, 2] and L > 0");
  if (beta <= 1.0) {
    return { [beta, L](double z) { return 0.5 * L * std::pow(std::min(std::abs(z), 1.0), beta); },
             { "holder", beta, L, beta, L },
             { -1.0, 0.0, 1.0 } };
  }
  auto f = [beta, L](double z) {
    const double r = std::abs(z);
    double v;
    if (r <= 1.0)
      v = std::pow(r, beta) / beta;
    else if (r < 2.0)
      v = 2.0 / beta - std::pow(2.0 - r, beta) / beta;
    else
      v = 2.0 / beta;
    return std::copysign(0.5 * L * v, z);
  };
  return { f, { "holder", beta, L, 1.0, L / beta + 0.5 * L }, { -2.0, -1.0, 0.0, 1.0, 2.0 } };
}

namespace {

double bump0(double z)
{
  const double q = 1.0 - 4.0 * z * z;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double grid_sup(const std::vector<double>& v)
{
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

} // namespace

double bump_norm(double beta)
{
  if (!(beta > 0.0) || beta > 4.0)
    throw std::invalid_argument("bump link supports beta in (0, 4]");
  const int m_beta = static_cast<int>(std::ceil(beta)) - 1;
  const double alpha = beta - m_beta;
  constexpr int points = 10000;
  const double step = 1.0 / points;
  std::vector<double> g(points + 1);
  for (int i = 0; i <= points; ++i)
    g[i] = bump0(-0.5 + i * step);

  double norm = grid_sup(g);
  auto differentiate = [step](const std::vector<double>& v) {
    std::vector<double> d(v.size(), 0.0);
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
      d[i] = (v[i + 1] - v[i - 1]) / (2.0 * step);
    return d;
  };
  for (int m = 1; m <= m_beta; ++m) {
    g = differentiate(g);
    norm = std::max(norm, grid_sup(g));
  }
  const std::vector<double> dg = differentiate(g);
  const double proxy = std::pow(2.0 * grid_sup(g), 1.0 - alpha) * std::pow(grid_sup(dg), alpha);
  return std::max(norm, proxy);
}

LinkFunction bump_link(double beta, double L, double h_scale)
{
  if (!(L > 0.0) || !(h_scale > 0.0))
    throw std::invalid_argument("bump link needs L > 0 and h_scale > 0");
  const double c = 1.0 / bump_norm(beta);
  const double amp = L * std::pow(h_scale, beta) * c;
  auto f = [amp, h_scale](double z) { return amp * bump0(z / h_scale); };

  // ||f||_inf + Lipschitz proxy for beta0 = min(beta, 1)
  const double beta0 = std::min(beta, 1.0);
  const double sup = amp * bump0(0.0);
  const double slope = amp / h_scale * bump_norm(1.0); // >= ||f'||_inf
  const double holder = std::pow(2.0 * sup, 1.0 - beta0) * std::pow(slope, beta0);
  return { f,
           { "bump", beta, L, beta0, sup + holder },
           { -0.5 * h_scale, 0.5 * h_scale } };
}

LinkFunction rescaled_argument(const LinkFunction& f, double scale)
{
  if (!(scale > 0.0))
    throw std::invalid_argument("link rescaling needs a positive factor");
  LinkFunction out = f;
  out.f = [g = f.f, scale](double z) { return g(scale * z); };
  for (double& b : out.breakpoints)
    b /= scale;
  out.meta.L *= std::pow(scale, out.meta.beta);
  out.meta.M *= std::max(1.0, std::pow(scale, out.meta.beta0));
  return out;
}

LinkFunction parse_link_spec(const std::string& spec)
{
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("link argument '" + item + "' is not key=value");
      try {
        std::size_t used = 0;
        const std::string value = item.substr(eq + 1);
        args[item.substr(0, eq)] = std::stod(value, &used);
        if (used != value.size())
          throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("link argument '" + item + "' is not numeric");
      }
    }
  }
  auto get = [&](const std::string& key, double fallback) {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
  };
  if (kind == "constant")
    return constant_link(get("c", 1.0));
  if (kind == "linear")
    return linear_link(get("slope", 1.0));
  if (kind == "power")
    return power_link(get("a", 0.5));
  if (kind == "holder")
    return holder_link(get("beta", 1.0), get("L", 1.0));
  if (kind == "bump")
    return bump_link(get("beta", 1.0), get("L", 1.0), get("h_scale", 1.0));
  throw std::invalid_argument("unknown link kind '" + kind + "'");
}

} // namespace siren
