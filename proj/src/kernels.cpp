#include "siren/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace siren {

namespace {

double abs_integral(const Polynomial& p, double a, double b)
{
  std::vector<double> cuts{ a };
  for (double r : p.roots_in(a, b))
    if (r > a && r < b)
      cuts.push_back(r);
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += std::abs(p.integrate(cuts[i], cuts[i + 1]));
  return total;
}

// Solve a small dense system in long double with partial pivoting.
std::vector<long double> solve_dense(std::vector<std::vector<long double>> a,
                                     std::vector<long double> b)
{
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col]))
        piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    if (a[col][col] == 0.0L)
      throw std::runtime_error("singular moment system");
    for (std::size_t r = col + 1; r < n; ++r) {
      long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c)
        a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c)
      s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

} // namespace

Kernel1D::Kernel1D(std::string name, std::vector<KernelPiece> pieces, int moment_order)
  : name_(std::move(name))
  , pieces_(std::move(pieces))
  , moment_order_(moment_order)
{
  std::sort(pieces_.begin(), pieces_.end(),
            [](const auto& x, const auto& y) { return x.lo < y.lo; });
  for (const auto& p : pieces_) {
    if (p.lo < -0.5 || p.hi > 0.5 || p.lo >= p.hi)
      throw std::invalid_argument("kernel piece outside [-1/2, 1/2]");
    if (p.hi > 0.0)
      half_pieces_.push_back({ std::max(p.lo, 0.0), p.hi, p.poly });
  }

  for (const auto& p : pieces_) {
    sup_norm_ = std::max(sup_norm_, p.poly.max_abs_on(p.lo, p.hi));
    l1_norm_ += abs_integral(p.poly, p.lo, p.hi);
    l2_norm_ += (p.poly * p.poly).integrate(p.lo, p.hi);
    lipschitz_ = std::max(lipschitz_, p.poly.derivative().max_abs_on(p.lo, p.hi));
  }
  l2_norm_ = std::sqrt(l2_norm_);
}

std::vector<double> Kernel1D::breakpoints() const
{
  std::vector<double> out;
  for (const auto& p : pieces_) {
    if (out.empty() || out.back() != p.lo)
      out.push_back(p.lo);
    out.push_back(p.hi);
  }
  return out;
}

double Kernel1D::moment(int j) const
{
  double total = 0.0;
  for (const auto& p : pieces_)
    total += p.poly.shifted_degree(j).integrate(p.lo, p.hi);
  return total;
}

Kernel1D build_triangular()
{
  return Kernel1D("triangular",
                  { { -0.5, 0.0, Polynomial({ 2.0, 4.0 }) },
                    { 0.0, 0.5, Polynomial({ 2.0, -4.0 }) } },
                  1);
}

Kernel1D build_orthopoly_kernel(int order)
{
  if (order < 1 || order > 12)
    throw std::invalid_argument("orthopoly kernel order must be in [1, 12]");
  const int half_degree = order / 2;
  const std::size_t m = static_cast<std::size_t>(half_degree) + 1;

  // base weight (3/2)(1 - 4u^2); even moments mu_{2k} = \int B u^{2k}
  auto base_moment = [](int k) -> long double {
    // \int_{-1/2}^{1/2} (3/2)(1-4u^2) u^{2k} du
    long double e = 2.0L * k;
    long double half = 0.5L;
    long double a = 2.0L * std::pow(half, e + 1) / (e + 1);
    long double b = 2.0L * std::pow(half, e + 3) / (e + 3);
    return 1.5L * (a - 4.0L * b);
  };

  std::vector<std::vector<long double>> mat(m, std::vector<long double>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      mat[r][c] = base_moment(static_cast<int>(r + c));
  std::vector<long double> rhs(m, 0.0L);
  rhs[0] = 1.0L;
  auto a = solve_dense(mat, rhs);

  std::vector<double> q(2 * m - 1, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    q[2 * i] = static_cast<double>(a[i]);
  Polynomial poly = Polynomial({ 1.5, 0.0, -6.0 }) * Polynomial(q);
  return Kernel1D("orthopoly" + std::to_string(order), { { -0.5, 0.5, poly } },
                  2 * half_degree + 1);
}

KernelProperties kernel_properties(const Kernel1D& k, int max_moment)
{
  KernelProperties props{ k.sup_norm(), k.l1_norm(), k.l2_norm(), {} };
  for (int j = 0; j <= max_moment; ++j)
    props.moments.push_back(k.moment(j));
  return props;
}

Kernel1D make_kernel(const std::string& type, int order)
{
  if (type == "triangular")
    return build_triangular();
  if (type == "orthopoly")
    return build_orthopoly_kernel(order);
  throw std::invalid_argument("unknown kernel type '" + type + "'");
}

} // namespace siren
