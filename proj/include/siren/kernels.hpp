#pragma once

#include "siren/polynomial.hpp"

#include <string>
#include <vector>

namespace siren {

//! One polynomial piece of a kernel, valid on [lo, hi].
struct KernelPiece
{
  double lo;
  double hi;
  Polynomial poly;
};

//! Compactly supported symmetric kernel on [-1/2, 1/2], stored as exact
//! piecewise polynomials so every norm and moment is a closed-form integral.
//!
//! Higher-order kernels take negative values; nothing downstream may assume
//! nonnegativity.
class Kernel1D
{
public:
  Kernel1D(std::string name, std::vector<KernelPiece> pieces, int moment_order);

  //! K(u); exactly zero outside [-1/2, 1/2]. Evaluated on |u| so that
  //! K(-u) == K(u) bitwise.
  double operator()(double u) const
  {
    double a = u < 0.0 ? -u : u;
    if (a > 0.5)
      return 0.0;
    for (const auto& p : half_pieces_)
      if (a <= p.hi)
        return p.poly(a);
    return 0.0;
  }

  //! Product kernel K(u, v) = K(u) K(v).
  double eval2(double u, double v) const { return (*this)(u) * (*this)(v); }

  const std::string& name() const { return name_; }
  const std::vector<KernelPiece>& pieces() const { return pieces_; }
  //! Piece boundaries inside [-1/2, 1/2], including the end points.
  std::vector<double> breakpoints() const;

  double sup_norm() const { return sup_norm_; }
  double l1_norm() const { return l1_norm_; }
  double l2_norm() const { return l2_norm_; }
  double lipschitz() const { return lipschitz_; }
  //! Highest j such that moments 1..j all vanish.
  int moment_order() const { return moment_order_; }

  //! Exact moment \int u^j K(u) du.
  double moment(int j) const;

private:
  std::string name_;
  std::vector<KernelPiece> pieces_;
  std::vector<KernelPiece> half_pieces_; // pieces restricted to [0, 1/2]
  double sup_norm_ = 0.0;
  double l1_norm_ = 0.0;
  double l2_norm_ = 0.0;
  double lipschitz_ = 0.0;
  int moment_order_ = 0;
};

struct KernelProperties
{
  double sup_norm;
  double l1_norm;
  double l2_norm;
  std::vector<double> moments; // moments[j] = \int u^j K(u) du, j = 0..max_moment
};

//! K(u) = 2(1 - 2|u|) on [-1/2, 1/2].
Kernel1D build_triangular();

//! Epanechnikov base (3/2)(1 - 4u^2) times an even polynomial chosen so that
//! the moments 1..order vanish. The even degree is 2*floor(order/2), so the
//! realised moment order is that degree plus one. order must lie in [1, 12].
Kernel1D build_orthopoly_kernel(int order);

KernelProperties kernel_properties(const Kernel1D& k, int max_moment);

//! Config-level selection: type "triangular" or "orthopoly".
Kernel1D make_kernel(const std::string& type, int order);

} // namespace siren
