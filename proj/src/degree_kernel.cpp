#include "sqmc/degree_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sqmc/simd/simd.hpp"

namespace sqmc {

double gegenbauer(int n, double lambda, double u) {
  if (n < 0) throw std::invalid_argument("gegenbauer: negative degree");
  if (lambda <= 0.0) throw std::invalid_argument("gegenbauer: lambda must be positive");
  if (std::abs(u) > 1.0 + 1e-12) {
    throw std::invalid_argument("gegenbauer: argument outside [-1, 1]");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lambda * u;
  for (int k = 2; k <= n; ++k) {
    const double next = (2.0 * (k + lambda - 1.0) * u * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double degree_kernel_direct(const BasisEvaluator& eval, int l, const SimplexPoint& x,
                            const SimplexPoint& y) {
  if (l < 0 || l > eval.max_degree()) {
    throw std::out_of_range("degree_kernel_direct: degree beyond the basis table");
  }
  const auto vx = eval.eval_all(x);
  const auto vy = eval.eval_all(y);
  const int off = eval.degree_offset(l);
  return simd::dot(vx.data() + off, vy.data() + off, static_cast<std::size_t>(eval.degree_size(l)));
}

double degree_kernel_closed(int d, int l, const SimplexPoint& x, const SimplexPoint& y) {
  if (l < 1) {
    throw std::invalid_argument("degree_kernel_closed: needs l >= 1 (degree 0 is constant 1)");
  }
  x.validate(d);
  y.validate(d);

  // Bilinear coefficients sqrt(x_i y_i) over the d+1 barycentric coordinates.
  std::vector<double> s(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) {
    s[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, x.coords[static_cast<std::size_t>(i)]) *
                                               std::max(0.0, y.coords[static_cast<std::size_t>(i)]));
  }
  s[static_cast<std::size_t>(d)] = std::sqrt(std::max(0.0, x.barycentric_remainder()) *
                                             std::max(0.0, y.barycentric_remainder()));

  // Gauss-Chebyshev nodes, l+1 per axis: exact for the degree-2l integrand.
  const int nodes = l + 1;
  std::vector<double> t(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    t[static_cast<std::size_t>(j)] = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * nodes));
  }

  const int axes = d + 1;
  std::vector<int> odo(static_cast<std::size_t>(axes), 0);
  double total = 0.0;
  for (;;) {
    double u = 0.0;
    for (int i = 0; i < axes; ++i) {
      u += s[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(odo[static_cast<std::size_t>(i)])];
    }
    // |u| <= sum s_i <= 1 by Cauchy-Schwarz, up to roundoff.
    u = std::clamp(u, -1.0, 1.0);
    total += gegenbauer(2 * l, static_cast<double>(d), u);

    int axis = 0;
    while (axis < axes && ++odo[static_cast<std::size_t>(axis)] == nodes) {
      odo[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == axes) break;
  }

  // Quadrature contributes (pi/nodes)^{d+1}; the kernel normalization is
  // (2l + d)/(pi^{d+1} d), fixed by P_0 = 1 and cross-checked exactly
  // against the definitional basis-product sum.
  const double prefactor = (2.0 * l + d) / (d * std::pow(static_cast<double>(nodes), axes));
  return prefactor * total;
}

Rational degree_kernel_bound(int d, int l) {
  if (l < 1) throw std::invalid_argument("degree_kernel_bound: needs l >= 1");
  Integer num = binomial(static_cast<unsigned long>(2 * l + 2 * d - 1),
                         static_cast<unsigned long>(2 * l));
  num *= 2 * l + d;
  Rational b(num, Integer(d));
  b.canonicalize();
  return b;
}

}  // namespace sqmc
