#include "sqmc/nabla.hpp"

namespace sqmc {

MultiIndexPolynomial apply_nabla(const MultiIndexPolynomial& f) {
  const int d = f.dim();
  MultiIndexPolynomial out(d);

  auto axis_index = [d](int i, std::uint32_t e) {
    MultiIndex idx = MultiIndex::zeros(d);
    idx.e[static_cast<std::size_t>(i)] = e;
    return idx;
  };

  for (int i = 0; i < d; ++i) {
    // x_i (1 - x_i) f_{ii}
    const MultiIndexPolynomial fii = f.derivative(i).derivative(i);
    MultiIndexPolynomial xi_coeff(d);
    xi_coeff.add_term(axis_index(i, 1), 1);
    xi_coeff.add_term(axis_index(i, 2), -1);
    out += xi_coeff * fii;

    // (1 - (d+1) x_i) f_i
    const MultiIndexPolynomial fi = f.derivative(i);
    MultiIndexPolynomial lin(d);
    lin.add_term(MultiIndex::zeros(d), 1);
    lin.add_term(axis_index(i, 1), -(d + 1));
    out += lin * fi;
  }

  // -2 x_i x_j f_{ij} over the strictly mixed pairs. Including the
  // diagonal here breaks the eigenvalue identity; the exact per-element
  // test pins the strict form down.
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const MultiIndexPolynomial fij = f.derivative(i).derivative(j);
      MultiIndex xixj = MultiIndex::zeros(d);
      xixj.e[static_cast<std::size_t>(i)] = 1;
      xixj.e[static_cast<std::size_t>(j)] = 1;
      out += MultiIndexPolynomial::monomial(xixj, -2) * fij;
    }
  }

  return out;
}

}  // namespace sqmc
