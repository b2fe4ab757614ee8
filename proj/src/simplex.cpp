#include "sqmc/simplex.hpp"

#include <algorithm>
#include <stdexcept>

#include "sqmc/rng.hpp"

namespace sqmc {

double SimplexPoint::coordinate_sum() const {
  double s = 0.0;
  for (double c : coords) s += c;
  return s;
}

bool SimplexPoint::is_valid(double tol) const {
  for (double c : coords) {
    if (!(c >= -tol)) return false;
  }
  return coordinate_sum() <= 1.0 + tol;
}

void SimplexPoint::validate(int expected_dim, double tol) const {
  if (dim() != expected_dim) {
    throw std::invalid_argument("SimplexPoint: expected dimension " +
                                std::to_string(expected_dim) + ", got " + std::to_string(dim()));
  }
  if (!is_valid(tol)) {
    throw std::invalid_argument("SimplexPoint: coordinates outside the simplex");
  }
}

void ProductPoint::validate(int expected_d, int expected_m) const {
  if (m() != expected_m) {
    throw std::invalid_argument("ProductPoint: expected " + std::to_string(expected_m) +
                                " components, got " + std::to_string(m()));
  }
  for (const auto& c : components) c.validate(expected_d);
}

namespace {

SimplexPoint sample_one(int d, UniformRng& rng) {
  std::vector<double> u(static_cast<std::size_t>(d));
  for (auto& v : u) v = rng.next_double();
  std::sort(u.begin(), u.end());
  // Spacings of sorted uniforms are exactly uniform on the simplex, and the
  // sorted differences are nonnegative with sum u.back() <= 1 exactly.
  SimplexPoint p;
  p.coords.resize(static_cast<std::size_t>(d));
  double prev = 0.0;
  for (int i = 0; i < d; ++i) {
    p.coords[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] - prev;
    prev = u[static_cast<std::size_t>(i)];
  }
  return p;
}

}  // namespace

std::vector<SimplexPoint> uniform_sample(int d, int count, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("uniform_sample: d must be positive");
  if (count < 1) throw std::invalid_argument("uniform_sample: count must be positive");
  UniformRng rng(seed);
  std::vector<SimplexPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(sample_one(d, rng));
  return out;
}

ProductPoint uniform_product_point(int d, int m, UniformRng& rng) {
  ProductPoint p;
  p.components.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) p.components.push_back(sample_one(d, rng));
  return p;
}

Rational monomial_integral(const MultiIndex& alpha, int d) {
  if (alpha.dim() != d) {
    throw std::invalid_argument("monomial_integral: multi-index dimension mismatch");
  }
  Integer num = 1;
  for (std::uint32_t e : alpha.e) num *= factorial(e);
  Rational r(num, factorial(alpha.degree() + static_cast<unsigned long>(d)));
  r.canonicalize();
  return r;
}

Rational polynomial_integral(const MultiIndexPolynomial& f) {
  Rational acc = 0;
  for (const auto& [idx, c] : f.terms()) acc += c * monomial_integral(idx, f.dim());
  return acc;
}

Rational poly_inner_product(const MultiIndexPolynomial& f, const MultiIndexPolynomial& g) {
  if (f.dim() != g.dim()) {
    throw std::invalid_argument("poly_inner_product: dimension mismatch");
  }
  const int d = f.dim();
  const unsigned long top = f.degree() + g.degree() + static_cast<unsigned long>(d);

  // Factored to keep the inner loop division-free: every monomial moment is
  // written over the common denominator top!, so each term pair contributes
  // an integer multiple of the coefficients.
  std::vector<Integer> fact(top + 1);
  for (unsigned long i = 0; i <= top; ++i) fact[i] = factorial(i);

  Rational acc = 0;
  MultiIndex sum;
  sum.e.resize(static_cast<std::size_t>(d));
  Integer weight;
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) {
      weight = 1;
      unsigned long total = 0;
      for (std::size_t i = 0; i < sum.e.size(); ++i) {
        const std::uint32_t e = a.e[i] + b.e[i];
        total += e;
        weight *= fact[e];
      }
      // top!/(total+d)! is integral because total + d <= top.
      weight *= fact[top];
      mpz_divexact(weight.get_mpz_t(), weight.get_mpz_t(),
                   fact[total + static_cast<unsigned long>(d)].get_mpz_t());
      acc += ca * cb * weight;
    }
  }
  acc *= Rational(factorial(static_cast<unsigned long>(d)), fact[top]);
  acc.canonicalize();
  return acc;
}

double poly_eval(const MultiIndexPolynomial& f, const SimplexPoint& x) {
  x.validate(f.dim());
  return f.eval(x.coords);
}

}  // namespace sqmc
