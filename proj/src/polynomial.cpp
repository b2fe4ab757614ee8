#include "sqmc/polynomial.hpp"

#include <stdexcept>

namespace sqmc {

namespace {
const Rational kZero{0};

void check_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}
}  // namespace

MultiIndexPolynomial MultiIndexPolynomial::constant(int d, const Rational& c) {
  MultiIndexPolynomial p(d);
  p.add_term(MultiIndex::zeros(d), c);
  return p;
}

MultiIndexPolynomial MultiIndexPolynomial::monomial(const MultiIndex& idx, const Rational& c) {
  MultiIndexPolynomial p(idx.dim());
  p.add_term(idx, c);
  return p;
}

std::uint32_t MultiIndexPolynomial::degree() const {
  // Map is graded-lex ordered: the last key has the maximal total degree.
  if (terms_.empty()) return 0;
  return terms_.rbegin()->first.degree();
}

const Rational& MultiIndexPolynomial::coeff(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? kZero : it->second;
}

void MultiIndexPolynomial::add_term(const MultiIndex& idx, const Rational& c) {
  check_dim(d_, idx.dim(), "add_term");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiIndexPolynomial& MultiIndexPolynomial::operator+=(const MultiIndexPolynomial& other) {
  check_dim(d_, other.d_, "operator+=");
  for (const auto& [idx, c] : other.terms_) add_term(idx, c);
  return *this;
}

MultiIndexPolynomial& MultiIndexPolynomial::operator-=(const MultiIndexPolynomial& other) {
  check_dim(d_, other.d_, "operator-=");
  for (const auto& [idx, c] : other.terms_) add_term(idx, -c);
  return *this;
}

MultiIndexPolynomial& MultiIndexPolynomial::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, c] : terms_) c *= s;
  return *this;
}

MultiIndexPolynomial MultiIndexPolynomial::operator*(const MultiIndexPolynomial& other) const {
  check_dim(d_, other.d_, "operator*");
  MultiIndexPolynomial out(d_);
  MultiIndex sum;
  sum.e.resize(static_cast<std::size_t>(d_));
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      for (std::size_t i = 0; i < sum.e.size(); ++i) sum.e[i] = a.e[i] + b.e[i];
      out.add_term(sum, ca * cb);
    }
  }
  return out;
}

MultiIndexPolynomial MultiIndexPolynomial::derivative(int axis) const {
  if (axis < 0 || axis >= d_) throw std::invalid_argument("derivative: axis out of range");
  MultiIndexPolynomial out(d_);
  for (const auto& [idx, c] : terms_) {
    const std::uint32_t e = idx.e[static_cast<std::size_t>(axis)];
    if (e == 0) continue;
    MultiIndex lowered = idx;
    lowered.e[static_cast<std::size_t>(axis)] = e - 1;
    out.add_term(lowered, c * static_cast<long>(e));
  }
  return out;
}

double MultiIndexPolynomial::eval(std::span<const double> x) const {
  check_dim(d_, static_cast<int>(x.size()), "eval");
  const std::uint32_t deg = degree();
  // Shared power table x_i^e, e <= total degree.
  std::vector<double> pow_table(static_cast<std::size_t>(d_) * (deg + 1));
  for (int i = 0; i < d_; ++i) {
    double p = 1.0;
    for (std::uint32_t e = 0; e <= deg; ++e) {
      pow_table[static_cast<std::size_t>(i) * (deg + 1) + e] = p;
      p *= x[static_cast<std::size_t>(i)];
    }
  }
  double acc = 0.0;
  for (const auto& [idx, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < d_; ++i) {
      t *= pow_table[static_cast<std::size_t>(i) * (deg + 1) + idx.e[static_cast<std::size_t>(i)]];
    }
    acc += t;
  }
  return acc;
}

void MultiIndexPolynomial::make_primitive() {
  if (terms_.empty()) return;
  Integer den_lcm = 1;
  for (const auto& [idx, c] : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Integer num_gcd = 0;
  for (const auto& [idx, c] : terms_) {
    Integer scaled = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  // Sign convention: graded-lex largest term positive.
  if (terms_.rbegin()->second * scale < 0) scale = -scale;
  *this *= scale;
}

}  // namespace sqmc
