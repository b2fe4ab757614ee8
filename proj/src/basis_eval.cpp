#include "sqmc/basis_eval.hpp"

#include <cmath>
#include <stdexcept>

namespace sqmc {

namespace {

// Double-double image of an exact rational: the leading double plus the
// double of the exact remainder, good to ~30 significant digits once both
// land in a long double.
long double to_long_double(const Rational& q) {
  const double hi = q.get_d();
  Rational rem = q - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rem.get_d());
}

// c / sqrt(norm_sq) without materializing either side as a double first;
// the exact ratio c^2 / norm_sq is modest even when c is a huge integer.
long double normalized_coeff(const Rational& c, const Rational& norm_sq) {
  const Rational ratio = (c * c) / norm_sq;
  const long double magnitude = sqrtl(to_long_double(ratio));
  return c < 0 ? -magnitude : magnitude;
}

}  // namespace

BasisEvaluator::BasisEvaluator(std::shared_ptr<const OrthonormalBasis> basis)
    : basis_(std::move(basis)) {
  if (!basis_) throw std::invalid_argument("BasisEvaluator: null basis");
  d_ = basis_->d;
  max_degree_ = basis_->max_degree;

  offsets_.resize(static_cast<std::size_t>(max_degree_) + 1);
  sizes_.resize(static_cast<std::size_t>(max_degree_) + 1);
  for (int l = 0; l <= max_degree_; ++l) {
    offsets_[static_cast<std::size_t>(l)] = total_size_;
    sizes_[static_cast<std::size_t>(l)] = basis_->size_of_degree(l);
    total_size_ += sizes_[static_cast<std::size_t>(l)];
  }

  poly_begin_.reserve(static_cast<std::size_t>(total_size_) + 1);
  poly_begin_.push_back(0);
  for (int l = 0; l <= max_degree_; ++l) {
    for (const auto& f : basis_->by_degree[static_cast<std::size_t>(l)]) {
      for (const auto& [idx, c] : f.poly.terms()) {
        term_coeff_.push_back(normalized_coeff(c, f.norm_sq));
        for (int i = 0; i < d_; ++i) {
          const std::uint32_t e = idx.e[static_cast<std::size_t>(i)];
          term_exps_.push_back(e);
          max_exp_ = std::max(max_exp_, e);
        }
      }
      poly_begin_.push_back(term_coeff_.size());
    }
  }
}

void BasisEvaluator::eval_all(const SimplexPoint& x, std::vector<double>& out) const {
  x.validate(d_);
  out.resize(static_cast<std::size_t>(total_size_));

  // Shared power table x_i^e.
  const std::size_t width = static_cast<std::size_t>(max_exp_) + 1;
  thread_local std::vector<long double> pow_table;
  pow_table.resize(static_cast<std::size_t>(d_) * width);
  for (int i = 0; i < d_; ++i) {
    long double p = 1.0L;
    for (std::size_t e = 0; e < width; ++e) {
      pow_table[static_cast<std::size_t>(i) * width + e] = p;
      p *= static_cast<long double>(x.coords[static_cast<std::size_t>(i)]);
    }
  }

  for (int poly = 0; poly < total_size_; ++poly) {
    long double acc = 0.0L;
    const std::size_t begin = poly_begin_[static_cast<std::size_t>(poly)];
    const std::size_t end = poly_begin_[static_cast<std::size_t>(poly) + 1];
    for (std::size_t t = begin; t < end; ++t) {
      long double term = term_coeff_[t];
      const std::uint32_t* exps = term_exps_.data() + t * static_cast<std::size_t>(d_);
      for (int i = 0; i < d_; ++i) {
        term *= pow_table[static_cast<std::size_t>(i) * width + exps[i]];
      }
      acc += term;
    }
    out[static_cast<std::size_t>(poly)] = static_cast<double>(acc);
  }
}

std::vector<double> BasisEvaluator::eval_all(const SimplexPoint& x) const {
  std::vector<double> out;
  eval_all(x, out);
  return out;
}

double BasisEvaluator::eval_one(int l, int k, const SimplexPoint& x) const {
  if (l < 0 || l > max_degree_) throw std::out_of_range("eval_one: degree out of range");
  if (k < 1 || k > degree_size(l)) throw std::out_of_range("eval_one: k out of range");
  x.validate(d_);

  const int poly = degree_offset(l) + (k - 1);
  const std::size_t begin = poly_begin_[static_cast<std::size_t>(poly)];
  const std::size_t end = poly_begin_[static_cast<std::size_t>(poly) + 1];
  long double acc = 0.0L;
  for (std::size_t t = begin; t < end; ++t) {
    long double term = term_coeff_[t];
    const std::uint32_t* exps = term_exps_.data() + t * static_cast<std::size_t>(d_);
    for (int i = 0; i < d_; ++i) {
      long double p = 1.0L;
      for (std::uint32_t e = 0; e < exps[i]; ++e) {
        p *= static_cast<long double>(x.coords[static_cast<std::size_t>(i)]);
      }
      term *= p;
    }
    acc += term;
  }
  return static_cast<double>(acc);
}

}  // namespace sqmc
