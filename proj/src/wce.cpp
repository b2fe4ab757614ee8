#include "sqmc/wce.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sqmc/compensated.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/simd/simd.hpp"

namespace sqmc {

void ProductPointSet::validate() const {
  if (n() < 1) throw std::invalid_argument("ProductPointSet: need at least one node");
  for (const auto& p : points) p.validate(d, m);
}

ProductPointSet uniform_point_set(int d, int m, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("uniform_point_set: n must be positive");
  if (m < 1) throw std::invalid_argument("uniform_point_set: m must be positive");
  UniformRng rng(seed);
  ProductPointSet set;
  set.d = d;
  set.m = m;
  set.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) set.points.push_back(uniform_product_point(d, m, rng));
  return set;
}

std::string point_set_to_csv(const ProductPointSet& set) {
  std::ostringstream out;
  out.precision(17);
  for (int j = 1; j <= set.m; ++j) {
    for (int i = 1; i <= set.d; ++i) {
      if (j > 1 || i > 1) out << ',';
      out << 'x' << j << '_' << i;
    }
  }
  out << '\n';
  for (const auto& p : set.points) {
    bool first = true;
    for (const auto& comp : p.components) {
      for (double c : comp.coords) {
        if (!first) out << ',';
        out << c;
        first = false;
      }
    }
    out << '\n';
  }
  return out.str();
}

ProductPointSet point_set_from_csv(const std::string& text, int d, int m) {
  ProductPointSet set;
  set.d = d;
  set.m = m;
  std::istringstream in(text);
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header_skipped) {  // first non-empty row is the header
      header_skipped = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (static_cast<int>(values.size()) != d * m) {
      throw std::invalid_argument("point_set_from_csv: expected " + std::to_string(d * m) +
                                  " columns, got " + std::to_string(values.size()));
    }
    ProductPoint p;
    for (int j = 0; j < m; ++j) {
      SimplexPoint comp;
      comp.coords.assign(values.begin() + static_cast<std::ptrdiff_t>(j) * d,
                         values.begin() + static_cast<std::ptrdiff_t>(j + 1) * d);
      p.components.push_back(std::move(comp));
    }
    set.points.push_back(std::move(p));
  }
  set.validate();
  return set;
}

std::string point_set_to_json(const ProductPointSet& set) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["d"] = set.d;
  doc["m"] = set.m;
  doc["n"] = set.n();
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : set.points) {
    auto comps = nlohmann::ordered_json::array();
    for (const auto& c : p.components) comps.push_back(c.coords);
    pts.push_back(std::move(comps));
  }
  doc["points"] = std::move(pts);
  return doc.dump();
}

ProductPointSet point_set_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (doc.at("schema").get<int>() != 1) {
    throw std::invalid_argument("point_set_from_json: unsupported schema");
  }
  ProductPointSet set;
  set.d = doc.at("d").get<int>();
  set.m = doc.at("m").get<int>();
  for (const auto& pj : doc.at("points")) {
    ProductPoint p;
    for (const auto& cj : pj) {
      p.components.push_back(SimplexPoint{cj.get<std::vector<double>>()});
    }
    set.points.push_back(std::move(p));
  }
  set.validate();
  return set;
}

PointSetFeatures::PointSetFeatures(const ProductPointSet& set, const KernelEvaluator& kernel)
    : n_(set.n()), m_(set.m), stride_(kernel.feature_size()) {
  set.validate();
  data_.resize(static_cast<std::size_t>(n_) * m_ * stride_);
  std::vector<double> f;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < m_; ++j) {
      kernel.features(set.points[static_cast<std::size_t>(i)].components[static_cast<std::size_t>(j)], f);
      std::copy(f.begin(), f.end(),
                data_.begin() + (static_cast<std::size_t>(i) * m_ + j) * stride_);
    }
  }
}

void PointSetFeatures::replace(int i, const ProductPoint& p, const KernelEvaluator& kernel) {
  std::vector<double> f;
  for (int j = 0; j < m_; ++j) {
    kernel.features(p.components[static_cast<std::size_t>(j)], f);
    std::copy(f.begin(), f.end(),
              data_.begin() + (static_cast<std::size_t>(i) * m_ + j) * stride_);
  }
}

double e0m() { return 1.0; }

McEstimate e0m_mc_diagnostic(const KernelEvaluator& kernel, const WeightSchedule& schedule,
                             std::int64_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("e0m_mc_diagnostic: need at least 2 samples");
  UniformRng rng(seed);
  const int d = kernel.params().d;
  CompensatedSum acc, acc_sq;
  for (std::int64_t s = 0; s < samples; ++s) {
    const ProductPoint X = uniform_product_point(d, schedule.m, rng);
    const ProductPoint Y = uniform_product_point(d, schedule.m, rng);
    const double v = kernel.km(X, Y, schedule);
    acc.add(v);
    acc_sq.add(v * v);
  }
  McEstimate est;
  est.samples = samples;
  est.estimate = acc.value() / static_cast<double>(samples);
  const double var =
      std::max(0.0, acc_sq.value() / static_cast<double>(samples) - est.estimate * est.estimate);
  est.std_error = std::sqrt(var / static_cast<double>(samples));
  return est;
}

namespace {

double pair_product(const PointSetFeatures& features, const WeightSchedule& schedule, int i,
                    int h) {
  double prod = 1.0;
  const auto stride = static_cast<std::size_t>(features.stride());
  for (int j = 0; j < features.m(); ++j) {
    prod *= 1.0 + schedule.gammas[static_cast<std::size_t>(j)] *
                      simd::dot(features.at(i, j), features.at(h, j), stride);
  }
  return prod;
}

}  // namespace

double enm_sq(const PointSetFeatures& features, const WeightSchedule& schedule,
              const KernelEvaluator& kernel) {
  schedule.validate();
  if (features.m() != schedule.m) {
    throw std::invalid_argument("enm_sq: point set arity does not match the schedule");
  }
  (void)kernel;
  const int n = features.n();
  CompensatedSum acc;
  for (int i = 0; i < n; ++i) {
    acc.add(pair_product(features, schedule, i, i));
    for (int h = i + 1; h < n; ++h) {
      acc.add(2.0 * pair_product(features, schedule, i, h));
    }
  }
  return -1.0 + acc.value() / (static_cast<double>(n) * static_cast<double>(n));
}

double enm_sq(const ProductPointSet& set, const WeightSchedule& schedule,
              const KernelEvaluator& kernel) {
  PointSetFeatures features(set, kernel);
  return enm_sq(features, schedule, kernel);
}

double expected_enm_sq(int n, const WeightSchedule& schedule, double s_dr) {
  if (n < 1) throw std::invalid_argument("expected_enm_sq: n must be positive");
  double prod = 1.0;
  for (double g : schedule.gammas) prod *= 1.0 + g * s_dr;
  return (prod - 1.0) / static_cast<double>(n);
}

double existence_upper_bound(int n, const WeightSchedule& schedule, double c_dr) {
  if (n < 1) throw std::invalid_argument("existence_upper_bound: n must be positive");
  double prod = 1.0;
  for (double g : schedule.gammas) prod *= 1.0 + g * c_dr;
  return (prod - 1.0) / static_cast<double>(n);
}

double universal_lower_bound(int n, const WeightSchedule& schedule, const KernelConstants& consts) {
  if (n < 1) throw std::invalid_argument("universal_lower_bound: n must be positive");
  double prod = 1.0;
  for (double g : schedule.gammas) {
    prod *= 1.0 + consts.b_dr * consts.gtilde_min_estimate * g;
  }
  return -1.0 + prod / static_cast<double>(n);
}

double neps_upper(double eps, const WeightSchedule& schedule, double c_dr) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("neps_upper: eps must lie in (0, 1)");
  }
  double prod = 1.0;
  for (double g : schedule.gammas) prod *= 1.0 + g * c_dr;
  return prod / (eps * eps);
}

double neps_lower(double eps, const WeightSchedule& schedule, const KernelConstants& consts) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("neps_lower: eps must lie in (0, 1)");
  }
  const double exponent =
      consts.alpha_dr * consts.b_dr * consts.gtilde_min_estimate * schedule.sum();
  return std::exp(consts.M_dr > 0.0 ? exponent : 0.0) / (1.0 + eps * eps);
}

void TensorFourierFunction::validate(const BasisEvaluator& eval) const {
  if (eval.dim() != d) throw std::invalid_argument("TensorFourierFunction: dimension mismatch");
  for (const auto& t : terms) {
    if (static_cast<int>(t.degrees.size()) != m || static_cast<int>(t.positions.size()) != m) {
      throw std::invalid_argument("TensorFourierFunction: index arity mismatch");
    }
    for (int j = 0; j < m; ++j) {
      const int l = t.degrees[static_cast<std::size_t>(j)];
      const int k = t.positions[static_cast<std::size_t>(j)];
      if (l < 0 || l > eval.max_degree()) {
        throw std::invalid_argument("TensorFourierFunction: degree beyond the basis table");
      }
      if (k < 1 || k > eval.degree_size(l)) {
        throw std::invalid_argument("TensorFourierFunction: position outside the degree block");
      }
    }
  }
}

double hm_norm_sq(const TensorFourierFunction& f, const WeightSchedule& schedule, double r) {
  if (f.m != schedule.m) throw std::invalid_argument("hm_norm_sq: arity mismatch");
  CompensatedSum acc;
  for (const auto& t : f.terms) {
    if (static_cast<int>(t.degrees.size()) != f.m || static_cast<int>(t.positions.size()) != f.m) {
      throw std::invalid_argument("hm_norm_sq: index arity mismatch");
    }
    double weight = 1.0;
    for (int j = 0; j < f.m; ++j) {
      const int l = t.degrees[static_cast<std::size_t>(j)];
      if (l < 0 || t.positions[static_cast<std::size_t>(j)] < 1) {
        throw std::invalid_argument("hm_norm_sq: index out of range");
      }
      if (l >= 1) {
        const double eig = static_cast<double>(l) * (l + f.d);
        weight *= std::pow(eig, r) / schedule.gammas[static_cast<std::size_t>(j)];
      }
    }
    acc.add(weight * t.coeff * t.coeff);
  }
  return acc.value();
}

double integrate_exact(const TensorFourierFunction& f) {
  for (const auto& t : f.terms) {
    bool all_zero = true;
    for (int l : t.degrees) {
      if (l != 0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) return t.coeff;
  }
  return 0.0;
}

double tensor_fourier_eval(const TensorFourierFunction& f, const ProductPoint& X,
                           const BasisEvaluator& eval) {
  if (X.m() != f.m) throw std::invalid_argument("tensor_fourier_eval: arity mismatch");
  f.validate(eval);
  // Per-factor basis values once, then each term is a product of lookups.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(f.m));
  for (int j = 0; j < f.m; ++j) {
    eval.eval_all(X.components[static_cast<std::size_t>(j)], values[static_cast<std::size_t>(j)]);
  }
  CompensatedSum acc;
  for (const auto& t : f.terms) {
    double prod = t.coeff;
    for (int j = 0; j < f.m; ++j) {
      const int l = t.degrees[static_cast<std::size_t>(j)];
      const int k = t.positions[static_cast<std::size_t>(j)];
      prod *= values[static_cast<std::size_t>(j)][static_cast<std::size_t>(eval.degree_offset(l) + k - 1)];
    }
    acc.add(prod);
  }
  return acc.value();
}

double qmc_apply(const TensorFourierFunction& f, const ProductPointSet& set,
                 const BasisEvaluator& eval) {
  if (set.m != f.m) throw std::invalid_argument("qmc_apply: arity mismatch");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(set.n()));
  for (const auto& p : set.points) values.push_back(tensor_fourier_eval(f, p, eval));
  return simd::sum(values.data(), values.size()) / static_cast<double>(set.n());
}

ErrorReport make_error_report(const ProductPointSet& set, const WeightSchedule& schedule,
                              const KernelEvaluator& kernel, const KernelConstants& consts) {
  ErrorReport rep;
  rep.e_nm_sq = enm_sq(set, schedule, kernel);
  if (rep.e_nm_sq < 0.0) {
    rep.clamped = true;
    std::cerr << "sqmc: clamping slightly negative squared error " << rep.e_nm_sq << " to 0\n";
  }
  rep.e_nm = std::sqrt(std::max(0.0, rep.e_nm_sq));
  rep.e_0m = e0m();
  rep.upper_bound = existence_upper_bound(set.n(), schedule, consts.c_dr);
  rep.lower_bound = universal_lower_bound(set.n(), schedule, consts);
  rep.expected = expected_enm_sq(set.n(), schedule, consts.s_dr);
  rep.n = set.n();
  rep.m = set.m;
  rep.d = set.d;
  rep.r = kernel.params().r;
  rep.schedule_digest = schedule.digest();
  return rep;
}

std::string error_report_to_json(const ErrorReport& rep) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["e_nm_sq"] = rep.e_nm_sq;
  doc["e_nm"] = rep.e_nm;
  doc["e_0m"] = rep.e_0m;
  doc["upper_bound"] = rep.upper_bound;
  doc["lower_bound"] = rep.lower_bound;
  doc["expected"] = rep.expected;
  doc["n"] = rep.n;
  doc["m"] = rep.m;
  doc["d"] = rep.d;
  doc["r"] = rep.r;
  doc["schedule_digest"] = rep.schedule_digest;
  doc["clamped"] = rep.clamped;
  return doc.dump(2);
}

std::string error_report_csv_header() { return "d,r,m,n,seed,e2,upper,lower,expected"; }

std::string error_report_csv_row(const ErrorReport& rep, std::uint64_t seed) {
  std::ostringstream out;
  out.precision(17);
  out << rep.d << ',' << rep.r << ',' << rep.m << ',' << rep.n << ',' << seed << ','
      << rep.e_nm_sq << ',' << rep.upper_bound << ',' << rep.lower_bound << ',' << rep.expected;
  return out.str();
}

}  // namespace sqmc
