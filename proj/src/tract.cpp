#include "sqmc/tract.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sqmc/compensated.hpp"
#include "sqmc/wce.hpp"

namespace sqmc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

/// zeta(a) for a > 1: partial sum plus midpoint integral tail.
double zeta(double a) {
  const long n = 200000;
  CompensatedSum acc;
  for (long j = 1; j <= n; ++j) acc.add(std::pow(static_cast<double>(j), -a));
  return acc.value() + std::pow(n + 0.5, 1.0 - a) / (a - 1.0);
}
}  // namespace

WeightFamily WeightFamily::power_law(double c, double a) {
  WeightFamily f;
  f.kind = Kind::PowerLaw;
  f.c = c;
  f.a = a;
  f.validate();
  return f;
}

WeightFamily WeightFamily::constant(double c) {
  WeightFamily f;
  f.kind = Kind::Constant;
  f.c = c;
  f.validate();
  return f;
}

WeightFamily WeightFamily::log_decay(double c) {
  WeightFamily f;
  f.kind = Kind::LogDecay;
  f.c = c;
  f.validate();
  return f;
}

WeightFamily WeightFamily::custom(std::vector<double> table) {
  WeightFamily f;
  f.kind = Kind::Custom;
  f.table = std::move(table);
  f.validate();
  return f;
}

void WeightFamily::validate() const {
  if (kind == Kind::Custom) {
    if (table.empty()) throw std::invalid_argument("WeightFamily: empty custom table");
    for (double v : table) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("WeightFamily: custom weights must be positive and finite");
      }
    }
    return;
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("WeightFamily: scale must be positive and finite");
  }
  if (kind == Kind::PowerLaw && (a < 0.0 || !std::isfinite(a))) {
    // Negative exponents grow without bound, violating the uniform bound.
    throw std::invalid_argument("WeightFamily: power-law exponent must be >= 0");
  }
}

double WeightFamily::gamma(int j) const {
  if (j < 1) throw std::invalid_argument("WeightFamily: j is 1-based");
  switch (kind) {
    case Kind::PowerLaw: return c * std::pow(static_cast<double>(j), -a);
    case Kind::Constant: return c;
    case Kind::LogDecay: return c / std::log(static_cast<double>(j) + 1.0);
    case Kind::Custom:
      if (j > static_cast<int>(table.size())) {
        throw std::invalid_argument("WeightFamily: custom table shorter than requested m");
      }
      return table[static_cast<std::size_t>(j) - 1];
  }
  throw std::logic_error("WeightFamily: unknown kind");
}

WeightSchedule WeightFamily::schedule(int m) const {
  WeightSchedule s;
  s.m = m;
  s.gammas.reserve(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) s.gammas.push_back(gamma(j));
  s.validate();
  return s;
}

double WeightFamily::partial_sum(int m) const {
  CompensatedSum acc;
  for (int j = 1; j <= m; ++j) acc.add(gamma(j));
  return acc.value();
}

std::string WeightFamily::name() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::PowerLaw: out << "power-law(c=" << c << ",a=" << a << ")"; break;
    case Kind::Constant: out << "constant(c=" << c << ")"; break;
    case Kind::LogDecay: out << "log-decay(c=" << c << ")"; break;
    case Kind::Custom: out << "custom(" << table.size() << " entries)"; break;
  }
  return out.str();
}

namespace {

TractabilityVerdict classify_power_law(double c, double a) {
  TractabilityVerdict v;
  if (a > 1.0) {
    v.strong_polynomial = v.polynomial = v.weak = true;
    v.limit_sum = c * zeta(a);
    v.beta = 0.0;
    v.limit_ratio_m = 0.0;
  } else if (a == 1.0) {
    // Harmonic growth: the weight sum tracks c log m.
    v.strong_polynomial = false;
    v.polynomial = v.weak = true;
    v.limit_sum = kInf;
    v.beta = c;
    v.limit_ratio_m = 0.0;
  } else if (a > 0.0) {
    // Sum grows like c m^{1-a}/(1-a): too fast for polynomial, but the
    // per-coordinate average still vanishes.
    v.strong_polynomial = v.polynomial = false;
    v.weak = true;
    v.limit_sum = kInf;
    v.beta = kInf;
    v.limit_ratio_m = 0.0;
  } else {
    // a == 0 is the constant family.
    v.strong_polynomial = v.polynomial = v.weak = false;
    v.limit_sum = kInf;
    v.beta = kInf;
    v.limit_ratio_m = c;
  }
  return v;
}

TractabilityVerdict classify_custom(const std::vector<double>& table, int m_cap) {
  const int J = std::min<int>(static_cast<int>(table.size()), m_cap);
  if (J < 8) throw std::invalid_argument("classify: custom table too short to extrapolate");
  auto sum_to = [&table](int m) {
    CompensatedSum acc;
    for (int j = 0; j < m; ++j) acc.add(table[static_cast<std::size_t>(j)]);
    return acc.value();
  };
  const double s1 = sum_to(J / 4), s2 = sum_to(J / 2), s4 = sum_to(J);
  const double inc1 = s2 - s1, inc2 = s4 - s2;

  TractabilityVerdict v;
  v.empirical = true;
  // Increment trends over doublings of m: geometric decay means the sum
  // converges, a flat increment means logarithmic growth.
  v.strong_polynomial = inc2 <= 0.8 * inc1 || inc2 <= 1e-12;
  v.polynomial = v.strong_polynomial || inc2 <= 1.25 * inc1;
  const double ratio2 = s2 / (J / 2), ratio4 = s4 / J;
  v.weak = v.polynomial || ratio4 <= 0.9 * ratio2 || ratio4 <= 1e-9;
  v.limit_sum = v.strong_polynomial ? s4 : kInf;
  v.beta = v.polynomial ? s4 / std::log(J + 1.0) : kInf;
  v.limit_ratio_m = v.weak ? 0.0 : ratio4;
  return v;
}

}  // namespace

TractabilityVerdict classify(const WeightFamily& family, int empirical_m_cap) {
  family.validate();
  TractabilityVerdict v;
  switch (family.kind) {
    case WeightFamily::Kind::PowerLaw:
      v = classify_power_law(family.c, family.a);
      break;
    case WeightFamily::Kind::Constant:
      v.strong_polynomial = v.polynomial = v.weak = false;
      v.limit_sum = kInf;
      v.beta = kInf;
      v.limit_ratio_m = family.c;
      break;
    case WeightFamily::Kind::LogDecay:
      // Sum grows like c m / log m: the average c/log m vanishes but the
      // log-normalized sum does not stay bounded.
      v.strong_polynomial = v.polynomial = false;
      v.weak = true;
      v.limit_sum = kInf;
      v.beta = kInf;
      v.limit_ratio_m = 0.0;
      break;
    case WeightFamily::Kind::Custom:
      v = classify_custom(family.table, empirical_m_cap);
      break;
  }
  // The three conditions are nested; a verdict violating that would be a bug.
  if ((v.strong_polynomial && !v.polynomial) || (v.polynomial && !v.weak)) {
    throw std::logic_error("classify: verdict violates the nesting of the conditions");
  }
  return v;
}

BoundCurve bound_curve(const WeightFamily& family, double eps, const std::vector<int>& m_values,
                       const KernelConstants& consts) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("bound_curve: eps must lie in (0, 1)");
  }
  BoundCurve curve;
  curve.eps = eps;
  curve.verdict = classify(family);
  curve.rows.reserve(m_values.size());
  for (int m : m_values) {
    if (m < 1) throw std::invalid_argument("bound_curve: m values must be positive");
    const WeightSchedule schedule = family.schedule(m);
    BoundCurveRow row;
    row.m = m;
    row.sum_gamma = schedule.sum();
    row.n_upper = neps_upper(eps, schedule, consts.c_dr);
    row.n_lower = neps_lower(eps, schedule, consts);
    row.upper_times_eps_sq = row.n_upper * eps * eps;
    row.m_exponent_estimate = consts.c_dr * row.sum_gamma / std::log(m + 1.0);
    curve.rows.push_back(row);
  }
  return curve;
}

std::string bound_curve_to_csv(const BoundCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "m,sum_gamma,n_upper,n_lower,upper_times_eps_sq,m_exponent_estimate,"
         "strong_polynomial,polynomial,weak\n";
  for (const auto& row : curve.rows) {
    out << row.m << ',' << row.sum_gamma << ',' << row.n_upper << ',' << row.n_lower << ','
        << row.upper_times_eps_sq << ',' << row.m_exponent_estimate << ','
        << curve.verdict.strong_polynomial << ',' << curve.verdict.polynomial << ','
        << curve.verdict.weak << '\n';
  }
  return out.str();
}

std::string verdict_to_json(const TractabilityVerdict& v) {
  auto finite_or_null = [](double x) -> nlohmann::ordered_json {
    if (std::isinf(x)) return "inf";
    return x;
  };
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["strong_polynomial"] = v.strong_polynomial;
  doc["polynomial"] = v.polynomial;
  doc["weak"] = v.weak;
  doc["beta"] = finite_or_null(v.beta);
  doc["limit_sum"] = finite_or_null(v.limit_sum);
  doc["limit_ratio_m"] = v.limit_ratio_m;
  doc["empirical"] = v.empirical;
  return doc.dump(2);
}

}  // namespace sqmc
