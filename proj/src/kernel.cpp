#include "sqmc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "sqmc/compensated.hpp"
#include "sqmc/degree_kernel.hpp"
#include "sqmc/simd/simd.hpp"

namespace sqmc {

int default_degree_cap(int d) {
  if (d <= 2) return 12;
  if (d == 3) return 8;
  return 6;
}

void KernelParams::validate() const {
  if (d < 1) throw std::invalid_argument("KernelParams: d must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("KernelParams: gamma must be positive");
  if (!(r > d + 1.0)) {
    throw std::domain_error("KernelParams: smoothness must satisfy r > d + 1 (got r = " +
                            std::to_string(r) + ", d = " + std::to_string(d) + ")");
  }
  if (!(truncation.tail_tolerance > 0.0)) {
    throw std::invalid_argument("KernelParams: tail_tolerance must be positive");
  }
  if (truncation.max_degree < 0) {
    throw std::invalid_argument("KernelParams: max_degree must be nonnegative");
  }
}

WeightSchedule WeightSchedule::uniform(int m, double gamma) {
  WeightSchedule s;
  s.m = m;
  s.gammas.assign(static_cast<std::size_t>(m), gamma);
  s.validate();
  return s;
}

double WeightSchedule::gamma_star() const {
  double g = 0.0;
  for (double v : gammas) g = std::max(g, v);
  return g;
}

double WeightSchedule::sum() const {
  CompensatedSum acc;
  for (double v : gammas) acc.add(v);
  return acc.value();
}

void WeightSchedule::validate() const {
  if (m < 1) throw std::invalid_argument("WeightSchedule: m must be positive");
  if (static_cast<int>(gammas.size()) != m) {
    throw std::invalid_argument("WeightSchedule: expected " + std::to_string(m) + " weights");
  }
  for (double v : gammas) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("WeightSchedule: weights must be positive and finite");
    }
  }
}

std::string WeightSchedule::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix64 = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix64(static_cast<std::uint64_t>(m));
  for (double v : gammas) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    mix64(bits);
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double analytic_series_tail(int d, double r, int degree) {
  // b_l <= M_d l^{2d} with M_d = (d+2)(2d+1) (equality at l = 1), and
  // [l(l+d)]^r >= l^{2r}, so the tail beyond L is at most
  // M_d sum_{l>L} l^{-s} <= M_d L^{1-s}/(s-1) with s = 2r - 2d.
  if (degree < 1) return HUGE_VAL;
  const double s = 2.0 * r - 2.0 * d;
  if (s <= 1.0) return HUGE_VAL;
  const double m_d = (d + 2.0) * (2.0 * d + 1.0);
  return m_d * std::pow(static_cast<double>(degree), 1.0 - s) / (s - 1.0);
}

int resolve_truncation_degree(int d, double r, const TruncationPolicy& policy) {
  const int cap = policy.max_degree > 0 ? policy.max_degree : default_degree_cap(d);
  for (int l = 1; l < cap; ++l) {
    if (analytic_series_tail(d, r, l) <= policy.tail_tolerance) return l;
  }
  return cap;
}

KernelEvaluator::KernelEvaluator(const KernelParams& params)
    : KernelEvaluator(params, nullptr) {}

KernelEvaluator::KernelEvaluator(const KernelParams& params,
                                 std::shared_ptr<const OrthonormalBasis> basis)
    : params_((params.validate(), params)),
      basis_(basis ? std::move(basis)
                   : shared_basis(params.d, resolve_truncation_degree(params.d, params.r,
                                                                      params.truncation))),
      eval_(basis_),
      trunc_degree_(std::min(resolve_truncation_degree(params.d, params.r, params.truncation),
                             basis_->max_degree)),
      tail_bound_(analytic_series_tail(params.d, params.r, trunc_degree_)) {
  if (basis_->d != params_.d) {
    throw std::invalid_argument("KernelEvaluator: basis dimension mismatch");
  }
  sqrt_weight_.resize(static_cast<std::size_t>(trunc_degree_) + 1, 0.0);
  for (int l = 1; l <= trunc_degree_; ++l) {
    const double eig = static_cast<double>(l) * (l + params_.d);
    sqrt_weight_[static_cast<std::size_t>(l)] = std::pow(eig, -params_.r / 2.0);
  }
  feature_size_ = 0;
  for (int l = 1; l <= trunc_degree_; ++l) feature_size_ += eval_.degree_size(l);
}

void KernelEvaluator::features(const SimplexPoint& x, std::vector<double>& out) const {
  thread_local std::vector<double> raw;
  eval_.eval_all(x, raw);
  out.resize(static_cast<std::size_t>(feature_size_));
  std::size_t pos = 0;
  for (int l = 1; l <= trunc_degree_; ++l) {
    const double w = sqrt_weight_[static_cast<std::size_t>(l)];
    const int off = eval_.degree_offset(l);
    const int size = eval_.degree_size(l);
    for (int k = 0; k < size; ++k) {
      out[pos++] = raw[static_cast<std::size_t>(off + k)] * w;
    }
  }
}

std::vector<double> KernelEvaluator::features(const SimplexPoint& x) const {
  std::vector<double> out;
  features(x, out);
  return out;
}

double KernelEvaluator::g_from_features(const std::vector<double>& fx,
                                        const std::vector<double>& fy) const {
  return simd::dot(fx.data(), fy.data(), fx.size());
}

double KernelEvaluator::g(const SimplexPoint& x, const SimplexPoint& y) const {
  std::vector<double> fx, fy;
  features(x, fx);
  features(y, fy);
  return simd::dot(fx.data(), fy.data(), fx.size());
}

double KernelEvaluator::g_tilde(const SimplexPoint& x) const {
  std::vector<double> fx;
  features(x, fx);
  return simd::dot(fx.data(), fx.data(), fx.size());
}

double KernelEvaluator::k1(const SimplexPoint& x, const SimplexPoint& y) const {
  return 1.0 + params_.gamma * g(x, y);
}

double KernelEvaluator::km(const ProductPoint& X, const ProductPoint& Y,
                           const WeightSchedule& schedule) const {
  schedule.validate();
  if (X.m() != schedule.m || Y.m() != schedule.m) {
    throw std::invalid_argument("km: product point arity does not match the schedule");
  }
  double prod = 1.0;
  for (int j = 0; j < schedule.m; ++j) {
    prod *= 1.0 + schedule.gammas[static_cast<std::size_t>(j)] *
                      g(X.components[static_cast<std::size_t>(j)],
                        Y.components[static_cast<std::size_t>(j)]);
  }
  return prod;
}

namespace {

void require_smoothness(int d, double r) {
  if (!(r > d + 1.0)) {
    throw std::domain_error("series requires r > d + 1 (got r = " + std::to_string(r) +
                            ", d = " + std::to_string(d) + ")");
  }
}

double degree_bound_double(int d, long l) {
  // (2l + d) C(2l + 2d - 1, 2d - 1) / d, in floating point.
  double comb = 1.0;
  for (int i = 1; i <= 2 * d - 1; ++i) comb *= static_cast<double>(2 * l + i) / i;
  return (2.0 * l + d) * comb / d;
}

double block_dim_double(int d, long l) {
  double comb = 1.0;
  for (int i = 1; i <= d - 1; ++i) comb *= static_cast<double>(l + i) / i;
  return comb;
}

long series_length_for_tol(int d, double r, double tol) {
  const double s = 2.0 * r - 2.0 * d;
  const double m_d = (d + 2.0) * (2.0 * d + 1.0);
  const double l_needed = std::pow(m_d / (tol * (s - 1.0)), 1.0 / (s - 1.0));
  constexpr long kMaxTerms = 100'000'000;
  if (!(l_needed < static_cast<double>(kMaxTerms))) {
    std::cerr << "sqmc: series tolerance " << tol << " needs ~" << l_needed
              << " terms; truncating at " << kMaxTerms << "\n";
    return kMaxTerms;
  }
  return std::max(1L, static_cast<long>(std::ceil(l_needed)));
}

double spectral_series(int d, double r, double tol, double (*weight)(int, long)) {
  require_smoothness(d, r);
  if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  const long terms = series_length_for_tol(d, r, tol);
  CompensatedSum acc;
  for (long l = 1; l <= terms; ++l) {
    const double eig = static_cast<double>(l) * (l + d);
    acc.add(weight(d, l) * std::pow(eig, -r));
  }
  return acc.value();
}

}  // namespace

double c_series(int d, double r, double tol) { return spectral_series(d, r, tol, degree_bound_double); }

double s_series(int d, double r, double tol) { return spectral_series(d, r, tol, block_dim_double); }

namespace {

std::vector<SimplexPoint> simplex_grid(int d, double pitch) {
  const int steps = static_cast<int>(std::floor(1.0 / pitch + 1e-9));
  std::vector<SimplexPoint> out;
  std::vector<int> acc(static_cast<std::size_t>(d), 0);
  // Depth-first over lattice points with coordinate sum <= steps.
  auto rec = [&](auto&& self, int axis, int used) -> void {
    if (axis == d) {
      SimplexPoint p;
      p.coords.resize(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) p.coords[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)] * pitch;
      out.push_back(std::move(p));
      return;
    }
    for (int v = 0; v + used <= steps; ++v) {
      acc[static_cast<std::size_t>(axis)] = v;
      self(self, axis + 1, used + v);
    }
    acc[static_cast<std::size_t>(axis)] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

bool in_simplex(const double* x, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    if (x[i] < 0.0) return false;
    s += x[i];
  }
  return s <= 1.0;
}

/// Coordinate pattern search: descend `objective` from z0 until the step
/// shrinks below step_min. Proposals leaving the feasible set are skipped.
template <typename Objective, typename Feasible>
double pattern_search_min(std::vector<double>& z, double step0, double step_min,
                          Objective&& objective, Feasible&& feasible) {
  double best = objective(z);
  double step = step0;
  std::vector<double> probe = z;
  while (step > step_min) {
    bool improved = false;
    for (std::size_t i = 0; i < z.size(); ++i) {
      for (double sgn : {1.0, -1.0}) {
        probe = z;
        probe[i] += sgn * step;
        if (!feasible(probe)) continue;
        const double v = objective(probe);
        if (v < best) {
          best = v;
          z = probe;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

struct Candidate {
  double value;
  int i, j;
};

}  // namespace

GExtrema estimate_g_extrema(const KernelEvaluator& kernel, const GridSearchConfig& config) {
  const int d = kernel.params().d;
  const auto grid = simplex_grid(d, config.pitch);
  const int n = static_cast<int>(grid.size());
  const int fs = kernel.feature_size();

  std::vector<double> features(static_cast<std::size_t>(n) * fs);
  {
    std::vector<double> f;
    for (int i = 0; i < n; ++i) {
      kernel.features(grid[static_cast<std::size_t>(i)], f);
      std::copy(f.begin(), f.end(), features.begin() + static_cast<std::size_t>(i) * fs);
    }
  }

  const int keep = std::max(1, config.refine_starts);
  std::vector<Candidate> lo, hi;
  auto push = [keep](std::vector<Candidate>& v, Candidate c, bool smallest) {
    v.push_back(c);
    std::sort(v.begin(), v.end(), [smallest](const Candidate& a, const Candidate& b) {
      return smallest ? a.value < b.value : a.value > b.value;
    });
    if (static_cast<int>(v.size()) > keep) v.pop_back();
  };

  for (int i = 0; i < n; ++i) {
    const double* fi = features.data() + static_cast<std::size_t>(i) * fs;
    for (int j = i; j < n; ++j) {
      const double v = simd::dot(fi, features.data() + static_cast<std::size_t>(j) * fs,
                                 static_cast<std::size_t>(fs));
      if (static_cast<int>(lo.size()) < keep || v < lo.back().value) push(lo, {v, i, j}, true);
      if (static_cast<int>(hi.size()) < keep || v > hi.back().value) push(hi, {v, i, j}, false);
    }
  }

  auto pair_feasible = [d](const std::vector<double>& z) {
    return in_simplex(z.data(), d) && in_simplex(z.data() + d, d);
  };
  auto pair_objective = [&kernel, d](const std::vector<double>& z) {
    SimplexPoint x{std::vector<double>(z.begin(), z.begin() + d)};
    SimplexPoint y{std::vector<double>(z.begin() + d, z.end())};
    return kernel.g(x, y);
  };

  GExtrema out;
  bool first = true;
  for (const auto& c : lo) {
    std::vector<double> z;
    const auto& gx = grid[static_cast<std::size_t>(c.i)].coords;
    const auto& gy = grid[static_cast<std::size_t>(c.j)].coords;
    z.insert(z.end(), gx.begin(), gx.end());
    z.insert(z.end(), gy.begin(), gy.end());
    const double v = pattern_search_min(z, config.pitch / 2.0, config.refine_step_min,
                                        pair_objective, pair_feasible);
    if (first || v < out.min_value) {
      out.min_value = v;
      out.argmin_x = SimplexPoint{std::vector<double>(z.begin(), z.begin() + d)};
      out.argmin_y = SimplexPoint{std::vector<double>(z.begin() + d, z.end())};
      first = false;
    }
  }
  first = true;
  for (const auto& c : hi) {
    std::vector<double> z;
    const auto& gx = grid[static_cast<std::size_t>(c.i)].coords;
    const auto& gy = grid[static_cast<std::size_t>(c.j)].coords;
    z.insert(z.end(), gx.begin(), gx.end());
    z.insert(z.end(), gy.begin(), gy.end());
    const double v = -pattern_search_min(
        z, config.pitch / 2.0, config.refine_step_min,
        [&](const std::vector<double>& p) { return -pair_objective(p); }, pair_feasible);
    if (first || v > out.max_value) {
      out.max_value = v;
      out.argmax_x = SimplexPoint{std::vector<double>(z.begin(), z.begin() + d)};
      out.argmax_y = SimplexPoint{std::vector<double>(z.begin() + d, z.end())};
      first = false;
    }
  }
  return out;
}

double estimate_gtilde_min(const KernelEvaluator& kernel, const GridSearchConfig& config) {
  const int d = kernel.params().d;
  const auto grid = simplex_grid(d, config.pitch);

  const int keep = std::max(1, config.refine_starts);
  std::vector<std::pair<double, int>> best;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const double v = kernel.g_tilde(grid[static_cast<std::size_t>(i)]);
    best.emplace_back(v, i);
    std::sort(best.begin(), best.end());
    if (static_cast<int>(best.size()) > keep) best.pop_back();
  }

  auto feasible = [d](const std::vector<double>& z) { return in_simplex(z.data(), d); };
  auto objective = [&kernel](const std::vector<double>& z) {
    return kernel.g_tilde(SimplexPoint{z});
  };

  double out = best.front().first;
  for (const auto& [v0, i] : best) {
    std::vector<double> z = grid[static_cast<std::size_t>(i)].coords;
    out = std::min(out, pattern_search_min(z, config.pitch / 2.0, config.refine_step_min,
                                           objective, feasible));
  }
  return out;
}

double b_factor(double gamma_star, double g_min_estimate) {
  if (!(gamma_star > 0.0)) throw std::invalid_argument("b_factor: gamma_star must be positive");
  if (!std::isfinite(g_min_estimate)) {
    throw std::invalid_argument("b_factor: g_min estimate must be finite");
  }
  if (g_min_estimate >= 0.0) return 1.0;
  return std::min(1.0, 1.0 / (gamma_star * std::abs(g_min_estimate)));
}

KernelConstants compute_kernel_constants(const KernelEvaluator& kernel, double gamma_star,
                                         const GridSearchConfig& config, double series_tol) {
  const auto& p = kernel.params();
  KernelConstants out;
  out.d = p.d;
  out.r = p.r;
  out.gamma_star = gamma_star;
  out.c_dr = c_series(p.d, p.r, series_tol);
  out.s_dr = s_series(p.d, p.r, series_tol);
  const GExtrema ext = estimate_g_extrema(kernel, config);
  out.g_min_estimate = ext.min_value;
  out.g_max_estimate = ext.max_value;
  out.gtilde_min_estimate = estimate_gtilde_min(kernel, config);
  out.b_dr = b_factor(gamma_star, out.g_min_estimate);
  out.M_dr = out.b_dr * out.gtilde_min_estimate * gamma_star;
  out.alpha_dr = out.M_dr > 0.0 ? std::log1p(out.M_dr) / out.M_dr : 1.0;
  out.truncation_degree = kernel.truncation_degree();
  out.tail_tolerance_requested = p.truncation.tail_tolerance;
  out.tail_bound_effective = kernel.effective_tail_bound();
  out.series_tol = series_tol;
  out.grid_pitch = config.pitch;
  return out;
}

std::string kernel_constants_to_json(const KernelConstants& c) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["d"] = c.d;
  doc["r"] = c.r;
  doc["gamma_star"] = c.gamma_star;
  doc["c_dr"] = c.c_dr;
  doc["s_dr"] = c.s_dr;
  doc["g_min_estimate"] = c.g_min_estimate;
  doc["g_max_estimate"] = c.g_max_estimate;
  doc["gtilde_min_estimate"] = c.gtilde_min_estimate;
  doc["b_dr"] = c.b_dr;
  doc["M_dr"] = c.M_dr;
  doc["alpha_dr"] = c.alpha_dr;
  doc["provenance"] = {{"truncation_degree", c.truncation_degree},
                       {"tail_tolerance_requested", c.tail_tolerance_requested},
                       {"tail_bound_effective", c.tail_bound_effective},
                       {"series_tol", c.series_tol},
                       {"grid_pitch", c.grid_pitch}};
  return doc.dump(2);
}

}  // namespace sqmc
