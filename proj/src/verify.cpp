#include "sqmc/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "sqmc/degree_kernel.hpp"
#include "sqmc/nabla.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/search.hpp"
#include "sqmc/tract.hpp"
#include "sqmc/wce.hpp"

namespace sqmc {

namespace {

struct Runner {
  std::vector<CheckResult> results;

  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    CheckResult res;
    res.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      std::ostringstream detail;
      res.pass = fn(detail);
      res.detail = detail.str();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(res));
  }
};

SimplexPoint random_point(int d, UniformRng& rng) {
  return uniform_sample(d, 1, rng.next_u64())[0];
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyConfig& config) {
  Runner runner;
  const auto basis = shared_basis(config.d, config.max_degree);
  const BasisEvaluator eval(basis);

  KernelParams params;
  params.d = config.d;
  params.r = config.r;
  params.gamma = config.gamma;
  params.truncation.max_degree = config.max_degree;
  const KernelEvaluator kernel(params, basis);

  runner.run("basis block sizes", [&](std::ostringstream& detail) {
    for (int l = 0; l <= basis->max_degree; ++l) {
      if (Integer(basis->size_of_degree(l)) != degree_space_dimension(basis->d, l)) {
        detail << "degree " << l << " has wrong size";
        return false;
      }
    }
    detail << basis->total_size() << " elements";
    return true;
  });

  runner.run("exact orthonormality", [&](std::ostringstream& detail) {
    int checked = 0;
    for (int l1 = 0; l1 <= basis->max_degree; ++l1) {
      for (int k1 = 1; k1 <= basis->size_of_degree(l1); ++k1) {
        for (int l2 = l1; l2 <= basis->max_degree; ++l2) {
          for (int k2 = (l2 == l1 ? k1 : 1); k2 <= basis->size_of_degree(l2); ++k2) {
            const auto& f1 = basis->at(l1, k1);
            const auto& f2 = basis->at(l2, k2);
            const Rational ip = poly_inner_product(f1.poly, f2.poly);
            const bool diagonal = l1 == l2 && k1 == k2;
            if (diagonal ? ip != f1.norm_sq : ip != 0) {
              detail << "violation at (" << l1 << "," << k1 << ") x (" << l2 << "," << k2 << ")";
              return false;
            }
            ++checked;
          }
        }
      }
    }
    detail << checked << " exact pairs";
    return true;
  });

  runner.run("zero mean above degree 0", [&](std::ostringstream& detail) {
    int checked = 0;
    for (int l = 1; l <= basis->max_degree; ++l) {
      for (int k = 1; k <= basis->size_of_degree(l); ++k) {
        const Rational mean = polynomial_integral(basis->at(l, k).poly) *
                              Rational(factorial(static_cast<unsigned long>(basis->d)));
        if (mean != 0) {
          detail << "nonzero mean at (" << l << "," << k << ")";
          return false;
        }
        ++checked;
      }
    }
    detail << checked << " exact zero means";
    return true;
  });

  runner.run("eigenfunction identity", [&](std::ostringstream& detail) {
    const int cap = std::min(basis->max_degree, 6);
    int checked = 0;
    for (int l = 0; l <= cap; ++l) {
      for (int k = 1; k <= basis->size_of_degree(l); ++k) {
        const auto& p = basis->at(l, k).poly;
        MultiIndexPolynomial expect = p * Rational(-l * (l + basis->d));
        if (apply_nabla(p) != expect) {
          detail << "identity fails at (" << l << "," << k << ")";
          return false;
        }
        ++checked;
      }
    }
    detail << checked << " exact eigen pairs up to degree " << cap;
    return true;
  });

  runner.run("degree kernel dual path", [&](std::ostringstream& detail) {
    UniformRng rng(config.seed);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const auto x = random_point(config.d, rng);
      const auto y = random_point(config.d, rng);
      for (int l = 1; l <= basis->max_degree; ++l) {
        const double direct = degree_kernel_direct(eval, l, x, y);
        const double closed = degree_kernel_closed(config.d, l, x, y);
        worst = std::max(worst, std::abs(direct - closed));
      }
    }
    detail << "max |direct - closed| = " << worst;
    return worst <= 1e-9;
  });

  runner.run("degree kernel bound", [&](std::ostringstream& detail) {
    UniformRng rng(config.seed + 1);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto x = random_point(config.d, rng);
      const auto y = random_point(config.d, rng);
      for (int l = 1; l <= basis->max_degree; ++l) {
        const double bound = to_double(degree_kernel_bound(config.d, l));
        if (degree_kernel_direct(eval, l, x, y) > bound * (1.0 + 1e-12) + 1e-12) {
          detail << "bound violated at degree " << l;
          return false;
        }
      }
    }
    detail << "2000 sampled pairs within the per-degree bound";
    return true;
  });

  runner.run("kernel symmetry and tail bound", [&](std::ostringstream& detail) {
    UniformRng rng(config.seed + 2);
    const double c_dr = c_series(config.d, config.r);
    const double tol = kernel.effective_tail_bound();
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = random_point(config.d, rng);
      const auto y = random_point(config.d, rng);
      const double gxy = kernel.g(x, y);
      if (std::abs(gxy - kernel.g(y, x)) > 1e-12) {
        detail << "symmetry violated";
        return false;
      }
      if (std::abs(gxy) > c_dr + tol) {
        detail << "|g| exceeds the majorant";
        return false;
      }
    }
    detail << "200 pairs, c_dr = " << c_dr;
    return true;
  });

  runner.run("truncation honesty", [&](std::ostringstream& detail) {
    const int half = std::max(1, kernel.truncation_degree() / 2);
    KernelParams coarse = params;
    coarse.truncation.max_degree = half;
    const KernelEvaluator kernel_half(coarse, basis);
    const double budget = 2.0 * kernel_half.effective_tail_bound();
    UniformRng rng(config.seed + 3);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_point(config.d, rng);
      const auto y = random_point(config.d, rng);
      worst = std::max(worst, std::abs(kernel.g(x, y) - kernel_half.g(x, y)));
    }
    detail << "max shift " << worst << " vs budget " << budget;
    return worst <= budget;
  });

  runner.run("initial error and mean identity", [&](std::ostringstream& detail) {
    const WeightSchedule schedule = WeightSchedule::uniform(2, config.gamma);
    if (e0m() != 1.0) {
      detail << "e0m is not 1";
      return false;
    }
    const auto diag = e0m_mc_diagnostic(kernel, schedule, 20000, config.seed + 4);
    if (std::abs(diag.estimate - 1.0) > 4.0 * diag.std_error + 1e-9) {
      detail << "MC diagnostic " << diag.estimate << " +- " << diag.std_error;
      return false;
    }
    detail << "MC estimate " << diag.estimate << " +- " << diag.std_error;
    return true;
  });

  runner.run("error sandwich on random sets", [&](std::ostringstream& detail) {
    const WeightSchedule schedule = WeightSchedule::uniform(2, config.gamma);
    const KernelConstants consts = compute_kernel_constants(kernel, schedule.gamma_star());
    UniformRng rng(config.seed + 5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto set = uniform_point_set(config.d, schedule.m, 16, rng.next_u64());
      const double e2 = enm_sq(set, schedule, kernel);
      if (e2 < universal_lower_bound(16, schedule, consts) - 1e-6) {
        detail << "floor violated";
        return false;
      }
    }
    SearchConfig sc;
    sc.n = 16;
    sc.m = 2;
    sc.restarts = 32;
    sc.seed = config.seed + 6;
    const auto best = best_of_random(sc, schedule, kernel, consts);
    if (best.report.e_nm_sq > existence_upper_bound(16, schedule, consts.c_dr) + 1e-6) {
      detail << "best-of-32 misses the existence ceiling";
      return false;
    }
    detail << "20 floors + ceiling, best e^2 = " << best.report.e_nm_sq;
    return true;
  });

  runner.run("tractability verdicts", [&](std::ostringstream& detail) {
    const auto strong = classify(WeightFamily::power_law(1.0, 2.0));
    const auto poly = classify(WeightFamily::power_law(1.0, 1.0));
    const auto none = classify(WeightFamily::constant(0.5));
    const auto weak = classify(WeightFamily::log_decay(1.0));
    const bool ok = strong.strong_polynomial && strong.polynomial && strong.weak &&
                    !poly.strong_polynomial && poly.polynomial && poly.weak &&
                    !none.strong_polynomial && !none.polynomial && !none.weak &&
                    !weak.strong_polynomial && !weak.polynomial && weak.weak;
    detail << "four families classified";
    return ok;
  });

  return runner.results;
}

}  // namespace sqmc
