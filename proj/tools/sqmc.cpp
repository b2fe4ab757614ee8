// Command-line driver: every computation in the library as a subcommand,
// with JSON configs and CSV/JSON outputs for batch studies.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqmc/degree_kernel.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/search.hpp"
#include "sqmc/tract.hpp"
#include "sqmc/verify.hpp"
#include "sqmc/wce.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitBadConfig = 2;
constexpr int kExitPrecondition = 3;

int fail(int code, const std::string& message) {
  ordered_json err;
  err["error"] = {{"code", code}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return code;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stoi(cell));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Options shared by the kernel-backed subcommands.

struct KernelOpts {
  int d = 2;
  double r = 4.0;
  double gamma = 0.5;
  int max_degree = 0;  // 0: resolved from the tail policy and the degree cap
  double tail_tol = 1e-12;
};

void add_kernel_opts(CLI::App* cmd, KernelOpts& opts) {
  cmd->add_option("--d", opts.d, "simplex dimension");
  cmd->add_option("--r", opts.r, "smoothness (must satisfy r > d+1)");
  cmd->add_option("--gamma", opts.gamma, "kernel weight");
  cmd->add_option("--max-degree", opts.max_degree, "series truncation cap (0 = default)");
  cmd->add_option("--tail-tol", opts.tail_tol, "requested series tail tolerance");
}

sqmc::KernelParams to_params(const KernelOpts& opts) {
  sqmc::KernelParams params;
  params.d = opts.d;
  params.r = opts.r;
  params.gamma = opts.gamma;
  params.truncation.tail_tolerance = opts.tail_tol;
  params.truncation.max_degree = opts.max_degree;
  params.validate();
  return params;
}

struct ScheduleOpts {
  int m = 1;
  std::string gammas;  // comma list; empty = uniform at --gamma
  std::string family;  // power|constant|log (overrides gammas)
  double c = 1.0;
  double a = 0.0;
};

void add_schedule_opts(CLI::App* cmd, ScheduleOpts& opts) {
  cmd->add_option("--m", opts.m, "number of tensor factors");
  cmd->add_option("--gammas", opts.gammas, "comma-separated per-factor weights");
  cmd->add_option("--family", opts.family, "weight family: power|constant|log|custom");
  cmd->add_option("--c", opts.c, "family scale");
  cmd->add_option("--a", opts.a, "power-law exponent");
}

sqmc::WeightFamily make_family(const ScheduleOpts& opts) {
  if (opts.family == "power") return sqmc::WeightFamily::power_law(opts.c, opts.a);
  if (opts.family == "constant") return sqmc::WeightFamily::constant(opts.c);
  if (opts.family == "log") return sqmc::WeightFamily::log_decay(opts.c);
  if (opts.family == "custom" && !opts.gammas.empty()) {
    return sqmc::WeightFamily::custom(parse_double_list(opts.gammas));
  }
  throw std::invalid_argument("unknown weight family '" + opts.family + "'");
}

sqmc::WeightSchedule make_schedule(const ScheduleOpts& opts, double default_gamma) {
  if (!opts.family.empty()) return make_family(opts).schedule(opts.m);
  if (!opts.gammas.empty()) {
    sqmc::WeightSchedule s;
    s.gammas = parse_double_list(opts.gammas);
    s.m = static_cast<int>(s.gammas.size());
    if (opts.m > 0 && opts.m != s.m) {
      throw std::invalid_argument("--gammas length does not match --m");
    }
    s.validate();
    return s;
  }
  return sqmc::WeightSchedule::uniform(opts.m, default_gamma);
}

// ---------------------------------------------------------------------------
// Basis cache: one JSON file per (d, max_degree), content-hashed inside.

std::string cache_dir_or_default(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SQMC_CACHE_DIR")) return env;
  return {};
}

std::shared_ptr<const sqmc::OrthonormalBasis> resolve_basis(int d, int max_degree,
                                                            const std::string& cache_dir) {
  namespace fs = std::filesystem;
  fs::path file;
  if (!cache_dir.empty()) {
    file = fs::path(cache_dir) /
           ("sqmc_basis_d" + std::to_string(d) + "_L" + std::to_string(max_degree) + ".json");
    if (fs::exists(file)) {
      try {
        return std::make_shared<sqmc::OrthonormalBasis>(sqmc::load_basis(file.string()));
      } catch (const std::exception& e) {
        std::cerr << "sqmc: ignoring unreadable cache file " << file << ": " << e.what() << "\n";
      }
    }
  }
  auto basis = sqmc::shared_basis(d, max_degree);
  if (!cache_dir.empty()) {
    fs::create_directories(file.parent_path());
    sqmc::save_basis(*basis, file.string());
  }
  return basis;
}

sqmc::KernelEvaluator make_kernel(const KernelOpts& opts, const std::string& cache_dir) {
  const auto params = to_params(opts);
  const int degree = sqmc::resolve_truncation_degree(params.d, params.r, params.truncation);
  return sqmc::KernelEvaluator(params, resolve_basis(params.d, degree, cache_dir));
}

// ---------------------------------------------------------------------------
// Config file overlay. Per the reproducible-study contract, values from
// --config override command-line flags, which override defaults.

template <typename T>
void overlay(const json& doc, const char* key, T& value) {
  if (doc.contains(key)) value = doc.at(key).get<T>();
}

json load_config(const std::string& path, const std::string& subcommand) {
  if (path.empty()) return json::object();
  const json doc = json::parse(read_text(path));
  if (doc.contains("schema") && doc.at("schema").get<int>() != 1) {
    throw std::invalid_argument("config schema version not supported");
  }
  if (doc.contains(subcommand)) return doc.at(subcommand);
  return doc;
}

void overlay_kernel(const json& doc, KernelOpts& opts) {
  overlay(doc, "d", opts.d);
  overlay(doc, "r", opts.r);
  overlay(doc, "gamma", opts.gamma);
  overlay(doc, "max_degree", opts.max_degree);
  overlay(doc, "tail_tol", opts.tail_tol);
}

void overlay_schedule(const json& doc, ScheduleOpts& opts) {
  overlay(doc, "m", opts.m);
  overlay(doc, "gammas", opts.gammas);
  overlay(doc, "family", opts.family);
  overlay(doc, "c", opts.c);
  overlay(doc, "a", opts.a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case-error toolkit for QMC integration on products of simplices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string cache_flag;
  app.add_option("--config", config_path, "JSON config; values override flags");
  app.add_option("--cache-dir", cache_flag,
                 "basis cache directory (default: $SQMC_CACHE_DIR, else no cache)");

  // --- basis ---------------------------------------------------------------
  auto* cmd_basis = app.add_subcommand("basis", "build or cache an orthonormal basis table");
  int basis_d = 2, basis_degree = 8;
  std::string basis_out;
  cmd_basis->add_option("--d", basis_d, "simplex dimension");
  cmd_basis->add_option("--max-degree", basis_degree, "highest polynomial degree");
  cmd_basis->add_option("--out", basis_out, "write the table to this path ('-' = stdout)");

  // --- kernel ---------------------------------------------------------------
  auto* cmd_kernel = app.add_subcommand("kernel", "evaluate the reproducing kernel at points");
  KernelOpts kernel_opts;
  ScheduleOpts kernel_schedule;
  std::string kernel_x, kernel_y, kernel_out;
  add_kernel_opts(cmd_kernel, kernel_opts);
  add_schedule_opts(cmd_kernel, kernel_schedule);
  cmd_kernel->add_option("--x", kernel_x, "first point, m*d comma-separated coordinates");
  cmd_kernel->add_option("--y", kernel_y, "second point, m*d comma-separated coordinates");
  cmd_kernel->add_option("--out", kernel_out, "output path (default stdout)");

  // --- constants --------------------------------------------------------------
  auto* cmd_constants = app.add_subcommand("constants", "series constants and extrema estimates");
  KernelOpts const_opts;
  double const_gamma_star = 0.0;  // 0: use --gamma
  double const_pitch = 1.0 / 32.0;
  double const_series_tol = 1e-12;
  std::string const_out;
  add_kernel_opts(cmd_constants, const_opts);
  cmd_constants->add_option("--gamma-star", const_gamma_star, "weight bound (default --gamma)");
  cmd_constants->add_option("--grid-pitch", const_pitch, "extremum grid spacing");
  cmd_constants->add_option("--series-tol", const_series_tol, "series summation tolerance");
  cmd_constants->add_option("--out", const_out, "output path (default stdout)");

  // --- wce -------------------------------------------------------------------
  auto* cmd_wce = app.add_subcommand("wce", "worst-case error of a point-set file");
  KernelOpts wce_opts;
  ScheduleOpts wce_schedule;
  std::string wce_points, wce_out, wce_csv;
  double wce_pitch = 1.0 / 32.0;
  std::uint64_t wce_seed = 0;
  std::int64_t wce_e0m_samples = 0;
  add_kernel_opts(cmd_wce, wce_opts);
  add_schedule_opts(cmd_wce, wce_schedule);
  cmd_wce->add_option("--points", wce_points, "point-set file (.csv or .json)")->required();
  cmd_wce->add_option("--grid-pitch", wce_pitch, "extremum grid spacing for the bounds");
  cmd_wce->add_option("--seed", wce_seed, "seed recorded in CSV output");
  cmd_wce->add_option("--e0m-samples", wce_e0m_samples,
                      "Monte Carlo sample count for the initial-error diagnostic (0 = off)");
  cmd_wce->add_option("--out", wce_out, "report JSON path (default stdout)");
  cmd_wce->add_option("--csv", wce_csv,
                      "append a CSV row (columns d,r,m,n,seed,e2,upper,lower,expected)");

  // --- bounds ------------------------------------------------------------------
  auto* cmd_bounds = app.add_subcommand("bounds", "error bounds and node-count curves");
  KernelOpts bounds_opts;
  ScheduleOpts bounds_schedule;
  std::string bounds_nlist = "8,16,32,64,128,256", bounds_mlist, bounds_out;
  double bounds_eps = 0.1;
  double bounds_pitch = 1.0 / 32.0;
  add_kernel_opts(cmd_bounds, bounds_opts);
  add_schedule_opts(cmd_bounds, bounds_schedule);
  cmd_bounds->add_option("--eps", bounds_eps, "accuracy for the node-count bounds");
  cmd_bounds->add_option("--n-list", bounds_nlist, "node counts for the error bounds");
  cmd_bounds->add_option("--m-list", bounds_mlist, "factor counts for the node-count curve");
  cmd_bounds->add_option("--grid-pitch", bounds_pitch, "extremum grid spacing");
  cmd_bounds->add_option("--out", bounds_out, "output path (default stdout)");

  // --- search -------------------------------------------------------------------
  auto* cmd_search = app.add_subcommand("search", "low-error point sets by restart + exchange");
  KernelOpts search_opts;
  ScheduleOpts search_schedule;
  sqmc::SearchConfig search_config;
  std::string search_points_out, search_out;
  double search_pitch = 1.0 / 32.0;
  add_kernel_opts(cmd_search, search_opts);
  add_schedule_opts(cmd_search, search_schedule);
  cmd_search->add_option("--n", search_config.n, "nodes per set");
  cmd_search->add_option("--restarts", search_config.restarts, "independent uniform draws");
  cmd_search->add_option("--exchange-iters", search_config.exchange_iters,
                         "single-node exchange proposals after the restarts");
  cmd_search->add_option("--seed", search_config.seed, "master seed");
  cmd_search->add_option("--threads", search_config.threads, "worker cap (0 = hardware)");
  cmd_search->add_option("--grid-pitch", search_pitch, "extremum grid spacing");
  cmd_search->add_option("--points-out", search_points_out,
                         "write the best set; CSV columns x{factor}_{coordinate} (or .json)");
  cmd_search->add_option("--out", search_out, "report JSON path (default stdout)");

  // --- rate ----------------------------------------------------------------------
  auto* cmd_rate = app.add_subcommand("rate", "error-vs-n study with log-log slope");
  KernelOpts rate_opts;
  ScheduleOpts rate_schedule;
  sqmc::SearchConfig rate_config;
  std::string rate_nlist = "8,16,32,64,128,256", rate_out;
  double rate_pitch = 1.0 / 32.0;
  add_kernel_opts(cmd_rate, rate_opts);
  add_schedule_opts(cmd_rate, rate_schedule);
  cmd_rate->add_option("--n-list", rate_nlist, "increasing node counts");
  cmd_rate->add_option("--restarts", rate_config.restarts, "restarts per node count");
  cmd_rate->add_option("--seed", rate_config.seed, "master seed");
  cmd_rate->add_option("--threads", rate_config.threads, "worker cap (0 = hardware)");
  cmd_rate->add_option("--grid-pitch", rate_pitch, "extremum grid spacing");
  cmd_rate->add_option("--out", rate_out,
                       "CSV path, columns n,e,e2,upper with a slope footer (default stdout)");

  // --- tract --------------------------------------------------------------------
  auto* cmd_tract = app.add_subcommand("tract", "tractability classification and bound curves");
  KernelOpts tract_opts;
  ScheduleOpts tract_schedule;
  std::string tract_mlist = "1,2,4,8,16,32,64,128,256,512,1024", tract_out;
  double tract_eps = 0.1;
  double tract_pitch = 1.0 / 32.0;
  tract_schedule.family = "power";
  tract_schedule.a = 2.0;
  add_kernel_opts(cmd_tract, tract_opts);
  add_schedule_opts(cmd_tract, tract_schedule);
  cmd_tract->add_option("--eps", tract_eps, "accuracy for the node-count curve");
  cmd_tract->add_option("--m-list", tract_mlist, "factor counts for the curve");
  cmd_tract->add_option("--grid-pitch", tract_pitch, "extremum grid spacing");
  cmd_tract->add_option("--out", tract_out, "output path (default stdout)");

  // --- verify ----------------------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "run the invariant suite; nonzero exit on failure");
  sqmc::VerifyConfig verify_config;
  cmd_verify->add_option("--d", verify_config.d, "simplex dimension");
  cmd_verify->add_option("--r", verify_config.r, "smoothness");
  cmd_verify->add_option("--gamma", verify_config.gamma, "kernel weight");
  cmd_verify->add_option("--max-degree", verify_config.max_degree, "basis degree");
  cmd_verify->add_option("--seed", verify_config.seed, "seed for the sampled checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitBadConfig, std::string("argument error: ") + e.what());
  }

  try {
    const std::string cache_dir = cache_dir_or_default(cache_flag);

    if (app.got_subcommand(cmd_basis)) {
      const json cfg = load_config(config_path, "basis");
      overlay(cfg, "d", basis_d);
      overlay(cfg, "max_degree", basis_degree);
      overlay(cfg, "out", basis_out);
      auto basis = resolve_basis(basis_d, basis_degree, cache_dir);
      if (!basis_out.empty()) {
        write_text(basis_out, sqmc::basis_to_json(*basis));
      } else {
        ordered_json summary;
        summary["schema"] = 1;
        summary["d"] = basis->d;
        summary["max_degree"] = basis->max_degree;
        summary["total_size"] = basis->total_size();
        summary["content_hash"] = sqmc::basis_content_hash(*basis);
        std::cout << summary.dump(2) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_kernel)) {
      const json cfg = load_config(config_path, "kernel");
      overlay_kernel(cfg, kernel_opts);
      overlay_schedule(cfg, kernel_schedule);
      overlay(cfg, "x", kernel_x);
      overlay(cfg, "y", kernel_y);
      const auto kernel = make_kernel(kernel_opts, cache_dir);
      const auto xs = parse_double_list(kernel_x);
      const auto ys = parse_double_list(kernel_y);
      const int m = kernel_schedule.m;
      const int d = kernel_opts.d;
      if (static_cast<int>(xs.size()) != m * d || static_cast<int>(ys.size()) != m * d) {
        throw std::invalid_argument("--x/--y need m*d coordinates");
      }
      sqmc::ProductPoint X, Y;
      for (int j = 0; j < m; ++j) {
        X.components.push_back(sqmc::SimplexPoint{
            std::vector<double>(xs.begin() + j * d, xs.begin() + (j + 1) * d)});
        Y.components.push_back(sqmc::SimplexPoint{
            std::vector<double>(ys.begin() + j * d, ys.begin() + (j + 1) * d)});
      }
      const auto schedule = make_schedule(kernel_schedule, kernel_opts.gamma);
      ordered_json outdoc;
      outdoc["schema"] = 1;
      outdoc["d"] = d;
      outdoc["m"] = m;
      outdoc["truncation_degree"] = kernel.truncation_degree();
      outdoc["tail_bound"] = kernel.effective_tail_bound();
      if (m == 1) {
        outdoc["g"] = kernel.g(X.components[0], Y.components[0]);
        outdoc["k1"] = kernel.k1(X.components[0], Y.components[0]);
      }
      outdoc["km"] = kernel.km(X, Y, schedule);
      write_text(kernel_out, outdoc.dump(2));
      return 0;
    }

    if (app.got_subcommand(cmd_constants)) {
      const json cfg = load_config(config_path, "constants");
      overlay_kernel(cfg, const_opts);
      overlay(cfg, "gamma_star", const_gamma_star);
      overlay(cfg, "grid_pitch", const_pitch);
      overlay(cfg, "series_tol", const_series_tol);
      const auto kernel = make_kernel(const_opts, cache_dir);
      sqmc::GridSearchConfig grid;
      grid.pitch = const_pitch;
      const double gamma_star = const_gamma_star > 0.0 ? const_gamma_star : const_opts.gamma;
      const auto consts =
          sqmc::compute_kernel_constants(kernel, gamma_star, grid, const_series_tol);
      write_text(const_out, sqmc::kernel_constants_to_json(consts));
      return 0;
    }

    if (app.got_subcommand(cmd_wce)) {
      const json cfg = load_config(config_path, "wce");
      overlay_kernel(cfg, wce_opts);
      overlay_schedule(cfg, wce_schedule);
      overlay(cfg, "points", wce_points);
      overlay(cfg, "grid_pitch", wce_pitch);
      overlay(cfg, "e0m_samples", wce_e0m_samples);
      const auto kernel = make_kernel(wce_opts, cache_dir);
      sqmc::ProductPointSet set;
      if (wce_points.size() >= 5 && wce_points.substr(wce_points.size() - 5) == ".json") {
        set = sqmc::point_set_from_json(read_text(wce_points));
      } else {
        set = sqmc::point_set_from_csv(read_text(wce_points), wce_opts.d, wce_schedule.m);
      }
      if (set.d != wce_opts.d) throw std::invalid_argument("point set dimension mismatch");
      const auto schedule = make_schedule(wce_schedule, wce_opts.gamma);
      if (set.m != schedule.m) throw std::invalid_argument("point set arity mismatch");
      sqmc::GridSearchConfig grid;
      grid.pitch = wce_pitch;
      const auto consts = sqmc::compute_kernel_constants(kernel, schedule.gamma_star(), grid);
      const auto report = sqmc::make_error_report(set, schedule, kernel, consts);
      ordered_json report_doc = ordered_json::parse(sqmc::error_report_to_json(report));
      if (wce_e0m_samples > 0) {
        const auto diag = sqmc::e0m_mc_diagnostic(kernel, schedule, wce_e0m_samples, wce_seed);
        report_doc["e0m_mc"] = {{"estimate", diag.estimate},
                                {"std_error", diag.std_error},
                                {"samples", diag.samples},
                                {"deviation_from_1", diag.estimate - 1.0}};
      }
      write_text(wce_out, report_doc.dump(2));
      if (!wce_csv.empty()) {
        const bool fresh = !std::filesystem::exists(wce_csv);
        std::ofstream csv(wce_csv, std::ios::app);
        if (fresh) csv << sqmc::error_report_csv_header() << "\n";
        csv << sqmc::error_report_csv_row(report, wce_seed) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_bounds)) {
      const json cfg = load_config(config_path, "bounds");
      overlay_kernel(cfg, bounds_opts);
      overlay_schedule(cfg, bounds_schedule);
      overlay(cfg, "eps", bounds_eps);
      overlay(cfg, "n_list", bounds_nlist);
      overlay(cfg, "m_list", bounds_mlist);
      const auto kernel = make_kernel(bounds_opts, cache_dir);
      const auto schedule = make_schedule(bounds_schedule, bounds_opts.gamma);
      sqmc::GridSearchConfig grid;
      grid.pitch = bounds_pitch;
      const auto consts = sqmc::compute_kernel_constants(kernel, schedule.gamma_star(), grid);

      ordered_json outdoc;
      outdoc["schema"] = 1;
      outdoc["eps"] = bounds_eps;
      auto lemma = ordered_json::array();
      for (int n : parse_int_list(bounds_nlist)) {
        lemma.push_back({{"n", n},
                         {"e2_upper", sqmc::existence_upper_bound(n, schedule, consts.c_dr)},
                         {"e2_lower", sqmc::universal_lower_bound(n, schedule, consts)},
                         {"e2_expected", sqmc::expected_enm_sq(n, schedule, consts.s_dr)}});
      }
      outdoc["error_bounds"] = std::move(lemma);
      auto neps = ordered_json::array();
      if (!bounds_mlist.empty() && !bounds_schedule.family.empty()) {
        const auto curve = sqmc::bound_curve(make_family(bounds_schedule), bounds_eps,
                                             parse_int_list(bounds_mlist), consts);
        for (const auto& row : curve.rows) {
          neps.push_back({{"m", row.m},
                          {"sum_gamma", row.sum_gamma},
                          {"n_upper", row.n_upper},
                          {"n_lower", row.n_lower}});
        }
      } else {
        neps.push_back({{"m", schedule.m},
                        {"n_upper", sqmc::neps_upper(bounds_eps, schedule, consts.c_dr)},
                        {"n_lower", sqmc::neps_lower(bounds_eps, schedule, consts)}});
      }
      outdoc["node_counts"] = std::move(neps);
      write_text(bounds_out, outdoc.dump(2));
      return 0;
    }

    if (app.got_subcommand(cmd_search)) {
      const json cfg = load_config(config_path, "search");
      overlay_kernel(cfg, search_opts);
      overlay_schedule(cfg, search_schedule);
      overlay(cfg, "n", search_config.n);
      overlay(cfg, "restarts", search_config.restarts);
      overlay(cfg, "exchange_iters", search_config.exchange_iters);
      overlay(cfg, "seed", search_config.seed);
      overlay(cfg, "threads", search_config.threads);
      const auto kernel = make_kernel(search_opts, cache_dir);
      const auto schedule = make_schedule(search_schedule, search_opts.gamma);
      search_config.m = schedule.m;
      sqmc::GridSearchConfig grid;
      grid.pitch = search_pitch;
      const auto consts = sqmc::compute_kernel_constants(kernel, schedule.gamma_star(), grid);

      auto result = sqmc::best_of_random(search_config, schedule, kernel, consts);
      if (search_config.exchange_iters > 0) {
        result = sqmc::exchange_descent(result.set, search_config, schedule, kernel, consts);
      }
      if (!search_points_out.empty()) {
        const bool as_json = search_points_out.size() >= 5 &&
                             search_points_out.substr(search_points_out.size() - 5) == ".json";
        write_text(search_points_out, as_json ? sqmc::point_set_to_json(result.set)
                                              : sqmc::point_set_to_csv(result.set));
      }
      ordered_json outdoc = ordered_json::parse(sqmc::error_report_to_json(result.report));
      outdoc["best_restart"] = result.best_restart;
      outdoc["accepted_exchanges"] = result.accepted_exchanges;
      write_text(search_out, outdoc.dump(2));
      return 0;
    }

    if (app.got_subcommand(cmd_rate)) {
      const json cfg = load_config(config_path, "rate");
      overlay_kernel(cfg, rate_opts);
      overlay_schedule(cfg, rate_schedule);
      overlay(cfg, "n_list", rate_nlist);
      overlay(cfg, "restarts", rate_config.restarts);
      overlay(cfg, "seed", rate_config.seed);
      const auto kernel = make_kernel(rate_opts, cache_dir);
      const auto schedule = make_schedule(rate_schedule, rate_opts.gamma);
      rate_config.m = schedule.m;
      sqmc::GridSearchConfig grid;
      grid.pitch = rate_pitch;
      const auto consts = sqmc::compute_kernel_constants(kernel, schedule.gamma_star(), grid);
      const auto study =
          sqmc::rate_study(parse_int_list(rate_nlist), rate_config, schedule, kernel, consts);
      std::ostringstream csv;
      csv.precision(17);
      csv << "n,e,e2,upper\n";
      for (const auto& p : study.points) {
        csv << p.n << ',' << p.e << ',' << p.e_sq << ',' << p.upper << '\n';
      }
      csv << "# slope=" << study.slope << "\n";
      write_text(rate_out, csv.str());
      return 0;
    }

    if (app.got_subcommand(cmd_tract)) {
      const json cfg = load_config(config_path, "tract");
      overlay_kernel(cfg, tract_opts);
      overlay_schedule(cfg, tract_schedule);
      overlay(cfg, "eps", tract_eps);
      overlay(cfg, "m_list", tract_mlist);
      const auto kernel = make_kernel(tract_opts, cache_dir);
      const auto family = make_family(tract_schedule);
      sqmc::GridSearchConfig grid;
      grid.pitch = tract_pitch;
      const auto consts = sqmc::compute_kernel_constants(kernel, family.gamma(1), grid);
      const auto curve =
          sqmc::bound_curve(family, tract_eps, parse_int_list(tract_mlist), consts);
      if (!tract_out.empty() && tract_out.size() >= 4 &&
          tract_out.substr(tract_out.size() - 4) == ".csv") {
        write_text(tract_out, sqmc::bound_curve_to_csv(curve));
      } else {
        ordered_json outdoc;
        outdoc["schema"] = 1;
        outdoc["family"] = family.name();
        outdoc["verdict"] = ordered_json::parse(sqmc::verdict_to_json(curve.verdict));
        outdoc["curve_csv"] = sqmc::bound_curve_to_csv(curve);
        write_text(tract_out, outdoc.dump(2));
      }
      return 0;
    }

    if (app.got_subcommand(cmd_verify)) {
      const json cfg = load_config(config_path, "verify");
      overlay(cfg, "d", verify_config.d);
      overlay(cfg, "r", verify_config.r);
      overlay(cfg, "gamma", verify_config.gamma);
      overlay(cfg, "max_degree", verify_config.max_degree);
      overlay(cfg, "seed", verify_config.seed);
      const auto results = sqmc::run_verification(verify_config);
      bool all_pass = true;
      for (const auto& res : results) {
        all_pass = all_pass && res.pass;
        std::printf("[%s] %-34s %7.2fs  %s\n", res.pass ? "PASS" : "FAIL", res.name.c_str(),
                    res.seconds, res.detail.c_str());
      }
      std::printf("%s: %zu checks\n", all_pass ? "OK" : "FAILED", results.size());
      return all_pass ? 0 : 1;
    }

    return fail(kExitBadConfig, "no subcommand given");
  } catch (const std::domain_error& e) {
    return fail(kExitPrecondition, e.what());
  } catch (const std::exception& e) {
    return fail(kExitBadConfig, e.what());
  }
}
