#pragma once

/**
 * @file cli.hpp
 * @brief The tzlab command-line front end.
 *
 * Every command writes {command}.csv and summary.json into the output
 * directory; solve also writes solution.json and solution.csv. Options can
 * come from an INI/TOML file (--config), one section per command; flags on
 * the command line win.
 *
 * Exit status: 0 when every check passes, 1 on usage or configuration
 * errors, 2 when a check fails.
 */

#include "tzlab/bubbles.hpp"
#include "tzlab/descent.hpp"
#include "tzlab/energy.hpp"
#include "tzlab/experiments.hpp"
#include "tzlab/expr.hpp"
#include "tzlab/fft.hpp"
#include "tzlab/io.hpp"
#include "tzlab/radial.hpp"
#include "tzlab/surface.hpp"
#include "tzlab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tzlab::cli {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Bad input, reported with the offending key; exit status 1.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& key, const std::string& msg)
      : std::runtime_error(key + ": " + msg) {}
};

enum ExitCode : int { kPass = 0, kUsage = 1, kCheckFailed = 2 };

inline Json versions() {
  return Json{{"tzlab", kVersion},
              {"fftw", fft::library_version()},
              {"cli11", CLI11_VERSION},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
#ifdef __VERSION__
              {"compiler", __VERSION__},
#endif
              {"cxx_standard", static_cast<long>(__cplusplus)}};
}

namespace detail {

/// Runs f, turning precondition failures into a UsageError tagged with key.
template <class F>
auto keyed(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    throw UsageError(key, e.what());
  }
}

inline GridPtr grid_option(int n, const std::string& key = "--n") {
  return keyed(key, [&] { return build_grid(n); });
}

/// Samples a recipe on the grid and checks it is strictly positive.
inline ScalarField weight_option(const std::string& recipe, const GridPtr& grid, const std::string& key) {
  return keyed(key, [&] {
    const auto e = Expression::parse(recipe);
    const auto f = ScalarField::from_function(grid, [&](double x, double y) { return e(x, y); });
    tzlab::detail::require(f.min() > 0.0, "weight must be strictly positive on the grid (min " +
                                              io::format_number(f.min()) + ")");
    return f;
  });
}

inline void nonnegative(double v, const std::string& key) {
  if (!std::isfinite(v) || v < 0.0) throw UsageError(key, "must be finite and nonnegative");
}

inline void lambdas_option(const std::vector<double>& lambdas) {
  keyed("--lambdas", [&] {
    tzlab::detail::check_lambdas(lambdas);
    return 0;
  });
}

/// "x,y" or "x,y,w".
inline WeightedPoint parse_point(const std::string& text, const std::string& key) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (piece.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw UsageError(key, "cannot read point '" + text + "' (expected x,y or x,y,w)");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 2 && parts.size() != 3) {
    throw UsageError(key, "cannot read point '" + text + "' (expected x,y or x,y,w)");
  }
  return {parts.size() == 3 ? parts[2] : 0.0, {parts[0], parts[1]}};
}

/// Points without explicit weights share the remaining mass equally.
inline std::vector<WeightedPoint> point_set(const std::vector<std::string>& items, const std::string& key) {
  if (items.empty()) throw UsageError(key, "at least one point is required");
  std::vector<WeightedPoint> pts;
  bool any_weight = false, all_weight = true;
  for (const auto& s : items) {
    pts.push_back(parse_point(s, key));
    const bool weighted = std::count(s.begin(), s.end(), ',') == 2;
    any_weight = any_weight || weighted;
    all_weight = all_weight && weighted;
  }
  if (any_weight && !all_weight) throw UsageError(key, "give weights for all points or none");
  if (!any_weight) {
    for (auto& p : pts) p.weight = 1.0 / static_cast<double>(pts.size());
  }
  return pts;
}

inline JoinConfig join_option(const std::vector<std::string>& plus, const std::vector<std::string>& minus,
                              double s) {
  JoinConfig z{point_set(plus, "--plus"), point_set(minus, "--minus"), s};
  if (!(s >= 0.0 && s <= 1.0)) throw UsageError("--s", "join parameter must lie in [0,1]");
  keyed("--plus/--minus", [&] {
    z.validate();
    return 0;
  });
  return z;
}

inline Json sweep_json(const SweepResult& s) { return verify::detail::sweep_json(s); }

inline Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double d : v) out.push_back(io::json_number(d));
  return out;
}

}  // namespace detail

/// Collects outputs of one command and writes them.
class Report {
 public:
  Report(std::string command, std::filesystem::path dir) : command_(std::move(command)), dir_(std::move(dir)) {}

  void check(const std::string& name, bool pass) { checks_[name] = pass; }
  Json& results() { return results_; }
  void config(Json cfg) { config_ = std::move(cfg); }
  /// Off when the command already printed its checks as they finished.
  void print_checks(bool on) { print_checks_ = on; }

  void csv(const std::string& stem, const io::CsvTable& t) {
    io::write_csv(dir_ / (stem + ".csv"), t);
    files_.push_back(stem + ".csv");
  }
  void json(const std::string& stem, const Json& j) {
    io::write_json(dir_ / (stem + ".json"), j);
    files_.push_back(stem + ".json");
  }

  bool pass() const {
    for (const auto& [k, v] : checks_.items()) {
      if (!v.get<bool>()) return false;
    }
    return true;
  }

  int finish(std::ostream& out) {
    Json summary{{"command", command_},
                 {"pass", pass()},
                 {"checks", checks_},
                 {"config", config_},
                 {"versions", versions()},
                 {"results", results_}};
    json("summary", summary);
    for (const auto& [k, v] : checks_.items()) {
      if (print_checks_) out << (v.get<bool>() ? "PASS " : "FAIL ") << k << "\n";
    }
    out << "wrote " << files_.size() << " files to " << dir_.string() << "\n";
    return pass() ? kPass : kCheckFailed;
  }

 private:
  std::string command_;
  std::filesystem::path dir_;
  Json checks_ = Json::object();
  Json results_ = Json::object();
  Json config_ = Json::object();
  std::vector<std::string> files_;
  bool print_checks_ = true;
};

struct SolveOptions {
  int n = 64;
  double rho1 = 4.0 * std::numbers::pi;
  double rho2 = 2.0 * std::numbers::pi;
  std::string h1 = "1";
  std::string h2 = "1";
  std::uint64_t seed = 0;
  double amplitude = 0.1;
  double tol = 1e-10;
  int max_iters = 20000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double armijo_backtrack = 0.5;
  bool no_precondition = false;

  Json echo() const {
    return {{"n", n}, {"rho1", rho1}, {"rho2", rho2}, {"h1", h1}, {"h2", h2}, {"seed", seed},
            {"amplitude", amplitude}, {"tol", tol}, {"max-iters", max_iters}, {"step0", step0},
            {"armijo-c", armijo_c}, {"armijo-backtrack", armijo_backtrack},
            {"no-precondition", no_precondition}};
  }
};

inline int run_solve(const SolveOptions& o, Report& rep) {
  const auto grid = detail::grid_option(o.n);
  detail::nonnegative(o.rho1, "--rho1");
  detail::nonnegative(o.rho2, "--rho2");
  if (!(o.amplitude >= 0.0)) throw UsageError("--amplitude", "must be nonnegative");
  const Params p(o.rho1, o.rho2, detail::weight_option(o.h1, grid, "--h1"),
                 detail::weight_option(o.h2, grid, "--h2"));
  DescentConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.tol_residual = o.tol;
  cfg.step0 = o.step0;
  cfg.armijo_c = o.armijo_c;
  cfg.armijo_backtrack = o.armijo_backtrack;
  cfg.precondition = !o.no_precondition;
  detail::keyed("descent options", [&] {
    cfg.validate();
    return 0;
  });

  std::string error;
  const Solution sol = [&] {
    try {
      return minimize(p, random_smooth_field(grid, o.seed, o.amplitude), cfg);
    } catch (const DescentError& e) {
      error = e.what();
      return e.best();
    }
  }();

  io::CsvTable hist({"iteration", "energy"});
  for (std::size_t i = 0; i < sol.energy_history.size(); ++i) hist.row() << i << sol.energy_history[i];
  rep.csv("solve", hist);
  rep.csv("solution", io::field_table(sol.u));

  Json u = Json::array();
  for (double v : sol.u.values()) u.push_back(v);
  Json solution{{"n", o.n},
                {"layout", "row-major, x fastest: u[j*n + i] at (x_i, y_j)"},
                {"converged", sol.converged},
                {"residual_norm", io::json_number(sol.residual_norm)},
                {"energy", io::json_number(sol.energy)},
                {"iterations", sol.iterations},
                {"mean", mean(sol.u)},
                {"min", sol.u.min()},
                {"max", sol.u.max()},
                {"warnings", sol.warnings},
                {"error", error},
                {"u", u}};
  rep.json("solution", solution);
  rep.check("converged", sol.converged);
  rep.results() = {{"residual_norm", io::json_number(sol.residual_norm)},
                   {"energy", io::json_number(sol.energy)},
                   {"iterations", sol.iterations},
                   {"warnings", sol.warnings}};
  return 0;
}

struct ScanOptions {
  int n = 256;
  std::vector<double> lambdas = default_lambdas();
  std::vector<double> a1{8 * std::numbers::pi - 2, 8 * std::numbers::pi, 8 * std::numbers::pi + 2};
  std::vector<double> a2{4 * std::numbers::pi - 1, 4 * std::numbers::pi, 4 * std::numbers::pi + 1};
  std::string plus_center = "0.3,0.3";
  std::string minus_center = "0.8,0.8";
  double rel_tol = 0.10;
  double abs_tol = 0.5;

  Json echo() const {
    return {{"n", n}, {"lambdas", detail::numbers(lambdas)}, {"a1", detail::numbers(a1)},
            {"a2", detail::numbers(a2)}, {"plus-center", plus_center}, {"minus-center", minus_center},
            {"rel-tol", rel_tol}, {"abs-tol", abs_tol}};
  }
};

inline int run_mt_scan(const ScanOptions& o, Report& rep) {
  const auto grid = detail::grid_option(o.n);
  detail::lambdas_option(o.lambdas);
  if (o.a1.empty()) throw UsageError("--a1", "at least one coefficient is required");
  if (o.a2.empty()) throw UsageError("--a2", "at least one coefficient is required");
  for (double a : o.a1) detail::nonnegative(a, "--a1");
  for (double a : o.a2) detail::nonnegative(a, "--a2");
  const auto pc = detail::parse_point(o.plus_center, "--plus-center").point;
  const auto mc = detail::parse_point(o.minus_center, "--minus-center").point;
  const SlopeTolerance tol{o.rel_tol, o.abs_tol, o.abs_tol};
  const auto scan = mt_threshold_scan(o.a1, o.a2, o.lambdas, grid, pc, mc, tol);

  io::CsvTable t({"family", "a1", "a2", "predicted_slope", "fitted_slope", "upper_half_slope",
                  "allowed_error", "skipped", "pass"});
  io::CsvTable values({"family", "a1", "a2", "lambda", "deficit"});
  bool fits = true, skipped = false;
  for (const char* fam : {"plus", "minus"}) {
    for (std::size_t i = 0; i < o.a1.size(); ++i) {
      for (std::size_t j = 0; j < o.a2.size(); ++j) {
        const auto& s = std::string(fam) == "plus" ? scan.plus(i, j) : scan.minus(i, j);
        fits = fits && s.pass;
        skipped = skipped || s.skipped;
        t.row() << fam << o.a1[i] << o.a2[j] << s.predicted_slope << s.fitted_slope
                << s.upper_half_slope << s.allowed_error << s.skipped << s.pass;
        for (std::size_t k = 0; k < s.values.size(); ++k) {
          values.row() << fam << o.a1[i] << o.a2[j] << s.lambdas[k] << s.values[k];
        }
      }
    }
  }
  rep.csv("mt-scan", t);
  rep.csv("mt-scan_values", values);

  // Threshold location: plus family along a1 (at each a2), minus along a2.
  Json plus_loc = Json::array(), minus_loc = Json::array();
  if (!skipped) {
    for (std::size_t j = 0; j < o.a2.size(); ++j) {
      std::vector<double> sl;
      for (std::size_t i = 0; i < o.a1.size(); ++i) sl.push_back(scan.plus(i, j).fitted_slope);
      plus_loc.push_back(io::json_number(o.a1.size() > 1 ? sign_change_location(o.a1, sl) : std::nan("")));
    }
    for (std::size_t i = 0; i < o.a1.size(); ++i) {
      std::vector<double> sl;
      for (std::size_t j = 0; j < o.a2.size(); ++j) sl.push_back(scan.minus(i, j).fitted_slope);
      minus_loc.push_back(io::json_number(o.a2.size() > 1 ? sign_change_location(o.a2, sl) : std::nan("")));
    }
  }
  rep.check("grid_adequate", !skipped);
  rep.check("slopes_match", fits && !skipped);
  rep.results() = {{"plus_threshold_a1", plus_loc},
                   {"minus_threshold_a2", minus_loc},
                   {"sharp", {8 * std::numbers::pi, 4 * std::numbers::pi}}};
  return 0;
}

struct BubbleOptions {
  int n = 256;
  std::vector<double> lambdas = default_lambdas();
  std::vector<std::string> plus{"0.3,0.3"};
  std::vector<std::string> minus{"0.8,0.8"};
  double s = 0.5;
  double rho1 = 10 * std::numbers::pi;
  double rho2 = 5 * std::numbers::pi;
  std::string h1 = "1";
  std::string h2 = "1";
  double rel_tol = 0.10;
  double zero_tol = 0.5;

  Json echo(bool with_energy) const {
    Json j{{"n", n}, {"lambdas", detail::numbers(lambdas)}, {"plus", plus}, {"minus", minus}, {"s", s},
           {"rel-tol", rel_tol}, {"zero-tol", zero_tol}};
    if (with_energy) {
      j["rho1"] = rho1;
      j["rho2"] = rho2;
      j["h1"] = h1;
      j["h2"] = h2;
    }
    return j;
  }
};

inline int run_bubble_sweep(const BubbleOptions& o, Report& rep) {
  const auto grid = detail::grid_option(o.n);
  detail::lambdas_option(o.lambdas);
  detail::nonnegative(o.rho1, "--rho1");
  detail::nonnegative(o.rho2, "--rho2");
  const auto zeta = detail::join_option(o.plus, o.minus, o.s);
  const Params p(o.rho1, o.rho2, detail::weight_option(o.h1, grid, "--h1"),
                 detail::weight_option(o.h2, grid, "--h2"));
  const auto s = bubble_energy_sweep(zeta, p, o.lambdas, SlopeTolerance{o.rel_tol, 0.0, o.zero_tol});
  io::CsvTable t({"lambda", "energy"});
  for (std::size_t k = 0; k < s.values.size(); ++k) t.row() << s.lambdas[k] << s.values[k];
  rep.csv("bubble-sweep", t);
  rep.check("grid_adequate", !s.skipped);
  rep.check("slope_matches", s.pass);
  rep.results() = detail::sweep_json(s);
  return 0;
}

inline int run_asymptotics(const BubbleOptions& o, Report& rep) {
  const auto grid = detail::grid_option(o.n);
  detail::lambdas_option(o.lambdas);
  const auto zeta = detail::join_option(o.plus, o.minus, o.s);
  const auto sweeps = component_asymptotics_sweep(zeta, o.lambdas, grid, SlopeTolerance{o.rel_tol, 0.0, o.zero_tol});
  io::CsvTable t({"lambda", "gradient", "log_exp_plus", "log_exp_minus", "mean"});
  if (!sweeps[0].skipped) {
    for (std::size_t k = 0; k < o.lambdas.size(); ++k) {
      t.row() << o.lambdas[k] << sweeps[0].values[k] << sweeps[1].values[k] << sweeps[2].values[k]
              << sweeps[3].values[k];
    }
  }
  rep.csv("asymptotics", t);
  rep.csv("asymptotics_slopes", verify::detail::sweep_summary_table({sweeps.begin(), sweeps.end()}));
  rep.check("grid_adequate", !sweeps[0].skipped);
  Json comps = Json::array();
  for (const auto& s : sweeps) {
    rep.check(s.label, s.pass);
    comps.push_back(detail::sweep_json(s));
  }
  rep.results() = {{"components", comps}};
  return 0;
}

struct RadialOptions {
  std::vector<double> alphas{0, 2, 4, 6, 8, 10, 12};
  double h1 = 1.0;
  double h2 = 0.0;
  double r_max = 1.0;
  double step = 1e-4;
  double tol = 0.05;

  Json echo() const {
    return {{"alphas", detail::numbers(alphas)}, {"h1", h1}, {"h2", h2}, {"r-max", r_max},
            {"step", step}, {"tol", tol}};
  }
};

inline int run_radial_sweep(const RadialOptions& o, Report& rep) {
  if (o.alphas.empty()) throw UsageError("--alphas", "at least one alpha is required");
  for (double a : o.alphas) {
    if (!std::isfinite(a)) throw UsageError("--alphas", "alphas must be finite");
  }
  if (!(o.h1 > 0.0) || !std::isfinite(o.h1)) throw UsageError("--h1", "must be positive");
  detail::nonnegative(o.h2, "--h2");
  if (!(o.r_max > 0.0) || !std::isfinite(o.r_max)) throw UsageError("--r-max", "must be positive");
  if (!(o.step > 0.0) || !std::isfinite(o.step)) throw UsageError("--step", "must be positive");
  if (!(o.tol >= 0.0)) throw UsageError("--tol", "must be nonnegative");
  const auto rows = alpha_sweep(o.alphas, o.h1, o.h2, o.r_max, o.step, o.tol);
  io::CsvTable t({"alpha", "step", "sigma1", "sigma2", "pohozaev", "pohozaev_max_rel", "relation",
                  "family", "m", "distance", "error"});
  bool ok = true, identity = true;
  for (const auto& r : rows) {
    ok = ok && r.error.empty();
    if (r.error.empty()) identity = identity && r.pohozaev_max_rel < 1e-6;
    t.row() << r.alpha << r.step << r.sigma1 << r.sigma2 << r.pohozaev << r.pohozaev_max_rel << r.relation
            << radial::family_name(r.classification.family) << r.classification.m
            << r.classification.distance << r.error;
  }
  rep.csv("radial-sweep", t);
  rep.check("all_rows_computed", ok);
  rep.check("pohozaev_identity", identity);
  rep.results() = {{"rows", rows.size()}};
  return 0;
}

inline int run_quantization_table(int m_min, int m_max, Report& rep) {
  if (m_min > m_max) throw UsageError("--m-min", "must not exceed --m-max");
  const auto table = radial::quantization_table(m_min, m_max);
  io::CsvTable t({"family", "m", "sigma1", "sigma2", "relation"});
  bool on_curve = true, divisible = true;
  for (const auto& p : table) {
    const auto rel = radial::limit_mass_relation_exact(p.sigma1, p.sigma2);
    on_curve = on_curve && rel == 0;
    divisible = divisible && p.sigma1 % 4 == 0 && p.sigma2 % 2 == 0;
    t.row() << radial::family_name(p.family) << p.m << p.sigma1 << p.sigma2 << rel;
  }
  rep.csv("quantization-table", t);
  rep.check("relation_exact", on_curve);
  rep.check("divisibility", divisible);
  rep.results() = {{"pairs", table.size()}};
  return 0;
}

inline int run_verify_all(const verify::VerifyConfig& cfg, Report& rep, std::ostream& out) {
  detail::lambdas_option(cfg.lambdas);
  detail::grid_option(cfg.bubble_n, "--bubble-n");
  detail::grid_option(cfg.descent_n, "--descent-n");
  rep.print_checks(false);
  const auto results = verify::verify_all(cfg, [&](const verify::CheckResult& r) {
    out << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.id << " " << r.name << ": " << r.detail
        << "\n";
    out.flush();
  });
  io::CsvTable t({"criterion", "name", "pass", "detail"});
  Json details = Json::array();
  for (const auto& r : results) {
    t.row() << r.id << r.name << r.pass << r.detail;
    for (const auto& nt : r.tables) rep.csv("criterion" + std::to_string(r.id) + "_" + nt.name, nt.table);
    rep.check(r.name, r.pass);
    details.push_back(Json{{"criterion", r.id},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"seconds", r.seconds},
                           {"metrics", r.metrics}});
  }
  rep.csv("verify-all", t);
  rep.results() = {{"criteria", details}};
  return 0;
}

/// Parses argv and runs one command. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"tzlab: numerical lab for the Tzitzeica mean-field equation on the flat unit torus"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "INI/TOML file with one [command] section; flags override it");
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string output_dir = "tzlab_out";
  app.add_option("-o,--output-dir", output_dir, "Directory for CSV/JSON outputs")->capture_default_str();

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Minimize J in the coercive regime by preconditioned descent");
  solve->add_option("--n", so.n, "Grid points per side (even, >= 8)")->capture_default_str();
  solve->add_option("--rho1", so.rho1, "rho1")->capture_default_str();
  solve->add_option("--rho2", so.rho2, "rho2")->capture_default_str();
  solve->add_option("--h1", so.h1, "Weight h1(x,y) recipe")->capture_default_str();
  solve->add_option("--h2", so.h2, "Weight h2(x,y) recipe")->capture_default_str();
  solve->add_option("--seed", so.seed, "Seed of the random initial field")->capture_default_str();
  solve->add_option("--amplitude", so.amplitude, "Amplitude of the random initial field")->capture_default_str();
  solve->add_option("--tol", so.tol, "Residual L2 tolerance")->capture_default_str();
  solve->add_option("--max-iters", so.max_iters, "Iteration cap")->capture_default_str();
  solve->add_option("--step0", so.step0, "Initial line-search step")->capture_default_str();
  solve->add_option("--armijo-c", so.armijo_c, "Armijo constant")->capture_default_str();
  solve->add_option("--armijo-backtrack", so.armijo_backtrack, "Backtracking factor")->capture_default_str();
  solve->add_flag("--no-precondition", so.no_precondition, "Use the raw L2 gradient");

  ScanOptions sc;
  auto* scan = app.add_subcommand("mt-scan", "Deficit slopes along plus/minus bubbles over (a1, a2)");
  scan->add_option("--n", sc.n, "Grid points per side")->capture_default_str();
  scan->add_option("--lambdas", sc.lambdas, "Increasing lambda schedule")->delimiter(',')->capture_default_str();
  scan->add_option("--a1", sc.a1, "a1 coefficients")->delimiter(',')->capture_default_str();
  scan->add_option("--a2", sc.a2, "a2 coefficients")->delimiter(',')->capture_default_str();
  scan->add_option("--plus-center", sc.plus_center, "Plus bubble center x,y")->capture_default_str();
  scan->add_option("--minus-center", sc.minus_center, "Minus bubble center x,y")->capture_default_str();
  scan->add_option("--rel-tol", sc.rel_tol, "Relative slope tolerance")->capture_default_str();
  scan->add_option("--abs-tol", sc.abs_tol, "Absolute slope tolerance floor")->capture_default_str();

  BubbleOptions bo;
  auto add_join = [](CLI::App* sub, BubbleOptions& b) {
    sub->add_option("--n", b.n, "Grid points per side")->capture_default_str();
    sub->add_option("--lambdas", b.lambdas, "Increasing lambda schedule")->delimiter(',')->capture_default_str();
    sub->add_option("--plus", b.plus, "Plus point x,y[,w] (repeatable)")->capture_default_str();
    sub->add_option("--minus", b.minus, "Minus point x,y[,w] (repeatable)")->capture_default_str();
    sub->add_option("--s", b.s, "Join parameter in [0,1]")->capture_default_str();
    sub->add_option("--rel-tol", b.rel_tol, "Relative slope tolerance")->capture_default_str();
    sub->add_option("--zero-tol", b.zero_tol, "Allowed |slope| when the prediction is 0")->capture_default_str();
  };
  auto* bubble = app.add_subcommand("bubble-sweep", "J along a bubble family against its predicted slope");
  add_join(bubble, bo);
  bubble->add_option("--rho1", bo.rho1, "rho1")->capture_default_str();
  bubble->add_option("--rho2", bo.rho2, "rho2")->capture_default_str();
  bubble->add_option("--h1", bo.h1, "Weight h1(x,y) recipe")->capture_default_str();
  bubble->add_option("--h2", bo.h2, "Weight h2(x,y) recipe")->capture_default_str();

  BubbleOptions ao;
  auto* asym = app.add_subcommand("asymptotics", "Slopes of the four bubble energy components");
  add_join(asym, ao);

  RadialOptions ro;
  auto* rad = app.add_subcommand("radial-sweep", "Radial shooting: local masses, Pohozaev, classification");
  rad->add_option("--alphas", ro.alphas, "Central values u(0)")->delimiter(',')->capture_default_str();
  rad->add_option("--h1", ro.h1, "Constant h1 > 0")->capture_default_str();
  rad->add_option("--h2", ro.h2, "Constant h2 >= 0")->capture_default_str();
  rad->add_option("--r-max", ro.r_max, "Outer radius")->capture_default_str();
  rad->add_option("--step", ro.step, "RK4 step (reduced per alpha to the stability rule)")->capture_default_str();
  rad->add_option("--tol", ro.tol, "Classification tolerance")->capture_default_str();

  int m_min = -3, m_max = 3;
  auto* quant = app.add_subcommand("quantization-table", "Admissible blow-up mass pairs");
  quant->add_option("--m-min", m_min, "Smallest m")->capture_default_str();
  quant->add_option("--m-max", m_max, "Largest m")->capture_default_str();

  verify::VerifyConfig vc;
  auto* ver = app.add_subcommand("verify-all", "Run every acceptance check");
  ver->add_option("--seed", vc.seed, "Base seed for the descent starts")->capture_default_str();
  ver->add_option("--bubble-n", vc.bubble_n, "Grid for bubble sweeps")->capture_default_str();
  ver->add_option("--descent-n", vc.descent_n, "Grid for the descent runs")->capture_default_str();
  ver->add_option("--lambdas", vc.lambdas, "Lambda schedule")->delimiter(',')->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const auto rest = app.remaining();
    if (app.get_subcommands().empty() && !rest.empty() && rest.front().rfind("-", 0) != 0) {
      err << "error: command: unknown command '" << rest.front()
          << "' (expected solve, mt-scan, bubble-sweep, asymptotics, radial-sweep, quantization-table or "
             "verify-all)\n";
      return kUsage;
    }
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Report rep(sub->get_name(), output_dir);
  Json cfg;
  if (sub == solve) cfg = so.echo();
  else if (sub == scan) cfg = sc.echo();
  else if (sub == bubble) cfg = bo.echo(true);
  else if (sub == asym) cfg = ao.echo(false);
  else if (sub == rad) cfg = ro.echo();
  else if (sub == quant) cfg = {{"m-min", m_min}, {"m-max", m_max}};
  else cfg = {{"seed", vc.seed}, {"bubble-n", vc.bubble_n}, {"descent-n", vc.descent_n},
              {"lambdas", detail::numbers(vc.lambdas)}};
  cfg["output-dir"] = output_dir;
  rep.config(std::move(cfg));
  try {
    if (sub == solve) run_solve(so, rep);
    else if (sub == scan) run_mt_scan(sc, rep);
    else if (sub == bubble) run_bubble_sweep(bo, rep);
    else if (sub == asym) run_asymptotics(ao, rep);
    else if (sub == rad) run_radial_sweep(ro, rep);
    else if (sub == quant) run_quantization_table(m_min, m_max, rep);
    else run_verify_all(vc, rep, out);
    return rep.finish(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << sub->get_name() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace tzlab::cli
