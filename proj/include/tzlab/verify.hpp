#pragma once

/**
 * @file verify.hpp
 * @brief The acceptance checks, each returning pass/fail, metrics and the
 * CSV tables that back them.
 *
 * Tables carry only deterministic content (no timings), so two runs with
 * the same seed produce byte-identical CSV files.
 */

#include "tzlab/bubbles.hpp"
#include "tzlab/descent.hpp"
#include "tzlab/energy.hpp"
#include "tzlab/experiments.hpp"
#include "tzlab/io.hpp"
#include "tzlab/radial.hpp"
#include "tzlab/surface.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace tzlab::verify {

using Json = nlohmann::ordered_json;

struct NamedTable {
  std::string name;  // file stem
  io::CsvTable table;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // one-line human summary
  Json metrics = Json::object();
  std::vector<NamedTable> tables;
  double seconds = 0.0;
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  int bubble_n = 256;
  int descent_n = 64;
  std::vector<double> lambdas = default_lambdas();
};

namespace detail {

inline std::string fmt(double v) { return io::format_number(v); }

template <class F>
CheckResult timed(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline io::CsvTable sweep_summary_table(const std::vector<SweepResult>& sweeps) {
  io::CsvTable t({"label", "predicted_slope", "fitted_slope", "upper_half_slope", "allowed_error",
                  "skipped", "pass"});
  for (const auto& s : sweeps) {
    t.row() << s.label << s.predicted_slope << s.fitted_slope << s.upper_half_slope
            << s.allowed_error << s.skipped << s.pass;
  }
  return t;
}

inline Json sweep_json(const SweepResult& s) {
  return Json{{"label", s.label},
              {"predicted_slope", io::json_number(s.predicted_slope)},
              {"fitted_slope", io::json_number(s.fitted_slope)},
              {"upper_half_slope", io::json_number(s.upper_half_slope)},
              {"allowed_error", io::json_number(s.allowed_error)},
              {"skipped", s.skipped},
              {"pass", s.pass}};
}

inline ScalarField h1_recipe(const GridPtr& g) {
  return ScalarField::from_function(
      g, [](double x, double) { return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x); });
}

inline ScalarField h2_recipe(const GridPtr& g) {
  return ScalarField::from_function(
      g, [](double, double y) { return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * y); });
}

}  // namespace detail

/// Criterion 1: every table pair lies on the blow-up hyperbola, with
/// sigma1 in 4N, sigma2 in 2N and (0,0) absent.
inline CheckResult check_quantization(int m_min = -6, int m_max = 6) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 1;
    r.name = "quantization_lattice";
    io::CsvTable t({"family", "m", "sigma1", "sigma2", "relation", "sigma1_mod4", "sigma2_mod2"});
    bool ok = true;
    const auto table = radial::quantization_table(m_min, m_max);
    for (const auto& p : table) {
      const auto rel = radial::limit_mass_relation_exact(p.sigma1, p.sigma2);
      ok = ok && rel == 0 && p.sigma1 % 4 == 0 && p.sigma2 % 2 == 0 && !(p.sigma1 == 0 && p.sigma2 == 0);
      t.row() << radial::family_name(p.family) << p.m << p.sigma1 << p.sigma2 << rel
              << p.sigma1 % 4 << p.sigma2 % 2;
    }
    r.pass = ok && !table.empty();
    r.detail = std::to_string(table.size()) + " pairs for m in [" + std::to_string(m_min) + ", " +
               std::to_string(m_max) + "], all exact";
    if (!r.pass) r.detail = "lattice violation in table";
    r.metrics = {{"pairs", table.size()}, {"m_min", m_min}, {"m_max", m_max}};
    r.tables.push_back({"quantization", std::move(t)});
    return r;
  });
}

/// Criterion 2: Pohozaev residual below 1e-6 relative at step 1e-4, and
/// observed order >= 3.5 under halving from order_step.
inline CheckResult check_pohozaev(double step = 1e-4, double order_step = 1e-3) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 2;
    r.name = "pohozaev_identity";
    struct Case {
      double alpha, h2;
    };
    std::vector<Case> cases;
    for (double a : {0.0, 5.0, 8.0}) {
      for (double h2 : {0.0, 1.0}) cases.push_back({a, h2});
    }
    struct Row {
      double ratio;
      radial::OrderEstimate order;
    };
    const auto rows = parallel_map(cases.size(), [&](std::size_t i) {
      const auto& c = cases[i];
      return Row{radial::max_pohozaev_ratio(radial::shoot(c.alpha, 1.0, c.h2, 1.0, step)),
                 radial::pohozaev_order(c.alpha, 1.0, c.h2, 1.0, order_step)};
    });
    io::CsvTable t({"alpha", "h1", "h2", "step", "max_rel_residual", "order_step", "coarse",
                    "fine", "order", "at_roundoff", "pass"});
    bool ok = true;
    double worst = 0.0, min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& row = rows[i];
      const bool pass = row.ratio < 1e-6 && (row.order.at_roundoff || row.order.order >= 3.5);
      ok = ok && pass;
      worst = std::max(worst, row.ratio);
      if (!row.order.at_roundoff) min_order = std::min(min_order, row.order.order);
      t.row() << cases[i].alpha << 1.0 << cases[i].h2 << step << row.ratio << order_step
              << row.order.coarse << row.order.fine << row.order.order << row.order.at_roundoff << pass;
    }
    r.pass = ok;
    r.detail = "max |res|/(1+|LHS|) = " + detail::fmt(worst) + ", min order = " + detail::fmt(min_order);
    r.metrics = {{"max_relative_residual", worst}, {"min_order", io::json_number(min_order)}};
    r.tables.push_back({"pohozaev", std::move(t)});
    return r;
  });
}

/// Criterion 3: Liouville shooting at alpha = 10 reproduces the closed-form
/// mass and classifies as TypeI(1).
inline CheckResult check_liouville_mass(double alpha = 10.0, double step = 1e-4) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 3;
    r.name = "liouville_blowup_mass";
    const auto p = radial::shoot(alpha, 1.0, 0.0, 1.0, step);
    const double sigma1 = p.sigma1.back();
    const double exact = liouville_mass(alpha, 1.0);
    const auto c = radial::classify_mass_pair(sigma1, p.sigma2.back());
    const double err = std::abs(sigma1 - exact);
    r.pass = err <= 2e-3 && c.family == radial::Family::type_one && c.m == 1;
    io::CsvTable t({"alpha", "step", "sigma1", "closed_form", "abs_error", "u_at_1",
                    "u_closed_form", "family", "m", "distance"});
    t.row() << alpha << step << sigma1 << exact << err << p.u.back() << liouville_profile(alpha, 1.0)
            << radial::family_name(c.family) << c.m << c.distance;
    r.detail = "sigma1(1) = " + detail::fmt(sigma1) + " vs " + detail::fmt(exact) + ", " +
               radial::family_name(c.family) + "(" + std::to_string(c.m) + ")";
    r.metrics = {{"sigma1", sigma1}, {"closed_form", exact}, {"abs_error", err},
                 {"family", radial::family_name(c.family)}, {"m", c.m}};
    r.tables.push_back({"liouville", std::move(t)});
    return r;
  });
}

/// Criterion 4: deficit slopes on the plus (s = 0) and minus (s = 1)
/// families match -2(a1 - 8pi) and -(a2 - 4pi), and flip sign exactly at
/// the sharp constants.
inline CheckResult check_mt_thresholds(int n = 256, std::vector<double> lambdas = default_lambdas()) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 4;
    r.name = "sharp_mt_thresholds";
    const double pi = std::numbers::pi;
    const std::vector<double> a1{8 * pi - 2, 8 * pi, 8 * pi + 2};
    const std::vector<double> a2{4 * pi - 1, 4 * pi, 4 * pi + 1};
    const SlopeTolerance tol{0.10, 0.5, 0.5};
    const auto grid = build_grid(n);
    const auto scan = mt_threshold_scan(a1, a2, lambdas, grid, {0.3, 0.3}, {0.8, 0.8}, tol);

    bool fits = true;
    io::CsvTable t({"family", "a1", "a2", "predicted_slope", "fitted_slope", "upper_half_slope",
                    "allowed_error", "skipped", "pass"});
    io::CsvTable values({"family", "a1", "a2", "lambda", "deficit"});
    auto emit = [&](const char* fam, double x1, double x2, const SweepResult& s) {
      fits = fits && s.pass;
      t.row() << fam << x1 << x2 << s.predicted_slope << s.fitted_slope << s.upper_half_slope
              << s.allowed_error << s.skipped << s.pass;
      for (std::size_t k = 0; k < s.values.size(); ++k) {
        values.row() << fam << x1 << x2 << s.lambdas[k] << s.values[k];
      }
    };
    for (std::size_t i = 0; i < a1.size(); ++i) {
      for (std::size_t j = 0; j < a2.size(); ++j) emit("plus", a1[i], a2[j], scan.plus(i, j));
    }
    for (std::size_t i = 0; i < a1.size(); ++i) {
      for (std::size_t j = 0; j < a2.size(); ++j) emit("minus", a1[i], a2[j], scan.minus(i, j));
    }
    // Subcritical side strictly positive, supercritical strictly negative.
    bool flips = true;
    for (std::size_t k = 0; k < 3; ++k) {
      flips = flips && scan.plus(0, k).fitted_slope > 0.0 && scan.plus(2, k).fitted_slope < 0.0;
      flips = flips && scan.minus(k, 0).fitted_slope > 0.0 && scan.minus(k, 2).fitted_slope < 0.0;
    }
    r.pass = fits && flips;
    r.detail = std::string("18 fits ") + (fits ? "within" : "outside") + " max(0.5, 10%), sign flip " +
               (flips ? "at" : "not at") + " (8pi, 4pi); sharp slopes plus " +
               detail::fmt(scan.plus(1, 1).fitted_slope) + ", minus " +
               detail::fmt(scan.minus(1, 1).fitted_slope);
    r.metrics = {{"n", n},
                 {"fits_pass", fits},
                 {"sign_flip_at_sharp", flips},
                 {"plus_sharp_slope", scan.plus(1, 1).fitted_slope},
                 {"minus_sharp_slope", scan.minus(1, 1).fitted_slope}};
    r.tables.push_back({"mt_thresholds", std::move(t)});
    r.tables.push_back({"mt_thresholds_values", std::move(values)});
    return r;
  });
}

/// Criterion 5: the four component slopes at k = l = 1, s = 1/2.
inline CheckResult check_bubble_asymptotics(int n = 256, std::vector<double> lambdas = default_lambdas()) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 5;
    r.name = "bubble_asymptotics";
    const JoinConfig zeta{{{1.0, {0.3, 0.3}}}, {{1.0, {0.8, 0.8}}}, 0.5};
    const auto sweeps = component_asymptotics_sweep(zeta, lambdas, build_grid(n));
    bool ok = true;
    std::string line;
    Json comps = Json::array();
    for (const auto& s : sweeps) {
      ok = ok && s.pass;
      line += (line.empty() ? "" : ", ") + s.label + " " + detail::fmt(s.fitted_slope);
      comps.push_back(detail::sweep_json(s));
    }
    io::CsvTable values({"lambda", "gradient", "log_exp_plus", "log_exp_minus", "mean"});
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      values.row() << lambdas[k] << sweeps[0].values[k] << sweeps[1].values[k] << sweeps[2].values[k]
                   << sweeps[3].values[k];
    }
    r.pass = ok;
    r.detail = line + " (predicted 20pi, 0, 6, -2)";
    r.metrics = {{"n", n}, {"components", comps}};
    r.tables.push_back({"asymptotics", detail::sweep_summary_table({sweeps.begin(), sweeps.end()})});
    r.tables.push_back({"asymptotics_values", std::move(values)});
    return r;
  });
}

/// Criterion 6: J along the s = 1/2 bubble at rho = (10pi, 5pi) falls with
/// slope -5pi and drops by at least 30 over the schedule.
inline CheckResult check_energy_divergence(int n = 256, std::vector<double> lambdas = default_lambdas()) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 6;
    r.name = "test_function_divergence";
    const double pi = std::numbers::pi;
    const JoinConfig zeta{{{1.0, {0.3, 0.3}}}, {{1.0, {0.8, 0.8}}}, 0.5};
    const auto grid = build_grid(n);
    const auto s = bubble_energy_sweep(zeta, Params::uniform(grid, 10 * pi, 5 * pi), lambdas);
    const double drop = s.skipped ? 0.0 : s.values.front() - s.values.back();
    r.pass = s.pass && drop >= 30.0;
    io::CsvTable values({"lambda", "energy"});
    for (std::size_t k = 0; k < s.values.size(); ++k) values.row() << s.lambdas[k] << s.values[k];
    r.detail = "slope " + detail::fmt(s.fitted_slope) + " vs " + detail::fmt(s.predicted_slope) +
               ", drop " + detail::fmt(drop);
    r.metrics = {{"n", n}, {"sweep", detail::sweep_json(s)}, {"energy_drop", drop}};
    r.tables.push_back({"energy", detail::sweep_summary_table({s})});
    r.tables.push_back({"energy_values", std::move(values)});
    return r;
  });
}

/// Criterion 7: minimize converges below 1e-7 from three seeds on the 3x3
/// coercive grid, and residual_J matches central differences of J.
inline CheckResult check_coercive_existence(std::uint64_t seed = 0, int n = 64) {
  return detail::timed([&] {
    CheckResult r;
    r.id = 7;
    r.name = "coercive_existence";
    const double pi = std::numbers::pi;
    const auto grid = build_grid(n);
    const auto h1 = detail::h1_recipe(grid);
    const auto h2 = detail::h2_recipe(grid);
    std::vector<std::pair<double, double>> rhos;
    for (double r1 : {2 * pi, 4 * pi, 6 * pi}) {
      for (double r2 : {pi, 2 * pi, 3 * pi}) rhos.emplace_back(r1, r2);
    }
    struct Run {
      double rho1, rho2;
      std::uint64_t seed;
      bool converged;
      int iterations;
      double residual, energy;
      std::string error;
    };
    std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      for (std::uint64_t k = 0; k < 3; ++k) jobs.emplace_back(i, seed + k);
    }
    DescentConfig cfg;
    cfg.tol_residual = 1e-8;
    const auto runs = parallel_map(jobs.size(), [&](std::size_t j) {
      const auto [i, s] = jobs[j];
      const Params p(rhos[i].first, rhos[i].second, h1, h2);
      Run run{rhos[i].first, rhos[i].second, s, false, 0, 0.0, 0.0, {}};
      try {
        const auto sol = minimize(p, random_smooth_field(grid, s, 0.5), cfg);
        run.converged = sol.converged;
        run.iterations = sol.iterations;
        run.residual = sol.residual_norm;
        run.energy = sol.energy;
      } catch (const DescentError& e) {
        run.iterations = e.best().iterations;
        run.residual = e.best().residual_norm;
        run.energy = e.best().energy;
        run.error = e.what();
      }
      return run;
    });
    io::CsvTable t({"rho1", "rho2", "seed", "converged", "iterations", "residual", "energy", "error"});
    bool converged = true;
    double worst_residual = 0.0;
    for (const auto& run : runs) {
      converged = converged && run.converged && run.residual < 1e-7;
      worst_residual = std::max(worst_residual, run.residual);
      t.row() << run.rho1 << run.rho2 << run.seed << run.converged << run.iterations << run.residual
              << run.energy << run.error;
    }

    // Gradient check: 20 random (u, v) pairs cycling over the rho grid.
    io::CsvTable g({"sample", "rho1", "rho2", "fd", "analytic", "rel_error"});
    const double eps = 1e-4;
    double worst_rel = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
      const auto& [r1, r2] = rhos[k % rhos.size()];
      const Params p(r1, r2, h1, h2);
      const auto u = random_smooth_field(grid, seed + 1000 + k, 2.0, 4);
      const auto v = random_smooth_field(grid, seed + 2000 + k, 1.0, 4);
      const double fd = (energy_J(u + eps * v, p) - energy_J(u - eps * v, p)) / (2.0 * eps);
      const double an = inner(residual_J(u, p), v);
      const double rel = std::abs(fd - an) / std::max(std::abs(an), 1e-300);
      worst_rel = std::max(worst_rel, rel);
      g.row() << k << r1 << r2 << fd << an << rel;
    }
    const bool gradient_ok = worst_rel < 1e-5;
    r.pass = converged && gradient_ok;
    r.detail = std::to_string(runs.size()) + " runs, worst residual " + detail::fmt(worst_residual) +
               ", gradient rel err " + detail::fmt(worst_rel);
    r.metrics = {{"n", n},
                 {"runs", runs.size()},
                 {"all_converged", converged},
                 {"worst_residual", worst_residual},
                 {"gradient_check_pass", gradient_ok},
                 {"worst_gradient_rel_error", worst_rel}};
    r.tables.push_back({"descent", std::move(t)});
    r.tables.push_back({"gradient_check", std::move(g)});
    return r;
  });
}

/// Criteria 1-7 in order.
inline std::vector<CheckResult> verify_all(const VerifyConfig& cfg,
                                           const std::function<void(const CheckResult&)>& on_done = {}) {
  std::vector<std::function<CheckResult()>> checks{
      [] { return check_quantization(); },
      [] { return check_pohozaev(); },
      [] { return check_liouville_mass(); },
      [&] { return check_mt_thresholds(cfg.bubble_n, cfg.lambdas); },
      [&] { return check_bubble_asymptotics(cfg.bubble_n, cfg.lambdas); },
      [&] { return check_energy_divergence(cfg.bubble_n, cfg.lambdas); },
      [&] { return check_coercive_existence(cfg.seed, cfg.descent_n); },
  };
  std::vector<CheckResult> out;
  for (auto& c : checks) {
    out.push_back(c());
    if (on_done) on_done(out.back());
  }
  return out;
}

}  // namespace tzlab::verify
