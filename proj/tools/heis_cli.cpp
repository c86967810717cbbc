// Command-line front end. Subcommands:
//   eval        evaluate L pointwise on a registry field at interior nodes
//   solve       Dirichlet solve on a gauge ball, CSV field + JSON report
//   barrier     search the barrier slope C and certify max L phi_C
//   regularity  dyadic oscillation profile + Hölder fit
//   bench       fixed micro-workload; deterministic outputs, times on stderr
//
// Exit codes: 0 success, 2 configuration/schema error (error JSON names
// the offending field), 3 numerical failure (report attached when one
// exists). Output files embed the fully resolved configuration; the
// --threads/--out/--seed flags never influence file contents.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heis/barrier.hpp"
#include "heis/io.hpp"
#include "heis/mixedop.hpp"
#include "heis/registry.hpp"
#include "heis/regularity.hpp"
#include "heis/solver.hpp"

using nlohmann::json;

namespace {

struct SchemaError : std::runtime_error {
  SchemaError(std::string field_, const std::string& message)
      : std::runtime_error(message), field(std::move(field_)) {}
  std::string field;
};

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& message, json report_)
      : std::runtime_error(message), report(std::move(report_)) {}
  json report;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("config", "cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw SchemaError("config", std::string("config is not valid JSON: ") +
                                    e.what());
  }
}

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const auto& k : allowed) ok = ok || k == item.key();
    if (!ok) {
      throw SchemaError(where + "." + item.key(), "unknown key");
    }
  }
}

const json& require(const json& j, const std::string& key,
                    const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where, "missing required field");
  return *it;
}

double get_num(const json& j, const std::string& key,
               const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw SchemaError(where, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where, "must be finite");
  return d;
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) throw SchemaError(where, "must be an integer");
  return v.get<int>();
}

std::string get_str(const json& j, const std::string& key,
                    const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw SchemaError(where, "must be a string");
  return v.get<std::string>();
}

heis::OperatorParams parse_params(const json& cfg) {
  const json& j = require(cfg, "params", "params");
  check_keys(j, {"alpha", "beta", "lambda", "Lambda", "s", "c_norm", "N"},
             "params");
  heis::OperatorParams p;
  p.alpha = get_num(j, "alpha", "params.alpha");
  p.beta = get_num(j, "beta", "params.beta");
  p.lambda = get_num(j, "lambda", "params.lambda");
  p.Lambda = get_num(j, "Lambda", "params.Lambda");
  p.s = get_num(j, "s", "params.s");
  p.c_norm = get_num(j, "c_norm", "params.c_norm");
  p.N = get_int(j, "N", "params.N");
  if (!(p.s > 0.0 && p.s < 1.0)) {
    throw SchemaError("params.s", "s must lie in the open interval (0, 1)");
  }
  if (p.lambda > p.Lambda) {
    throw SchemaError("params.lambda", "lambda must not exceed Lambda");
  }
  if (!(p.lambda > 0.0)) {
    throw SchemaError("params.lambda", "lambda must be positive");
  }
  if (!(p.beta > 0.0)) {
    throw SchemaError("params.beta", "beta must be positive");
  }
  if (p.alpha < 0.0) {
    throw SchemaError("params.alpha", "alpha must be nonnegative");
  }
  if (p.N != 1) {
    throw SchemaError("params.N", "grid pipelines support N = 1");
  }
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw SchemaError("params", e.what());
  }
  return p;
}

heis::Grid parse_grid(const json& cfg) {
  const json& j = require(cfg, "grid", "grid");
  check_keys(j, {"x0", "x1", "nx", "y0", "y1", "ny", "t0", "t1", "nt"},
             "grid");
  try {
    return heis::Grid(get_num(j, "x0", "grid.x0"), get_num(j, "x1", "grid.x1"),
                      get_int(j, "nx", "grid.nx"), get_num(j, "y0", "grid.y0"),
                      get_num(j, "y1", "grid.y1"), get_int(j, "ny", "grid.ny"),
                      get_num(j, "t0", "grid.t0"), get_num(j, "t1", "grid.t1"),
                      get_int(j, "nt", "grid.nt"));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError("grid", e.what());
  }
}

heis::GaugeBall parse_ball(const json& cfg) {
  const json& j = require(cfg, "omega", "omega");
  check_keys(j, {"center", "radius"}, "omega");
  const json& c = require(j, "center", "omega.center");
  if (!c.is_array() || c.size() != 3 || !c[0].is_number() ||
      !c[1].is_number() || !c[2].is_number()) {
    throw SchemaError("omega.center", "must be an array [x, y, t]");
  }
  const double radius = get_num(j, "radius", "omega.radius");
  if (!(radius > 0.0)) {
    throw SchemaError("omega.radius", "must be positive");
  }
  return heis::GaugeBall{
      heis::GroupPoint(c[0].get<double>(), c[1].get<double>(),
                       c[2].get<double>()),
      radius};
}

heis::QuadratureSpec parse_quad(const json& j, const std::string& where) {
  check_keys(j,
             {"inner_radius", "annuli_per_decade", "points_per_annulus",
              "tail_radius", "tail_tolerance"},
             where);
  heis::QuadratureSpec q;
  q.inner_radius = get_num(j, "inner_radius", where + ".inner_radius");
  q.annuli_per_decade =
      get_int(j, "annuli_per_decade", where + ".annuli_per_decade");
  q.points_per_annulus =
      get_int(j, "points_per_annulus", where + ".points_per_annulus");
  q.tail_radius = get_num(j, "tail_radius", where + ".tail_radius");
  q.tail_tolerance = get_num(j, "tail_tolerance", where + ".tail_tolerance");
  try {
    q.validate();
  } catch (const std::exception& e) {
    throw SchemaError(where, e.what());
  }
  return q;
}

heis::SmoothFn parse_registry(const json& cfg, const std::string& key) {
  const std::string name = get_str(cfg, key, key);
  try {
    return heis::registry_fn(name);
  } catch (const std::exception& e) {
    throw SchemaError(key, e.what());
  }
}

json params_json(const heis::OperatorParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta},     {"lambda", p.lambda},
          {"Lambda", p.Lambda}, {"s", p.s},         {"c_norm", p.c_norm},
          {"N", p.N}};
}

json grid_json(const heis::Grid& g) {
  return {{"x0", g.x0()}, {"x1", g.x1()}, {"nx", g.nx()},
          {"y0", g.y0()}, {"y1", g.y1()}, {"ny", g.ny()},
          {"t0", g.t0()}, {"t1", g.t1()}, {"nt", g.nt()}};
}

json ball_json(const heis::GaugeBall& b) {
  return {{"center", {b.center.x(0), b.center.y(0), b.center.t}},
          {"radius", b.radius}};
}

json quad_json(const heis::QuadratureSpec& q) {
  return {{"inner_radius", q.inner_radius},
          {"annuli_per_decade", q.annuli_per_decade},
          {"points_per_annulus", q.points_per_annulus},
          {"tail_radius", q.tail_radius},
          {"tail_tolerance", q.tail_tolerance}};
}

json report_json(const heis::SolveReport& rep) {
  return {{"iterations", rep.iterations},
          {"residual", rep.residual},
          {"tau", rep.tau},
          {"converged", rep.converged},
          {"interior_nodes", rep.interior_nodes},
          {"abort_reason", rep.abort_reason}};
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Samples a registry function on the grid; functions without a declared
// sup bound get one measured over the sampled box (the only region the
// profile pipelines read).
heis::FieldWithExterior sample_field(const heis::Grid& grid,
                                     const heis::SmoothFn& f,
                                     const std::string& field_name) {
  std::vector<double> v(grid.size());
  double amax = 0.0;
  for (int k = 0; k < grid.nt(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const double val = f.eval(grid.node(i, j, k));
        if (!std::isfinite(val)) {
          throw SchemaError(field_name,
                            "field evaluates non-finite on the grid");
        }
        amax = std::max(amax, std::abs(val));
        v[grid.index(i, j, k)] = val;
      }
  heis::SmoothFn ext = f;
  if (!ext.sup_abs) ext.sup_abs = amax;
  return heis::FieldWithExterior(grid, std::move(v), ext);
}

// ---------------------------------------------------------------------
// solve

struct SolveSetup {
  heis::DirichletProblem prob;
  heis::Grid grid;
  double tol = 0.0;
  int max_iter = 0;
  heis::SolveOptions options;
  json resolved;
};

SolveSetup parse_solve(const json& cfg, int threads) {
  check_keys(cfg,
             {"omega", "f", "g", "params", "grid", "tol", "max_iter",
              "quadrature", "theta", "anderson_window"},
             "config");
  SolveSetup s{{}, parse_grid(cfg), 0.0, 0, {}, {}};
  s.prob.Omega = parse_ball(cfg);
  s.prob.params = parse_params(cfg);
  s.prob.f = parse_registry(cfg, "f");
  s.prob.g = parse_registry(cfg, "g");
  if (!s.prob.g.sup_abs) {
    throw SchemaError(
        "g", "exterior data must be bounded (const:<v> or gaussian_gauge)");
  }
  s.tol = get_num(cfg, "tol", "tol");
  if (!(s.tol > 0.0)) throw SchemaError("tol", "must be positive");
  s.max_iter = get_int(cfg, "max_iter", "max_iter");
  if (s.max_iter < 1) throw SchemaError("max_iter", "must be >= 1");
  s.options.threads = threads;
  if (cfg.contains("theta")) {
    s.options.theta = get_num(cfg, "theta", "theta");
  }
  if (cfg.contains("anderson_window")) {
    s.options.anderson_window = get_int(cfg, "anderson_window",
                                        "anderson_window");
  }
  try {
    s.options.validate();
    s.prob.validate();
  } catch (const std::exception& e) {
    throw SchemaError("config", e.what());
  }
  if (cfg.contains("quadrature")) {
    s.options.quad = parse_quad(cfg.at("quadrature"), "quadrature");
  } else {
    s.options.quad = heis::default_solver_quadrature(s.grid, s.prob);
  }

  s.resolved = {{"omega", ball_json(s.prob.Omega)},
                {"f", get_str(cfg, "f", "f")},
                {"g", get_str(cfg, "g", "g")},
                {"params", params_json(s.prob.params)},
                {"grid", grid_json(s.grid)},
                {"tol", s.tol},
                {"max_iter", s.max_iter},
                {"theta", s.options.theta},
                {"anderson_window", s.options.anderson_window},
                {"quadrature", quad_json(*s.options.quad)}};
  return s;
}

int run_solve(const json& cfg, const std::string& out, int threads) {
  SolveSetup s = parse_solve(cfg, threads);
  const auto [u, rep] = heis::solve_dirichlet(s.prob, s.grid, s.tol,
                                              s.max_iter, s.options);

  std::vector<std::vector<double>> rows;
  rows.reserve(s.grid.size());
  for (int k = 0; k < s.grid.nt(); ++k)
    for (int j = 0; j < s.grid.ny(); ++j)
      for (int i = 0; i < s.grid.nx(); ++i) {
        const heis::GroupPoint p = s.grid.node(i, j, k);
        rows.push_back({p.x(0), p.y(0), p.t, u.at(i, j, k)});
      }
  heis::write_csv(out_path(out, "solution.csv"), s.resolved,
                  {"x", "y", "t", "u"}, rows);
  heis::write_report(out_path(out, "report.json"), s.resolved,
                     report_json(rep));

  if (!rep.converged) {
    throw NumericalError("solve did not converge: " +
                             (rep.abort_reason.empty() ? "max_iter"
                                                       : rep.abort_reason),
                         report_json(rep));
  }
  return 0;
}

// ---------------------------------------------------------------------
// eval

int run_eval(const json& cfg, const std::string& out, int threads) {
  check_keys(cfg, {"field", "omega", "params", "grid", "quadrature"},
             "config");
  const heis::Grid grid = parse_grid(cfg);
  heis::DirichletProblem prob;
  prob.Omega = parse_ball(cfg);
  prob.params = parse_params(cfg);
  prob.g = parse_registry(cfg, "field");
  if (!prob.g.sup_abs) {
    throw SchemaError("field",
                      "operator evaluation needs a bounded field "
                      "(const:<v> or gaussian_gauge)");
  }
  prob.f = heis::registry_fn("const:0");
  try {
    prob.validate();
  } catch (const std::exception& e) {
    throw SchemaError("config", e.what());
  }
  const heis::QuadratureSpec q =
      cfg.contains("quadrature")
          ? parse_quad(cfg.at("quadrature"), "quadrature")
          : heis::default_solver_quadrature(grid, prob);

  const json resolved = {{"field", get_str(cfg, "field", "field")},
                         {"omega", ball_json(prob.Omega)},
                         {"params", params_json(prob.params)},
                         {"grid", grid_json(grid)},
                         {"quadrature", quad_json(q)}};

  // The field is given in closed form, so use the pointwise evaluator
  // (exact on constants) rather than the grid-interpolating fast path.
  const heis::GaugePolarRule rule(q, prob.params.s, prob.params.N);
  const heis::GaugePolarRule inner =
      heis::make_inner_rule(q.inner_radius, prob.params);
  const auto mask = heis::interior_mask(grid, prob.Omega);

  std::vector<std::vector<double>> rows;
  for (int k = 0; k < grid.nt(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const std::size_t id = grid.index(i, j, k);
        if (!mask[id]) continue;
        const heis::GroupPoint p = grid.node(i, j, k);
        rows.push_back({p.x(0), p.y(0), p.t,
                        heis::evaluate_L(prob.g, p, prob.params, q, rule,
                                         inner)});
      }
  (void)threads;
  heis::write_csv(out_path(out, "operator.csv"), resolved,
                  {"x", "y", "t", "Lu"}, rows);
  return 0;
}

// ---------------------------------------------------------------------
// barrier

int run_barrier(const json& cfg, const std::string& out, int /*threads*/) {
  check_keys(cfg, {"params", "omega", "target", "C_max"}, "config");
  const heis::OperatorParams p = parse_params(cfg);
  const heis::GaugeBall omega = parse_ball(cfg);
  double target = -1.0;
  if (cfg.contains("target")) target = get_num(cfg, "target", "target");
  double c_max = 1024.0;
  if (cfg.contains("C_max")) {
    c_max = get_num(cfg, "C_max", "C_max");
    if (!(c_max >= 1.0)) throw SchemaError("C_max", "must be >= 1");
  }

  const json resolved = {{"params", params_json(p)},
                         {"omega", ball_json(omega)},
                         {"target", target},
                         {"C_max", c_max}};

  heis::FindCReport rep;
  try {
    rep = heis::find_C(p, omega, target, c_max);
  } catch (const std::exception& e) {
    throw SchemaError("omega", e.what());
  }
  const json rj = {{"found", rep.found},
                   {"C", rep.C},
                   {"certified_max", rep.certified_max},
                   {"achieved_max", rep.achieved_max},
                   {"modulus", rep.modulus},
                   {"lattice_points", rep.lattice_points},
                   {"certificates", rep.certificates}};
  heis::write_report(out_path(out, "barrier.json"), resolved, rj);
  if (!rep.found) {
    throw NumericalError("no barrier slope certified within C_max", rj);
  }
  std::cout << "barrier: C = " << heis::format_double(rep.C)
            << ", certified max = "
            << heis::format_double(rep.certified_max) << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// regularity

int run_regularity(const json& cfg, const std::string& out, int threads) {
  check_keys(cfg, {"field", "solve", "grid", "k_max"}, "config");
  const heis::Grid grid = parse_grid(cfg);
  const int k_max = get_int(cfg, "k_max", "k_max");
  if (k_max < 0) throw SchemaError("k_max", "must be >= 0");
  const bool has_field = cfg.contains("field");
  const bool has_solve = cfg.contains("solve");
  if (has_field == has_solve) {
    throw SchemaError("field",
                      "provide exactly one of 'field' or 'solve'");
  }

  json resolved = {{"grid", grid_json(grid)}, {"k_max", k_max}};
  std::optional<heis::FieldWithExterior> u;
  if (has_field) {
    const heis::SmoothFn f = parse_registry(cfg, "field");
    resolved["field"] = get_str(cfg, "field", "field");
    u.emplace(sample_field(grid, f, "field"));
  } else {
    json sub = cfg.at("solve");
    if (!sub.is_object()) throw SchemaError("solve", "must be an object");
    if (!sub.contains("grid")) sub["grid"] = grid_json(grid);
    SolveSetup s = parse_solve(sub, threads);
    resolved["solve"] = s.resolved;
    const auto [usol, rep] = heis::solve_dirichlet(s.prob, s.grid, s.tol,
                                                   s.max_iter, s.options);
    if (!rep.converged) {
      throw NumericalError("solve did not converge: " +
                               (rep.abort_reason.empty() ? "max_iter"
                                                         : rep.abort_reason),
                           report_json(rep));
    }
    u.emplace(usol);
  }

  const heis::DyadicProfile prof = heis::dyadic_profile(*u, k_max);
  std::vector<std::vector<double>> rows;
  for (const auto& e : prof.entries) {
    rows.push_back({static_cast<double>(e.k), e.radius, e.osc,
                    static_cast<double>(e.nodes)});
  }
  heis::write_csv(out_path(out, "profile.csv"), resolved,
                  {"k", "radius", "osc", "nodes"}, rows);

  heis::HolderFit fit;
  try {
    fit = heis::fit_holder(prof);
  } catch (const std::exception& e) {
    throw NumericalError(
        std::string("profile does not support a fit: ") + e.what(),
        {{"entries", prof.entries.size()}, {"truncated", prof.truncated}});
  }
  heis::write_report(out_path(out, "fit.json"), resolved,
                     {{"C_fit", fit.C_fit},
                      {"gamma_fit", fit.gamma_fit},
                      {"delta_fit", fit.delta_fit},
                      {"constant_field", fit.constant_field},
                      {"points_used", fit.points_used},
                      {"truncated", prof.truncated}});
  return 0;
}

// ---------------------------------------------------------------------
// bench

int run_bench(const json& cfg, const std::string& out, int threads) {
  check_keys(cfg, {"params", "grid", "omega", "quadrature"}, "config");
  const heis::Grid grid = parse_grid(cfg);
  heis::DirichletProblem prob;
  prob.Omega = parse_ball(cfg);
  prob.params = parse_params(cfg);
  prob.f = heis::registry_fn("const:0");
  prob.g = heis::registry_fn("gaussian_gauge");
  try {
    prob.validate();
  } catch (const std::exception& e) {
    throw SchemaError("config", e.what());
  }
  const heis::QuadratureSpec q =
      cfg.contains("quadrature")
          ? parse_quad(cfg.at("quadrature"), "quadrature")
          : heis::default_solver_quadrature(grid, prob);
  const json resolved = {{"params", params_json(prob.params)},
                         {"grid", grid_json(grid)},
                         {"omega", ball_json(prob.Omega)},
                         {"quadrature", quad_json(q)}};

  using clock = std::chrono::steady_clock;
  const auto u = sample_field(grid, prob.g, "g");

  const auto t0 = clock::now();
  const auto r = heis::interior_residual(u, prob, q, threads);
  const auto t1 = clock::now();

  double sup = 0.0;
  std::size_t nodes = 0;
  for (double v : r) sup = std::max(sup, std::abs(v));
  for (const auto m : heis::interior_mask(grid, prob.Omega)) nodes += m;

  heis::SolveOptions opts;
  opts.threads = threads;
  opts.quad = q;
  const auto t2 = clock::now();
  const auto [usol, rep] =
      heis::solve_dirichlet(prob, grid, 1e-2, 500, opts);
  const auto t3 = clock::now();

  const auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  std::fprintf(stderr, "bench: operator evaluation %.1f ms, solve %.1f ms\n",
               ms(t0, t1), ms(t2, t3));

  heis::write_report(out_path(out, "bench.json"), resolved,
                     {{"interior_nodes", nodes},
                      {"residual_sup", sup},
                      {"solve_iterations", rep.iterations},
                      {"solve_residual", rep.residual},
                      {"solve_converged", rep.converged}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed local/nonlocal extremal-operator toolkit on the "
               "first Heisenberg group"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  unsigned long long seed = 0;  // reserved for randomized probes
  app.add_option("--config", config_path, "JSON run configuration")
      ->required();
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--threads", threads,
                 "worker threads (affects speed only, never results)")
      ->check(CLI::Range(1, 1 << 16));
  app.add_option("--seed", seed, "seed for randomized probes (reserved)");

  auto* c_eval = app.add_subcommand("eval", "evaluate L on a registry field");
  auto* c_solve = app.add_subcommand("solve", "Dirichlet solve");
  auto* c_barrier = app.add_subcommand("barrier", "barrier slope search");
  auto* c_reg = app.add_subcommand("regularity", "oscillation profile + fit");
  auto* c_bench = app.add_subcommand("bench", "fixed micro-workload");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::filesystem::create_directories(out_dir);
    const json cfg = load_config(config_path);
    if (c_eval->parsed()) return run_eval(cfg, out_dir, threads);
    if (c_solve->parsed()) return run_solve(cfg, out_dir, threads);
    if (c_barrier->parsed()) return run_barrier(cfg, out_dir, threads);
    if (c_reg->parsed()) return run_regularity(cfg, out_dir, threads);
    if (c_bench->parsed()) return run_bench(cfg, out_dir, threads);
    std::cout << json{{"error", {{"field", "command"},
                                 {"message", "no subcommand"}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cout << json{{"error",
                       {{"field", e.field}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cout << json{{"error", {{"message", e.what()}}},
                      {"report", e.report}}
                     .dump()
              << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cout << json{{"error",
                       {{"field", "config"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cout << json{{"error",
                       {{"field", "config"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"message", e.what()}}}}.dump() << "\n";
    return 3;
  }
}
