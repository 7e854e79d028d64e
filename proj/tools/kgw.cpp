// kgw: command-line driver.
//
//   kgw <command> --config run.ini [--out DIR] [--seed N] [--quiet]
//
// Output directory precedence: --out, then $KGW_OUT_DIR, then [output] directory.
// Failures print one line to stderr and exit nonzero.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "kgw/config.hpp"
#include "kgw/dynamics.hpp"
#include "kgw/field_io.hpp"
#include "kgw/model.hpp"
#include "kgw/rearrange.hpp"
#include "kgw/solve.hpp"
#include "kgw/stability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace kgw;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig cfg;
  fs::path out;
  bool quiet = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  fn(f);
}

json pair_json(const Pair& p) { return json::array({p[0], p[1]}); }

json ground_state_json(const GroundState& gs) {
  return {{"value", gs.value},       {"value_error", gs.value_error},
          {"rho", pair_json(gs.rho)}, {"omega", pair_json(gs.omega)},
          {"lambda", pair_json(gs.lambda)}, {"residual", gs.residual},
          {"relative_residual", gs.relative_residual()}, {"iterations", gs.iterations},
          {"converged", gs.converged}};
}

void require_radial_model(const Context& ctx) {
  if (ctx.cfg.grid.kind != GridKind::radial) throw std::invalid_argument("this command needs a radial grid");
  require_valid(ctx.cfg.model);
}

GroundState ground_state_for(const Context& ctx, const GridSpec& grid) {
  const auto& c = ctx.cfg.constraint;
  return c.kind == ConstraintKind::mass ? minimize_mass_constrained(grid, ctx.cfg.model, c.values, ctx.cfg.solver)
                                        : minimize_charge_constrained(grid, ctx.cfg.model, c.values, ctx.cfg.solver);
}

double time_step(const Context& ctx, const GridSpec& grid) {
  return ctx.cfg.dynamics.dt > 0.0 ? ctx.cfg.dynamics.dt : 0.25 * grid.spacing;
}

void emit_ground_state(const Context& ctx, const GridSpec& grid, const GroundState& gs, json& summary) {
  write_field(ctx.out / "ground_state.txt", grid, gs.field);
  if (ctx.cfg.solver.record_trace) write_stream(ctx.out / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, gs); });
  summary["ground_state"] = ground_state_json(gs);
}

int cmd_validate(const Context& ctx) {
  const ValidationReport rep = validate_params(ctx.cfg.model);
  json j;
  for (const auto& c : rep.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["a5_min_h"] = rep.a5_min_h;
  j["a5_t_star"] = rep.a5_t_star;
  j["a5_minimal_mass"] = rep.a5_minimal_mass;
  j["ok"] = rep.ok();
  write_json(ctx.out / "validation.json", j);
  if (!rep.ok()) throw Failure(rep.first_failure());
  if (!ctx.quiet) std::cout << "parameters admissible\n";
  return 0;
}

int cmd_solve(const Context& ctx, ConstraintKind kind) {
  require_radial_model(ctx);
  if (ctx.cfg.constraint.kind != kind)
    throw std::invalid_argument(kind == ConstraintKind::mass ? "solve needs a rho constraint"
                                                             : "solve-charge needs a charge constraint");
  const GridSpec grid = ctx.cfg.make_grid();
  const GroundState gs = ground_state_for(ctx, grid);
  json summary;
  emit_ground_state(ctx, grid, gs, summary);
  if (kind == ConstraintKind::charge) {
    const Multipliers m = multipliers_and_residual(grid, ctx.cfg.model, gs.field);
    json freq = json::array();
    for (std::size_t j = 0; j < 2; ++j) {
      const double w2 = gs.omega[j] * gs.omega[j];
      freq.push_back(std::abs(w2 - m.lambda[j] - ctx.cfg.model.mass(j) * ctx.cfg.model.mass(j)) / w2);
    }
    summary["frequency_defect"] = freq;
  }
  write_json(ctx.out / "summary.json", summary);
  if (!ctx.quiet)
    std::cout << "value " << format_double(gs.value) << " after " << gs.iterations << " iterations"
              << (gs.converged ? "" : " (not converged)") << "\n";
  if (!gs.converged) throw Failure("solver did not converge");
  return 0;
}

int cmd_subadd(const Context& ctx) {
  require_radial_model(ctx);
  if (ctx.cfg.constraint.kind != ConstraintKind::mass) throw std::invalid_argument("subadd needs a rho constraint");
  const Pair rho = ctx.cfg.constraint.values;
  for (const Pair& t : ctx.cfg.splits) validate_split(rho, t);
  const GridSpec grid = ctx.cfg.make_grid();
  const SubadditivityTable table = subadditivity_scan(grid, ctx.cfg.model, rho, ctx.cfg.splits, ctx.cfg.solver);
  write_stream(ctx.out / "subadditivity.csv", [&](std::ostream& o) { write_subadditivity_csv(o, table); });
  write_json(ctx.out / "summary.json", {{"rho", pair_json(rho)}, {"all_positive", table.all_positive()}});
  if (!ctx.quiet)
    for (const auto& r : table.rows)
      std::cout << "tau (" << r.tau[0] << ", " << r.tau[1] << ") margin " << format_double(r.margin) << "\n";
  if (!table.all_positive()) throw Failure("sub-additivity margin not positive");
  return 0;
}

int cmd_rearr(const Context& ctx) {
  const RearrConfig& rc = ctx.cfg.rearr;
  std::mt19937_64 rng(rc.seed);
  json summary = json::array();
  bool all_passed = true;
  write_stream(ctx.out / "rearr.csv", [&](std::ostream& o) {
    o << "M,trial,lhs,rhs,margin,tolerance,passed,tolerance_saved\n";
    for (std::size_t m : rc.cells) {
      const GridSpec grid = build_grid(GridKind::line, 1, 1.0, m);
      std::size_t passed = 0, saved = 0;
      for (std::size_t t = 0; t < rc.trials; ++t) {
        const BumpPair bp = random_bump_pair(grid, rng);
        const SteinerReport r = check_steiner_lemma(grid, bp.u, bp.v, bp.shift);
        passed += r.passed;
        saved += r.tolerance_saved();
        o << m << ',' << t << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
          << format_double(r.margin) << ',' << format_double(r.tolerance) << ',' << r.passed << ','
          << r.tolerance_saved() << '\n';
      }
      all_passed = all_passed && passed == rc.trials;
      const double frac = rc.trials ? static_cast<double>(saved) / static_cast<double>(rc.trials) : 0.0;
      summary.push_back({{"M", m}, {"trials", rc.trials}, {"passed", passed}, {"saved_fraction", frac}});
      if (!ctx.quiet) std::cout << "M " << m << ": " << passed << "/" << rc.trials << " passed\n";
    }
  });
  write_json(ctx.out / "summary.json", {{"grids", summary}, {"all_passed", all_passed}});
  if (!all_passed) throw Failure("two-bump inequality violated");
  return 0;
}

int cmd_evolve(const Context& ctx) {
  require_radial_model(ctx);
  const GridSpec grid = ctx.cfg.make_grid();
  const GroundState gs = ground_state_for(ctx, grid);
  const OrbitReference ref = make_orbit_reference(grid, ctx.cfg.model, gs, ctx.cfg.dynamics.gradient_weight);
  const PhaseState start = standing_wave_state(gs, {cplx(1.0, 0.0), cplx(1.0, 0.0)});
  const TrajectoryRecord tr =
      evolve(grid, start, ctx.cfg.model, ctx.cfg.dynamics.horizon, time_step(ctx, grid), ctx.cfg.dynamics.stride, &ref);
  write_stream(ctx.out / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, tr); });
  const auto& first = tr.samples.front();
  double de = 0.0, dc = 0.0;
  for (const auto& s : tr.samples) {
    de = std::max(de, std::abs(s.energy - first.energy) / std::abs(first.energy));
    for (std::size_t j = 0; j < 2; ++j)
      dc = std::max(dc, std::abs(s.charge[j] - first.charge[j]) / std::abs(first.charge[j]));
  }
  json summary;
  emit_ground_state(ctx, grid, gs, summary);
  summary["dt"] = time_step(ctx, grid);
  summary["energy_drift"] = de;
  summary["charge_drift"] = dc;
  summary["blowup"] = tr.blowup;
  write_json(ctx.out / "summary.json", summary);
  if (!ctx.quiet) std::cout << "relative drift: energy " << de << ", charge " << dc << "\n";
  if (tr.blowup) throw Failure("blow-up detected");
  return 0;
}

int cmd_stability(const Context& ctx) {
  require_radial_model(ctx);
  const GridSpec grid = ctx.cfg.make_grid();
  const GroundState gs = ground_state_for(ctx, grid);
  const OrbitReference ref = make_orbit_reference(grid, ctx.cfg.model, gs, ctx.cfg.dynamics.gradient_weight);
  StabilityOptions opts;
  opts.epsilons = ctx.cfg.dynamics.epsilons;
  opts.horizon = ctx.cfg.dynamics.horizon;
  opts.dt = time_step(ctx, grid);
  opts.stride = ctx.cfg.dynamics.stride;
  opts.width = ctx.cfg.dynamics.width;
  const StabilityReport rep = stability_experiment(ref, ctx.cfg.model, opts);
  write_stream(ctx.out / "stability.csv", [&](std::ostream& o) { write_stability_csv(o, rep); });
  write_stream(ctx.out / "scatter.csv", [&](std::ostream& o) {
    o << "eps,t,V,dist\n";
    for (const auto& p : rep.scatter)
      o << format_double(p.eps) << ',' << format_double(p.t) << ',' << format_double(p.V) << ','
        << format_double(p.dist) << '\n';
  });
  write_json(ctx.out / "stability.json", {{"drift_floor_dist", rep.floor.dist},
                                          {"drift_floor_V", rep.floor.V},
                                          {"defect", rep.floor.defect},
                                          {"baseline_ok", rep.baseline_ok},
                                          {"monotone_dist", rep.monotone_dist},
                                          {"monotone_V", rep.monotone_V},
                                          {"correspondence_ok", rep.correspondence_ok}});
  if (!ctx.quiet)
    for (const auto& r : rep.rows)
      std::cout << "eps " << r.eps << ": max dist " << r.max_dist << ", max V " << r.max_V
                << (r.blowup ? " (blow-up)" : "") << "\n";
  if (!rep.ok()) throw Failure("stability ladder checks failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states and standing-wave dynamics of coupled Klein-Gordon systems"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  long long seed = -1;
  bool quiet = false;
  app.add_option("--config", config_path, "INI configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "overrides the solver and rearrangement seeds")->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.fallthrough();
  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the model assumptions"},
      {"solve", "mass-constrained ground state"},
      {"solve-charge", "charge-constrained ground state"},
      {"subadd", "sub-additivity margins over the configured splits"},
      {"rearr-check", "random two-bump rearrangement checks"},
      {"evolve", "standing-wave trajectory with drift summary"},
      {"stability", "perturbation ladder around the standing wave"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    Context ctx;
    ctx.cfg = load_config(config_path);
    if (seed >= 0) {
      ctx.cfg.solver.seed = static_cast<std::uint64_t>(seed);
      ctx.cfg.rearr.seed = static_cast<std::uint64_t>(seed);
    }
    if (!out_dir.empty())
      ctx.cfg.output_dir = out_dir;
    else if (const char* env = std::getenv("KGW_OUT_DIR"); env && *env)
      ctx.cfg.output_dir = env;
    ctx.out = ctx.cfg.output_dir;
    ctx.quiet = quiet;
    fs::create_directories(ctx.out);
    write_text(ctx.out / "metadata.ini", to_ini(ctx.cfg));

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "validate") return cmd_validate(ctx);
    if (cmd == "solve") return cmd_solve(ctx, ConstraintKind::mass);
    if (cmd == "solve-charge") return cmd_solve(ctx, ConstraintKind::charge);
    if (cmd == "subadd") return cmd_subadd(ctx);
    if (cmd == "rearr-check") return cmd_rearr(ctx);
    if (cmd == "evolve") return cmd_evolve(ctx);
    return cmd_stability(ctx);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
