#include <cmath>
#include <fstream>
#include <ostream>

#include "cli.hpp"
#include "qqm/csv.hpp"
#include "qqm/dynamics.hpp"
#include "qqm/errors.hpp"

namespace qqm::cli {

namespace {

std::set<std::string> evolve_keys() {
  std::set<std::string> keys = hamiltonian_config_keys();
  keys.insert({"n_points", "psi0_x0", "psi0_x1", "psi0_x2", "psi0_x3", "psi0_csv", "normalize",
               "t0", "t1", "dt", "stride", "plane_wave_k", "plane_wave_j", "dyson", "dyson_terms",
               "dyson_quad", "dyson_placement", "seed"});
  return keys;
}

// (1 + c j) e^{ikx} / norm, an eigenfunction of every constant-potential free H.
QFunction plane_wave(const Grid& grid, int k, double c) {
  const double scale = 1.0 / std::sqrt(kTwoPi * (1.0 + c * c));
  const Quaternion amp{scale, 0.0, c * scale, 0.0};
  return QFunction::sample(grid, [&](double x) {
    return amp * Quaternion{std::cos(k * x), std::sin(k * x), 0.0, 0.0};
  });
}

void write_trajectory(const std::filesystem::path& path, const EvolutionResult& res,
                      std::size_t stride) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  const std::size_t n = res.states.front().size();
  f << "# t = time; q<k>_x<c> = component c of the state at node x_k = k*2*pi/" << n << '\n';
  f << 't';
  for (std::size_t k = 0; k < n; ++k) {
    for (int c = 0; c < 4; ++c) f << ",q" << k << "_x" << c;
  }
  f << '\n';
  for (std::size_t s = 0; s < res.states.size(); ++s) {
    if (s % stride != 0 && s + 1 != res.states.size()) continue;
    f << format_double(res.times[s]);
    for (const auto& q : res.states[s].values()) {
      for (int c = 0; c < 4; ++c) f << ',' << format_double(q[c]);
    }
    f << '\n';
  }
}

void write_continuity(const std::filesystem::path& path, const ContinuityReport& rep) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << "# max_residual = max_x |drho/dt + dJ/dx - g|; total_norm = int rho dx;"
       " integral_g = int g dx; norm_rate = d/dt total_norm\n";
  f << "t,max_residual,total_norm,integral_g,norm_rate\n";
  for (std::size_t s = 0; s < rep.times.size(); ++s) {
    f << format_double(rep.times[s]) << ',' << format_double(rep.max_residual[s]) << ','
      << format_double(rep.total_norm[s]) << ',' << format_double(rep.integral_g[s]) << ','
      << format_double(rep.norm_rate[s]) << '\n';
  }
}

}  // namespace

int cmd_evolve(const GlobalOptions& opts, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(opts, evolve_keys());
  const Grid grid = grid_from_config(cfg, 128);
  HamiltonianSpec spec = hamiltonian_from_config(cfg, grid);

  const bool plane = cfg.has("plane_wave_k");
  QFunction psi0(grid);
  double energy = 0.0;
  if (plane) {
    for (const char* k : {"psi0_x0", "psi0_x1", "psi0_x2", "psi0_x3", "psi0_csv"}) {
      if (cfg.has(k)) throw ConfigError(std::string("plane_wave_k excludes ") + k);
    }
    if (spec.has_gauge() || !spec.potential_is_real()) {
      throw ConfigError("plane-wave comparison needs A = 0 and a real potential");
    }
    const QFunction u = spec.potential();
    for (std::size_t k = 1; k < grid.size(); ++k) {
      if (u[k].x0 != u[0].x0) throw ConfigError("plane-wave comparison needs a constant potential");
    }
    const long long k = cfg.integer("plane_wave_k");
    if (2 * std::llabs(k) >= static_cast<long long>(grid.size())) {
      throw ConfigError("plane_wave_k must be below the Nyquist index");
    }
    psi0 = plane_wave(grid, static_cast<int>(k), cfg.number("plane_wave_j", 0.0));
    const double kk = static_cast<double>(k);
    energy = spec.hbar * spec.hbar * kk * kk / (2.0 * spec.mass) + u[0].x0;
  } else {
    psi0 = qfunction_from_config(cfg, "psi0", grid);
    if (cfg.boolean("normalize", true)) {
      const double nrm = norm(psi0);
      if (!(nrm > 0.0)) throw ConfigError("initial state is zero");
      psi0 *= 1.0 / nrm;
    }
  }

  const double t0 = cfg.number("t0", 0.0);
  const double t1 = cfg.number("t1", 1.0);
  const double dt = cfg.number("dt", 1e-3);
  const long long stride = cfg.integer("stride", 1);
  if (stride < 1) throw ConfigError("stride must be positive");
  EvolutionProblem problem(spec, psi0, t0, t1, dt);
  try {
    step_count(problem);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }

  const bool dyson = cfg.boolean("dyson", false);
  const int dyson_terms = static_cast<int>(cfg.integer("dyson_terms", 6));
  const int dyson_quad = static_cast<int>(cfg.integer("dyson_quad", 201));
  const std::string placement_text = cfg.string("dyson_placement", "left");
  if (placement_text != "left" && placement_text != "right") {
    throw ConfigError("dyson_placement must be left or right");
  }
  if (dyson && (dyson_terms < 1 || dyson_quad < 2)) {
    throw ConfigError("dyson_terms must be >= 1 and dyson_quad >= 2");
  }
  const auto dir = prepare_out_dir(opts);

  // Warn before integrating so the diagnostic survives an instability exit.
  for (const auto& w : evolution_warnings(problem)) err << "qqm evolve: warning: " << w << '\n';
  const EvolutionResult res = evolve(problem);
  write_trajectory(dir / "trajectory.csv", res, static_cast<std::size_t>(stride));
  write_continuity(dir / "continuity.csv", res.report);

  const ContinuityReport& rep = res.report;
  double max_g = 0.0, drift = 0.0, mismatch = 0.0, max_res = 0.0;
  for (std::size_t s = 0; s < rep.times.size(); ++s) {
    max_g = std::fmax(max_g, std::fabs(rep.integral_g[s]));
    drift = std::fmax(drift, std::fabs(rep.total_norm[s] - rep.total_norm[0]));
    mismatch = std::fmax(mismatch, std::fabs(rep.norm_rate[s] - rep.integral_g[s]));
    max_res = std::fmax(max_res, rep.max_residual[s]);
  }
  emit(out, "steps", std::to_string(res.states.size() - 1));
  emit(out, "stability_number", stability_number(spec, dt));
  emit(out, "max_abs_integral_g", max_g);
  emit(out, "norm_drift", drift);
  emit(out, "max_rate_mismatch", mismatch);
  emit(out, "relative_rate_mismatch", max_g > 0.0 ? mismatch / max_g : mismatch);
  emit(out, "max_continuity_residual", max_res);
  emit(out, "max_nonreal", rep.max_nonreal);

  double verification = mismatch;
  if (plane) {
    double worst = 0.0;
    for (std::size_t s = 0; s < res.states.size(); ++s) {
      const double w = energy * (res.times[s] - t0) / spec.hbar;
      const Quaternion phase{std::cos(w), -std::sin(w), 0.0, 0.0};
      worst = std::fmax(worst, norm(res.states[s] - right_multiply(psi0, phase)));
    }
    emit(out, "plane_wave_error", worst);
    verification = worst;
  }
  if (dyson) {
    const UnitPlacement placement =
        placement_text == "right" ? UnitPlacement::Right : UnitPlacement::Left;
    const QOperator u = dyson_propagator(spec, t0, t1, dyson_terms, dyson_quad, placement);
    emit(out, "dyson_placement", placement_text);
    emit(out, "dyson_error", norm(u.apply(psi0) - res.states.back()));
  }

  if (opts.tol && !(verification <= *opts.tol)) {
    err << "qqm evolve: verification error " << verification << " exceeds --tol " << *opts.tol
        << '\n';
    return exit_code::kNumerical;
  }
  return exit_code::kOk;
}

}  // namespace qqm::cli
