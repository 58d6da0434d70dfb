#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "qqm/csv.hpp"
#include "qqm/errors.hpp"
#include "qqm/expression.hpp"

namespace qqm::cli {

KeyValueConfig load_config(const GlobalOptions& opts, const std::set<std::string>& allowed) {
  KeyValueConfig cfg;
  if (opts.config) cfg = KeyValueConfig::load(*opts.config);
  cfg.reject_unknown(allowed);
  return cfg;
}

std::uint64_t require_seed(const GlobalOptions& opts, const KeyValueConfig& cfg) {
  if (opts.seed) return *opts.seed;
  if (cfg.has("seed")) {
    const long long s = cfg.integer("seed");
    if (s < 0) throw ConfigError("seed must be nonnegative");
    return static_cast<std::uint64_t>(s);
  }
  throw ConfigError("this run uses random inputs: a seed is required (--seed or 'seed' key)");
}

std::filesystem::path prepare_out_dir(const GlobalOptions& opts) {
  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (!std::filesystem::is_directory(opts.out)) {
    throw ConfigError("output directory " + opts.out.string() + " cannot be created");
  }
  const auto probe = opts.out / ".qqm_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory " + opts.out.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
  return opts.out;
}

Grid grid_from_config(const KeyValueConfig& cfg, std::size_t fallback) {
  const long long n = cfg.integer("n_points", static_cast<long long>(fallback));
  if (n < 4) throw ConfigError("n_points must be at least 4");
  return Grid(static_cast<std::size_t>(n));
}

QFunction qfunction_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                const Grid& grid) {
  const std::string csv_key = prefix + "_csv";
  if (cfg.has(csv_key)) {
    for (int c = 0; c < 4; ++c) {
      if (cfg.has(prefix + "_x" + std::to_string(c))) {
        throw ConfigError(prefix + ": give either expressions or " + csv_key + ", not both");
      }
    }
    const auto path = cfg.path(csv_key);
    if (!std::filesystem::exists(path)) throw ConfigError("missing input file " + path.string());
    QFunction f = read_qfunction_csv(path);
    if (!(f.grid() == grid)) {
      throw ConfigError(csv_key + " has " + std::to_string(f.size()) + " nodes, expected " +
                        std::to_string(grid.size()));
    }
    return f;
  }
  Expression comp[4] = {Expression::parse("0"), Expression::parse("0"), Expression::parse("0"),
                        Expression::parse("0")};
  for (int c = 0; c < 4; ++c) {
    if (const auto e = cfg.optional(prefix + "_x" + std::to_string(c))) {
      comp[c] = Expression::parse(*e);
    }
  }
  return QFunction::sample(grid, [&](double x) {
    return Quaternion{comp[0](x), comp[1](x), comp[2](x), comp[3](x)};
  });
}

void emit(std::ostream& out, const std::string& key, double value) {
  out << key << '=' << format_double(value) << '\n';
}

void emit(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << '=' << value << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternionic quantum mechanics in a real Hilbert space"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  std::string config, outdir = ".";
  std::uint64_t seed = 0;
  double tol = 0.0;
  auto* config_opt = app.add_option("--config", config, "key = value configuration file");
  app.add_option("--out", outdir, "output directory for CSV artifacts");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* tol_opt = app.add_option("--tol", tol, "verification tolerance override");

  auto* fourier = app.add_subcommand("fourier", "quaternionic Fourier analysis");
  auto* evolve = app.add_subcommand("evolve", "time evolution with continuity report");
  auto* spectral = app.add_subcommand("spectral", "spectral resolution of an operator");
  auto* check = app.add_subcommand("check", "invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "qqm: " << e.what() << '\n';
    return exit_code::kConfig;
  }
  if (*config_opt) opts.config = config;
  opts.out = outdir;
  if (*seed_opt) opts.seed = seed;
  if (*tol_opt) opts.tol = tol;

  try {
    if (fourier->parsed()) return cmd_fourier(opts, out, err);
    if (evolve->parsed()) return cmd_evolve(opts, out, err);
    if (spectral->parsed()) return cmd_spectral(opts, out, err);
    if (check->parsed()) return cmd_check(opts, out, err);
  } catch (const ConfigError& e) {
    err << "qqm: configuration error: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const DomainError& e) {
    // Preconditions on configured values (step counts, grid sizes, normalization).
    err << "qqm: invalid input: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const DimensionError& e) {
    err << "qqm: invalid input: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const ValidationError& e) {
    err << "qqm: invalid input: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const InstabilityError& e) {
    err << "qqm: " << e.what() << '\n';
    emit(out, "suggested_dt", e.suggested_dt());
    return exit_code::kInstability;
  } catch (const ConditioningError& e) {
    err << "qqm: " << e.what() << '\n';
    emit(out, "condition", e.condition());
    return exit_code::kNumerical;
  } catch (const ContractViolation& e) {
    err << "qqm: " << e.what() << '\n';
    emit(out, "asymmetry", e.asymmetry());
    return exit_code::kNumerical;
  } catch (const Error& e) {
    err << "qqm: " << e.what() << '\n';
    return exit_code::kNumerical;
  }
  return exit_code::kConfig;
}

}  // namespace qqm::cli
