#include <algorithm>
#include <cmath>
#include <optional>
#include <fstream>
#include <ostream>
#include <random>

#include "cli.hpp"
#include "qqm/csv.hpp"
#include "qqm/errors.hpp"
#include "qqm/fourier.hpp"

namespace qqm::cli {

namespace {

const std::set<std::string> kKeys = {
    "n_points", "family",   "N",          "L",          "phi0",          "xi0",
    "theta0",   "indices",  "index_count", "target",    "target_x0",     "target_x1",
    "target_x2", "target_x3", "target_csv", "planted_count", "condition_cap", "convention",
    "seed"};

// A bare number is a constant; anything else is an expression in x.
ParamFunction param(const KeyValueConfig& cfg, const std::string& key) {
  const auto text = cfg.optional(key);
  if (!text) return 0.0;
  try {
    std::size_t used = 0;
    const double v = std::stod(*text, &used);
    if (used == text->size()) return v;
  } catch (const std::exception&) {
  }
  return ParamFunction::expression(*text);
}

BasisFamily family_from_config(const KeyValueConfig& cfg, const Grid& grid) {
  const BasisKind kind = basis_kind_from_string(cfg.string("family", "phase"));
  const int N = static_cast<int>(cfg.integer("N", 8));
  if (N < 0) throw ConfigError("N must be nonnegative");
  // Truncation errors are configuration mistakes, not numerical failures.
  const auto build = [&]() {
    switch (kind) {
      case BasisKind::PhaseForm:
        return BasisFamily::phase_form(grid, N, param(cfg, "phi0"), param(cfg, "xi0"));
      case BasisKind::ExpForm:
        return BasisFamily::exp_form(grid, N, param(cfg, "theta0"));
      case BasisKind::TwoIndex:
        return BasisFamily::two_index(grid, N, param(cfg, "theta0"));
      case BasisKind::ThreeIndex:
        return BasisFamily::three_index(grid, static_cast<int>(cfg.integer("L", N)), N);
    }
    throw ConfigError("unknown basis family");
  };
  BasisFamily family = [&]() {
    try {
      return build();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }();

  const std::string indices = cfg.string("indices", "full");
  if (indices == "staircase") {
    if (kind != BasisKind::TwoIndex) throw ConfigError("indices = staircase needs family = two");
    const long long count = cfg.integer("index_count", 2 * (2 * N + 1) - 1);
    if (count < 1) throw ConfigError("index_count must be positive");
    try {
      family = family.with_indices(staircase_indices(N, static_cast<std::size_t>(count)));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else if (indices != "full") {
    throw ConfigError("indices must be full or staircase, got '" + indices + "'");
  }
  return family;
}

// Largest |G − G_exact| where a closed form exists.
std::optional<double> analytic_gram_deviation(const BasisFamily& family, const Eigen::MatrixXd& g) {
  const bool constant_theta = family.theta0().is_constant();
  Eigen::MatrixXd exact = Eigen::MatrixXd::Zero(g.rows(), g.cols());
  switch (family.kind()) {
    case BasisKind::PhaseForm:
    case BasisKind::ExpForm:
      exact.diagonal().setConstant(kTwoPi);
      break;
    case BasisKind::TwoIndex: {
      if (!constant_theta) return std::nullopt;
      const double c = std::cos(family.theta0().constant_value());
      const double s = std::sin(family.theta0().constant_value());
      const auto& idx = family.indices();
      for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = 0; b < idx.size(); ++b) {
          exact(a, b) = kTwoPi * (c * c * (idx[a].m == idx[b].m) + s * s * (idx[a].n == idx[b].n));
        }
      }
      break;
    }
    case BasisKind::ThreeIndex:
      return std::nullopt;
  }
  return (g - exact).cwiseAbs().maxCoeff();
}

void write_gram(const std::filesystem::path& path, const Eigen::MatrixXd& g) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  for (Eigen::Index c = 0; c < g.cols(); ++c) f << (c ? "," : "") << "g" << c;
  f << '\n';
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) f << (c ? "," : "") << format_double(g(r, c));
    f << '\n';
  }
}

}  // namespace

int cmd_fourier(const GlobalOptions& opts, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(opts, kKeys);
  const Grid grid = grid_from_config(cfg, 256);
  const BasisFamily family = family_from_config(cfg, grid);

  AnalyzeOptions aopt;
  aopt.condition_cap = cfg.number("condition_cap", aopt.condition_cap);
  const std::string convention = cfg.string("convention", "gram");
  if (convention == "printed") {
    aopt.convention = CoefficientConvention::PrintedPrefactor;
  } else if (convention != "gram") {
    throw ConfigError("convention must be gram or printed, got '" + convention + "'");
  }

  const std::string target = cfg.string("target", "planted");
  if (target != "planted" && target != "expression" && target != "csv") {
    throw ConfigError("target must be planted, expression or csv, got '" + target + "'");
  }
  if (target == "csv" && !cfg.has("target_csv")) throw ConfigError("target = csv needs target_csv");
  std::uint64_t seed = 0;
  if (target == "planted") seed = require_seed(opts, cfg);
  const auto dir = prepare_out_dir(opts);

  const Eigen::MatrixXd g = gram(family);
  write_gram(dir / "gram.csv", g);
  Eigen::MatrixXd off = g;
  off.diagonal().setZero();
  const double cond = condition_number(g);

  emit(out, "family", to_string(family.kind()));
  emit(out, "basis_size", std::to_string(family.size()));
  emit(out, "max_offdiag_gram", off.size() ? off.cwiseAbs().maxCoeff() : 0.0);
  if (const auto dev = analytic_gram_deviation(family, g)) emit(out, "gram_analytic_deviation", *dev);
  emit(out, "condition", cond);

  std::vector<double> planted;
  QFunction f(grid);
  if (target == "planted") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const long long count = cfg.integer("planted_count", static_cast<long long>(family.size()));
    if (count < 1 || static_cast<std::size_t>(count) > family.size()) {
      throw ConfigError("planted_count must lie in [1, basis size]");
    }
    planted.assign(family.size(), 0.0);
    for (long long a = 0; a < count; ++a) planted[static_cast<std::size_t>(a)] = coef(rng);
    std::shuffle(planted.begin(), planted.end(), rng);
    f = synthesize({family, planted});
  } else {
    f = qfunction_from_config(cfg, "target", grid);
  }

  QFourierExpansion e{family, {}};
  try {
    e = analyze(f, family, aopt);
  } catch (const ConditioningError& ex) {
    err << "qqm fourier: " << ex.what() << '\n';
    return exit_code::kNumerical;
  }
  write_expansion(dir / "coefficients.csv", e);

  const QFunction fs = synthesize(e);
  const double fn = norm(f);
  const double residual = fn > 0.0 ? norm(f - fs) / fn : norm(fs);
  double roundtrip = 0.0;
  if (!planted.empty()) {
    for (std::size_t a = 0; a < planted.size(); ++a) {
      roundtrip = std::fmax(roundtrip, std::fabs(planted[a] - e.coefficients[a]));
    }
  } else {
    // Projection idempotence: the approximation must reproduce itself.
    roundtrip = max_distance(synthesize(analyze(fs, family, aopt)), fs);
  }
  emit(out, "residual", residual);
  emit(out, "roundtrip_error", roundtrip);

  if (opts.tol && !(roundtrip <= *opts.tol)) {
    err << "qqm fourier: round-trip error " << roundtrip << " exceeds --tol " << *opts.tol << '\n';
    return exit_code::kNumerical;
  }
  return exit_code::kOk;
}

}  // namespace qqm::cli
