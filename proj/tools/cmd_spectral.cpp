#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include "cli.hpp"
#include "qqm/csv.hpp"
#include "qqm/errors.hpp"
#include "qqm/hamiltonian.hpp"
#include "qqm/spectral.hpp"

namespace qqm::cli {

namespace {

std::set<std::string> spectral_keys() {
  std::set<std::string> keys = hamiltonian_config_keys();
  keys.insert({"n_points", "operator", "multiply_x0", "multiply_x1", "multiply_x2", "multiply_x3",
               "multiply_csv", "symmetry_tol", "cluster_rel", "eigenfunctions", "seed"});
  return keys;
}

QOperator operator_from_config(const KeyValueConfig& cfg, const Grid& grid) {
  const std::string name = cfg.string("operator", "hamiltonian");
  if (name == "hamiltonian") return hamiltonian(hamiltonian_from_config(cfg, grid));
  if (name == "identity") return identity_operator(grid);
  if (name == "position") return position_operator(grid);
  if (name == "multiply") return left_multiplication(qfunction_from_config(cfg, "multiply", grid));
  throw ConfigError("operator must be hamiltonian, identity, position or multiply, got '" + name +
                    "'");
}

}  // namespace

int cmd_spectral(const GlobalOptions& opts, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(opts, spectral_keys());
  const Grid grid = grid_from_config(cfg, 32);
  const QOperator op = operator_from_config(cfg, grid);
  DecomposeOptions dopt;
  dopt.symmetry_tol = cfg.number("symmetry_tol", dopt.symmetry_tol);
  dopt.cluster_rel = cfg.number("cluster_rel", dopt.cluster_rel);
  const long long dump = cfg.integer("eigenfunctions", 0);
  if (dump < 0) throw ConfigError("eigenfunctions must be nonnegative");
  const auto dir = prepare_out_dir(opts);

  const Eigen::MatrixXd& t = op.matrix();
  emit(out, "dimension", std::to_string(t.rows()));
  emit(out, "asymmetry", (t - t.transpose()).norm());
  std::optional<SpectralResolution> decomposed;
  try {
    decomposed = decompose(op, dopt);
  } catch (const ContractViolation& e) {
    err << "qqm spectral: " << e.what() << '\n';
    return exit_code::kNumerical;
  }
  const SpectralResolution& res = *decomposed;
  const auto& values = res.eigenvalues();
  const auto mult = res.multiplicities();
  {
    std::ofstream f(dir / "spectrum.csv");
    if (!f) throw ConfigError("cannot write spectrum.csv");
    f << "eigenvalue,multiplicity\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
      f << format_double(values[k]) << ',' << mult[k] << '\n';
    }
  }
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(dump), values.size());
  for (std::size_t k = 0; k < count; ++k) {
    const auto fns = eigenfunctions(res, k);
    for (std::size_t c = 0; c < fns.size(); ++c) {
      write_qfunction_csv(dir / ("eigenfunction_" + std::to_string(k) + "_" + std::to_string(c) +
                                 ".csv"),
                          fns[c]);
    }
  }

  const double tn = t.norm();
  const double recon = (t - res.reconstruct()).norm() / (tn > 0.0 ? tn : 1.0);
  emit(out, "eigenspaces", std::to_string(values.size()));
  emit(out, "min_eigenvalue", values.front());
  emit(out, "max_eigenvalue", values.back());
  emit(out, "reconstruction_error", recon);
  if (opts.tol && !(recon <= *opts.tol)) {
    err << "qqm spectral: reconstruction error " << recon << " exceeds --tol " << *opts.tol << '\n';
    return exit_code::kNumerical;
  }
  return exit_code::kOk;
}

}  // namespace qqm::cli
