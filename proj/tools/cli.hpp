#pragma once

// Batch experiment driver: `qqm <fourier|evolve|spectral|check> [--config PATH]
// [--out DIR] [--seed INT] [--tol FLOAT]`.
//
// stdout carries only machine-readable `key=value` lines; diagnostics go to
// stderr.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qqm/config.hpp"
#include "qqm/hilbert.hpp"

namespace qqm::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kConfig = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kInstability = 4;
}  // namespace exit_code

struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_fourier(const GlobalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_evolve(const GlobalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_spectral(const GlobalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check(const GlobalOptions& opts, std::ostream& out, std::ostream& err);

// Shared helpers ------------------------------------------------------------

/// Loads --config (empty config when absent) and rejects keys outside `allowed`.
KeyValueConfig load_config(const GlobalOptions& opts, const std::set<std::string>& allowed);

/// --seed wins over the config's `seed`; ConfigError when neither is given.
std::uint64_t require_seed(const GlobalOptions& opts, const KeyValueConfig& cfg);

/// Creates the output directory if needed and checks it is writable.
std::filesystem::path prepare_out_dir(const GlobalOptions& opts);

Grid grid_from_config(const KeyValueConfig& cfg, std::size_t fallback);

/// Keys <prefix>_x0..x3 as expressions, or <prefix>_csv as a QFunction CSV.
QFunction qfunction_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                const Grid& grid);

void emit(std::ostream& out, const std::string& key, double value);
void emit(std::ostream& out, const std::string& key, const std::string& value);

}  // namespace qqm::cli
