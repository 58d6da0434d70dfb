#pragma once

/**
 * Quaternionic Fourier series with real coefficients, F(x) = Σ a_n Λ_n(x).
 *
 * Basis families (θ0, φ0, ξ0 may be constants or sampled functions):
 *   PhaseForm   Λ_n    = cos nx e^{iφ0} + sin nx e^{iξ0} j,     n ∈ [−N, N]
 *   ExpForm     Λ_n    = cosθ0 e^{inx} + sinθ0 e^{−inx} j,      n ∈ [−N, N]
 *   TwoIndex    Λ_mn   = cosθ0 e^{imx} + sinθ0 e^{inx} j,       (m, n) ∈ [−N, N]²
 *   ThreeIndex  Λ_lmn  = cos lx e^{imx} + sin lx e^{inx} j,     l ∈ [−L, L], (m, n) ∈ [−N, N]²
 *
 * PhaseForm and ExpForm satisfy <Λ_n, Λ_n'> = 2π δ_nn'. The multi-index
 * families are not orthogonal and may be rank deficient; coefficients come
 * from the Gram system G a = b with b_a = <F, Λ_a>.
 */

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qqm/expression.hpp"
#include "qqm/hilbert.hpp"

namespace qqm {

enum class BasisKind { PhaseForm, ExpForm, TwoIndex, ThreeIndex };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

/// A basis parameter: a constant, an expression in x, or grid samples.
class ParamFunction {
 public:
  ParamFunction(double c = 0.0) : repr_(c) {}  // NOLINT(google-explicit-constructor)
  static ParamFunction expression(const std::string& text);
  static ParamFunction samples(std::vector<double> values);

  double at(const Grid& grid, std::size_t k) const;
  bool is_constant() const { return std::holds_alternative<double>(repr_); }
  double constant_value() const;

  /// "const:<v>", "expr:<text>" or "samples:<v>;<v>;...".
  std::string serialize() const;
  static ParamFunction deserialize(const std::string& s);

  void check_grid(const Grid& grid) const;

 private:
  std::variant<double, Expression, std::vector<double>> repr_;
};

/// Unused components are zero (single-index families use n only).
struct BasisIndex {
  int l = 0;
  int m = 0;
  int n = 0;
  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

class BasisFamily {
 public:
  static BasisFamily phase_form(Grid grid, int N, ParamFunction phi0 = 0.0,
                                ParamFunction xi0 = 0.0);
  static BasisFamily exp_form(Grid grid, int N, ParamFunction theta0 = 0.0);
  static BasisFamily two_index(Grid grid, int N, ParamFunction theta0 = 0.0);
  static BasisFamily three_index(Grid grid, int L, int N);

  /// Restricts the family to an explicit index list (each within range).
  BasisFamily with_indices(std::vector<BasisIndex> indices) const;

  BasisKind kind() const noexcept { return kind_; }
  const Grid& grid() const noexcept { return grid_; }
  int truncation() const noexcept { return N_; }
  int l_range() const noexcept { return L_; }
  const ParamFunction& phi0() const noexcept { return phi0_; }
  const ParamFunction& xi0() const noexcept { return xi0_; }
  const ParamFunction& theta0() const noexcept { return theta0_; }

  const std::vector<BasisIndex>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

  /// Position of an index within indices(); throws IndexError when absent.
  std::size_t position(const BasisIndex& idx) const;
  bool in_range(const BasisIndex& idx) const;

  /// Number of index columns in serialized form (1, 2 or 3).
  int index_arity() const;

 private:
  BasisFamily(BasisKind kind, Grid grid, int N, int L);
  void validate_truncation() const;

  BasisKind kind_;
  Grid grid_;
  int N_;
  int L_ = 0;
  ParamFunction phi0_ = 0.0;
  ParamFunction xi0_ = 0.0;
  ParamFunction theta0_ = 0.0;
  std::vector<BasisIndex> indices_;
};

QFunction basis_element(const BasisFamily& family, const BasisIndex& index);
std::vector<QFunction> basis_elements(const BasisFamily& family);

/// Gram matrix under the real inner product, ordered like family.indices().
Eigen::MatrixXd gram(const BasisFamily& family);

/// 2-norm condition number of a symmetric matrix (infinity when singular).
double condition_number(const Eigen::MatrixXd& symmetric);

/**
 * A path through the bipartite (m, n) graph: (−N,−N), (−N,−N+1), (−N+1,−N+1), ...
 * Acyclic, so the TwoIndex Gram on it is nonsingular. At most 2(2N+1) − 1 entries.
 */
std::vector<BasisIndex> staircase_indices(int N, std::size_t count);

struct QFourierExpansion {
  BasisFamily family;
  std::vector<double> coefficients;
};

enum class CoefficientConvention {
  /// Solve G a = b with b_a = <F, Λ_a>; synthesize∘analyze is the identity on the span.
  GramSolve,
  /// a_n = (1/√2π) ∫ Re[F Λ_n] dx, without conjugation. Kept for comparison only.
  PrintedPrefactor,
};

struct AnalyzeOptions {
  double condition_cap = 1e12;
  CoefficientConvention convention = CoefficientConvention::GramSolve;
};

/// Throws ConditioningError when the Gram condition number exceeds the cap.
QFourierExpansion analyze(const QFunction& f, const BasisFamily& family, AnalyzeOptions opts = {});

QFunction synthesize(const QFourierExpansion& e);

/// ‖f − synthesize(analyze(f))‖ / ‖f‖. Throws DomainError for f = 0.
double completeness_residual(const QFunction& f, const BasisFamily& family,
                             AnalyzeOptions opts = {});
/// Same diagnostic against an orthonormal function set.
double completeness_residual(const QFunction& f, std::span<const QFunction> orthonormal_basis);

/// {cos nx, sin nx} × {1, i, j, k}, n = 0..N, normalized; 4(2N+1) functions.
std::vector<QFunction> reference_full_basis(const Grid& grid, int N);

/// Writes `path` (index columns + coefficient) and a `path.meta` key = value sidecar.
void write_expansion(const std::filesystem::path& path, const QFourierExpansion& e);
QFourierExpansion read_expansion(const std::filesystem::path& path);

}  // namespace qqm
