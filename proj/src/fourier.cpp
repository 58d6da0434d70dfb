#include "qqm/fourier.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qqm/config.hpp"
#include "qqm/csv.hpp"
#include "qqm/errors.hpp"

namespace qqm {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::PhaseForm: return "phase";
    case BasisKind::ExpForm: return "exp";
    case BasisKind::TwoIndex: return "two";
    case BasisKind::ThreeIndex: return "three";
  }
  return "?";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "phase") return BasisKind::PhaseForm;
  if (s == "exp") return BasisKind::ExpForm;
  if (s == "two") return BasisKind::TwoIndex;
  if (s == "three") return BasisKind::ThreeIndex;
  throw ConfigError("unknown basis family '" + s + "' (expected phase, exp, two or three)");
}

// ParamFunction --------------------------------------------------------------

ParamFunction ParamFunction::expression(const std::string& text) {
  ParamFunction p;
  p.repr_ = Expression::parse(text);
  return p;
}

ParamFunction ParamFunction::samples(std::vector<double> values) {
  ParamFunction p;
  p.repr_ = std::move(values);
  return p;
}

double ParamFunction::at(const Grid& grid, std::size_t k) const {
  if (const auto* c = std::get_if<double>(&repr_)) return *c;
  if (const auto* e = std::get_if<Expression>(&repr_)) return (*e)(grid.node(k));
  return std::get<std::vector<double>>(repr_)[k];
}

double ParamFunction::constant_value() const {
  if (!is_constant()) throw DomainError("parameter is not a constant");
  return std::get<double>(repr_);
}

void ParamFunction::check_grid(const Grid& grid) const {
  if (const auto* s = std::get_if<std::vector<double>>(&repr_)) {
    if (s->size() != grid.size()) {
      throw DimensionError("parameter has " + std::to_string(s->size()) + " samples for a " +
                           std::to_string(grid.size()) + "-point grid");
    }
  }
}

std::string ParamFunction::serialize() const {
  if (const auto* c = std::get_if<double>(&repr_)) return "const:" + format_double(*c);
  if (const auto* e = std::get_if<Expression>(&repr_)) return "expr:" + e->text();
  std::string out = "samples:";
  const auto& s = std::get<std::vector<double>>(repr_);
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? ";" : "") + format_double(s[k]);
  return out;
}

ParamFunction ParamFunction::deserialize(const std::string& s) {
  if (s.rfind("const:", 0) == 0) return ParamFunction(std::stod(s.substr(6)));
  if (s.rfind("expr:", 0) == 0) return expression(s.substr(5));
  if (s.rfind("samples:", 0) == 0) {
    std::vector<double> v;
    std::istringstream ss(s.substr(8));
    std::string tok;
    while (std::getline(ss, tok, ';')) v.push_back(std::stod(tok));
    return samples(std::move(v));
  }
  throw ConfigError("bad parameter encoding '" + s + "'");
}

// BasisFamily ----------------------------------------------------------------

BasisFamily::BasisFamily(BasisKind kind, Grid grid, int N, int L)
    : kind_(kind), grid_(grid), N_(N), L_(L) {}

void BasisFamily::validate_truncation() const {
  if (N_ < 0) throw DomainError("truncation N must be nonnegative");
  if (4 * static_cast<std::size_t>(N_) >= grid_.size()) {
    throw DomainError("truncation N = " + std::to_string(N_) + " violates N < n_points/4 for " +
                      std::to_string(grid_.size()) + " points");
  }
}

BasisFamily BasisFamily::phase_form(Grid grid, int N, ParamFunction phi0, ParamFunction xi0) {
  BasisFamily b(BasisKind::PhaseForm, grid, N, 0);
  b.validate_truncation();
  phi0.check_grid(grid);
  xi0.check_grid(grid);
  b.phi0_ = std::move(phi0);
  b.xi0_ = std::move(xi0);
  for (int n = -N; n <= N; ++n) b.indices_.push_back({0, 0, n});
  return b;
}

BasisFamily BasisFamily::exp_form(Grid grid, int N, ParamFunction theta0) {
  BasisFamily b(BasisKind::ExpForm, grid, N, 0);
  b.validate_truncation();
  theta0.check_grid(grid);
  b.theta0_ = std::move(theta0);
  for (int n = -N; n <= N; ++n) b.indices_.push_back({0, 0, n});
  return b;
}

BasisFamily BasisFamily::two_index(Grid grid, int N, ParamFunction theta0) {
  BasisFamily b(BasisKind::TwoIndex, grid, N, 0);
  b.validate_truncation();
  theta0.check_grid(grid);
  b.theta0_ = std::move(theta0);
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) b.indices_.push_back({0, m, n});
  }
  return b;
}

BasisFamily BasisFamily::three_index(Grid grid, int L, int N) {
  BasisFamily b(BasisKind::ThreeIndex, grid, N, L);
  b.validate_truncation();
  if (L < 0 || L > N) throw DomainError("ThreeIndex needs 0 <= L <= N");
  for (int l = -L; l <= L; ++l) {
    for (int m = -N; m <= N; ++m) {
      for (int n = -N; n <= N; ++n) b.indices_.push_back({l, m, n});
    }
  }
  return b;
}

bool BasisFamily::in_range(const BasisIndex& idx) const {
  const auto within = [](int v, int r) { return v >= -r && v <= r; };
  switch (kind_) {
    case BasisKind::PhaseForm:
    case BasisKind::ExpForm: return idx.l == 0 && idx.m == 0 && within(idx.n, N_);
    case BasisKind::TwoIndex: return idx.l == 0 && within(idx.m, N_) && within(idx.n, N_);
    case BasisKind::ThreeIndex:
      return within(idx.l, L_) && within(idx.m, N_) && within(idx.n, N_);
  }
  return false;
}

BasisFamily BasisFamily::with_indices(std::vector<BasisIndex> indices) const {
  for (const auto& idx : indices) {
    if (!in_range(idx)) {
      throw IndexError("basis index (" + std::to_string(idx.l) + ", " + std::to_string(idx.m) +
                       ", " + std::to_string(idx.n) + ") out of range for " + to_string(kind_));
    }
  }
  BasisFamily b = *this;
  b.indices_ = std::move(indices);
  return b;
}

std::size_t BasisFamily::position(const BasisIndex& idx) const {
  for (std::size_t a = 0; a < indices_.size(); ++a) {
    if (indices_[a] == idx) return a;
  }
  throw IndexError("index not in basis family");
}

int BasisFamily::index_arity() const {
  switch (kind_) {
    case BasisKind::PhaseForm:
    case BasisKind::ExpForm: return 1;
    case BasisKind::TwoIndex: return 2;
    case BasisKind::ThreeIndex: return 3;
  }
  return 1;
}

// Elements -------------------------------------------------------------------

QFunction basis_element(const BasisFamily& family, const BasisIndex& idx) {
  if (!family.in_range(idx)) {
    throw IndexError("basis index out of range for " + to_string(family.kind()) + " family");
  }
  const Grid& grid = family.grid();
  QFunction out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.node(k);
    switch (family.kind()) {
      case BasisKind::PhaseForm: {
        const double c = std::cos(idx.n * x), s = std::sin(idx.n * x);
        const double phi = family.phi0().at(grid, k), xi = family.xi0().at(grid, k);
        out[k] = {c * std::cos(phi), c * std::sin(phi), s * std::cos(xi), s * std::sin(xi)};
        break;
      }
      case BasisKind::ExpForm: {
        const double th = family.theta0().at(grid, k);
        const double c = std::cos(idx.n * x), s = std::sin(idx.n * x);
        out[k] = {std::cos(th) * c, std::cos(th) * s, std::sin(th) * c, -std::sin(th) * s};
        break;
      }
      case BasisKind::TwoIndex: {
        const double th = family.theta0().at(grid, k);
        out[k] = {std::cos(th) * std::cos(idx.m * x), std::cos(th) * std::sin(idx.m * x),
                  std::sin(th) * std::cos(idx.n * x), std::sin(th) * std::sin(idx.n * x)};
        break;
      }
      case BasisKind::ThreeIndex: {
        const double c = std::cos(idx.l * x), s = std::sin(idx.l * x);
        out[k] = {c * std::cos(idx.m * x), c * std::sin(idx.m * x), s * std::cos(idx.n * x),
                  s * std::sin(idx.n * x)};
        break;
      }
    }
  }
  return out;
}

std::vector<QFunction> basis_elements(const BasisFamily& family) {
  std::vector<QFunction> out;
  out.reserve(family.size());
  for (const auto& idx : family.indices()) out.push_back(basis_element(family, idx));
  return out;
}

Eigen::MatrixXd gram(const BasisFamily& family) {
  const auto els = basis_elements(family);
  const auto n = static_cast<Eigen::Index>(els.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      g(a, b) = inner(els[a], els[b]);
      g(b, a) = g(a, b);
    }
  }
  return g;
}

double condition_number(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double hi = ev.cwiseAbs().maxCoeff();
  const double lo = ev.minCoeff();
  if (lo <= 0.0 || hi == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

std::vector<BasisIndex> staircase_indices(int N, std::size_t count) {
  const std::size_t limit = 2 * (2 * static_cast<std::size_t>(N) + 1) - 1;
  if (count > limit) {
    throw DomainError("staircase over [-N, N]^2 has at most " + std::to_string(limit) +
                      " entries");
  }
  std::vector<BasisIndex> out;
  int m = -N, n = -N;
  for (std::size_t a = 0; a < count; ++a) {
    out.push_back({0, m, n});
    if (a % 2 == 0) {
      ++n;
    } else {
      ++m;
    }
  }
  return out;
}

// Analysis / synthesis -------------------------------------------------------

QFourierExpansion analyze(const QFunction& f, const BasisFamily& family, AnalyzeOptions opts) {
  require_same_grid(f.grid(), family.grid());
  const auto els = basis_elements(family);
  const auto n = static_cast<Eigen::Index>(els.size());
  std::vector<double> coeffs(els.size(), 0.0);

  if (opts.convention == CoefficientConvention::PrintedPrefactor) {
    const double pre = f.grid().spacing() / std::sqrt(kTwoPi);
    for (std::size_t a = 0; a < els.size(); ++a) {
      double acc = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) acc += (f[k] * els[a][k]).real();
      coeffs[a] = pre * acc;
    }
    return {family, std::move(coeffs)};
  }

  Eigen::MatrixXd g(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    b(a) = inner(f, els[a]);
    for (Eigen::Index c = a; c < n; ++c) {
      g(a, c) = inner(els[a], els[c]);
      g(c, a) = g(a, c);
    }
  }
  const double cond = condition_number(g);
  if (!(cond <= opts.condition_cap)) {
    std::ostringstream msg;
    msg << to_string(family.kind()) << " Gram matrix is ill-conditioned (condition estimate "
        << cond << " exceeds cap " << opts.condition_cap << ")";
    throw ConditioningError(msg.str(), cond);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  const Eigen::VectorXd a = ldlt.solve(b);
  for (Eigen::Index i = 0; i < n; ++i) coeffs[static_cast<std::size_t>(i)] = a(i);
  return {family, std::move(coeffs)};
}

QFunction synthesize(const QFourierExpansion& e) {
  if (e.coefficients.size() != e.family.size()) {
    throw DimensionError("expansion has " + std::to_string(e.coefficients.size()) +
                         " coefficients for " + std::to_string(e.family.size()) +
                         " basis elements");
  }
  QFunction out(e.family.grid());
  for (std::size_t a = 0; a < e.family.size(); ++a) {
    if (e.coefficients[a] == 0.0) continue;
    const QFunction el = basis_element(e.family, e.family.indices()[a]);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += e.coefficients[a] * el[k];
  }
  return out;
}

double completeness_residual(const QFunction& f, const BasisFamily& family, AnalyzeOptions opts) {
  const double nf = norm(f);
  if (nf == 0.0) throw DomainError("completeness residual of the zero function is undefined");
  return norm(f - synthesize(analyze(f, family, opts))) / nf;
}

double completeness_residual(const QFunction& f, std::span<const QFunction> orthonormal_basis) {
  const double nf = norm(f);
  if (nf == 0.0) throw DomainError("completeness residual of the zero function is undefined");
  const auto c = expand_in_basis(f, orthonormal_basis);
  return norm(f - combine(c, orthonormal_basis)) / nf;
}

std::vector<QFunction> reference_full_basis(const Grid& grid, int N) {
  if (N < 0) throw DomainError("N must be nonnegative");
  if (2 * static_cast<std::size_t>(N) >= grid.size()) {
    throw DomainError("reference basis needs N < n_points/2");
  }
  const Quaternion units[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(),
                               Quaternion::k()};
  std::vector<QFunction> out;
  out.reserve(4 * (2 * static_cast<std::size_t>(N) + 1));
  const double c0 = 1.0 / std::sqrt(kTwoPi);
  const double cn = 1.0 / std::sqrt(std::numbers::pi);
  for (int n = 0; n <= N; ++n) {
    for (const auto& u : units) {
      out.push_back(QFunction::sample(
          grid, [&](double x) { return u * ((n == 0 ? c0 : cn) * std::cos(n * x)); }));
    }
    if (n == 0) continue;
    for (const auto& u : units) {
      out.push_back(QFunction::sample(grid, [&](double x) { return u * (cn * std::sin(n * x)); }));
    }
  }
  return out;
}

// Serialization --------------------------------------------------------------

void write_expansion(const std::filesystem::path& path, const QFourierExpansion& e) {
  const BasisFamily& fam = e.family;
  {
    std::ofstream meta(path.string() + ".meta");
    if (!meta) throw ConfigError("cannot write " + path.string() + ".meta");
    meta << "kind = " << to_string(fam.kind()) << '\n'
         << "N = " << fam.truncation() << '\n'
         << "L = " << fam.l_range() << '\n'
         << "n_points = " << fam.grid().size() << '\n'
         << "phi0 = " << fam.phi0().serialize() << '\n'
         << "xi0 = " << fam.xi0().serialize() << '\n'
         << "theta0 = " << fam.theta0().serialize() << '\n';
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const int arity = fam.index_arity();
  if (arity == 3) out << "l,";
  if (arity >= 2) out << "m,";
  out << "n,coefficient\n";
  for (std::size_t a = 0; a < fam.size(); ++a) {
    const auto& idx = fam.indices()[a];
    if (arity == 3) out << idx.l << ',';
    if (arity >= 2) out << idx.m << ',';
    out << idx.n << ',' << format_double(e.coefficients[a]) << '\n';
  }
}

QFourierExpansion read_expansion(const std::filesystem::path& path) {
  const KeyValueConfig meta = KeyValueConfig::load(path.string() + ".meta");
  meta.reject_unknown({"kind", "N", "L", "n_points", "phi0", "xi0", "theta0"});
  const BasisKind kind = basis_kind_from_string(meta.string("kind"));
  const Grid grid(static_cast<std::size_t>(meta.integer("n_points")));
  const int N = static_cast<int>(meta.integer("N"));
  const int L = static_cast<int>(meta.integer("L", 0));
  const auto p = [&](const char* key) {
    return ParamFunction::deserialize(meta.string(key, "const:0"));
  };
  BasisFamily fam = [&] {
    switch (kind) {
      case BasisKind::PhaseForm: return BasisFamily::phase_form(grid, N, p("phi0"), p("xi0"));
      case BasisKind::ExpForm: return BasisFamily::exp_form(grid, N, p("theta0"));
      case BasisKind::TwoIndex: return BasisFamily::two_index(grid, N, p("theta0"));
      case BasisKind::ThreeIndex: return BasisFamily::three_index(grid, L, N);
    }
    throw ConfigError("unreachable");
  }();

  const CsvTable t = read_csv(path);
  const int arity = fam.index_arity();
  std::vector<BasisIndex> idx;
  std::vector<double> coeffs;
  const std::size_t cc = t.column("coefficient");
  for (const auto& r : t.rows) {
    BasisIndex b;
    b.n = static_cast<int>(r[t.column("n")]);
    if (arity >= 2) b.m = static_cast<int>(r[t.column("m")]);
    if (arity == 3) b.l = static_cast<int>(r[t.column("l")]);
    idx.push_back(b);
    coeffs.push_back(r[cc]);
  }
  return {fam.with_indices(std::move(idx)), std::move(coeffs)};
}

}  // namespace qqm
