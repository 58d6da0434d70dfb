#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>

#include "cli.hpp"
#include "qqm/dynamics.hpp"
#include "qqm/errors.hpp"
#include "qqm/fourier.hpp"
#include "qqm/normal.hpp"

namespace qqm::cli {

namespace {

const std::set<std::string> kKeys = {"seed", "samples", "n_points"};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Quaternion quaternion() { return {uniform(), uniform(), uniform(), uniform()}; }
  Complex complex() { return {uniform(), uniform()}; }

  // Random trigonometric polynomial of degree `modes` with quaternion coefficients.
  QFunction band_limited(const Grid& grid, int modes) {
    std::vector<Quaternion> a, b;
    for (int k = 0; k <= modes; ++k) {
      a.push_back(quaternion());
      b.push_back(quaternion());
    }
    return QFunction::sample(grid, [&](double x) {
      Quaternion s{};
      for (int k = 0; k <= modes; ++k) s += std::cos(k * x) * a[k] + std::sin(k * x) * b[k];
      return s;
    });
  }

  UnitQuaternion unit() { return {uniform(0.0, kTwoPi), uniform(0.0, kTwoPi), uniform(0.0, kTwoPi)}; }

 private:
  std::mt19937_64 rng_;
};

struct Outcome {
  std::string name;
  double value;
  double limit;
  bool upper;  // value < limit; otherwise value > limit
  bool overridable;
};

Eigen::MatrixXcd random_complex(Sampler& s, int n) {
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = s.complex();
  return m;
}

}  // namespace

int cmd_check(const GlobalOptions& opts, std::ostream& out, std::ostream& err) {
  const KeyValueConfig cfg = load_config(opts, kKeys);
  Sampler rnd(require_seed(opts, cfg));
  const long long samples = cfg.integer("samples", 20);
  if (samples < 1) throw ConfigError("samples must be positive");
  const Grid grid = grid_from_config(cfg, 64);
  std::vector<Outcome> results;
  const auto upper = [&](std::string name, double value, double limit) {
    results.push_back({std::move(name), value, limit, true, true});
  };
  const auto structural = [&](std::string name, double value, double limit, bool is_upper) {
    results.push_back({std::move(name), value, limit, is_upper, false});
  };

  // Inner-product axioms on random band-limited functions.
  double sym = 0.0, lin = 0.0, pos = INFINITY, schwarz = -INFINITY, cont = 0.0, para = 0.0;
  for (long long t = 0; t < samples; ++t) {
    const QFunction f = rnd.band_limited(grid, 6);
    const QFunction g = rnd.band_limited(grid, 6);
    const QFunction h = rnd.band_limited(grid, 6);
    const double a = rnd.uniform(), b = rnd.uniform();
    const double nf = norm(f), ng = norm(g), nh = norm(h);
    sym = std::fmax(sym, std::fabs(inner(f, g) - inner(g, f)) / (nf * ng));
    lin = std::fmax(lin, std::fabs(inner(a * f + b * h, g) - a * inner(f, g) - b * inner(h, g)) /
                             ((std::fabs(a) * nf + std::fabs(b) * nh) * ng));
    pos = std::fmin(pos, inner(f, f) / (f.max_abs() * f.max_abs()));
    schwarz = std::fmax(schwarz, (std::fabs(inner(f, g)) - nf * ng) / (nf * ng));
    const double lhs = inner(f + g, f + g) + inner(f - g, f - g);
    para = std::fmax(para, std::fabs(lhs - 2.0 * (nf * nf + ng * ng)) / (nf * nf + ng * ng));

    // |<f_n, g_n> − <f, g>| ≤ C/n for f_n = f + r/n, g_n = g + s/n.
    const QFunction r = rnd.band_limited(grid, 6);
    const QFunction s = rnd.band_limited(grid, 6);
    const double c = norm(r) * ng + nf * norm(s) + norm(r) * norm(s);
    for (int n = 1; n <= 64; n *= 2) {
      const double inv = 1.0 / n;
      const double d = std::fabs(inner(f + inv * r, g + inv * s) - inner(f, g));
      cont = std::fmax(cont, n * d / c);
    }
  }
  upper("inner_symmetry", sym, 1e-12);
  upper("inner_bilinearity", lin, 1e-12);
  structural("inner_positivity", pos, 0.0, false);
  upper("schwarz_inequality", schwarz, 1e-12);
  structural("joint_continuity", cont, 1.0, true);
  upper("parallelogram_law", para, 1e-12);

  // Re[Λ conj Λ'] closed form.
  double rp = 0.0;
  for (long long t = 0; t < samples; ++t) {
    const UnitQuaternion u = rnd.unit(), v = rnd.unit();
    rp = std::fmax(rp, std::fabs(re_product_identity(u, v) - (realize(u) * conj(realize(v))).x0));
  }
  upper("unit_product_real_part", rp, 1e-12);

  // <Λ_n, Λ_n'> = 2π δ on a 256-point grid, |n| ≤ 16.
  {
    const Grid fine(256);
    double dev = 0.0;
    for (int t = 0; t < 3; ++t) {
      const double phi0 = rnd.uniform(0.0, kTwoPi), xi0 = rnd.uniform(0.0, kTwoPi);
      const double theta0 = rnd.uniform(0.0, kTwoPi);
      for (const auto& fam : {BasisFamily::phase_form(fine, 16, phi0, xi0),
                              BasisFamily::exp_form(fine, 16, theta0)}) {
        const Eigen::MatrixXd g = gram(fam);
        dev = std::fmax(dev, (g - kTwoPi * Eigen::MatrixXd::Identity(g.rows(), g.cols()))
                                 .cwiseAbs()
                                 .maxCoeff());
      }
    }
    upper("basis_orthogonality", dev, 1e-10);
  }

  // Normal pairs: complex-symmetric blocks satisfying the block conditions,
  // and a generic pair that is not normal.
  {
    double normal = 0.0, witness = INFINITY;
    const int n = 4;
    for (int t = 0; t < 5; ++t) {
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) k(r, c) = k(c, r) = rnd.uniform();
      Eigen::MatrixXcd n1 = random_complex(rnd, n);
      n1 = (0.5 * (n1 + n1.transpose())).eval();
      const Eigen::MatrixXcd n0 =
          rnd.uniform() * Eigen::MatrixXcd::Identity(n, n) + Complex(0.0, 1.0) * k.cast<Complex>();
      normal = std::fmax(normal, normal_conditions({n0, n1}).full_commutator);
      witness = std::fmin(
          witness, normal_conditions({random_complex(rnd, n), random_complex(rnd, n)}).full_commutator);
    }
    upper("normal_commutator", normal, 1e-9);
    structural("non_normal_witness", witness, 1e-4, false);
  }

  // The short-time propagator preserves inner products for real U.
  {
    const Grid coarse(32);
    HamiltonianSpec spec(coarse);
    spec.V.resize(coarse.size());
    const double v1 = rnd.uniform(), v2 = rnd.uniform();
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      spec.V[k] = 1.0 + v1 * std::cos(coarse.node(k)) + v2 * std::sin(2.0 * coarse.node(k));
    }
    const QOperator u = short_time_propagator(spec, 1e-3, 200);
    double dev = 0.0;
    for (int t = 0; t < 5; ++t) {
      const QFunction p = rnd.band_limited(coarse, 3), q = rnd.band_limited(coarse, 3);
      dev = std::fmax(dev, std::fabs(inner(u(p), u(q)) - inner(p, q)) / (norm(p) * norm(q)));
    }
    upper("propagator_unitarity", dev, 1e-8);
  }

  // Composition of unit quaternions does not add angles.
  {
    const UnitQuaternion u{kTwoPi / 8.0, 0.0, 0.0};
    const UnitQuaternion v{kTwoPi / 8.0, kTwoPi / 4.0, 0.0};
    structural("unit_commutator", commutator_norm(u, v), 0.1, false);
    structural("angle_additivity_deviation", angle_additivity_deviation(u, v), 0.1, false);
  }

  std::size_t failed = 0;
  char line[256];
  for (auto& r : results) {
    if (r.overridable && opts.tol) r.limit = *opts.tol;
    const bool ok = r.upper ? r.value < r.limit : r.value > r.limit;
    if (!ok) {
      ++failed;
      err << "qqm check: " << r.name << " failed (value " << r.value << ")\n";
    }
    std::snprintf(line, sizeof line, "check %s %s value=%.6e limit=%s%.1e\n", r.name.c_str(),
                  ok ? "PASS" : "FAIL", r.value, r.upper ? "<" : ">", r.limit);
    out << line;
  }
  out << "summary passed=" << results.size() - failed << " failed=" << failed << '\n';
  return failed == 0 ? exit_code::kOk : exit_code::kCheckFailed;
}

}  // namespace qqm::cli
