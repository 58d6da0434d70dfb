#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qqm/config.hpp"
#include "qqm/csv.hpp"
#include "qqm/errors.hpp"
#include "qqm/expression.hpp"
#include "qqm/fourier.hpp"
#include "random.hpp"

using namespace qqm;

TEST_CASE("expression grammar") {
  const auto at = [](const char* text, double x) { return Expression::parse(text)(x); };
  CHECK(at("1 + 2 * 3", 0) == 7.0);
  CHECK(at("(1 + 2) * 3", 0) == 9.0);
  CHECK(at("2 ^ 3 ^ 2", 0) == 512.0);
  CHECK(at("-2 ^ 2", 0) == -4.0);
  CHECK(at("8 / 4 / 2", 0) == 1.0);
  CHECK(at("1 - 2 - 3", 0) == -4.0);
  CHECK(at("+x", 1.5) == 1.5);
}

TEST_CASE("expression functions and constants") {
  const auto at = [](const char* text, double x) { return Expression::parse(text)(x); };
  CHECK(at("sin(x)", 0.3) == std::sin(0.3));
  CHECK(at("cos(2*x) + exp(-x)", 0.7) == std::cos(1.4) + std::exp(-0.7));
  CHECK(at("pi", 0) == M_PI);
  CHECK(at("e", 0) == M_E);
  CHECK(at("1.5e-3 * x", 2.0) == doctest::Approx(3e-3));
  CHECK(Expression::parse(" exp( cos(x) ) ").text() == " exp( cos(x) ) ");
}

TEST_CASE("expression errors carry the position") {
  for (const char* bad : {"", "1 +", "sin x", "(1", "1)", "2x", "foo(1)", "y", "1 $ 2"}) {
    CHECK_THROWS_AS(Expression::parse(bad), ConfigError);
  }
  try {
    Expression::parse("1 + * 2");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("key-value config") {
  const auto cfg = KeyValueConfig::parse(
      "# comment\n"
      "n_points = 64   # trailing comment\n"
      "\n"
      "  mass=2.5\n"
      "flag = yes\n"
      "expr = sin(x) + 1\n");
  CHECK(cfg.integer("n_points") == 64);
  CHECK(cfg.number("mass") == 2.5);
  CHECK(cfg.boolean("flag", false));
  CHECK(cfg.string("expr") == "sin(x) + 1");
  CHECK(cfg.number("absent", 7.0) == 7.0);
  CHECK_FALSE(cfg.optional("absent"));
  CHECK_THROWS_AS(cfg.number("absent"), ConfigError);
  CHECK_THROWS_AS(cfg.integer("mass"), ConfigError);
  CHECK_THROWS_AS(cfg.number("expr"), ConfigError);
  CHECK_THROWS_AS(cfg.reject_unknown({"n_points", "mass"}), ConfigError);
  CHECK_NOTHROW(cfg.reject_unknown({"n_points", "mass", "flag", "expr"}));

  CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse(" = 3\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/qqm.cfg"), ConfigError);
}

TEST_CASE("config paths resolve against the file's directory") {
  const auto dir = std::filesystem::temp_directory_path() / "qqm_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "data = samples.csv\n";
  }
  const auto cfg = KeyValueConfig::load(dir / "run.cfg");
  CHECK(cfg.path("data") == dir / "samples.csv");
}

TEST_CASE("double formatting round-trips") {
  qqm::testing::Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    const double v = std::ldexp(rng.uniform(), rng.integer(-300, 300));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1).size() >= 17);
}

TEST_CASE("QFunction CSV round-trip") {
  qqm::testing::Rng rng(32);
  const Grid g(16);
  const QFunction f = rng.band_limited(g, 3);
  std::stringstream ss;
  write_qfunction_csv(ss, f);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  CHECK(header == "x,x0,x1,x2,x3");
  const QFunction back = read_qfunction_csv(ss);
  CHECK(back.grid() == g);
  CHECK(max_distance(back, f) == 0.0);
}

TEST_CASE("QFunction CSV validation") {
  std::stringstream missing("x,x0,x1,x2\n0,1,2,3\n");
  CHECK_THROWS_AS(read_qfunction_csv(missing), ConfigError);
  std::stringstream wrong_nodes("x,x0,x1,x2,x3\n0,1,0,0,0\n0.5,1,0,0,0\n1,1,0,0,0\n1.5,1,0,0,0\n");
  CHECK_THROWS_AS(read_qfunction_csv(wrong_nodes), ConfigError);
  std::stringstream bad_number("x,x0,x1,x2,x3\n0,abc,0,0,0\n");
  CHECK_THROWS_AS(read_qfunction_csv(bad_number), ConfigError);
  std::stringstream ragged("x,x0,x1,x2,x3\n0,1,0,0\n");
  CHECK_THROWS_AS(read_qfunction_csv(ragged), ConfigError);
}

TEST_CASE("generic CSV tables skip comments") {
  std::stringstream ss("# produced by a test\na,b\n1,2\n# mid comment\n3,4\n");
  const CsvTable t = read_csv(ss);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][t.column("b")] == 4.0);
  CHECK_THROWS_AS(t.column("c"), ConfigError);
}

TEST_CASE("expansion files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "qqm_io_test";
  std::filesystem::create_directories(dir);
  const Grid g(32);
  for (const auto& fam : {BasisFamily::phase_form(g, 3, 0.4, ParamFunction::expression("sin(x)")),
                          BasisFamily::exp_form(g, 2, 0.9),
                          BasisFamily::two_index(g, 2, 0.3).with_indices(staircase_indices(2, 7)),
                          BasisFamily::three_index(g, 1, 2)}) {
    qqm::testing::Rng rng(33);
    std::vector<double> a(fam.size());
    for (double& v : a) v = rng.uniform();
    const auto path = dir / ("expansion_" + to_string(fam.kind()) + ".csv");
    write_expansion(path, {fam, a});
    CHECK(std::filesystem::exists(path.string() + ".meta"));
    const QFourierExpansion back = read_expansion(path);
    CHECK(back.family.kind() == fam.kind());
    CHECK(back.family.indices() == fam.indices());
    CHECK(back.coefficients == a);
    CHECK(max_distance(synthesize(back), synthesize({fam, a})) == 0.0);
  }
}

TEST_CASE("parameter functions serialize") {
  const Grid g(8);
  const auto c = ParamFunction::deserialize(ParamFunction(0.25).serialize());
  CHECK(c.is_constant());
  CHECK(c.constant_value() == 0.25);
  const auto e = ParamFunction::deserialize(ParamFunction::expression("cos(x)").serialize());
  CHECK(e.at(g, 3) == std::cos(g.node(3)));
  const auto s = ParamFunction::deserialize(ParamFunction::samples({1, 2, 3, 4, 5, 6, 7, 0.1}).serialize());
  CHECK(s.at(g, 7) == 0.1);
  CHECK_THROWS_AS(ParamFunction::deserialize("nonsense"), ConfigError);
}
