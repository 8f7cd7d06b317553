#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "otmap/cli.hpp"
#include "otmap/config.hpp"
#include "otmap/errors.hpp"

using namespace otmap;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/otmap_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# experiment\n"
      "potential = gaussian(1)\n"
      "perturbation = cosine-bump(0.2,1)  # trailing comment\n"
      "n = 5\n"
      "grid_size = 1025\n"
      "span = 6\n");
  const ExperimentConfig cfg = ExperimentConfig::parse(in);
  CHECK(cfg.potential == "gaussian(1)");
  CHECK(cfg.perturbation == "cosine-bump(0.2,1)");
  CHECK(cfg.n == 5);
  CHECK(cfg.grid_size == 1025);
  CHECK(cfg.span == 6.0);

  SUBCASE("unknown keys are rejected") {
    std::istringstream bad("waterline = 3\n");
    CHECK_THROWS_AS(ExperimentConfig::parse(bad), ConfigError);
  }
  SUBCASE("unknown catalog names are rejected") {
    std::istringstream bad("potential = cauchy(1)\n");
    CHECK_THROWS_AS(ExperimentConfig::parse(bad), ConfigError);
  }
  SUBCASE("bound parameters fall back to declared constants") {
    const PogorelovParams p = cfg.bound_params();
    CHECK(p.lambda == 1.0);
    CHECK(p.Lambda == 1.0);
    CHECK(p.R == 1.0);
    CHECK(p.lambda_q > 0.0);
  }
}

TEST_CASE("transport1d with identical measures emits the identity") {
  TempFile cfg("id.cfg"), out("id.csv");
  write_file(cfg.path, "grid_size = 513\n");
  CHECK(cli::run({"transport1d", "--config", cfg.path, "--out", out.path}) == 0);
  std::ifstream in(out.path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "x,T,logTprime,phi_source,phi_target_at_T,residual_mass_balance");
  double x, T, ld, ps, pt, res;
  char comma;
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> x >> comma >> T >> comma >> ld >> comma >> ps >> comma >> pt >>
        comma >> res;
    CHECK(std::fabs(T - x) <= 1e-12 * (1.0 + std::fabs(x)));
    CHECK(std::fabs(res) <= 1e-12);
    ++rows;
  }
  CHECK(rows == 513);
}

TEST_CASE("bounds --json reproduces the golden parameters") {
  TempFile out("bounds.json");
  CHECK(cli::run({"bounds", "--R", "1", "--lambda", "1", "--Lambda", "1",
                  "--lambda-q", "1", "--json", "--out", out.path}) == 0);
  const auto j = nlohmann::json::parse(slurp(out.path));
  CHECK(j["P"] == 8.0);
  CHECK(j["Q"] == 2.5);
  CHECK(j["overflowed"] == false);
}

TEST_CASE("psi subcommand emits the profile samples") {
  TempFile out("psi.csv");
  CHECK(cli::run({"psi", "--R", "1", "--lambda", "1", "--Lambda", "1",
                  "--lambda-q", "1", "--out", out.path}) == 0);
  std::ifstream in(out.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,theta,psi_prime,psi");
}

TEST_CASE("radial subcommand writes eigenvalue columns") {
  TempFile cfg("rad.cfg"), out("rad.csv");
  write_file(cfg.path,
             "potential = gaussian(1)\nperturbation = cosine-bump(0.2,1.5)\n"
             "grid_size = 257\n");
  CHECK(cli::run({"radial", "--config", cfg.path, "--n", "3", "--out",
                  out.path}) == 0);
  std::ifstream in(out.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,Tprofile,radial_eig,tangential_eig,lower_bound,upper_bound");
}

TEST_CASE("verify exits zero on the built-in catalog") {
  TempFile cfg("v.cfg"), out("v.json");
  write_file(cfg.path,
             "potential = gaussian(1)\nperturbation = cosine-bump(0.2,1)\n"
             "grid_size = 1025\n");
  CHECK(cli::run({"verify", "--suite", "thm12", "--config", cfg.path, "--json",
                  "--out", out.path}) == 0);
  const auto arr = nlohmann::json::parse(slurp(out.path));
  REQUIRE(arr.is_array());
  for (const auto& o : arr) CHECK(o["passed"] == true);
}

TEST_CASE("sweep rows and the empty sweep") {
  TempFile cfg("s.cfg"), out("s.csv");
  write_file(cfg.path,
             "potential = gaussian(1)\nperturbation = cosine-bump(0.2,1)\n"
             "grid_size = 513\n");
  SUBCASE("height sweep stays under the 2h column") {
    CHECK(cli::run({"sweep", "--config", cfg.path, "--axis", "height",
                    "--values", "0.05,0.1,0.2", "--out", out.path}) == 0);
    std::ifstream in(out.path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "value,measured,bound,margin");
    int rows = 0;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      double v, m, b, margin;
      char c;
      ls >> v >> c >> m >> c >> b >> c >> margin;
      CHECK(m <= b + 1e-8);
      CHECK(b == doctest::Approx(v));  // one-signed bump: bound is the height
      ++rows;
    }
    CHECK(rows == 3);
  }
  SUBCASE("empty value list emits only the header") {
    CHECK(cli::run({"sweep", "--config", cfg.path, "--axis", "height",
                    "--values", "", "--out", out.path}) == 0);
    CHECK(slurp(out.path) == "value,measured,bound,margin\n");
  }
}

TEST_CASE("usage and config errors exit with 2") {
  CHECK(cli::run({}) == 2);
  CHECK(cli::run({"unknown-subcommand"}) == 2);
  CHECK(cli::run({"bounds", "--R", "1"}) == 2);  // missing required flags
  TempFile cfg("bad.cfg");
  write_file(cfg.path, "potential = gaussian(-1)\n");
  CHECK(cli::run({"transport1d", "--config", cfg.path}) == 2);
  CHECK(cli::run({"verify", "--suite", "bogus"}) == 2);
  CHECK(cli::run({"--help"}) == 0);
}

TEST_CASE("re-running a subcommand is byte-identical") {
  TempFile cfg("det.cfg"), out1("det1.csv"), out2("det2.csv");
  write_file(cfg.path,
             "potential = quartic-regularized(1,0.2)\n"
             "perturbation = odd-bump(0.3,1)\ngrid_size = 1025\n");
  CHECK(cli::run({"transport1d", "--config", cfg.path, "--out", out1.path}) == 0);
  CHECK(cli::run({"transport1d", "--config", cfg.path, "--out", out2.path}) == 0);
  CHECK(slurp(out1.path) == slurp(out2.path));

  TempFile j1("det1.json"), j2("det2.json");
  CHECK(cli::run({"verify", "--suite", "lemma51", "--json", "--out", j1.path}) == 0);
  CHECK(cli::run({"verify", "--suite", "lemma51", "--json", "--out", j2.path}) == 0);
  CHECK(slurp(j1.path) == slurp(j2.path));
}
