#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "fogloss/config.hpp"
#include "fogloss/error.hpp"
#include "fogloss/sweep.hpp"

using namespace fogloss;
using namespace fogloss::cli;

namespace {

const std::string kPoint =
    "lambda1 = 4\nlambda2 = 8\nc1 = 1\nc2 = 10\nmu1 = 1\nmu2 = 1\np1 = 1\np2 = 0\nmode = analytic\n";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

Error error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("config accepted");
  return Error(ErrorCode::ValidationError, "");
}

std::string long_table(const RunConfig& cfg, unsigned threads = 1) {
  std::ostringstream out;
  write_long(run_sweep(cfg, threads), out);
  return out.str();
}

std::vector<std::vector<std::string>> cells(const std::string& tsv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, '\t')) row.push_back(f);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("figure point config") {
  const RunConfig cfg = parse_config(kPoint);
  CHECK(cfg.mode == Mode::analytic);
  CHECK(cfg.params.lambda1 == 4.0);
  CHECK(cfg.params.lambda2 == 8.0);
  CHECK(cfg.params.c2 == 10.0);
  CHECK(cfg.params.p1 == 1.0);
  CHECK(!cfg.sweep);
  CHECK(!cfg.series);
  const auto t = cells(long_table(cfg));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == std::vector<std::string>{"param", "regime", "beta1", "beta2", "pi00", "method"});
  CHECK(t[1][1] == "E1");
  CHECK(t[1][5] == "analytic");
}

TEST_CASE("configuration errors") {
  const Error missing = error_of(replace(kPoint, "mu2 = 1\n", ""));
  CHECK(missing.code() == ErrorCode::ValidationError);
  CHECK(std::string(missing.what()).find("mu2") != std::string::npos);

  const Error prob = error_of(replace(kPoint, "p1 = 1", "p1 = 1.5"));
  CHECK(prob.code() == ErrorCode::ValidationError);
  CHECK(std::string(prob.what()).find("p1") != std::string::npos);

  const Error unknown = error_of(kPoint + "\n# fine\nlambda3 = 2\n");
  CHECK(unknown.code() == ErrorCode::ParseError);
  CHECK(std::string(unknown.what()).find("line 12") != std::string::npos);

  CHECK(error_of(kPoint + "mu1 = 2\n").code() == ErrorCode::ParseError);
  CHECK(error_of(kPoint + "oracle.M = many\n").code() == ErrorCode::ParseError);
  CHECK(error_of(kPoint + "no equals sign\n").code() == ErrorCode::ParseError);
  CHECK(error_of(replace(kPoint, "mode = analytic", "mode = plot")).code() == ErrorCode::ParseError);
  CHECK(error_of(replace(kPoint, "lambda1 = 4", "lambda1 = -4")).code() == ErrorCode::ValidationError);
  CHECK(error_of(replace(kPoint, "mode = analytic", "mode = sweep")).code() == ErrorCode::ValidationError);
  CHECK(error_of(kPoint + "sweep.param = lambda1\nsweep.from = 1\nsweep.to = 2\nsweep.steps = 1\n").code() ==
        ErrorCode::ValidationError);
  CHECK(error_of(kPoint + "sweep.param = gamma\nsweep.from = 1\nsweep.to = 2\nsweep.steps = 3\n").code() ==
        ErrorCode::ValidationError);
  CHECK(error_of(kPoint + "sweep.param = p2\nsweep.from = 0\nsweep.to = 2\nsweep.steps = 3\n").code() ==
        ErrorCode::ValidationError);
  CHECK(error_of(kPoint + "sweep.param = lambda1\nsweep.from = 1\n").code() == ErrorCode::ValidationError);
  CHECK(error_of(replace(kPoint, "mode = analytic", "mode = exact")).code() == ErrorCode::ValidationError);
  CHECK(error_of(replace(kPoint, "p1 = 1", "p1 = 0, 1") + "p2 = 0.1, 0.2\n").code() == ErrorCode::ParseError);
  CHECK(error_of(replace(replace(kPoint, "p1 = 1", "p1 = 0, 1"), "p2 = 0", "p2 = 0.1, 0.2")).code() ==
        ErrorCode::ValidationError);
  CHECK(error_of("mode = ring\nring.nodes = 1,1,1,0.7; 1,1,1,0; 1,1,1,0\n").code() == ErrorCode::ValidationError);
  CHECK(error_of("mode = ring\nring.nodes = 1,1,1\n").code() == ErrorCode::ParseError);
}

TEST_CASE("single point sweep gives identical rows") {
  RunConfig cfg = parse_config(kPoint + "sweep.param = lambda1\nsweep.from = 4.4\nsweep.to = 4.4\nsweep.steps = 2\n");
  const auto t = cells(long_table(cfg));
  REQUIRE(t.size() == 3);
  CHECK(t[1] == t[2]);
  CHECK(t[1][0] == "4.4");
}

TEST_CASE("critical points print NA") {
  RunConfig cfg = parse_config(kPoint + "sweep.param = lambda1\nsweep.from = 2.5\nsweep.to = 3.5\nsweep.steps = 3\n");
  const auto t = cells(long_table(cfg));
  REQUIRE(t.size() == 4);
  CHECK(t[1][1] == "B2");
  CHECK(t[2][1] == "critical");
  CHECK(t[2][2] == "NA");
  CHECK(t[2][3] == "NA");
  CHECK(t[2][4] == "NA");
  CHECK(t[3][1] == "E1");
}

TEST_CASE("tables are deterministic and round-trip") {
  RunConfig cfg = parse_config(replace(kPoint, "p1 = 1", "p1 = 0, 0.7, 1") +
                               "sweep.param = lambda1\nsweep.from = 1.5\nsweep.to = 5\nsweep.steps = 8\n");
  const std::string one = long_table(cfg, 1);
  CHECK(one == long_table(cfg, 3));
  const auto t = cells(one);
  CHECK(t[0][0] == "p1");
  CHECK(t.size() == 1 + 3 * 8);
  for (std::size_t r = 1; r < t.size(); ++r) {
    for (std::size_t c : {1u, 3u, 4u, 5u}) {
      if (t[r][c] == "NA") continue;
      CHECK(format_number(std::strtod(t[r][c].c_str(), nullptr)) == t[r][c]);
    }
  }
  CHECK(one.find('\r') == std::string::npos);
}

TEST_CASE("check mode appends discrepancies") {
  RunConfig cfg = parse_config(replace(kPoint, "mode = analytic", "mode = check") + "sim.N = 10\n");
  const auto t = cells(long_table(cfg));
  REQUIRE(t.size() == 4);
  CHECK(t[0].back() == "max_disc");
  CHECK(t[1][5] == "analytic");
  CHECK(t[2][5] == "oracle");
  CHECK(t[3][5] == "exact");
  CHECK(t[3][6] == "10");
  CHECK(t[1].back() == "0");
  CHECK(std::strtod(t[2].back().c_str(), nullptr) < 1e-4);
  CHECK(t[3][4] == "NA");
}

TEST_CASE("simulate mode reports half-widths") {
  RunConfig cfg = parse_config(replace(kPoint, "mode = analytic", "mode = simulate") +
                               "sim.N = 5, 10\nsim.horizon = 200\nsim.seed = 4\n");
  const auto t = cells(long_table(cfg));
  REQUIRE(t.size() == 3);
  CHECK(t[0] == std::vector<std::string>{"param", "regime", "beta1", "beta2", "pi00", "method", "N", "hw1", "hw2"});
  CHECK(t[1][6] == "5");
  CHECK(t[2][6] == "10");
  CHECK(t[1][5] == "simulation");
  CHECK(std::strtod(t[1][7].c_str(), nullptr) > 0.0);
}

TEST_CASE("figure 2 preset") {
  const Table t = emit_figure_presets("fig2", 2);
  CHECK(t.rows.size() == 41 * 4);
  // rows: p1 in {0, 0.35, 0.7, 1}, each over 41 values of lambda1
  for (int k = 0; k < 41; ++k) {
    for (int s = 1; s < 4; ++s) {
      const Row& lo = t.rows[static_cast<std::size_t>((s - 1) * 41 + k)];
      const Row& hi = t.rows[static_cast<std::size_t>(s * 41 + k)];
      if (lo.beta1 && hi.beta1) CHECK(*hi.beta1 <= *lo.beta1 + 1e-12);
    }
  }
  // regime change from B2 to E at lambda1 = 3 (p1 = 1) and 1 + 2/0.7 (p1 = 0.7)
  CHECK(t.rows[3 * 41 + 19].regime == "B2");
  CHECK(t.rows[3 * 41 + 20].regime == "critical");
  CHECK(t.rows[3 * 41 + 21].regime == "E1");
  CHECK(t.rows[2 * 41 + 28].regime == "B2");
  CHECK(t.rows[2 * 41 + 29].regime == "E1");
  std::ostringstream wide;
  write_wide(t, wide);
  const auto w = cells(wide.str());
  CHECK(w.size() == 42);
  CHECK(w[0] == std::vector<std::string>{"lambda1", "beta1_p1_0.00", "beta2_p1_0.00", "beta1_p1_0.35",
                                         "beta2_p1_0.35", "beta1_p1_0.70", "beta2_p1_0.70", "beta1_p1_1.00",
                                         "beta2_p1_1.00"});
}

TEST_CASE("figure 4 preset endpoints") {
  const Table t = emit_figure_presets("fig4", 1);
  REQUIRE(t.rows.size() == 2 * 21);
  CHECK(t.rows[0].regime == "B2");
  CHECK(*t.rows[0].beta1 == doctest::Approx(1 - 1 / 1.2).epsilon(1e-12));
  CHECK(*t.rows[0].beta2 == 0.0);
  for (int k = 21; k < 42; ++k) CHECK(*t.rows[static_cast<std::size_t>(k)].beta2 > 0.0);
  CHECK_THROWS_AS(figure_preset("fig9"), Error);
}

TEST_CASE("ring mode") {
  RunConfig cfg = parse_config("mode = ring\nring.nodes = 2,1,1,0.25; 1,1,10,0.25; 1,1,10,0.25; 1,1,10,0.25\n");
  CHECK(cfg.ring.J() == 4);
  std::ostringstream out;
  write_ring(cfg, out);
  const auto t = cells(out.str());
  REQUIRE(t.size() == 5);
  CHECK(t[0] == std::vector<std::string>{"node", "case", "beta", "method"});
  CHECK(t[1] == std::vector<std::string>{"0", "single_saturated", "0.25", "analytic"});
  CHECK(t[2][2] == "0");
}
