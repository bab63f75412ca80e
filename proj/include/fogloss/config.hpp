#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogloss/params.hpp"
#include "fogloss/ring.hpp"

namespace fogloss::cli {

enum class Mode { analytic, oracle, simulate, exact, ring, check, sweep };

std::string_view to_string(Mode mode);

// Evenly spaced values of one system parameter, endpoints included.
struct SweepAxis {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;

  std::vector<double> values() const;
};

// A system parameter given as a comma-separated list: the sweep is repeated
// once per value (the curves of one figure).
struct Series {
  std::string param;
  std::vector<double> values;
};

struct RunConfig {
  Mode mode = Mode::analytic;
  SystemParams params;
  std::optional<Series> series;
  std::optional<SweepAxis> sweep;

  int oracle_M = 160;
  double tol_quad = 1e-10;
  std::vector<int> sim_N;
  double horizon = 1e4;
  std::optional<double> warmup;  // default: a tenth of the horizon
  std::vector<std::uint64_t> seeds{1};

  ring::RingParams ring;
  std::string out;  // empty: standard output

  double warmup_or_default() const;
};

// Names accepted by sweep.param and as a series.
inline constexpr std::string_view kSystemFields[] = {"lambda1", "lambda2", "mu1", "mu2",
                                                     "c1",      "c2",      "p1",  "p2"};

double& field(SystemParams& params, std::string_view name);
double field(const SystemParams& params, std::string_view name);

// `key = value` lines, `#` comments. Throws Error(ParseError) with the line
// number for malformed or unknown input and Error(ValidationError) naming the
// offending field.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

}  // namespace fogloss::cli
