#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fogloss/analytic.hpp"
#include "fogloss/config.hpp"

namespace fogloss::cli {

// One engine evaluated at one point. Missing numbers print as NA.
struct Row {
  std::optional<double> series;  // value of the listed parameter, if any
  std::optional<double> param;   // value of the swept parameter, if any
  std::string regime;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::optional<double> pi00;
  Method method = Method::analytic;
  std::optional<int> N;
  std::optional<double> hw1;
  std::optional<double> hw2;
  std::optional<double> max_disc;  // check mode: largest deviation from the analytic row
};

struct Table {
  std::string series_name;  // empty without a series
  std::string param_name;   // empty without a sweep
  bool with_N = false;
  bool with_ci = false;
  bool with_check = false;
  std::vector<Row> rows;
};

// Thread count for sweeps: FOGLOSS_THREADS if set, else the hardware count.
unsigned sweep_threads();

// Evaluates every (series value, sweep point) with the engines implied by the
// mode. Rows come out in sweep order whatever the thread count.
Table run_sweep(const RunConfig& cfg, unsigned threads = sweep_threads());

// Header `param regime beta1 beta2 pi00 method`, preceded by the series column
// when there is one and followed by N / hw1 hw2 / max_disc when requested.
void write_long(const Table& table, std::ostream& out);

// One row per sweep value, columns beta1_<series>_<value> and
// beta2_<series>_<value> (suffixed with the method when several engines ran).
void write_wide(const Table& table, std::ostream& out);

// Per-node ring table: header `node case beta method`, plus N and hw with
// simulation rows.
void write_ring(const RunConfig& cfg, std::ostream& out);

// Parameter grids of the published figures.
RunConfig figure_preset(std::string_view name);
Table emit_figure_presets(std::string_view name, unsigned threads = sweep_threads());

// %.10g, the precision of every number in the tables.
std::string format_number(double v);

}  // namespace fogloss::cli
