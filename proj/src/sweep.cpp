#include "fogloss/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <thread>

#include "fogloss/error.hpp"
#include "fogloss/rwsolver.hpp"
#include "fogloss/simulator.hpp"

namespace fogloss::cli {

namespace {

// Oracle boxes can hold several hundred MB of level matrices each.
constexpr unsigned kMaxOracleThreads = 2;

struct Point {
  std::optional<double> series;
  std::optional<double> param;
  int index = 0;
  SystemParams params;
};

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

// Drops the "Code: " prefix the Error constructor adds, so that annotated
// messages carry it once.
std::string bare_message(const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  return msg;
}

std::string describe_point(const Point& pt, const RunConfig& cfg) {
  std::string s;
  if (pt.series) s += cfg.series->param + "=" + format_number(*pt.series);
  if (pt.param) s += (s.empty() ? "" : " ") + cfg.sweep->param + "=" + format_number(*pt.param);
  return s.empty() ? pt.params.describe() : s;
}

std::vector<Method> engines(Mode mode) {
  switch (mode) {
    case Mode::analytic:
    case Mode::sweep: return {Method::analytic};
    case Mode::oracle: return {Method::oracle};
    case Mode::simulate: return {Method::simulation};
    case Mode::exact: return {Method::exact};
    case Mode::check: return {Method::analytic, Method::oracle, Method::exact};
    case Mode::ring: break;
  }
  throw Error(ErrorCode::ValidationError, "mode: ring output is not a sweep table");
}

Row base_row(const Point& pt, Method m, const Regime& reg) {
  Row r;
  r.series = pt.series;
  r.param = pt.param;
  r.regime = std::string(to_string(reg.tag));
  r.method = m;
  return r;
}

void fill(Row& r, const StationarySolution& s) {
  r.beta1 = s.beta1;
  r.beta2 = s.beta2;
  r.pi00 = s.pi00;
}

std::vector<Row> evaluate(const Point& pt, const RunConfig& cfg) {
  const Regime reg = regime(pt.params);
  std::vector<Row> rows;
  for (const Method m : engines(cfg.mode)) {
    const bool finite = m == Method::simulation || m == Method::exact;
    const std::vector<int> Ns = finite ? cfg.sim_N : std::vector<int>{0};
    for (const int N : Ns) {
      Row r = base_row(pt, m, reg);
      if (finite) r.N = N;
      if (reg.tag != RegimeTag::Critical) {
        switch (m) {
          case Method::analytic: fill(r, analytic::blocking(pt.params, cfg.tol_quad)); break;
          case Method::oracle: {
            rw::TruncationOptions opts;
            opts.M = cfg.oracle_M;
            fill(r, rw::oracle_solution(pt.params, opts));
            break;
          }
          case Method::exact: {
            const auto b = sim::exact_finite(sim::FiniteSystem::scaled(pt.params, N));
            r.beta1 = b.beta1;
            r.beta2 = b.beta2;
            break;
          }
          case Method::simulation: {
            const auto sys = sim::FiniteSystem::scaled(pt.params, N);
            const auto e = cfg.seeds.size() == 1
                               ? sim::simulate_two(sys, cfg.horizon, cfg.warmup_or_default(), cfg.seeds.front())
                               : sim::simulate_two_replicated(sys, cfg.horizon, cfg.warmup_or_default(), cfg.seeds);
            r.beta1 = e.beta1_hat;
            r.beta2 = e.beta2_hat;
            r.hw1 = e.half_width1;
            r.hw2 = e.half_width2;
            break;
          }
        }
      }
      rows.push_back(std::move(r));
    }
  }
  if (cfg.mode == Mode::check && reg.tag != RegimeTag::Critical) {
    const Row ref = rows.front();
    for (Row& r : rows) {
      double d = std::max(std::abs(*r.beta1 - *ref.beta1), std::abs(*r.beta2 - *ref.beta2));
      if (r.pi00) d = std::max(d, std::abs(*r.pi00 - *ref.pi00));
      r.max_disc = d;
    }
  }
  return rows;
}

std::vector<Point> points(const RunConfig& cfg) {
  std::vector<std::optional<double>> svals{std::nullopt};
  if (cfg.series) svals.assign(cfg.series->values.begin(), cfg.series->values.end());
  std::vector<std::optional<double>> xvals{std::nullopt};
  if (cfg.sweep) {
    const auto v = cfg.sweep->values();
    xvals.assign(v.begin(), v.end());
  }
  std::vector<Point> pts;
  for (const auto& s : svals) {
    int index = 0;
    for (const auto& x : xvals) {
      Point pt{s, x, index++, cfg.params};
      if (s) field(pt.params, cfg.series->param) = *s;
      if (x) field(pt.params, cfg.sweep->param) = *x;
      pts.push_back(pt);
    }
  }
  return pts;
}

std::string wide_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("FOGLOSS_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw Error(ErrorCode::ValidationError, "FOGLOSS_THREADS: must be a positive integer");
    }
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Table run_sweep(const RunConfig& cfg, unsigned threads) {
  const std::vector<Point> pts = points(cfg);
  const auto used = engines(cfg.mode);
  if (std::find(used.begin(), used.end(), Method::oracle) != used.end()) {
    threads = std::min(threads, kMaxOracleThreads);
  }
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(pts.size()));

  std::vector<std::vector<Row>> results(pts.size());
  std::vector<std::exception_ptr> errors(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < pts.size(); k = next++) {
      try {
        results[k] = evaluate(pts[k], cfg);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  Table table;
  if (cfg.series) table.series_name = cfg.series->param;
  if (cfg.sweep) table.param_name = cfg.sweep->param;
  table.with_N = cfg.mode == Mode::simulate || cfg.mode == Mode::exact || cfg.mode == Mode::check;
  table.with_ci = cfg.mode == Mode::simulate;
  table.with_check = cfg.mode == Mode::check;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (errors[k]) {
      try {
        std::rethrow_exception(errors[k]);
      } catch (const Error& e) {
        throw Error(e.code(), "at " + describe_point(pts[k], cfg) + ": " + bare_message(e));
      }
    }
    for (Row& r : results[k]) table.rows.push_back(std::move(r));
  }
  return table;
}

void write_long(const Table& t, std::ostream& out) {
  if (!t.series_name.empty()) out << t.series_name << '\t';
  out << "param\tregime\tbeta1\tbeta2\tpi00\tmethod";
  if (t.with_N) out << "\tN";
  if (t.with_ci) out << "\thw1\thw2";
  if (t.with_check) out << "\tmax_disc";
  out << '\n';
  for (const Row& r : t.rows) {
    if (!t.series_name.empty()) out << cell(r.series) << '\t';
    out << cell(r.param) << '\t' << r.regime << '\t' << cell(r.beta1) << '\t' << cell(r.beta2) << '\t'
        << cell(r.pi00) << '\t' << to_string(r.method);
    if (t.with_N) out << '\t' << (r.N ? std::to_string(*r.N) : "NA");
    if (t.with_ci) out << '\t' << cell(r.hw1) << '\t' << cell(r.hw2);
    if (t.with_check) out << '\t' << cell(r.max_disc);
    out << '\n';
  }
}

void write_wide(const Table& t, std::ostream& out) {
  // Column key: method, N and series value. Keys and sweep values keep
  // first-seen order, which is sweep order.
  std::vector<std::string> keys;
  std::vector<std::optional<double>> params;
  std::map<std::pair<std::string, std::string>, const Row*> cells;
  bool several_methods = false;
  for (const Row& r : t.rows) several_methods = several_methods || r.method != t.rows.front().method || r.N != t.rows.front().N;

  for (const Row& r : t.rows) {
    std::string key;
    if (!t.series_name.empty()) key = "_" + t.series_name + "_" + wide_value(*r.series);
    if (several_methods) {
      key += "_" + std::string(to_string(r.method));
      if (r.N) key += "_N" + std::to_string(*r.N);
    }
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    const std::string pkey = cell(r.param);
    if (std::none_of(params.begin(), params.end(), [&](const auto& p) { return cell(p) == pkey; })) {
      params.push_back(r.param);
    }
    cells[{pkey, key}] = &r;
  }

  out << (t.param_name.empty() ? "param" : t.param_name);
  for (const auto& k : keys) out << "\tbeta1" << k << "\tbeta2" << k;
  out << '\n';
  for (const auto& p : params) {
    const std::string pkey = cell(p);
    out << pkey;
    for (const auto& k : keys) {
      const auto it = cells.find({pkey, k});
      if (it == cells.end()) {
        out << "\tNA\tNA";
      } else {
        out << '\t' << cell(it->second->beta1) << '\t' << cell(it->second->beta2);
      }
    }
    out << '\n';
  }
}

void write_ring(const RunConfig& cfg, std::ostream& out) {
  const ring::RingClassification cls = ring::classify_ring(cfg.ring);
  std::vector<std::optional<double>> beta(static_cast<std::size_t>(cfg.ring.J()));
  if (cls.tag != ring::RingCase::critical) {
    const auto sol = ring::ring_blocking(cfg.ring, cfg.tol_quad);
    for (std::size_t j = 0; j < beta.size(); ++j) beta[j] = sol.beta[j];
  }
  const bool sim = !cfg.sim_N.empty();
  out << "node\tcase\tbeta\tmethod" << (sim ? "\tN\thw" : "") << '\n';
  const std::string tag(ring::to_string(cls.tag));
  for (std::size_t j = 0; j < beta.size(); ++j) {
    out << j << '\t' << tag << '\t' << cell(beta[j]) << "\tanalytic" << (sim ? "\tNA\tNA" : "") << '\n';
  }
  for (const int N : cfg.sim_N) {
    // independent replications: mean estimate, pooled half-width
    std::vector<double> mean(beta.size(), 0.0), hw2(beta.size(), 0.0);
    for (const auto seed : cfg.seeds) {
      const auto est = sim::simulate_ring(cfg.ring, N, cfg.horizon, cfg.warmup_or_default(), seed);
      for (std::size_t j = 0; j < beta.size(); ++j) {
        mean[j] += est[j].beta_hat;
        hw2[j] += est[j].half_width * est[j].half_width;
      }
    }
    const double n = static_cast<double>(cfg.seeds.size());
    for (std::size_t j = 0; j < beta.size(); ++j) {
      out << j << '\t' << tag << '\t' << format_number(mean[j] / n) << "\tsimulation\t" << N << '\t'
          << format_number(std::sqrt(hw2[j]) / n) << '\n';
    }
  }
}

RunConfig figure_preset(std::string_view name) {
  RunConfig cfg;
  cfg.mode = Mode::sweep;
  cfg.params = {1, 8, 1, 1, 1, 10, 0, 0};
  if (name == "fig2" || name == "fig3") {
    cfg.params.lambda2 = name == "fig2" ? 8.0 : 12.0;
    cfg.series = Series{"p1", {0.0, 0.35, 0.7, 1.0}};
    cfg.sweep = SweepAxis{"lambda1", 1.0, 5.0, 41};
  } else if (name == "fig4") {
    cfg.params.lambda1 = 1.2;
    cfg.series = Series{"lambda2", {9.9, 11.0}};
    cfg.sweep = SweepAxis{"p1", 0.0, 1.0, 21};
  } else {
    throw Error(ErrorCode::ValidationError, "preset: unknown figure '" + std::string(name) + "'");
  }
  return cfg;
}

Table emit_figure_presets(std::string_view name, unsigned threads) { return run_sweep(figure_preset(name), threads); }

}  // namespace fogloss::cli
