#include "fogloss/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fogloss/error.hpp"

namespace fogloss::cli {

namespace {

constexpr std::string_view kKeys[] = {
    "lambda1",    "lambda2",   "mu1",         "mu2",         "c1",         "c2",     "p1",
    "p2",         "mode",      "sweep.param", "sweep.from",  "sweep.to",   "sweep.steps",
    "oracle.M",   "quad.tol",  "sim.N",       "sim.horizon", "sim.warmup", "sim.seed",
    "ring.nodes", "out",
};

struct Entry {
  std::string value;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void invalid(std::string_view fieldname, const std::string& why) {
  throw Error(ErrorCode::ValidationError, std::string(fieldname) + ": " + why);
}

[[noreturn]] void bad_line(int line, const std::string& why) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + why);
}

double to_double(std::string_view text, const Entry& e, std::string_view key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    bad_line(e.line, std::string(key) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long to_integer(std::string_view text, const Entry& e, std::string_view key) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    bad_line(e.line, std::string(key) + ": not an integer: '" + std::string(text) + "'");
  }
  return v;
}

Mode to_mode(const Entry& e) {
  static const std::map<std::string, Mode, std::less<>> modes = {
      {"analytic", Mode::analytic}, {"oracle", Mode::oracle}, {"simulate", Mode::simulate},
      {"exact", Mode::exact},       {"ring", Mode::ring},     {"check", Mode::check},
      {"sweep", Mode::sweep},
  };
  const auto it = modes.find(e.value);
  if (it == modes.end()) bad_line(e.line, "unknown mode '" + e.value + "'");
  return it->second;
}

bool is_system_field(std::string_view name) {
  for (auto f : kSystemFields) {
    if (f == name) return true;
  }
  return false;
}

void check_system_value(std::string_view name, double v) {
  if (name[0] == 'p') {
    if (!(v >= 0.0 && v <= 1.0)) invalid(name, "probability must lie in [0, 1]");
  } else if (!(v > 0.0)) {
    invalid(name, "must be > 0");
  }
}

ring::RingParams to_ring(const Entry& e) {
  ring::RingParams r;
  for (auto tuple : split(e.value, ';')) {
    if (tuple.empty()) continue;
    const auto parts = split(tuple, ',');
    if (parts.size() != 4) bad_line(e.line, "ring.nodes: expected lambda,mu,c,p in '" + std::string(tuple) + "'");
    r.nodes.push_back({to_double(parts[0], e, "ring.nodes"), to_double(parts[1], e, "ring.nodes"),
                       to_double(parts[2], e, "ring.nodes"), to_double(parts[3], e, "ring.nodes")});
  }
  try {
    r.validate();
  } catch (const Error& err) {
    invalid("ring.nodes", err.what());
  }
  return r;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::analytic: return "analytic";
    case Mode::oracle: return "oracle";
    case Mode::simulate: return "simulate";
    case Mode::exact: return "exact";
    case Mode::ring: return "ring";
    case Mode::check: return "check";
    case Mode::sweep: return "sweep";
  }
  return "analytic";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    v[static_cast<std::size_t>(k)] = k == steps - 1 ? to : from + (to - from) * k / (steps - 1);
  }
  return v;
}

double RunConfig::warmup_or_default() const { return warmup ? *warmup : 0.1 * horizon; }

double& field(SystemParams& p, std::string_view name) {
  if (name == "lambda1") return p.lambda1;
  if (name == "lambda2") return p.lambda2;
  if (name == "mu1") return p.mu1;
  if (name == "mu2") return p.mu2;
  if (name == "c1") return p.c1;
  if (name == "c2") return p.c2;
  if (name == "p1") return p.p1;
  if (name == "p2") return p.p2;
  throw Error(ErrorCode::ValidationError, "unknown parameter '" + std::string(name) + "'");
}

double field(const SystemParams& p, std::string_view name) { return field(const_cast<SystemParams&>(p), name); }

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) bad_line(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    bool known = false;
    for (auto k : kKeys) known = known || k == key;
    if (!known) bad_line(line_no, "unknown key '" + key + "'");
    if (value.empty()) bad_line(line_no, "empty value for '" + key + "'");
    if (entries.count(key)) bad_line(line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
  }

  RunConfig cfg;
  auto get = [&](std::string_view key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  const Entry* mode = get("mode");
  if (!mode) invalid("mode", "is required");
  cfg.mode = to_mode(*mode);

  if (cfg.mode == Mode::ring) {
    for (auto f : kSystemFields) {
      if (get(f)) invalid(f, "not used in ring mode");
    }
    for (auto k : {"sweep.param", "sweep.from", "sweep.to", "sweep.steps"}) {
      if (get(k)) invalid(k, "ring mode does not sweep");
    }
    const Entry* nodes = get("ring.nodes");
    if (!nodes) invalid("ring.nodes", "is required in ring mode");
    cfg.ring = to_ring(*nodes);
  } else {
    if (get("ring.nodes")) invalid("ring.nodes", "only used in ring mode");
    for (auto f : kSystemFields) {
      const Entry* e = get(f);
      if (!e) invalid(f, "is required");
      const auto parts = split(e->value, ',');
      std::vector<double> values;
      for (auto part : parts) {
        values.push_back(to_double(part, *e, f));
        check_system_value(f, values.back());
      }
      field(cfg.params, f) = values.front();
      if (values.size() > 1) {
        if (cfg.series) invalid(f, "only one parameter may list several values (already " + cfg.series->param + ")");
        cfg.series = Series{std::string(f), values};
      }
    }
  }

  const Entry* sp = get("sweep.param");
  const Entry* sf = get("sweep.from");
  const Entry* st = get("sweep.to");
  const Entry* ss = get("sweep.steps");
  if (sp || sf || st || ss) {
    for (auto [e, k] : {std::pair{sp, "sweep.param"}, {sf, "sweep.from"}, {st, "sweep.to"}, {ss, "sweep.steps"}}) {
      if (!e) invalid(k, "is required when sweeping");
    }
    SweepAxis axis;
    axis.param = sp->value;
    if (!is_system_field(axis.param)) invalid("sweep.param", "'" + axis.param + "' is not a system parameter");
    if (cfg.series && cfg.series->param == axis.param) {
      invalid("sweep.param", "'" + axis.param + "' is also given as a list");
    }
    axis.from = to_double(sf->value, *sf, "sweep.from");
    axis.to = to_double(st->value, *st, "sweep.to");
    const long long steps = to_integer(ss->value, *ss, "sweep.steps");
    if (steps < 2 || steps > 1000000) invalid("sweep.steps", "must be at least 2");
    axis.steps = static_cast<int>(steps);
    try {
      check_system_value(axis.param, axis.from);
    } catch (const Error&) {
      invalid("sweep.from", "out of range for " + axis.param);
    }
    try {
      check_system_value(axis.param, axis.to);
    } catch (const Error&) {
      invalid("sweep.to", "out of range for " + axis.param);
    }
    cfg.sweep = axis;
  } else if (cfg.mode == Mode::sweep) {
    invalid("sweep.param", "sweep mode needs a sweep axis");
  }

  if (const Entry* e = get("oracle.M")) {
    const long long m = to_integer(e->value, *e, "oracle.M");
    if (m < 2 || m > 20480) invalid("oracle.M", "must lie in [2, 20480]");
    cfg.oracle_M = static_cast<int>(m);
  }
  if (const Entry* e = get("quad.tol")) {
    cfg.tol_quad = to_double(e->value, *e, "quad.tol");
    if (!(cfg.tol_quad > 0.0 && cfg.tol_quad < 1.0)) invalid("quad.tol", "must lie in (0, 1)");
  }
  if (const Entry* e = get("sim.N")) {
    for (auto part : split(e->value, ',')) {
      const long long n = to_integer(part, *e, "sim.N");
      if (n < 1 || n > 1000000) invalid("sim.N", "must be a positive integer");
      cfg.sim_N.push_back(static_cast<int>(n));
    }
  }
  if (const Entry* e = get("sim.horizon")) {
    cfg.horizon = to_double(e->value, *e, "sim.horizon");
    if (!(cfg.horizon > 0.0)) invalid("sim.horizon", "must be > 0");
  }
  if (const Entry* e = get("sim.warmup")) {
    cfg.warmup = to_double(e->value, *e, "sim.warmup");
    if (!(*cfg.warmup >= 0.0 && *cfg.warmup < cfg.horizon)) invalid("sim.warmup", "must lie in [0, sim.horizon)");
  }
  if (const Entry* e = get("sim.seed")) {
    cfg.seeds.clear();
    for (auto part : split(e->value, ',')) {
      const long long s = to_integer(part, *e, "sim.seed");
      if (s < 0) invalid("sim.seed", "must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (const Entry* e = get("out")) cfg.out = e->value;

  if ((cfg.mode == Mode::simulate || cfg.mode == Mode::exact) && cfg.sim_N.empty()) {
    invalid("sim.N", "is required in " + std::string(to_string(cfg.mode)) + " mode");
  }
  if (cfg.mode == Mode::check && cfg.sim_N.empty()) cfg.sim_N = {100};
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace fogloss::cli
