// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fogloss/analytic.hpp"
#include "fogloss/error.hpp"
#include "fogloss/kernel.hpp"
#include "fogloss/ring.hpp"
#include "fogloss/rwsolver.hpp"
#include "fogloss/simulator.hpp"

using namespace fogloss;
using kernel::complex;

namespace {

const SystemParams kFig2{4, 8, 1, 1, 1, 10, 1, 0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note("FAILED " + what);
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SystemParams with(SystemParams p, double lambda1, double p1) {
  p.lambda1 = lambda1;
  p.p1 = p1;
  return p;
}

// ---------------------------------------------------------------------------

Outcome algebraic_identities() {
  Outcome o;
  const std::vector<SystemParams> sets = {kFig2, {3.3, 7.1, 1.2, 0.8, 2.0, 9.0, 0.6, 0.3}, {4, 12, 1, 1, 1, 10, 0.35, 0.5}};
  o.require(kernel::eval_h(1, complex(1), complex(1), kFig2) == complex(0), "h1(1,1) = 0");
  // non-integer rates: the five terms cancel up to rounding
  double h11 = 0.0;
  for (const auto& p : sets) {
    h11 = std::max(h11, std::abs(kernel::eval_h(1, complex(1), complex(1), p)) / p.total_rate());
  }
  o.require(h11 <= 4 * std::numeric_limits<double>::epsilon(), "h1(1,1) = 0 up to rounding");
  o.note("h1(1,1) = 0 exactly at the figure point, max |h1(1,1)|/S = " + fmt("%.1e", h11));

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_lin = 0.0;
  for (const auto& p : sets) {
    const double c2 = p.lambda1 * p.p1 * (p.lambda1 + p.lambda2 * p.p2);
    const double c3 = p.lambda2 * p.p2 * (p.lambda2 + p.lambda1 * p.p1);
    const double c4 = p.lambda1 * p.lambda2 * (1 - p.p1 * p.p2);
    for (int k = 0; k < 100; ++k) {
      const complex x = std::polar(std::sqrt(u(rng)), 2 * M_PI * u(rng));
      const complex y = std::polar(std::sqrt(u(rng)), 2 * M_PI * u(rng));
      const complex r =
          c2 * kernel::eval_h(2, x, y, p) + c3 * kernel::eval_h(3, x, y, p) - c4 * kernel::eval_h(4, x, y, p);
      worst_lin = std::max(worst_lin, std::abs(r));
    }
  }
  o.require(worst_lin < 1e-12, "h2/h3/h4 relation");
  o.note("max |c2 h2 + c3 h3 - c4 h4| on the bidisk = " + fmt("%.2e", worst_lin));

  double worst_delta = 0.0;
  std::uniform_real_distribution<double> ux(-2.0, 45.0);
  for (const auto& p : sets) {
    const double S = p.total_rate();
    const double s = 2.0 * std::sqrt(p.a2() * p.lambda2);
    for (int k = 0; k < 100; ++k) {
      const double x = ux(rng);
      const double qm = p.a1() * x * x - (S - s) * x + p.lambda1;
      const double qp = p.a1() * x * x - (S + s) * x + p.lambda1;
      const double f = qm * qp;
      worst_delta = std::max(worst_delta, std::abs(kernel::delta2(x, p) - f) / std::max(std::abs(f), 1e-300));
    }
  }
  o.require(worst_delta < 1e-12, "Delta2 factorisation");
  o.note("max rel |Delta2 - q- q+| = " + fmt("%.2e", worst_delta));
  return o;
}

Outcome kernel_roots() {
  Outcome o;
  const SystemParams p = kFig2;
  const kernel::BranchPoints bp = kernel::branch_points(p);
  double circle = 0.0;
  double resid = 0.0;
  for (int k = 0; k < 32; ++k) {
    const double x = bp.x[0] + (bp.x[1] - bp.x[0]) * (k + 0.5) / 32;
    const complex y = kernel::Y0_upper(x, p);
    circle = std::max(circle, std::abs(std::abs(y) - bp.r2));
    const double ys = bp.y[0] + (bp.y[1] - bp.y[0]) * (k + 0.5) / 32;
    resid = std::max(resid, std::abs(kernel::eval_h(1, kernel::X0_upper(ys, p), complex(ys), p)));
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double product = 0.0;
  double other_root = 0.0;
  const double target = p.lambda2 / p.a2();
  for (int k = 0; k < 100; ++k) {
    const complex x(u(rng), u(rng));
    const complex y(u(rng), u(rng));
    resid = std::max(resid, std::abs(kernel::eval_h(1, kernel::X0(y, p), y, p)) / std::max(1.0, std::norm(y)));
    const complex y0 = kernel::Y0(x, p);
    // second root from the sum of the roots of h1(x, .)
    const complex y1 = (p.total_rate() * x - p.a1() * x * x - p.lambda1) / (p.a2() * x) - y0;
    product = std::max(product, std::abs(y0 * y1 - target) / target);
    other_root = std::max(other_root, std::abs(kernel::Y1(x, p) - y1) / std::max(1.0, std::abs(y1)));
  }
  o.require(circle < 1e-10, "|Y0(x+0i)| = r2");
  o.require(resid < 1e-10, "h1(X0(y), y) = 0");
  o.require(product < 1e-12, "Y0 Y1 = lambda2/(mu2 c2)");
  o.require(other_root < 1e-10, "Y1 is the second root");
  o.note("circle " + fmt("%.1e", circle) + ", h1 residual " + fmt("%.1e", resid) + ", product " +
         fmt("%.1e", product));
  return o;
}

struct GridPoint {
  SystemParams p;
  StationarySolution a;
  StationarySolution o;
};

std::vector<GridPoint> oracle_grid() {
  std::vector<SystemParams> pts = {kFig2};
  for (double p1 : {0.35, 0.7, 1.0}) {
    for (double l1 : {3.2, 3.8, 4.4, 5.0}) pts.push_back(with(kFig2, l1, p1));
  }
  std::vector<GridPoint> out;
  for (const auto& p : pts) out.push_back({p, analytic::blocking(p), rw::oracle_solution(p, {160})});
  return out;
}

Outcome oracle_equivalence(const std::vector<GridPoint>& grid) {
  Outcome o;
  double worst = 0.0;
  for (const auto& g : grid) {
    const double d = std::max({std::abs(g.a.pi00 - g.o.pi00), std::abs(g.a.P01 - g.o.P01),
                               std::abs(g.a.P10 - g.o.P10), std::abs(g.a.beta1 - g.o.beta1),
                               std::abs(g.a.beta2 - g.o.beta2)});
    worst = std::max(worst, d);
    o.require(d < 1e-4, "at " + g.p.describe() + " (" + fmt("%.2e", d) + ")");
  }
  o.note(std::to_string(grid.size()) + " points, max |analytic - oracle| = " + fmt("%.2e", worst));
  return o;
}

Outcome conservation(const std::vector<GridPoint>& grid) {
  Outcome o;
  double wa = 0.0;
  double wo = 0.0;
  int count = 0;
  for (const auto& g : grid) {
    if (!g.a.regime.saturated()) continue;
    ++count;
    const SystemParams& p = g.p;
    auto gap = [&](const StationarySolution& s) {
      return std::abs(p.lambda1 * (1 - s.beta1) + p.lambda2 * (1 - s.beta2) - p.a1() - p.a2());
    };
    wa = std::max(wa, gap(g.a));
    wo = std::max(wo, gap(g.o));
  }
  o.require(count > 0, "no saturated grid point");
  o.require(wa < 1e-10, "analytic throughput");
  o.require(wo < 1e-5, "oracle throughput");
  o.note(std::to_string(count) + " saturated points, analytic gap " + fmt("%.1e", wa) + ", oracle gap " +
         fmt("%.1e", wo));
  return o;
}

Outcome swap_symmetry() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int above = 0;  // lambda2 > mu2 c2
  int below = 0;
  double worst = 0.0;
  std::vector<SystemParams> sets;
  while (above + below < 10) {
    SystemParams p{0.5 + 5.5 * u(rng), 2 + 12 * u(rng), 0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng),
                   0.5 + 1.5 * u(rng), 3 + 7 * u(rng), u(rng), u(rng)};
    const Regime r = regime(p);
    if (!r.saturated() || r.margin < 0.02 || p.p1 * p.p2 > 0.95) continue;
    const bool hi = p.lambda2 > p.a2();
    if ((hi && above >= 5) || (!hi && below >= 5)) continue;
    (hi ? above : below)++;
    sets.push_back(p);
  }
  for (const auto& p : sets) {
    const StationarySolution s = analytic::blocking(p);
    const StationarySolution w = analytic::blocking(p.swapped());
    const double d =
        std::max({std::abs(s.pi00 - w.pi00), std::abs(s.beta1 - w.beta2), std::abs(s.beta2 - w.beta1)});
    worst = std::max(worst, d);
    o.require(d < 1e-8, "at " + p.describe());
  }
  o.note("5 + 5 sets on both sides of lambda2 = mu2 c2, max deviation " + fmt("%.1e", worst));
  return o;
}

// Lowest lambda1 in [lo, hi] at which the walk is saturated, exact signs.
double bisect_boundary(double p1, double lo, double hi) {
  for (int k = 0; k < 200 && hi - lo > 1e-13; ++k) {
    const double mid = 0.5 * (lo + hi);
    (regime(with(kFig2, mid, p1), 0.0).saturated() ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome regime_map() {
  Outcome o;
  for (const auto [p1, expect] : {std::pair{1.0, 3.0}, {0.7, 1.0 + 2.0 / 0.7}}) {
    const double b = bisect_boundary(p1, 2.0, 4.5);
    o.require(std::abs(b - expect) < 1e-9, "boundary for p1 = " + fmt("%g", p1));
    o.require(regime(with(kFig2, expect - 1e-3, p1)).tag == RegimeTag::B2, "B2 below the boundary");
    o.require(regime(with(kFig2, expect + 1e-3, p1)).tag == RegimeTag::E1, "E1 above the boundary");
    const double below = analytic::blocking(with(kFig2, expect - 1e-5, p1)).beta1;
    const double above = analytic::blocking(with(kFig2, expect + 1e-5, p1)).beta1;
    o.require(std::abs(above - below) < 1e-4, "beta1 continuity for p1 = " + fmt("%g", p1));
    o.note("p1=" + fmt("%g", p1) + ": boundary " + fmt("%.12f", b) + ", jump " + fmt("%.1e", std::abs(above - below)));
  }
  return o;
}

Outcome closed_forms() {
  Outcome o;
  const StationarySolution a = analytic::blocking({0.5, 5, 1, 1, 1, 10, 0.5, 0.5});
  o.require(a.regime.tag == RegimeTag::A && a.beta1 == 0.0 && a.beta2 == 0.0, "(A) gives zero loss");
  for (double p1 : {0.0, 0.35, 0.7, 1.0}) {
    const StationarySolution s = analytic::blocking(with(kFig2, 2.0, p1));
    o.require(s.regime.tag == RegimeTag::B2, "B2 at lambda1 = 2, p1 = " + fmt("%g", p1));
    o.require(s.beta1 == (1 - p1) * (1 - 1.0 / 2.0), "beta1 = (1 - p1)/2 at p1 = " + fmt("%g", p1));
    o.require(s.beta2 == 0.0, "beta2 = 0 in B2");
  }
  const SystemParams e{4, 12, 1, 1, 1, 10, 0, 0};
  const StationarySolution d = analytic::blocking(e);
  o.require(d.beta1 == 1 - e.a1() / e.lambda1, "decoupled beta1");
  o.require(d.beta2 == 1 - e.a2() / e.lambda2, "decoupled beta2");
  o.note("A, B2 (4 values of p1) and decoupled Erlang limits exact");
  return o;
}

Outcome finite_n() {
  Outcome o;
  const StationarySolution lim = analytic::blocking(kFig2);
  double prev1 = 1.0;
  double prev2 = 1.0;
  std::string errs;
  for (int N : {25, 50, 100, 200}) {
    const auto b = sim::exact_finite(sim::FiniteSystem::scaled(kFig2, N));
    const double e1 = std::abs(b.beta1 - lim.beta1);
    const double e2 = std::abs(b.beta2 - lim.beta2);
    o.require(e1 < prev1 && e2 < prev2, "error decreasing at N = " + std::to_string(N));
    if (N == 200) o.require(e1 < 0.02 && e2 < 0.02, "error below 0.02 at N = 200");
    prev1 = e1;
    prev2 = e2;
    errs += (errs.empty() ? "" : ", ") + std::to_string(N) + ":" + fmt("%.4f", std::max(e1, e2));
  }
  o.note("exact |beta^N - beta| " + errs);

  const auto sys = sim::FiniteSystem::scaled(kFig2, 100);
  const auto s = sim::simulate_two(sys, 1e4, sim::default_warmup(1e4), 2024);
  const double z1 = std::abs(s.beta1_hat - lim.beta1) / s.half_width1;
  const double z2 = std::abs(s.beta2_hat - lim.beta2) / s.half_width2;
  o.require(z1 <= 3 && z2 <= 3, "simulation at N = 100 within 3 half-widths of the limit");
  const auto ex = sim::exact_finite(sys);
  o.note("simulation N=100: beta1 " + fmt("%.5f", s.beta1_hat) + " +- " + fmt("%.5f", s.half_width1) + " (" +
         fmt("%.1f", z1) + " hw from the limit, " + fmt("%.1f", std::abs(s.beta1_hat - ex.beta1) / s.half_width1) +
         " hw from exact N=100), beta2 " + fmt("%.5f", s.beta2_hat) + " +- " + fmt("%.5f", s.half_width2) + " (" +
         fmt("%.1f", z2) + " hw, " + fmt("%.1f", std::abs(s.beta2_hat - ex.beta2) / s.half_width2) +
         " hw from exact)");
  return o;
}

Outcome functional_equation() {
  Outcome o;
  const rw::WalkParams w = rw::WalkParams::at_capacity(kFig2);
  double worst[2] = {0.0, 0.0};
  int k = 0;
  for (int M : {160, 320}) {
    const rw::LatticeDistribution d = rw::stationary_truncated(w, {M});
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; j <= 4; ++j) {
        worst[k] = std::max(worst[k], rw::functional_equation_residual(d, i / 4.0, j / 4.0, w));
      }
    }
    ++k;
  }
  o.require(worst[0] < 1e-6, "residual below 1e-6 at M = 160");
  o.require(worst[1] <= 0.5 * worst[0], "residual halves when M doubles");
  o.note("max residual on the 5x5 grid: M=160 " + fmt("%.2e", worst[0]) + ", M=320 " + fmt("%.2e", worst[1]));
  return o;
}

Outcome ring_check() {
  Outcome o;
  constexpr int N = 4000;
  constexpr double horizon = 1000;
  auto within = [&](const ring::RingParams& r, const char* name) {
    const ring::RingSolution a = ring::ring_blocking(r);
    const auto est = sim::simulate_ring(r, N, horizon, sim::default_warmup(horizon), 17);
    double worst = 0.0;
    for (std::size_t j = 0; j < est.size(); ++j) {
      const double gap = std::abs(est[j].beta_hat - a.beta[j]);
      const bool ok = gap <= 3 * est[j].half_width;
      o.require(ok, std::string(name) + " node " + std::to_string(j));
      if (est[j].half_width > 0) worst = std::max(worst, gap / est[j].half_width);
    }
    o.note(std::string(name) + " " + std::string(ring::to_string(a.classification.tag)) + ": max " +
           fmt("%.1f", worst) + " hw");
    return a;
  };
  const ring::RingParams single{{{2, 1, 1, 0.25}, {1, 1, 10, 0.25}, {1, 1, 10, 0.25}, {1, 1, 10, 0.25}}};
  const ring::RingSolution s = within(single, "case 2");
  o.require(s.classification.tag == ring::RingCase::single_saturated, "case 2 classification");
  o.require(std::abs(s.beta[0] - (1 - 2 * 0.25) * (1 - 1.0 / 2)) < 1e-15, "case 2 formula");

  const ring::RingParams pair{{{3, 1, 1, 0.5}, {9.5, 1, 10, 0.2}, {2, 1, 5, 0.25}, {2, 1, 5, 0.25}}};
  const ring::RingSolution q = within(pair, "case 3");
  o.require(q.classification.tag == ring::RingCase::pair_saturated, "case 3 classification");
  // the pair's pi00 from the lattice oracle
  const StationarySolution orc = rw::oracle_solution(pair.pair(0), {160});
  o.require(std::abs(orc.pi00 - q.pair_solutions[0]->pi00) < 1e-4, "case 3 pair pi00 against the oracle");
  return o;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  using clock = std::chrono::steady_clock;
  std::vector<GridPoint> grid;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "algebraic identities", 1, algebraic_identities},
      {2, "kernel roots", 1, kernel_roots},
      {3, "analytic vs truncated lattice", 120,
       [&] {
         grid = oracle_grid();
         return oracle_equivalence(grid);
       }},
      {4, "throughput conservation", 0, [&] { return conservation(grid); }},
      {5, "swap symmetry", 0, swap_symmetry},
      {6, "regime map", 0, regime_map},
      {7, "closed-form regimes", 0, closed_forms},
      {8, "finite-N convergence", 300, finite_n},
      {9, "functional-equation residual", 0, functional_equation},
      {10, "ring", 300, ring_check},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.note("FAILED runtime limit " + fmt("%g", c.limit_s) + " s");
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  criterion %2d  %-30s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
