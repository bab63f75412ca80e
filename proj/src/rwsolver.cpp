#include "fogloss/rwsolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fogloss/error.hpp"
#include "fogloss/grid_chain.hpp"
#include "fogloss/kernel.hpp"

namespace fogloss::rw {

WalkParams WalkParams::at_capacity(const SystemParams& s) {
  return {s.lambda1, s.lambda2, s.mu1, s.mu2, s.c1, s.c2, s.p1, s.p2};
}

SystemParams WalkParams::as_system() const { return {lambda1, lambda2, mu1, mu2, l1, l2, p1, p2}; }

void WalkParams::validate() const { as_system().validate(); }

std::string_view to_string(WalkClass tag) {
  switch (tag) {
    case WalkClass::ergodic: return "ergodic";
    case WalkClass::absorbed_at_infinity: return "absorbed_at_infinity";
    case WalkClass::transient1_geometric2: return "transient1_geometric2";
    case WalkClass::transient2_geometric1: return "transient2_geometric1";
    case WalkClass::critical: return "critical";
  }
  return "critical";
}

WalkClassification classify_walk(const WalkParams& w, double eps) {
  // The cases are the same sign pattern as the saturation regimes, read for
  // the walk at level l.
  const Regime r = regime(w.as_system(), eps);
  WalkClassification c;
  switch (r.tag) {
    case RegimeTag::E1:
    case RegimeTag::E2:
    case RegimeTag::E3:
      c.tag = WalkClass::ergodic;
      break;
    case RegimeTag::A:
      c.tag = WalkClass::absorbed_at_infinity;
      break;
    case RegimeTag::B2:
      c.tag = WalkClass::transient1_geometric2;
      c.geometric_parameter = w.up1() / w.lambda1;
      break;
    case RegimeTag::B1:
      c.tag = WalkClass::transient2_geometric1;
      c.geometric_parameter = w.up2() / w.lambda2;
      break;
    case RegimeTag::Critical:
      c.tag = WalkClass::critical;
      break;
  }
  return c;
}

LatticeDistribution solve_box(const WalkParams& w, int M1, int M2) {
  w.validate();
  if (M1 < 1 || M2 < 1) throw Error(ErrorCode::DomainError, "truncation extents must be >= 1");
  const double up1 = w.up1();
  const double up2 = w.up2();
  markov::GridChain chain;
  chain.n1 = static_cast<std::size_t>(M1) + 1;
  chain.n2 = static_cast<std::size_t>(M2) + 1;
  chain.rate = [&](std::size_t i, std::size_t j, markov::Move move) -> double {
    switch (move) {
      case markov::Move::Up1: return up1;
      case markov::Move::Up2: return up2;
      case markov::Move::Down1: return w.lambda1 + (j == 0 ? w.p2 * w.lambda2 : 0.0);
      case markov::Move::Down2: return w.lambda2 + (i == 0 ? w.p1 * w.lambda1 : 0.0);
    }
    return 0.0;
  };

  LatticeDistribution d;
  d.M1 = M1;
  d.M2 = M2;
  d.prob = markov::stationary(chain);
  const double most_negative = d.prob.minCoeff();
  if (most_negative < -1e-15) {
    throw Error(ErrorCode::SingularSystem,
                "truncated solve produced a negative entry " + std::to_string(most_negative));
  }
  d.prob = d.prob.cwiseMax(0.0);
  d.prob /= d.prob.sum();
  d.pi00 = d.prob(0, 0);
  d.mass_m1_0 = d.prob.row(0).sum();
  d.mass_m2_0 = d.prob.col(0).sum();
  return d;
}

namespace {

double change(const LatticeDistribution& a, const LatticeDistribution& b) {
  return std::max({std::abs(a.pi00 - b.pi00), std::abs(a.mass_m1_0 - b.mass_m1_0),
                   std::abs(a.mass_m2_0 - b.mass_m2_0)});
}

constexpr double kTailMass = 1e-8;

// Largest entry on the outer two lines orthogonal to `axis`.
double tail(const LatticeDistribution& d, int axis) {
  return axis == 1 ? d.prob.bottomRows(2).maxCoeff() : d.prob.rightCols(2).maxCoeff();
}

double work(int M1, int M2) {
  const double n1 = M1 + 1.0;
  const double n2 = M2 + 1.0;
  const double phases = std::min(n1, n2);
  return std::max(n1, n2) * phases * phases * phases;
}

}  // namespace

LatticeDistribution stationary_truncated(const WalkParams& w, const TruncationOptions& opts) {
  if (opts.M < 8) throw Error(ErrorCode::DomainError, "truncation M must be >= 8");
  if (classify_walk(w).tag == WalkClass::critical) {
    throw Error(ErrorCode::CriticalRegime, "walk is on a stability boundary");
  }
  // An ergodic walk must also have let its tail die out along each axis; in
  // the transient classes the escaping mass piles up at the box edge instead.
  const bool ergodic = classify_walk(w).tag == WalkClass::ergodic;
  LatticeDistribution cur = solve_box(w, opts.M, opts.M);
  bool done1 = false;
  bool done2 = false;
  while (!(done1 && done2)) {
    for (int axis = 1; axis <= 2; ++axis) {
      bool& done = (axis == 1) ? done1 : done2;
      if (done) continue;
      const int n1 = axis == 1 ? 2 * cur.M1 : cur.M1;
      const int n2 = axis == 2 ? 2 * cur.M2 : cur.M2;
      if (std::max(n1, n2) > opts.max_extent || work(n1, n2) > opts.max_work) {
        throw Error(ErrorCode::TruncationNotConverged,
                    "box " + std::to_string(cur.M1) + "x" + std::to_string(cur.M2) +
                        " not converged within the truncation budget");
      }
      LatticeDistribution next = solve_box(w, n1, n2);
      if (change(next, cur) < opts.tol && (!ergodic || tail(cur, axis) < kTailMass)) {
        done = true;
      } else {
        cur = std::move(next);
      }
    }
  }
  return cur;
}

double functional_equation_residual(const LatticeDistribution& d, double x, double y,
                                    const WalkParams& w) {
  const SystemParams s = w.as_system();
  const Eigen::Index n1 = d.prob.rows();
  const Eigen::Index n2 = d.prob.cols();
  auto horner_row = [&](Eigen::Index i) {
    double acc = 0.0;
    for (Eigen::Index j = n2; j-- > 0;) acc = acc * y + d.prob(i, j);
    return acc;
  };
  double pxy = 0.0;
  for (Eigen::Index i = n1; i-- > 0;) pxy = pxy * x + horner_row(i);
  double px0 = 0.0;
  for (Eigen::Index i = n1; i-- > 0;) px0 = px0 * x + d.prob(i, 0);
  const double p0y = horner_row(0);
  using kernel::eval_h;
  return std::abs(eval_h(1, x, y, s) * pxy - eval_h(2, x, y, s) * px0 - eval_h(3, x, y, s) * p0y -
                  eval_h(4, x, y, s) * d.pi00);
}

StationarySolution oracle_solution(const SystemParams& params, const TruncationOptions& opts) {
  const Regime r = regime(params);
  if (r.tag == RegimeTag::Critical) {
    throw Error(ErrorCode::CriticalRegime, "oracle refused on a regime boundary: " + params.describe());
  }
  const LatticeDistribution d = stationary_truncated(WalkParams::at_capacity(params), opts);
  StationarySolution s;
  s.method = Method::oracle;
  s.regime = r;
  s.pi00 = d.pi00;
  s.P01 = d.mass_m1_0;
  s.P10 = d.mass_m2_0;
  s.beta1 = s.P01 * (1.0 - params.p1) + params.p1 * s.pi00;
  s.beta2 = s.P10 * (1.0 - params.p2) + params.p2 * s.pi00;
  return s;
}

}  // namespace fogloss::rw
