#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "fogloss/analytic.hpp"
#include "fogloss/params.hpp"

// Brute-force view of the limiting idle-server walk: classification of its
// long-run behaviour and truncated stationary solves.
namespace fogloss::rw {

// Walk observed at occupancy levels l = (l1, l2). Idle servers are created at
// rate mu_i l_i and consumed by arrivals, with the boundary spill terms.
struct WalkParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  static WalkParams at_capacity(const SystemParams& params);
  // The kernel algebra of the walk is that of a system with c = l.
  SystemParams as_system() const;

  double up1() const { return mu1 * l1; }
  double up2() const { return mu2 * l2; }
  void validate() const;
};

enum class WalkClass {
  ergodic,
  absorbed_at_infinity,
  // coordinate 1 geometric with parameter mu1 l1 / lambda1, coordinate 2 at infinity
  transient1_geometric2,
  // coordinate 2 geometric with parameter mu2 l2 / lambda2, coordinate 1 at infinity
  transient2_geometric1,
  critical,
};

std::string_view to_string(WalkClass tag);

struct WalkClassification {
  WalkClass tag = WalkClass::critical;
  std::optional<double> geometric_parameter;
};

WalkClassification classify_walk(const WalkParams& walk, double eps = kRegimeEps);

// Stationary law of the walk restricted to {0..M1} x {0..M2} with the jumps
// leaving the box suppressed.
struct LatticeDistribution {
  int M1 = 0;
  int M2 = 0;
  Eigen::MatrixXd prob;  // (M1 + 1) x (M2 + 1)
  double pi00 = 0.0;
  double mass_m1_0 = 0.0;  // pi(m1 = 0)
  double mass_m2_0 = 0.0;  // pi(m2 = 0)

  int M() const { return M1 > M2 ? M1 : M2; }
  double total() const { return prob.sum(); }
};

// One solve on a fixed box.
LatticeDistribution solve_box(const WalkParams& walk, int M1, int M2);

struct TruncationOptions {
  int M = 160;                // starting extent of both axes
  double tol = 1e-6;          // max change of pi00 and boundary masses under doubling
  int max_extent = 20480;     // per axis
  double max_work = 6e10;     // levels * phases^3 budget of a single solve
};

// Starts from the square box of side M and doubles each axis separately until
// doubling it changes pi00, pi(m1=0) and pi(m2=0) by less than tol and, for an
// ergodic walk, its outer two lines hold entries below 1e-8. Only the
// critical class is refused: in the transient directions the boundary masses
// converge to those of the limit law as well.
// Throws TruncationNotConverged, CriticalRegime, SingularSystem.
LatticeDistribution stationary_truncated(const WalkParams& walk, const TruncationOptions& opts = {});

// |h1 P(x,y) - h2 P(x,0) - h3 P(0,y) - h4 P(0,0)| with every generating
// function summed over the truncated grid.
double functional_equation_residual(const LatticeDistribution& dist, double x, double y,
                                    const WalkParams& walk);

// Blocking probabilities assembled from a truncated solve at l = c.
StationarySolution oracle_solution(const SystemParams& params, const TruncationOptions& opts = {});

}  // namespace fogloss::rw
