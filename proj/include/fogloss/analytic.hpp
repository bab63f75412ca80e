#pragma once

#include <complex>
#include <optional>
#include <string_view>

#include "fogloss/params.hpp"

namespace fogloss {

// Which stability/saturation region a parameter set falls into.
//   E1: lambda2 < mu2 c2 and the spill from #1 saturates #2
//   E2: lambda1 < mu1 c1 and the spill from #2 saturates #1
//   E3: both centers overloaded
//   A : both underloaded
//   B1: #2 overloaded, #1 absorbs the spill
//   B2: #1 overloaded, #2 absorbs the spill
enum class RegimeTag { E1, E2, E3, A, B1, B2, Critical };

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::Critical;
  // Smallest relative slack among the inequalities that decide the tag.
  double margin = 0.0;

  bool saturated() const {
    return tag == RegimeTag::E1 || tag == RegimeTag::E2 || tag == RegimeTag::E3;
  }
};

inline constexpr double kRegimeEps = 1e-9;

// eps = 0 gives the exact sign classification (Critical only on exact ties).
Regime regime(const SystemParams& params, double eps = kRegimeEps);

enum class Method { analytic, oracle, simulation, exact };

std::string_view to_string(Method method);

// Limiting quantities of the idle-server walk observed at the capacities.
// P01 = pi(m1 = 0), P10 = pi(m2 = 0), pi00 = pi(0, 0). Outside the saturated
// regimes these are the masses of the degenerate limit laws.
struct StationarySolution {
  double pi00 = 0.0;
  double P01 = 0.0;
  double P10 = 0.0;
  std::optional<double> phiY1;  // only for E1/E2/E3 and the analytic method
  double beta1 = 0.0;
  double beta2 = 0.0;
  Regime regime;
  Method method = Method::analytic;
};

namespace analytic {

inline constexpr double kDefaultQuadTol = 1e-10;

double R_Y(double x, const SystemParams& params);

// Argument in [0, pi] of the jump of the Riemann-Hilbert problem on the upper
// edge of [x1, x2]. Throws DomainError outside the cut.
double theta_Y(double x, const SystemParams& params);

// exp((y/pi) * int_{x1}^{x2} (mu1 c1 x^2 - lambda1) theta_Y(x) / (x h1(x, y)) dx)
// for real y. The quadrature runs in the variable x = m + h sin(t), which
// removes the square-root behaviour of theta_Y at both ends.
double phi_Y(double y, const SystemParams& params, double tol_quad = kDefaultQuadTol);

std::complex<double> alpha_Y(std::complex<double> y, const SystemParams& params);
double alpha_Y(double y, const SystemParams& params);

// pi_c(0,0) from phi_Y(1); requires a saturated regime (WrongRegime otherwise).
double pi00(const SystemParams& params, double tol_quad = kDefaultQuadTol);
// Same, from an already computed phi_Y(1); no regime check.
double pi00_from_phi(const SystemParams& params, double phi1);

struct BoundaryMasses {
  double P01 = 0.0;
  double P10 = 0.0;
};

// Masses pi(m1=0), pi(m2=0) implied by pi00 through the normalisation
// identities. Throws OutOfRange when either leaves [0, 1].
BoundaryMasses boundary_masses(const SystemParams& params, double pi00);

// Limiting blocking probabilities for every non-critical regime.
StationarySolution blocking(const SystemParams& params, double tol_quad = kDefaultQuadTol);

// Generating function P(0, y) for real y, continued outside the disk of radius
// r2 through alpha_Y.
double P0y(double y, const SystemParams& params, double tol_quad = kDefaultQuadTol);

}  // namespace analytic
}  // namespace fogloss
