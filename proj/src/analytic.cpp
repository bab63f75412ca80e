#include "fogloss/analytic.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fogloss/error.hpp"
#include "fogloss/kernel.hpp"

namespace fogloss {

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::E1: return "E1";
    case RegimeTag::E2: return "E2";
    case RegimeTag::E3: return "E3";
    case RegimeTag::A: return "A";
    case RegimeTag::B1: return "B1";
    case RegimeTag::B2: return "B2";
    case RegimeTag::Critical: return "critical";
  }
  return "critical";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::analytic: return "analytic";
    case Method::oracle: return "oracle";
    case Method::simulation: return "simulation";
    case Method::exact: return "exact";
  }
  return "analytic";
}

namespace {

// Signed slack of lhs > rhs, relative to the size of both sides.
double rel_slack(double lhs, double rhs) { return (lhs - rhs) / (std::abs(lhs) + std::abs(rhs)); }

}  // namespace

Regime regime(const SystemParams& p, double eps) {
  p.validate();
  const double a1 = p.a1();
  const double a2 = p.a2();
  const double s1 = rel_slack(p.lambda1, a1);
  const double s2 = rel_slack(p.lambda2, a2);
  // spill of #1 into #2, spill of #2 into #1
  const double s12 = rel_slack(p.lambda1 * p.p1 + p.lambda2, a1 * p.p1 + a2);
  const double s21 = rel_slack(p.lambda1 + p.lambda2 * p.p2, a1 + a2 * p.p2);

  Regime out;
  double deciding = 0.0;
  if (s1 > 0.0 && s2 > 0.0) {
    out.tag = RegimeTag::E3;
    deciding = std::min(s1, s2);
  } else if (s1 < 0.0 && s2 < 0.0) {
    out.tag = RegimeTag::A;
    deciding = std::min(-s1, -s2);
  } else if (s1 > 0.0 && s2 < 0.0) {
    out.tag = s12 > 0.0 ? RegimeTag::E1 : RegimeTag::B2;
    deciding = std::min({s1, -s2, std::abs(s12)});
  } else if (s1 < 0.0 && s2 > 0.0) {
    out.tag = s21 > 0.0 ? RegimeTag::E2 : RegimeTag::B1;
    deciding = std::min({-s1, s2, std::abs(s21)});
  }
  out.margin = deciding;
  if (deciding <= eps) out.tag = RegimeTag::Critical;

#ifndef NDEBUG
  if (out.tag == RegimeTag::E1) assert(p.lambda2 < a2 && p.lambda1 > a1);
  if (out.tag == RegimeTag::E2) assert(p.lambda1 < a1 && p.lambda2 > a2);
#endif
  return out;
}

namespace analytic {

namespace {

double one_minus_p1p2(const SystemParams& p) {
  const double q = 1.0 - p.p1 * p.p2;
  if (q <= 0.0) {
    throw Error(ErrorCode::DomainError,
                "p1 = p2 = 1 makes the boundary equations singular (1 - p1 p2 = 0)");
  }
  return q;
}

// theta_Y without the domain check; the square root is clipped at the ends.
double theta_unchecked(double x, const SystemParams& p) {
  const double q = 1.0 - p.p1 * p.p2;
  const double num = q * std::sqrt(std::max(-kernel::delta2(x, p), 0.0));
  const double den = q * kernel::b2(x, p) - 2.0 * R_Y(x, p);
  return std::atan2(num, den);
}

// h1(., y) as a quadratic A x^2 + B x + C, with its real zeros if any.
struct XQuadratic {
  double A = 0.0, B = 0.0, C = 0.0;
  bool real = false;
  double r[2] = {0.0, 0.0};
};

XQuadratic h1_in_x(double y, const SystemParams& p) {
  XQuadratic h;
  h.A = -p.a1() * y;
  h.B = p.total_rate() * y - p.a2() * y * y - p.lambda2;
  h.C = -p.lambda1 * y;
  const double disc = h.B * h.B - 4 * h.A * h.C;
  if (h.A != 0.0 && h.C != 0.0 && disc >= 0.0) {
    const double q = -0.5 * (h.B + std::copysign(std::sqrt(disc), h.B));
    h.real = true;
    h.r[0] = q / h.A;
    h.r[1] = h.C / q;
  }
  return h;
}

// Breakpoints in t (x = m + h sin t) for the phi_Y quadrature. A zero of h1
// at distance d outside an end of [x1, x2] makes the integrand vary on a scale
// sqrt(2 d / h) in t near that end; the breakpoints grade geometrically
// towards the end from that scale.
std::vector<double> breakpoints(double x1, double x2, const XQuadratic& h1) {
  const double h = 0.5 * (x2 - x1);
  const double half_pi = std::numbers::pi / 2;
  std::vector<double> cuts{-half_pi, half_pi};
  if (h1.real) {
    for (const double r : h1.r) {
      const bool above = r > x2;
      const double d = above ? r - x2 : x1 - r;
      if (!(d > 0.0)) continue;
      for (double u = std::sqrt(2 * d / h); u < 0.5; u *= 4) {
        cuts.push_back(above ? half_pi - u : -half_pi + u);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

void require_saturated(const SystemParams& p, const Regime& r, const char* what) {
  if (r.tag == RegimeTag::Critical) {
    throw Error(ErrorCode::CriticalRegime,
                std::string(what) + " refused on a regime boundary: " + p.describe());
  }
  if (!r.saturated()) {
    throw Error(ErrorCode::WrongRegime, std::string(what) + " requires regime E1/E2/E3, got " +
                                            std::string(to_string(r.tag)));
  }
}

}  // namespace

double R_Y(double x, const SystemParams& p) {
  const double spill = p.lambda2 + p.lambda1 * p.p1;
  return p.p1 * p.a1() * (1.0 - p.p2) * x * x +
         (p.p1 * p.p2 * (p.a1() + p.a2()) - (1.0 - p.p2) * spill) * x - p.p2 * spill;
}

double theta_Y(double x, const SystemParams& p) {
  const kernel::BranchPoints bp = kernel::branch_points(p);
  const double tol = 1e-12 * (bp.x[1] - bp.x[0]);
  if (x < bp.x[0] - tol || x > bp.x[1] + tol) {
    throw Error(ErrorCode::DomainError, "theta_Y requires x in [x1, x2], got " + std::to_string(x));
  }
  return theta_unchecked(x, p);
}

double phi_Y(double y, const SystemParams& p, double tol_quad) {
  if (y == 0.0) return 1.0;
  const kernel::BranchPoints bp = kernel::branch_points(p);
  const double half = 0.5 * (bp.x[1] - bp.x[0]);
  const double a1 = p.a1();

  // Pole guard on a fine grid of the integration interval: a sign change of h1,
  // or |h1| within 1e-8 of zero where Theta_Y does not vanish with it. A zero
  // just outside an endpoint where Theta_Y -> 0 leaves the integrand bounded.
  const double scale = p.total_rate() * std::max(1.0, y * y);
  constexpr int kGuard = 512;
  double prev = 0.0;
  for (int k = 0; k <= kGuard; ++k) {
    const double x = bp.x[0] + (bp.x[1] - bp.x[0]) * k / kGuard;
    const double h1 = kernel::eval_h(1, x, y, p);
    const bool tiny = std::abs(h1) < 1e-8 * scale * x && theta_unchecked(x, p) > 1e-6;
    if (tiny || (k > 0 && h1 * prev < 0.0)) {
      throw Error(ErrorCode::SingularIntegrand,
                  "h1(x, y) vanishes on [x1, x2] at y = " + std::to_string(y));
    }
    prev = h1;
  }

  // Near the ends both sqrt(-Delta2) and h1 are small; they are evaluated from
  // their factored forms with the distances to the ends taken from half-angle
  // sines, so the ratio is free of cancellation.
  const double x1 = bp.x[0];
  const double x2 = bp.x[1];
  const double q = 1.0 - p.p1 * p.p2;
  const XQuadratic hq = h1_in_x(y, p);
  auto integrand = [&](double t) {
    const double s_lo = std::sin(0.5 * (t + std::numbers::pi / 2));
    const double s_hi = std::sin(0.5 * (std::numbers::pi / 2 - t));
    const double from_lo = 2 * half * s_lo * s_lo;  // x - x1
    const double from_hi = 2 * half * s_hi * s_hi;  // x2 - x
    const double x = t < 0.0 ? x1 + from_lo : x2 - from_hi;
    const double neg_delta = a1 * a1 * from_lo * from_hi * (bp.x[2] - x) * (bp.x[3] - x);
    const double theta =
        std::atan2(q * std::sqrt(neg_delta), q * kernel::b2(x, p) - 2.0 * R_Y(x, p));
    double h1 = 0.0;
    if (hq.real) {
      h1 = hq.A;
      for (const double r : hq.r) {
        if (r > x2) {
          h1 *= -((r - x2) + from_hi);
        } else if (r < x1) {
          h1 *= (x1 - r) + from_lo;
        } else {
          h1 *= x - r;
        }
      }
    } else {
      h1 = kernel::eval_h(1, x, y, p);
    }
    return (a1 * x * x - p.lambda1) * theta / (x * h1) * half * std::cos(t);
  };

  using boost::math::quadrature::gauss_kronrod;
  const double exponent_scale = std::abs(y) / std::numbers::pi;
  // Relative target for the integral, floored above roundoff: pushing it to
  // 1e-14 only makes the bisection chase noise.
  const double rel_tol = std::clamp(1e-2 * tol_quad, 1e-13, 1e-6);
  double integral = 0.0;
  double error = 0.0;
  const std::vector<double> cuts = breakpoints(x1, x2, hq);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double e = 0.0;
    integral += gauss_kronrod<double, 31>::integrate(integrand, cuts[k], cuts[k + 1], 15, rel_tol, &e);
    error += e;
  }
  if (!std::isfinite(integral) || exponent_scale * error > tol_quad) {
    throw Error(ErrorCode::QuadratureFailure,
                "phi_Y exponent error estimate is " +
                    std::to_string(exponent_scale * error / tol_quad) + " times tol_quad");
  }
  return std::exp(y / std::numbers::pi * integral);
}

std::complex<double> alpha_Y(std::complex<double> y, const SystemParams& p) {
  const double q = one_minus_p1p2(p);
  const std::complex<double> x0 = kernel::X0(y, p);
  const double spill = p.lambda2 + p.lambda1 * p.p1;
  const std::complex<double> r = p.p1 * p.a1() * (1.0 - p.p2) * x0 * x0 +
                                 (p.p1 * p.p2 * (p.a1() + p.a2()) - (1.0 - p.p2) * spill) * x0 -
                                 p.p2 * spill;
  const std::complex<double> num = p.lambda2 * q * x0 + y * r;
  const std::complex<double> den = y * (p.a2() * q * y * x0 + r);
  if (std::abs(den) <= 1e-14 * (std::abs(num) + p.total_rate())) {
    throw Error(ErrorCode::PoleEncountered, "alpha_Y has a pole at the requested point");
  }
  return num / den;
}

double alpha_Y(double y, const SystemParams& p) { return alpha_Y(std::complex<double>(y, 0.0), p).real(); }

double pi00(const SystemParams& p, double tol_quad) {
  const Regime r = regime(p);
  require_saturated(p, r, "pi00");
  return pi00_from_phi(p, phi_Y(1.0, p, tol_quad));
}

double pi00_from_phi(const SystemParams& p, double phi1) {
  const double a1 = p.a1();
  const double a2 = p.a2();
  const double feed1 = p.lambda1 + p.lambda2 * p.p2;
  if (p.lambda2 > a2) {
    return (feed1 - (a1 + a2 * p.p2)) / (feed1 * phi1);
  }
  // lambda2 < mu2 c2 forces p1 (lambda1 - mu1 c1) > mu2 c2 - lambda2 > 0
  if (p.p1 <= 0.0) {
    throw Error(ErrorCode::DegenerateP1, "p1 = 0 with lambda2 < mu2 c2 cannot be saturated");
  }
  return (p.lambda2 + p.lambda1 * p.p1 - a1 * p.p1 - a2) / (p.p1 * feed1 * phi1);
}

BoundaryMasses boundary_masses(const SystemParams& p, double pi00) {
  const double q = one_minus_p1p2(p);
  const double g1 = p.lambda1 - p.a1();
  const double g2 = p.lambda2 - p.a2();
  BoundaryMasses m;
  m.P01 = (g1 + p.p2 * g2 - p.p2 * (p.lambda2 + p.lambda1 * p.p1) * pi00) / (q * p.lambda1);
  m.P10 = (g2 + p.p1 * g1 - p.p1 * (p.lambda1 + p.lambda2 * p.p2) * pi00) / (q * p.lambda2);
  constexpr double kTol = 1e-9;
  for (const double v : {m.P01, m.P10}) {
    if (v < -kTol || v > 1.0 + kTol) {
      throw Error(ErrorCode::OutOfRange,
                  "boundary mass " + std::to_string(v) + " outside [0, 1]; pi00 is inconsistent");
    }
  }
  m.P01 = std::clamp(m.P01, 0.0, 1.0);
  m.P10 = std::clamp(m.P10, 0.0, 1.0);
  return m;
}

StationarySolution blocking(const SystemParams& p, double tol_quad) {
  StationarySolution s;
  s.method = Method::analytic;
  s.regime = regime(p);
  const double a1 = p.a1();
  const double a2 = p.a2();
  switch (s.regime.tag) {
    case RegimeTag::Critical:
      throw Error(ErrorCode::CriticalRegime, "refusing to extrapolate at " + p.describe());
    case RegimeTag::A:
      // limit law concentrated at (infinity, infinity)
      break;
    case RegimeTag::B1:
      s.P10 = 1.0 - a2 / p.lambda2;
      s.beta2 = (1.0 - p.p2) * s.P10;
      break;
    case RegimeTag::B2:
      s.P01 = 1.0 - a1 / p.lambda1;
      s.beta1 = (1.0 - p.p1) * s.P01;
      break;
    case RegimeTag::E1:
    case RegimeTag::E2:
    case RegimeTag::E3: {
      if (p.p1 == 0.0 && p.p2 == 0.0) {
        // independent Erlang limits, product-form walk
        s.P01 = 1.0 - a1 / p.lambda1;
        s.P10 = 1.0 - a2 / p.lambda2;
        s.pi00 = s.P01 * s.P10;
        s.beta1 = s.P01;
        s.beta2 = s.P10;
        break;
      }
      s.phiY1 = phi_Y(1.0, p, tol_quad);
      s.pi00 = pi00_from_phi(p, *s.phiY1);
      const BoundaryMasses m = boundary_masses(p, s.pi00);
      s.P01 = m.P01;
      s.P10 = m.P10;
      s.beta1 = s.P01 * (1.0 - p.p1) + p.p1 * s.pi00;
      s.beta2 = s.P10 * (1.0 - p.p2) + p.p2 * s.pi00;
      break;
    }
  }
  return s;
}

double P0y(double y, const SystemParams& p, double tol_quad) {
  const Regime r = regime(p);
  require_saturated(p, r, "P0y");
  const double q = one_minus_p1p2(p);
  const double r2 = std::sqrt(p.lambda2 / p.a2());
  const double pi = pi00(p, tol_quad);
  const double lead = (p.lambda1 + p.lambda2 * p.p2) / (p.lambda1 * q) * pi;
  const double shift = p.p2 * (p.lambda2 + p.lambda1 * p.p1) / (p.lambda1 * q) * pi;
  const double ay = std::abs(y);
  if (std::abs(ay - r2) <= 1e-12 * r2) {
    throw Error(ErrorCode::DomainError, "P0y is not evaluated on the circle |y| = r2");
  }
  const double phi = phi_Y(y, p, tol_quad);
  if (ay < r2) return lead * phi - shift;
  return lead * alpha_Y(y, p) * phi - shift;
}

}  // namespace analytic
}  // namespace fogloss
