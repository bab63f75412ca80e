#include "fogloss/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fogloss/error.hpp"

namespace fogloss::kernel {

namespace {

template <typename T>
T h_poly(int index, T x, T y, const SystemParams& p) {
  const double a1 = p.a1();
  const double a2 = p.a2();
  switch (index) {
    case 1:
      return -a1 * x * x * y - a2 * x * y * y + p.total_rate() * x * y - p.lambda1 * y -
             p.lambda2 * x;
    case 2:
      return p.lambda2 * ((1.0 - p.p2) * x * y - x + p.p2 * y);
    case 3:
      return p.lambda1 * ((1.0 - p.p1) * x * y - y + p.p1 * x);
    case 4:
      return (p.lambda1 * p.p1 + p.lambda2 * p.p2) * x * y - p.p2 * p.lambda2 * y -
             p.p1 * p.lambda1 * x;
    default:
      throw Error(ErrorCode::DomainError, "kernel polynomial index must be 1..4, got " +
                                              std::to_string(index));
  }
}

// Both roots of a*z^2 + b*z + c = 0 without cancellation; returns {smaller
// modulus, larger modulus}.
std::pair<complex, complex> quadratic_roots(complex a, complex b, complex c) {
  const complex disc = std::sqrt(b * b - 4.0 * a * c);
  const complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  complex r_big = q / a;
  complex r_small = c / q;
  if (std::abs(r_small) > std::abs(r_big)) std::swap(r_small, r_big);
  return {r_small, r_big};
}

struct Quadratic {
  complex a, b, c;
};

// Selects the root vanishing at the origin. Off the cuts the two roots have
// distinct moduli and the smaller one is the analytic branch; when the moduli
// are too close to tell apart the root is followed by continuity along the
// segment from the origin.
template <typename CoeffFn>
complex small_branch(complex z, CoeffFn coeffs) {
  const Quadratic q = coeffs(z);
  auto [r0, r1] = quadratic_roots(q.a, q.b, q.c);
  const double m0 = std::abs(r0);
  const double m1 = std::abs(r1);
  if (m1 - m0 > 1e-9 * std::max(m1, 1e-300)) return r0;

  constexpr int kSteps = 400;
  complex prev{};
  for (int k = 1; k <= kSteps; ++k) {
    const complex zk = z * (static_cast<double>(k) / kSteps);
    const Quadratic qk = coeffs(zk);
    auto [s0, s1] = quadratic_roots(qk.a, qk.b, qk.c);
    if (k == 1) {
      prev = s0;
    } else {
      prev = (std::abs(s0 - prev) <= std::abs(s1 - prev)) ? s0 : s1;
    }
  }
  return prev;
}

bool on_real_axis(complex z) { return std::abs(z.imag()) <= 1e-14 * std::max(1.0, std::abs(z)); }

}  // namespace

complex eval_h(int index, complex x, complex y, const SystemParams& params) {
  return h_poly<complex>(index, x, y, params);
}

double eval_h(int index, double x, double y, const SystemParams& params) {
  return h_poly<double>(index, x, y, params);
}

double b2(double x, const SystemParams& p) { return p.a1() * x * x - p.total_rate() * x + p.lambda1; }

double b1(double y, const SystemParams& p) { return p.a2() * y * y - p.total_rate() * y + p.lambda2; }

double delta2(double x, const SystemParams& p) {
  const double b = b2(x, p);
  return b * b - 4.0 * p.a2() * p.lambda2 * x * x;
}

double delta1(double y, const SystemParams& p) {
  const double b = b1(y, p);
  return b * b - 4.0 * p.a1() * p.lambda1 * y * y;
}

complex delta2(complex x, const SystemParams& p) {
  const complex b = p.a1() * x * x - p.total_rate() * x + p.lambda1;
  return b * b - 4.0 * p.a2() * p.lambda2 * x * x;
}

complex delta1(complex y, const SystemParams& p) {
  const complex b = p.a2() * y * y - p.total_rate() * y + p.lambda2;
  return b * b - 4.0 * p.a1() * p.lambda1 * y * y;
}

namespace {

// Zeros of lead*z^2 - (S -+ 2 sqrt(cross)) z + constant, pooled and sorted.
std::array<double, 4> factored_zeros(double lead, double S, double cross, double constant,
                                     const char* axis) {
  std::array<double, 4> roots{};
  const double shift = 2.0 * std::sqrt(cross);
  int k = 0;
  for (const double middle : {S + shift, S - shift}) {
    const double disc = middle * middle - 4.0 * lead * constant;
    if (disc < 0.0) {
      throw Error(ErrorCode::ComplexBranchPoints,
                  std::string("discriminant factor on the ") + axis + " side has complex zeros");
    }
    const double sq = std::sqrt(disc);
    const double big = 0.5 * (middle + std::copysign(sq, middle)) / lead;
    roots[k++] = big;
    roots[k++] = constant / (lead * big);
  }
  std::sort(roots.begin(), roots.end());
  if (!(roots[0] > 0.0 && roots[0] < roots[1] && roots[1] < 1.0 && 1.0 < roots[2] &&
        roots[2] < roots[3])) {
    throw Error(ErrorCode::OrderingViolation,
                std::string("branch points on the ") + axis +
                    " side do not satisfy 0 < z1 < z2 < 1 < z3 < z4");
  }
  return roots;
}

}  // namespace

BranchPoints branch_points(const SystemParams& p) {
  BranchPoints bp;
  const double S = p.total_rate();
  bp.x = factored_zeros(p.a1(), S, p.a2() * p.lambda2, p.lambda1, "x");
  bp.y = factored_zeros(p.a2(), S, p.a1() * p.lambda1, p.lambda2, "y");
  bp.r1 = std::sqrt(p.lambda1 / p.a1());
  bp.r2 = std::sqrt(p.lambda2 / p.a2());
  return bp;
}

complex X0(complex y, const SystemParams& p) {
  if (y == complex{}) return {};
  if (on_real_axis(y) && delta1(y.real(), p) < 0.0) {
    throw Error(ErrorCode::BranchCut, "X0 evaluated on a cut of the y plane");
  }
  return small_branch(y, [&p](complex z) {
    return Quadratic{p.a1() * z, p.a2() * z * z - p.total_rate() * z + p.lambda2, p.lambda1 * z};
  });
}

complex X1(complex y, const SystemParams& p) {
  const complex x0 = X0(y, p);
  if (x0 == complex{}) throw Error(ErrorCode::PoleEncountered, "X1 has a pole at the origin");
  return p.lambda1 / (p.a1() * x0);
}

complex Y0(complex x, const SystemParams& p) {
  if (x == complex{}) return {};
  if (on_real_axis(x) && delta2(x.real(), p) < 0.0) {
    throw Error(ErrorCode::BranchCut, "Y0 evaluated on a cut of the x plane");
  }
  return small_branch(x, [&p](complex z) {
    return Quadratic{p.a2() * z, p.a1() * z * z - p.total_rate() * z + p.lambda1, p.lambda2 * z};
  });
}

complex Y1(complex x, const SystemParams& p) {
  const complex y0 = Y0(x, p);
  if (y0 == complex{}) throw Error(ErrorCode::PoleEncountered, "Y1 has a pole at the origin");
  return p.lambda2 / (p.a2() * y0);
}

// On the cut sqrt(delta) continues from the positive root near the origin to
// -i sqrt(-delta) on the upper edge.
complex Y0_upper(double x, const SystemParams& p) {
  const BranchPoints bp = branch_points(p);
  const double tol = 1e-12 * (bp.x[1] - bp.x[0]);
  if (x < bp.x[0] - tol || x > bp.x[1] + tol) {
    throw Error(ErrorCode::DomainError, "Y0_upper requires x in [x1, x2]");
  }
  const double s = std::sqrt(std::max(-delta2(x, p), 0.0));
  return complex(-b2(x, p), -s) / (2.0 * p.a2() * x);
}

complex X0_upper(double y, const SystemParams& p) {
  const BranchPoints bp = branch_points(p);
  const double tol = 1e-12 * (bp.y[1] - bp.y[0]);
  if (y < bp.y[0] - tol || y > bp.y[1] + tol) {
    throw Error(ErrorCode::DomainError, "X0_upper requires y in [y1, y2]");
  }
  const double s = std::sqrt(std::max(-delta1(y, p), 0.0));
  return complex(-b1(y, p), -s) / (2.0 * p.a1() * y);
}

}  // namespace fogloss::kernel
