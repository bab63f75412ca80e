#pragma once

#include <array>
#include <complex>

#include "fogloss/params.hpp"

// Algebra of the kernel of the functional equation satisfied by the generating
// function of the limiting idle-server walk:
//
//   h1(x,y) P(x,y) = h2(x,y) P(x,0) + h3(x,y) P(0,y) + h4(x,y) P(0,0).
//
// Everything here is a pure function of its arguments.
namespace fogloss::kernel {

using complex = std::complex<double>;

// Polynomial h_index, index in {1,2,3,4}.
complex eval_h(int index, complex x, complex y, const SystemParams& params);
double eval_h(int index, double x, double y, const SystemParams& params);

// Quadratic coefficient shared by Y0 and Delta2: mu1 c1 x^2 - S x + lambda1.
double b2(double x, const SystemParams& params);
// mu2 c2 y^2 - S y + lambda2.
double b1(double y, const SystemParams& params);

// Discriminants of h1 seen as a quadratic in y (delta2, a function of x) and
// in x (delta1, a function of y).
double delta2(double x, const SystemParams& params);
double delta1(double y, const SystemParams& params);
complex delta2(complex x, const SystemParams& params);
complex delta1(complex y, const SystemParams& params);

struct BranchPoints {
  std::array<double, 4> x{};  // zeros of delta2, ascending
  std::array<double, 4> y{};  // zeros of delta1, ascending
  double r1 = 0.0;            // sqrt(lambda1 / (mu1 c1))
  double r2 = 0.0;            // sqrt(lambda2 / (mu2 c2))
};

// Solves the two quadratic factors of each discriminant. Throws
// ComplexBranchPoints or OrderingViolation (the roots must satisfy
// 0 < x1 < x2 < 1 < x3 < x4, same for y).
BranchPoints branch_points(const SystemParams& params);

// Roots of h1(., y) = 0. X0 is the branch vanishing at the origin, analytic off
// [y1,y2] U [y3,y4]; X1 = lambda1 / (mu1 c1 X0). Throws BranchCut for a real
// argument on a cut.
complex X0(complex y, const SystemParams& params);
complex X1(complex y, const SystemParams& params);
// Roots of h1(x, .) = 0, same conventions with the x-side cuts.
complex Y0(complex x, const SystemParams& params);
complex Y1(complex x, const SystemParams& params);

// Limits from the upper half plane on the first cut: Y0(x + 0i) for x in
// [x1, x2] and X0(y + 0i) for y in [y1, y2]. Both lie on the circles of radius
// r2 and r1 respectively. Throws DomainError outside the cut.
complex Y0_upper(double x, const SystemParams& params);
complex X0_upper(double y, const SystemParams& params);

}  // namespace fogloss::kernel
