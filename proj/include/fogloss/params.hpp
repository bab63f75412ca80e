#pragma once

#include <string>

namespace fogloss {

// Fluid-scaled parameters of the two cooperating centers. mu and c enter every
// limiting formula only through the products mu1*c1 and mu2*c2.
struct SystemParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double a1() const { return mu1 * c1; }
  double a2() const { return mu2 * c2; }
  // lambda1 + lambda2 + mu1 c1 + mu2 c2, the diagonal coefficient of the kernel.
  double total_rate() const { return lambda1 + lambda2 + a1() + a2(); }

  // Exchanges the roles of center 1 and center 2.
  SystemParams swapped() const { return {lambda2, lambda1, mu2, mu1, c2, c1, p2, p1}; }

  // Throws Error(InvalidParams) naming the first offending field.
  void validate() const;

  std::string describe() const;
};

}  // namespace fogloss
