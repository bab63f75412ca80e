#include "fogloss/params.hpp"

#include <cmath>
#include <sstream>

#include "fogloss/error.hpp"

namespace fogloss {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidParams, std::string(name) + " must be finite and > 0");
  }
}

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

void SystemParams::validate() const {
  require_positive(lambda1, "lambda1");
  require_positive(lambda2, "lambda2");
  require_positive(mu1, "mu1");
  require_positive(mu2, "mu2");
  require_positive(c1, "c1");
  require_positive(c2, "c2");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
}

std::string SystemParams::describe() const {
  std::ostringstream out;
  out.precision(10);
  out << "lambda=(" << lambda1 << "," << lambda2 << ") mu=(" << mu1 << "," << mu2 << ") c=(" << c1
      << "," << c2 << ") p=(" << p1 << "," << p2 << ")";
  return out.str();
}

}  // namespace fogloss
