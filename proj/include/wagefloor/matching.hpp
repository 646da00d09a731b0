#pragma once

#include <cmath>
#include <stdexcept>

namespace wagefloor {

// Matching technology with bounded rates: both the job finding probability
// p(theta) and the vacancy filling probability q(theta) stay in [0, 1] for all
// tightness levels, with p increasing and q decreasing.
struct MatchingTech {
  double gamma = 0.5;

  // p(theta) = theta * (1 + theta^gamma)^(-1/gamma)
  double job_finding(double theta) const {
    if (!(theta >= 0.0) || !std::isfinite(theta))
      throw std::domain_error("job_finding: tightness must be finite and nonnegative");
    if (theta == 0.0) return 0.0;
    return theta * std::pow(1.0 + std::pow(theta, gamma), -1.0 / gamma);
  }

  // q(theta) = (1 + theta^gamma)^(-1/gamma), with q(0) = 1
  double vacancy_filling(double theta) const {
    if (!(theta >= 0.0) || !std::isfinite(theta))
      throw std::domain_error("vacancy_filling: tightness must be finite and nonnegative");
    if (theta == 0.0) return 1.0;
    return std::pow(1.0 + std::pow(theta, gamma), -1.0 / gamma);
  }

  // q^{-1}(x) = (x^{-gamma} - 1)^{1/gamma} on (0, 1]
  double invert_vacancy_filling(double x) const {
    if (!(x > 0.0) || !(x <= 1.0))
      throw std::domain_error("invert_vacancy_filling: argument must lie in (0, 1]");
    if (x == 1.0) return 0.0;
    return std::pow(std::pow(x, -gamma) - 1.0, 1.0 / gamma);
  }
};

}  // namespace wagefloor
