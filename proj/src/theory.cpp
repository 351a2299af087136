#include "slm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slm/errors.hpp"

namespace slm {

double NormedHierarchyState::q(int n) const {
  if (n == 0) return std::abs(k0);
  for (const auto& [order, value] : orders)
    if (order == n) return value;
  return 0.0;
}

double knorm_alpha(const NormedHierarchyState& state, double alpha) {
  double norm = std::abs(state.k0);
  for (const auto& [n, qn] : state.orders) {
    require(qn >= 0.0, ErrorKind::invalid_parameter, "q_n must be nonnegative");
    norm = std::max(norm, std::exp(alpha * n) * qn);
  }
  return norm;
}

double horizon_T(double alpha_low, double alpha_up, double aplus_mass, double aminus_mass) {
  require(alpha_up > alpha_low, ErrorKind::invalid_interval,
          "horizon needs alpha_up > alpha_low (got " + std::to_string(alpha_low) + ", " +
              std::to_string(alpha_up) + ")");
  require(aplus_mass >= 0.0 && aminus_mass >= 0.0, ErrorKind::invalid_parameter,
          "kernel masses must be nonnegative");
  const double denom = aplus_mass + aminus_mass * std::exp(-alpha_low);
  require(denom > 0.0, ErrorKind::invalid_parameter, "horizon denominator vanishes: both kernel masses are zero");
  return (alpha_up - alpha_low) / denom;
}

AlphaOptimum optimize_alpha(double alpha_up, double aplus_mass, double aminus_mass) {
  require(aminus_mass > 0.0, ErrorKind::no_interior_maximum,
          "with <a-> = 0 the horizon grows without bound as alpha_low -> -inf");
  require(aplus_mass >= 0.0, ErrorKind::invalid_parameter, "kernel masses must be nonnegative");
  const auto T = [&](double a) { return horizon_T(a, alpha_up, aplus_mass, aminus_mass); };

  // Coarse geometric scan in gap = alpha_up - alpha_low. The maximizer solves
  // gap = 1 + (<a+>/<a->) e^{alpha_up - gap}, so gap > 1 and it stays well below 1e3 for any
  // practical alpha_up.
  double best_gap = 1e-6;
  double best = T(alpha_up - best_gap);
  double prev_gap = best_gap;
  double lo = 0.0;
  double hi = 0.0;
  for (double gap = 1e-6; gap <= 1e3; gap *= 1.05) {
    const double v = T(alpha_up - gap);
    if (v > best) {
      best = v;
      lo = prev_gap;
      best_gap = gap;
      hi = gap * 1.05;
    }
    prev_gap = gap;
  }
  if (hi == 0.0) {
    lo = 0.0;
    hi = best_gap * 1.05;
  }

  // Golden-section on the bracket [lo, hi] around best_gap; T is unimodal in the gap.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = T(alpha_up - std::max(c, 1e-300));
  double fd = T(alpha_up - d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = T(alpha_up - std::max(c, 1e-300));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = T(alpha_up - d);
    }
  }
  const double gap = 0.5 * (a + b);
  return {alpha_up - gap, T(alpha_up - gap)};
}

bool check_initial_space(double theta, double alpha_up) {
  require(theta > 0.0, ErrorKind::invalid_parameter, "theta must be positive");
  return theta * std::exp(alpha_up) < 1.0;
}

}  // namespace slm
