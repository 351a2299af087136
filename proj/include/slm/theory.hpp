#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace slm {

/// Grid sups q_n of a truncated correlation function, n = 0..N with N <= 2.
struct NormedHierarchyState {
  double k0 = 1.0;
  std::vector<std::pair<int, double>> orders;  // (n, q_n) for n >= 1

  double q(int n) const;
};

/// max over stored n of e^{alpha n} q_n (q_0 = |k0|). A lower bound for the full sup over n.
double knorm_alpha(const NormedHierarchyState& state, double alpha);

/// Guaranteed existence horizon (alpha_up - alpha_low) / (<a+> + <a-> e^{-alpha_low}).
double horizon_T(double alpha_low, double alpha_up, double aplus_mass, double aminus_mass);

struct AlphaOptimum {
  double alpha_low;
  double t_max;
};

/// alpha_low < alpha_up maximizing horizon_T; requires <a-> > 0.
AlphaOptimum optimize_alpha(double alpha_up, double aplus_mass, double aminus_mass);

/// theta * e^{alpha_up} < 1.
bool check_initial_space(double theta, double alpha_up);

}  // namespace slm
