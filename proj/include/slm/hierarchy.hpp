#pragma once

#include <span>
#include <string>
#include <vector>

#include "slm/field.hpp"
#include "slm/params.hpp"

namespace slm {

/// Renormalized correlation functions truncated at order two: k0 = 1, k1, k2.
struct TruncatedState {
  Field k1;
  Field2 k2;

  /// Product (Poisson) state k2 = rho (x) rho.
  static TruncatedState product(const Field& rho);
  /// Sub-Poissonian witness max(sup k1, sqrt(sup k2)).
  double witness() const;
};

enum class ClosureRule { mean_field, kirkwood };

const char* closure_name(ClosureRule rule);
ClosureRule parse_closure(const std::string& name);

/// Third-order correlation k3(x_i, x_j, x_l) expressed through k1 and k2.
///
/// mean-field: (k2(x,y) k1(z) + k2(x,z) k1(y) + k2(y,z) k1(x)) / 3
/// kirkwood:   k2(x,y) k2(y,z) k2(x,z) / (k1(x) k1(y) k1(z))
class Closure {
 public:
  /// Kirkwood requires every k1 cell >= floor, otherwise closure_singularity is raised.
  Closure(ClosureRule rule, const TruncatedState& state, double kirkwood_floor);

  ClosureRule rule() const { return rule_; }
  double operator()(std::size_t i, std::size_t j, std::size_t l) const {
    const std::size_t n = n_;
    if (rule_ == ClosureRule::mean_field)
      return (k2_[i * n + j] * k1_[l] + k2_[i * n + l] * k1_[j] + k2_[j * n + l] * k1_[i]) / 3.0;
    return k2_[i * n + j] * k2_[j * n + l] * k2_[i * n + l] / (k1_[i] * k1_[j] * k1_[l]);
  }

 private:
  ClosureRule rule_;
  std::size_t n_;
  const double* k1_;
  const double* k2_;
};

Closure closure(ClosureRule rule, const TruncatedState& state, double kirkwood_floor = 0.0);

/// -m k1(x) - int a-(x-y) k2(x,y) dy + (a+ * k1)(x).
///
/// In renormalized form this order carries no epsilon: both interaction terms of the
/// epsilon-dependent part vanish on one-point configurations.
Field rhs_k1(const TruncatedState& state, const ModelParams& params);

/// Order-two component of the renormalized generator V + epsilon B at {x, y}:
///   -2m k2(x,y) - int [a-(x-z) + a-(y-z)] k3(x,y,z) dz
///   + int [a+(x-z) k2(z,y) + a+(y-z) k2(x,z)] dz
///   + epsilon [-2 a-(x-y) k2(x,y) + a+(x-y) (k1(x) + k1(y))]
/// with k3 from the closure. At epsilon = 1 this is the plain correlation hierarchy.
/// A negative kirkwood_floor means 1e-8 * sup k1 of the given state.
Field2 rhs_k2(const TruncatedState& state, ClosureRule rule, const ModelParams& params,
              double kirkwood_floor = -1.0);

/// Largest dt admitted by the order-two guard
/// 0.1 / (2m + 2 <a-> C + 2 <a+> + 2 epsilon sup a-), C = witness of the state.
double hierarchy_dt_limit(const ModelParams& params, const TruncatedState& state);

struct HierarchyOptions {
  bool keep_k2 = true;
  double kirkwood_floor_factor = 1e-8;
};

struct HierarchyTrajectory {
  std::vector<double> times;
  std::vector<Field> k1;
  std::vector<Field2> k2;  // empty unless keep_k2
  /// Largest asymmetry removed by re-symmetrization, relative to max|k2|.
  double max_symmetry_drift = 0.0;
};

/// RK4 on the coupled (k1, k2) system with snapshot handling identical to solve_kinetic.
HierarchyTrajectory solve_hierarchy(const TruncatedState& state0, ClosureRule rule, const ModelParams& params,
                                    double horizon, double dt, std::span<const double> snapshot_times,
                                    const HierarchyOptions& options = {});

/// Mean over x of k2(x, x + r e_1), r rounded to the nearest multiple of h.
double k2_slice(const Field2& k2, double r);

}  // namespace slm
