#pragma once

#include <cstddef>
#include <vector>

#include "nullity/degree_model.hpp"

namespace nullity {

/// The closed-form functions attached to a degree model:
///   xbar(x) = phi_*'(1-x)/phi_*'(1),
///   M(x)    = phi_*'(1) x xbar + phi_*(1-x) + phi_*(1-xbar) - 1,
///   M'(x)   = phi_*''(1-x) (xbarbar(x) - x).
class CavityFunctions {
 public:
  /// Throws std::domain_error for a model with mean 0.
  explicit CavityFunctions(const DegreeModel& model);

  double xbar(double x) const;
  double xbarbar(double x) const { return xbar(xbar(x)); }
  double M(double x) const;
  double M_prime(double x) const;
  const DegreeModel& model() const { return model_; }

 private:
  DegreeModel model_;
  double mean_;
};

double eval_M(const DegreeModel& model, double x);

struct CavityPoint {
  double x;
  double M;
  double xbar;
  double M_prime;
};

struct MCurve {
  std::vector<CavityPoint> points;
};

/// M sampled on `grid_points` equally spaced points of [0,1].
MCurve m_curve(const DegreeModel& model, std::size_t grid_points);

struct FixedPoint {
  double x;
  double M;
  bool tangential;  ///< xbarbar - x touches zero without changing sign
};

struct RecordSet {
  std::vector<double> locations;  ///< p_1 < ... < p_r
  std::vector<double> values;     ///< M(p_i), strictly increasing
  double first_extremum = 0.0;    ///< x_0, the smallest fixed point of xbarbar
  double first_extremum_value = 0.0;
  double global_max = 0.0;
  double global_argmax = 0.0;
  std::vector<FixedPoint> fixed_points;
  /// Fixed points whose M ties the running maximum within the record slack.
  std::vector<double> ambiguous;
  /// F_*(0) + F_*(1) = 1: the offspring law is a point mass at 0.
  bool degenerate = false;

  /// True when the first local extremum is the global maximum.
  bool first_extremum_is_max(double tol = 1e-9) const {
    return global_max - first_extremum_value <= tol;
  }
};

struct RecordOptions {
  std::size_t grid_points = 100'001;
  double x_tolerance = 1e-12;
  double fixed_point_tolerance = 1e-10;
  double tangential_threshold = 1e-8;
  double record_slack = 1e-11;
};

RecordSet find_records(const DegreeModel& model, const RecordOptions& options = {});

struct ErdosRenyiQ {
  double q = 0.0;            ///< smallest solution of q = exp(-c exp(-c q))
  double kernel_mass = 0.0;  ///< q + e^{-cq} + c q e^{-cq} - 1
  std::size_t iterations = 0;
  bool converged = false;
};

ErdosRenyiQ er_q(double c, std::size_t max_iterations = 100'000);

/// Leaf-removal probabilities on the limiting tree. Index t runs 0..T;
/// p_in_a[t] and p_in_b[t] are P(root in A_t) and P(root in B_t), and
/// lr[t] = p_in_a[t] - p_in_b[t].
struct KSTrajectory {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> p_in_a;
  std::vector<double> p_in_b;
  std::vector<double> lr;
};

KSTrajectory ks_trajectory(const DegreeModel& model, std::size_t rounds);

}  // namespace nullity
