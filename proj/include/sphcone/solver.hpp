#pragma once

// The cone-angle constraint map on the six-length space and the numerical
// machinery around it: finite-difference Jacobian, SVD rank, damped
// minimum-norm Gauss-Newton, distance to the glued-football family and the
// local rigidity scan.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphcone/metric.hpp"
#include "sphcone/sphtrig.hpp"

namespace sphcone::solver {

/// (theta_A - alpha, theta_B - beta, theta_D - (alpha + beta), theta_C - 4 pi).
struct ConstraintResidual {
  std::array<double, 4> r{};

  double norm() const;
  double rA() const { return r[0]; }
  double rB() const { return r[1]; }
  double rD() const { return r[2]; }
  double rC() const { return r[3]; }
};

ConstraintResidual residual(const TriangulatedMetric& m, const ConeAngleSpec& spec);

using Jacobian = Eigen::Matrix<double, 4, 6>;

inline constexpr double kDefaultFdStep = 1e-6;
inline constexpr double kDefaultRankTol = 1e-6;

/// Central differences in each of l1..l6. When a +-h probe leaves the valid
/// region the step is reduced (up to three times by 10x) before giving up
/// with ValidityError.
Jacobian jacobian(const TriangulatedMetric& m, const ConeAngleSpec& spec,
                  double h = kDefaultFdStep);

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;  ///< descending
};

/// rank = number of singular values >= rel_tol * sigma_1 (0 for a zero matrix).
RankResult numerical_rank(const Eigen::MatrixXd& J, double rel_tol = kDefaultRankTol);

struct GaussNewtonOptions {
  int max_iter = 50;
  double res_tol = 1e-11;
  double lambda0 = 1e-3;
  double fd_step = kDefaultFdStep;
  /// Once the residual is below res_tol, iteration continues until the step
  /// is shorter than this. The solution set is degenerate, so the residual
  /// alone only fixes the position to about sqrt(res_tol).
  double step_tol = 1e-10;
};

enum class GaussNewtonStatus { converged, max_iter, boundary, stalled };

std::string to_string(GaussNewtonStatus s);

struct GaussNewtonResult {
  GaussNewtonStatus status = GaussNewtonStatus::stalled;
  TriangulatedMetric metric;
  double residual_norm = 0.0;
  int iterations = 0;

  bool converged() const { return status == GaussNewtonStatus::converged; }
};

/// Levenberg-Marquardt damped SVD steps; with the damping driven to zero the
/// step is the minimum-norm least-squares solution. Trial points outside the
/// valid region are backtracked by halving.
GaussNewtonResult gauss_newton(const TriangulatedMetric& start, const ConeAngleSpec& spec,
                               const GaussNewtonOptions& opts = {});

struct FamilyFit {
  double s_star = 0.0;
  double distance = 0.0;
};

/// min over s in (0, pi) of || m - glued_football(alpha, beta, s) ||_2:
/// a 200-point scan followed by golden-section refinement.
FamilyFit family_distance(const TriangulatedMetric& m, const ConeAngleSpec& spec);

/// Closed-form derivative d/ds of glued_football(alpha, beta, s).
Lengths family_tangent(const GluedFootballParams& p);

/// Largest r such that every point of the max-norm ball of radius r around m
/// is a valid metric (all constraints are linear in the lengths).
double max_feasible_radius(const TriangulatedMetric& m);

struct RigidityOptions {
  double radius = 0.05;
  int samples = 500;
  std::uint64_t seed = 7;
  double rank_tol = kDefaultRankTol;
  double dist_tol = 1e-6;
  int workers = 1;
  GaussNewtonOptions gn;
};

struct SolutionRecord {
  Lengths lengths{};
  double residual_norm = 0.0;
  double s_star = 0.0;
  double distance = 0.0;
  int iterations = 0;
};

struct RigidityReport {
  GluedFootballParams params;
  RigidityOptions options;
  std::vector<double> singular_values;
  int rank = 0;
  int kernel_dim = 0;
  int starts = 0;
  int converged = 0;
  int failed_boundary = 0;
  int failed_max_iter = 0;
  int failed_stalled = 0;
  double max_family_distance = 0.0;
  std::vector<SolutionRecord> solutions;

  /// Every converged solution lies within dist_tol of the family.
  bool rigid() const;
  double convergence_rate() const;
};

/// Samples `samples` starts uniformly in the max-norm ball around g_t,
/// projects each with gauss_newton and measures the distance of every
/// converged point to the family. Throws RangeError if the ball leaves the
/// valid region.
RigidityReport rigidity_scan(const GluedFootballParams& p, const RigidityOptions& opts = {});

/// Grid for the C-defect scan. At every node (l3, l4, eps):
///   l5 = SAS(l3, l4, alpha - 2 eps), l6 = SAS(l4, l3, beta + 2 eps),
///   l1, l2 from the isosceles apex relation sin(l5/2) = sin(l1) sin(alpha/2)
///   on the given branch,
/// so theta_A, theta_B and theta_D hit their targets and only rC varies.
struct DefectGrid {
  std::vector<double> l3;
  std::vector<double> l4;
  std::vector<double> eps;
  sphtrig::Branch branch = sphtrig::Branch::acute;
};

struct DefectRow {
  double l3 = 0.0;
  double l4 = 0.0;
  double eps = 0.0;
  Lengths lengths{};  ///< NaN where the closure failed
  ConstraintResidual residual;
  bool feasible = false;
};

/// One row per node in lexicographic (l3, l4, eps) order. Infeasible nodes
/// are kept and flagged.
std::vector<DefectRow> defect_scan(const ConeAngleSpec& spec, const DefectGrid& grid, int workers = 1);

/// CSV with header l1,l2,l3,l4,l5,l6,rA,rB,rD,rC,feasible; numbers in %.17g.
std::string defect_csv(const std::vector<DefectRow>& rows);

/// Header line used by defect_csv (without newline).
inline constexpr const char* kDefectCsvHeader = "l1,l2,l3,l4,l5,l6,rA,rB,rD,rC,feasible";

}  // namespace sphcone::solver
