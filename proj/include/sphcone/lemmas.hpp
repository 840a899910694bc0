#pragma once

// Verification suites for the local structure around the glued-football
// family: the two half pieces around the C-vertices, the isosceles
// extremality of the angle sum in a triangle with one fixed side and the
// opposite angle fixed, and the exclusion of unequal leg lengths in the
// symmetric case.

#include <string>
#include <vector>

#include "sphcone/sphtrig.hpp"

namespace sphcone::lemmas {

using sphtrig::Branch;

/// Napier and SSS corners must agree to this before a half piece is accepted.
inline constexpr double kCornerAgreementTol = 1e-8;

/// One half piece: a kite made of an isosceles triangle (ell, ell, base) with
/// apex 2 d_half at D and an isosceles triangle (side, side, base) whose apex
/// angle 2 apex_half sits at A (or B). The two C-corners of the kite are equal.
struct HalfPieceConfig {
  double apex_half = 0.0;
  double d_half = 0.0;
  double ell = 0.0;
  Branch branch = Branch::acute;
};

struct HalfPiece {
  double side = 0.0;           ///< the leg from the apex to C
  double corner = 0.0;         ///< C-corner from the SSS reconstruction
  double corner_napier = 0.0;  ///< same corner from Napier's analogy
};

/// side from sin(side) = sin(ell) sin(d_half) / sin(apex_half) on the branch;
/// the corner is the sum of the two base angles at C. Throws NoTriangleError
/// when the sine ratio exceeds 1, ValidityError when either triangle is
/// degenerate and NumericalError when the two corner computations disagree.
HalfPiece half_piece_solve(const HalfPieceConfig& c);

enum class Regime {
  below,  ///< ell > pi/2, acute legs (l1, l2 < pi/2)
  above,  ///< ell < pi/2, obtuse legs
};

std::string to_string(Regime r);
Regime parse_regime(const std::string& s);
Branch regime_branch(Regime r);

struct DefectResult {
  double l1 = 0.0;
  double l2 = 0.0;
  double alpha1 = 0.0;  ///< C-corner of the first half piece
  double alpha2 = 0.0;
  double defect = 0.0;   ///< 2 (alpha1 + alpha2) - 4 pi
  double product = 0.0;  ///< sin(ell) cos(ell) sin((l1 - l2) / 2)
  double corner_gap = 0.0;  ///< max |SSS - Napier| over both pieces
};

/// Two half pieces sharing ell: apexes alpha/2 and beta/2 with D-halves
/// (alpha - 2 eps)/2 and (beta + 2 eps)/2.
DefectResult asymmetric_defect(double alpha, double beta, double eps, double ell, Regime regime);

/// The symmetric case alpha = beta.
DefectResult lemma2_defect(double beta, double eps, double ell, Regime regime);

/// Sign of sin(ell) cos(ell) sin((l1 - l2) / 2) as -1, 0 or +1.
int inequality_sign(double ell, double l1, double l2);

/// Sign the defect is required to have: negative below, positive above, for
/// either sign of eps (0 for eps = 0). With alpha = beta, eps -> -eps swaps
/// the two half pieces and leaves the defect unchanged.
int expected_defect_sign(Regime regime, double eps);

/// Grid on the regime's side of pi/2: n points spread over (pi/2, pi) or
/// (0, pi/2) with a margin of `margin` from both ends.
std::vector<double> regime_ell_grid(Regime regime, int n, double margin = 0.01);

struct DefectNode {
  double eps = 0.0;
  double ell = 0.0;
  bool feasible = false;
  DefectResult result;
  bool sign_ok = false;     ///< defect has the expected sign, |defect| > margin
  bool product_ok = false;  ///< sign(defect) == sign(product), both beyond margin
};

struct DefectSweep {
  double alpha = 0.0;
  double beta = 0.0;
  Regime regime = Regime::below;
  double margin = 1e-9;
  std::vector<DefectNode> nodes;
  int feasible = 0;
  int infeasible = 0;
  int sign_ok = 0;
  int product_ok = 0;
  double min_defect = 0.0;  ///< over feasible nodes
  double max_defect = 0.0;
  double max_corner_gap = 0.0;

  bool sign_passed() const { return feasible > 0 && sign_ok == feasible; }
  bool product_passed() const { return feasible > 0 && product_ok == feasible; }
  bool passed() const { return sign_passed() && product_passed(); }
};

/// Every (eps, ell) pair in order; infeasible nodes are kept and flagged.
DefectSweep defect_sweep(double alpha, double beta, const std::vector<double>& eps,
                         const std::vector<double>& ell_grid, Regime regime, int workers = 1,
                         double margin = 1e-9);

/// The asymmetric sweep for a single eps.
DefectSweep step1_asymmetric_exclusion(double alpha, double beta, double eps,
                                       const std::vector<double>& ell_grid, Regime regime,
                                       int workers = 1);

// ---------------------------------------------------------------------------

enum class ExtremumKind { minimum, maximum, degenerate };

std::string to_string(ExtremumKind k);

struct ExtremalityResult {
  double alpha_crit = 0.0;
  double s_crit = 0.0;
  ExtremumKind kind = ExtremumKind::minimum;
};

/// Threshold on |cos ell - cos beta| below which the flat case is reported.
inline constexpr double kDegenerateTol = 1e-9;

struct Lemma3Report {
  double ell = 0.0;
  double beta = 0.0;
  int n = 0;
  int feasible_nodes = 0;
  int skipped_nodes = 0;  ///< alpha nodes with no root
  /// Discrete extrema where ds/dalpha has no sign change; these are root
  /// indices jumping when a root leaves (0, pi) through an end.
  int rejected_candidates = 0;
  bool degenerate = false;
  std::vector<ExtremalityResult> extrema;
  double max_isosceles_gap = 0.0;  ///< max |alpha_crit - s_crit / 2|
  bool kinds_ok = false;           ///< minimum below pi/2, maximum above
  bool kinds_reversed = false;     ///< every extremum has the opposite kind

  bool passed(double tol = 1e-6) const;
};

/// Value of -cos(a) cos(s - a) + sin(a) sin(s - a) cos(ell) - cos(beta).
double lemma3_constraint(double alpha, double s, double ell, double beta);

/// All roots s in (alpha, alpha + pi) of lemma3_constraint, ascending.
std::vector<double> lemma3_roots(double alpha, double ell, double beta, int cells = 256);

/// ds/dalpha along a root branch.
double lemma3_slope(double alpha, double s, double ell);

/// Sweeps alpha over n interior nodes of (0, pi), follows every root branch
/// of s(alpha) and refines each interior extremum. Throws RangeError on bad
/// input and NoTriangleError if no node has a root.
Lemma3Report lemma3_sweep(double ell, double beta, int n = 400);

// ---------------------------------------------------------------------------

struct CaseBNode {
  double l1 = 0.0;
  double l2 = 0.0;
  double cos_l5 = 0.0;
  double ratio = 0.0;           ///< (cos l5 - 1) / (cos beta - 1)
  double reversed_ratio = 0.0;  ///< (cos beta - 1) / (cos l5 - 1)
  double min_constraint = 0.0;  ///< min over alpha of |1 + (cos l5 - 1) sin^2 alpha - cos beta|
  bool feasible = false;
};

struct CaseBReport {
  double beta = 0.0;
  std::vector<CaseBNode> nodes;
  int feasible = 0;
  double min_constraint = 0.0;

  bool passed() const { return !nodes.empty() && feasible == 0; }
};

/// Midpoint grid pi (k + 1/2) / n, k = 0..n-1; pi/2 is never a node for even n.
std::vector<double> midpoint_grid(int n);

/// l1 = pi/2 (within 1e-12) violates the precondition and throws RangeError.
CaseBReport lemma1_caseb_exclusion(double beta, const std::vector<double>& l1_grid,
                                   int alpha_nodes = 2000);

}  // namespace sphcone::lemmas
