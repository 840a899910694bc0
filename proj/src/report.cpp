#include "sphcone/report.hpp"

#include <algorithm>
#include <limits>

namespace sphcone::report {

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

Json envelope(const std::string& command, const Json& config, bool passed, Json result) {
  Json doc;
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["config"] = config;
  doc["passed"] = passed;
  doc["result"] = std::move(result);
  return doc;
}

Json to_json(const Lengths& l) {
  Json j;
  for (std::size_t i = 0; i < l.size(); ++i) j["l" + std::to_string(i + 1)] = l[i];
  return j;
}

Json to_json(const ConeAngles& a) {
  return Json{{"theta_A", a.theta_A},
              {"theta_B", a.theta_B},
              {"theta_D", a.theta_D},
              {"theta_C", a.theta_C},
              {"corner_totals", a.corner_totals}};
}

Json to_json(const solver::ConstraintResidual& r) {
  return Json{{"rA", r.rA()}, {"rB", r.rB()}, {"rD", r.rD()}, {"rC", r.rC()}, {"norm", r.norm()}};
}

Json to_json(const std::vector<MetricViolation>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back({{"triangle", x.triangle}, {"what", x.what}, {"slack", x.slack}});
  return j;
}

Json to_json(const solver::RigidityReport& r) {
  Json sols = Json::array();
  for (const auto& s : r.solutions) {
    sols.push_back({{"lengths", to_json(s.lengths)},
                    {"residual_norm", s.residual_norm},
                    {"s_star", s.s_star},
                    {"distance", s.distance},
                    {"iterations", s.iterations}});
  }
  return Json{{"singular_values", r.singular_values},
              {"rank", r.rank},
              {"kernel_dim", r.kernel_dim},
              {"starts", r.starts},
              {"converged", r.converged},
              {"failed_boundary", r.failed_boundary},
              {"failed_max_iter", r.failed_max_iter},
              {"failed_stalled", r.failed_stalled},
              {"convergence_rate", r.convergence_rate()},
              {"max_family_distance", r.max_family_distance},
              {"rigid", r.rigid()},
              {"solutions", sols}};
}

Json to_json(const lemmas::DefectSweep& s) {
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    Json j{{"eps", n.eps}, {"ell", n.ell}, {"feasible", n.feasible}};
    if (n.feasible) {
      j["l1"] = n.result.l1;
      j["l2"] = n.result.l2;
      j["alpha1"] = n.result.alpha1;
      j["alpha2"] = n.result.alpha2;
      j["defect"] = n.result.defect;
      j["product"] = n.result.product;
      j["sign_ok"] = n.sign_ok;
      j["product_ok"] = n.product_ok;
    }
    nodes.push_back(std::move(j));
  }
  return Json{{"alpha", s.alpha},
              {"beta", s.beta},
              {"regime", lemmas::to_string(s.regime)},
              {"margin", s.margin},
              {"feasible", s.feasible},
              {"infeasible", s.infeasible},
              {"sign_ok", s.sign_ok},
              {"product_ok", s.product_ok},
              {"min_defect", s.min_defect},
              {"max_defect", s.max_defect},
              {"max_corner_gap", s.max_corner_gap},
              {"sign_passed", s.sign_passed()},
              {"product_passed", s.product_passed()},
              {"nodes", nodes}};
}

Json to_json(const lemmas::Lemma3Report& r) {
  Json ext = Json::array();
  for (const auto& e : r.extrema) {
    ext.push_back({{"alpha_crit", e.alpha_crit}, {"s_crit", e.s_crit}, {"kind", lemmas::to_string(e.kind)}});
  }
  return Json{{"ell", r.ell},
              {"beta", r.beta},
              {"n", r.n},
              {"feasible_nodes", r.feasible_nodes},
              {"skipped_nodes", r.skipped_nodes},
              {"degenerate", r.degenerate},
              {"extrema", ext},
              {"max_isosceles_gap", r.max_isosceles_gap},
              {"rejected_candidates", r.rejected_candidates},
              {"kinds_ok", r.kinds_ok},
              {"kinds_reversed", r.kinds_reversed}};
}

Json to_json(const lemmas::CaseBReport& r) {
  double max_ratio = 0.0;
  double min_reversed = std::numeric_limits<double>::infinity();
  for (const auto& n : r.nodes) {
    max_ratio = std::max(max_ratio, n.ratio);
    min_reversed = std::min(min_reversed, n.reversed_ratio);
  }
  return Json{{"beta", r.beta},
              {"nodes", r.nodes.size()},
              {"feasible", r.feasible},
              {"max_ratio", max_ratio},
              {"min_reversed_ratio", min_reversed},
              {"min_constraint", r.min_constraint}};
}

Json to_json(const eigencheck::ConvergenceStudy& c) {
  return Json{{"n", c.n}, {"residuals", c.residuals}, {"orders", c.orders}};
}

Json to_json(const eigencheck::SlitContinuity& s) {
  return Json{{"samples", s.samples},
              {"max_mismatch", s.max_mismatch},
              {"value_at_C", s.value_at_C},
              {"value_at_D", s.value_at_D}};
}

Json to_json(const admissibility::LatticeProjection& p) {
  return Json{{"point", p.point}, {"distance", p.distance}};
}

}  // namespace sphcone::report
