#pragma once

// JSON rendering of the suite results. Objects are key-sorted and doubles use
// the shortest round-trip representation, so equal inputs give equal bytes.

#include <string>

#include <json.hpp>

#include "sphcone/admissibility.hpp"
#include "sphcone/eigencheck.hpp"
#include "sphcone/lemmas.hpp"
#include "sphcone/metric.hpp"
#include "sphcone/solver.hpp"

namespace sphcone::report {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "sphcone 1.0.0";

/// Two-space indented text with a trailing newline.
std::string render(const Json& doc);

/// {"command", "config", "passed", "result", "version"}.
Json envelope(const std::string& command, const Json& config, bool passed, Json result);

Json to_json(const Lengths& l);
Json to_json(const ConeAngles& a);
Json to_json(const solver::ConstraintResidual& r);
Json to_json(const std::vector<MetricViolation>& v);
Json to_json(const solver::RigidityReport& r);
Json to_json(const lemmas::DefectSweep& s);
Json to_json(const lemmas::Lemma3Report& r);
Json to_json(const lemmas::CaseBReport& r);
Json to_json(const eigencheck::ConvergenceStudy& c);
Json to_json(const eigencheck::SlitContinuity& s);
Json to_json(const admissibility::LatticeProjection& p);

}  // namespace sphcone::report
