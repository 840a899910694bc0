#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it with in-memory streams.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace sphcone::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Every tunable of every command. A config file is a JSON object with any
/// subset of these keys; flags given on the command line take precedence.
struct RunConfig {
  double alpha = 1.5707963267948966;
  double beta = 1.5707963267948966;
  double t = 1.0471975511965976;

  double radius = 0.05;
  int samples = 500;
  std::uint64_t seed = 7;
  double res_tol = 1e-11;
  double rank_tol = 1e-6;
  double dist_tol = 1e-6;
  double fd_step = 1e-6;
  double step_tol = 1e-10;
  int max_iter = 50;
  int workers = 1;

  int grid = 21;
  double scan_width = 0.1;
  double eps_max = 0.05;
  int eps_count = 11;

  std::string suite = "all";
  double ell = 1.0471975511965976;
  double beta_angle = 1.5707963267948966;
  double eps = 0.05;
  std::string regime = "below";
  int ell_nodes = 200;
  int lemma3_n = 400;
  int caseb_nodes = 1000;

  int n = 1001;
  double delta = 0.1;
  int eigen_levels = 4;
  double eigen_tol = 1e-4;

  std::string out;
};

nlohmann::json to_json(const RunConfig& c);

/// Overrides the fields named in `j`. Unknown keys and wrong value types
/// raise ParseError.
void apply_json(RunConfig& c, const nlohmann::json& j);

/// Throws RangeError for non-positive tolerances, empty grids and the like.
void validate(const RunConfig& c);

/// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphcone::cli
