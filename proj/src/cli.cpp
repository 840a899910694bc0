#include "sphcone/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <variant>

#include <CLI11.hpp>

#include "sphcone/admissibility.hpp"
#include "sphcone/eigencheck.hpp"
#include "sphcone/errors.hpp"
#include "sphcone/lemmas.hpp"
#include "sphcone/metric.hpp"
#include "sphcone/report.hpp"
#include "sphcone/solver.hpp"

namespace sphcone::cli {

using report::Json;

namespace {

using FieldPtr = std::variant<double RunConfig::*, int RunConfig::*, std::uint64_t RunConfig::*,
                              std::string RunConfig::*>;

struct Field {
  const char* key;
  FieldPtr ptr;
  const char* help;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"alpha", &RunConfig::alpha, "cone angle at A (radians)"},
      {"beta", &RunConfig::beta, "cone angle at B (radians)"},
      {"t", &RunConfig::t, "slit length"},
      {"radius", &RunConfig::radius, "max-norm radius of the start ball"},
      {"samples", &RunConfig::samples, "number of starts"},
      {"seed", &RunConfig::seed, "RNG seed"},
      {"res_tol", &RunConfig::res_tol, "residual tolerance"},
      {"rank_tol", &RunConfig::rank_tol, "relative singular value cut"},
      {"dist_tol", &RunConfig::dist_tol, "family distance tolerance"},
      {"fd_step", &RunConfig::fd_step, "finite-difference step"},
      {"step_tol", &RunConfig::step_tol, "final step length tolerance"},
      {"max_iter", &RunConfig::max_iter, "Gauss-Newton iteration cap"},
      {"workers", &RunConfig::workers, "worker threads"},
      {"grid", &RunConfig::grid, "nodes per length axis"},
      {"scan_width", &RunConfig::scan_width, "half-width of the l3, l4 window around t"},
      {"eps_max", &RunConfig::eps_max, "largest |eps|"},
      {"eps_count", &RunConfig::eps_count, "eps nodes"},
      {"suite", &RunConfig::suite, "lemma1 | lemma2 | step1 | lemma3 | all"},
      {"ell", &RunConfig::ell, "fixed side for lemma3"},
      {"beta_angle", &RunConfig::beta_angle, "angle for lemma1, lemma2 and lemma3"},
      {"eps", &RunConfig::eps, "D-angle split for lemma2 and step1"},
      {"regime", &RunConfig::regime, "below | above"},
      {"ell_nodes", &RunConfig::ell_nodes, "ell nodes for lemma2 and step1"},
      {"lemma3_n", &RunConfig::lemma3_n, "alpha nodes for lemma3"},
      {"caseb_nodes", &RunConfig::caseb_nodes, "l1 nodes for lemma1"},
      {"n", &RunConfig::n, "radial grid nodes"},
      {"delta", &RunConfig::delta, "pole margin"},
      {"eigen_levels", &RunConfig::eigen_levels, "grids in the convergence study"},
      {"eigen_tol", &RunConfig::eigen_tol, "bound on the radial residual"},
      {"out", &RunConfig::out, "output path"},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw std::logic_error("unknown config key " + key);
}

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

void copy_field(RunConfig& dst, const RunConfig& src, const Field& f) {
  std::visit([&](auto p) { dst.*p = src.*p; }, f.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) throw IoError("cannot write " + path);
  o << text;
  if (!o.flush()) throw IoError("write failed for " + path);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw RangeError(std::string(name) + " must be positive");
}

void require_at_least(int x, int lo, const char* name) {
  if (x < lo) throw RangeError(std::string(name) + " must be at least " + std::to_string(lo));
}

double require_slit(double t) {
  if (!(t > 0.0 && t < kPi)) throw RangeError("t = " + fmt(t) + " outside (0, pi)");
  return t;
}

const std::vector<std::string>& command_keys(const std::string& name);

// Config restricted to the keys the command reads.
Json command_config(const RunConfig& cfg, const std::string& name) {
  const Json all = to_json(cfg);
  Json j = Json::object();
  for (const auto& key : command_keys(name)) j[key] = all.at(key);
  return j;
}

// Emits the report to --out or stdout.
int finish(const RunConfig& cfg, const std::string& command, bool passed, Json result, std::ostream& out,
           Json config_extra = Json::object()) {
  Json config = command_config(cfg, command);
  for (auto it = config_extra.begin(); it != config_extra.end(); ++it) config[it.key()] = it.value();
  const std::string text = report::render(report::envelope(command, config, passed, std::move(result)));
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
    out << command << ": " << (passed ? "PASS" : "FAIL") << " (report in " << cfg.out << ")\n";
  }
  return passed ? kExitPass : kExitAssertion;
}

int cmd_construct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConeAngleSpec spec = ConeAngleSpec::make(cfg.alpha, cfg.beta);
  const TriangulatedMetric m = glued_football({spec, require_slit(cfg.t)});
  const std::string doc = serialize(m, spec);
  const double res = solver::residual(m, spec).norm();
  if (cfg.out.empty()) {
    out << doc;
    err << "residual_norm " << fmt(res) << "\n";
  } else {
    write_file(cfg.out, doc);
    out << "residual_norm " << fmt(res) << "\n";
  }
  return kExitPass;
}

int cmd_check(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  const MetricDocument doc = parse_metric_document(read_file(path));
  Json result;
  bool passed = true;
  try {
    ConeAngleSpec::make(doc.spec.alpha, doc.spec.beta);
    result["spec_ok"] = true;
  } catch (const RangeError& e) {
    result["spec_ok"] = false;
    result["spec_error"] = e.what();
    passed = false;
  }
  result["lengths"] = report::to_json(doc.metric.lengths());
  const auto violations = validate(doc.metric);
  result["violations"] = report::to_json(violations);
  result["valid"] = violations.empty();
  if (violations.empty()) {
    result["cone_angles"] = report::to_json(cone_angles(doc.metric));
    result["residual"] = report::to_json(solver::residual(doc.metric, doc.spec));
  } else {
    passed = false;
  }
  return finish(cfg, "check", passed, std::move(result), out, Json{{"input", path}});
}

solver::RigidityOptions rigidity_options(const RunConfig& cfg) {
  solver::RigidityOptions o;
  o.radius = cfg.radius;
  o.samples = cfg.samples;
  o.seed = cfg.seed;
  o.rank_tol = cfg.rank_tol;
  o.dist_tol = cfg.dist_tol;
  o.workers = cfg.workers;
  o.gn.max_iter = cfg.max_iter;
  o.gn.res_tol = cfg.res_tol;
  o.gn.fd_step = cfg.fd_step;
  o.gn.step_tol = cfg.step_tol;
  return o;
}

int cmd_rigidity(const RunConfig& cfg, std::ostream& out) {
  const GluedFootballParams p{ConeAngleSpec::make(cfg.alpha, cfg.beta), require_slit(cfg.t)};
  const auto rep = solver::rigidity_scan(p, rigidity_options(cfg));
  return finish(cfg, "rigidity", rep.rigid(), report::to_json(rep), out);
}

std::vector<double> symmetric_grid(double center, double half_width, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    g[static_cast<std::size_t>(k)] =
        count == 1 ? center : center + half_width * (2.0 * k / (count - 1) - 1.0);
  }
  return g;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const ConeAngleSpec spec = ConeAngleSpec::make(cfg.alpha, cfg.beta);
  const double t = require_slit(cfg.t);
  solver::DefectGrid grid;
  grid.l3 = symmetric_grid(t, cfg.scan_width, cfg.grid);
  grid.l4 = grid.l3;
  grid.eps = symmetric_grid(0.0, cfg.eps_max, cfg.eps_count);
  // The family has legs l1 = pi - t.
  grid.branch = t >= 0.5 * kPi ? sphtrig::Branch::acute : sphtrig::Branch::obtuse;
  const auto rows = solver::defect_scan(spec, grid, cfg.workers);

  constexpr double kZero = 1e-9;
  int feasible = 0;
  int family_nodes = 0;
  int positive = 0;
  int negative = 0;
  int near_zero = 0;
  double max_other = 0.0;
  double max_family_rc = 0.0;
  double min_abs_rc = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (!r.feasible) continue;
    ++feasible;
    max_other = std::max({max_other, std::abs(r.residual.rA()), std::abs(r.residual.rB()),
                          std::abs(r.residual.rD())});
    const double rc = r.residual.rC();
    if (r.l3 == r.l4 && r.eps == 0.0) {
      ++family_nodes;
      max_family_rc = std::max(max_family_rc, std::abs(rc));
      continue;
    }
    min_abs_rc = std::min(min_abs_rc, std::abs(rc));
    if (std::abs(rc) <= kZero) {
      ++near_zero;
    } else if (rc > 0.0) {
      ++positive;
    } else {
      ++negative;
    }
  }
  const bool single_sign = near_zero == 0 && (positive == 0 || negative == 0) && positive + negative > 0;
  const bool passed = feasible > 0 && max_other < kZero && max_family_rc < kZero && single_sign;
  Json result{{"nodes", rows.size()},
              {"feasible", feasible},
              {"branch", grid.branch == sphtrig::Branch::acute ? "acute" : "obtuse"},
              {"family_nodes", family_nodes},
              {"max_abs_rA_rB_rD", max_other},
              {"max_abs_rC_on_family", max_family_rc},
              {"off_family_positive", positive},
              {"off_family_negative", negative},
              {"off_family_near_zero", near_zero},
              {"min_abs_rC_off_family", feasible > family_nodes ? Json(min_abs_rc) : Json(nullptr)},
              {"rC_sign", positive > 0 && negative == 0 ? 1 : (negative > 0 && positive == 0 ? -1 : 0)}};
  if (cfg.out.empty()) {
    out << report::render(report::envelope("scan", command_config(cfg, "scan"), passed, std::move(result)));
  } else {
    write_file(cfg.out, solver::defect_csv(rows));
    out << report::render(report::envelope("scan", command_config(cfg, "scan"), passed, std::move(result)));
  }
  return passed ? kExitPass : kExitAssertion;
}

int cmd_lemmas(const RunConfig& cfg, std::ostream& out) {
  static const std::vector<std::string> kSuites{"lemma1", "lemma2", "step1", "lemma3"};
  std::vector<std::string> suites;
  if (cfg.suite == "all") {
    suites = kSuites;
  } else if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) != kSuites.end()) {
    suites = {cfg.suite};
  } else {
    throw RangeError("unknown suite '" + cfg.suite + "'");
  }
  const lemmas::Regime regime = lemmas::parse_regime(cfg.regime);

  Json result;
  bool passed = true;
  for (const auto& s : suites) {
    Json r;
    bool ok = false;
    if (s == "lemma1") {
      const auto rep = lemmas::lemma1_caseb_exclusion(cfg.beta_angle, lemmas::midpoint_grid(cfg.caseb_nodes));
      r = report::to_json(rep);
      ok = rep.passed();
    } else if (s == "lemma2") {
      const auto sweep = lemmas::defect_sweep(cfg.beta_angle, cfg.beta_angle, {cfg.eps},
                                              lemmas::regime_ell_grid(regime, cfg.ell_nodes), regime, cfg.workers);
      r = report::to_json(sweep);
      ok = sweep.passed();
    } else if (s == "step1") {
      const auto sweep = lemmas::step1_asymmetric_exclusion(
          cfg.alpha, cfg.beta, cfg.eps, lemmas::regime_ell_grid(regime, cfg.ell_nodes), regime, cfg.workers);
      r = report::to_json(sweep);
      ok = sweep.passed();
    } else {
      const auto rep = lemmas::lemma3_sweep(cfg.ell, cfg.beta_angle, cfg.lemma3_n);
      r = report::to_json(rep);
      ok = rep.passed();
    }
    r["passed"] = ok;
    passed = passed && ok;
    result[s] = std::move(r);
  }
  return finish(cfg, "lemmas", passed, std::move(result), out);
}

int cmd_eigen(const RunConfig& cfg, std::ostream& out) {
  const eigencheck::RadialGrid grid{cfg.n, cfg.delta};
  const double residual = eigencheck::radial_residual(grid, cfg.alpha);
  const auto study = eigencheck::convergence_study(grid, cfg.eigen_levels, cfg.alpha);
  const auto slit = eigencheck::slit_continuity(cfg.alpha, cfg.beta, require_slit(cfg.t));
  constexpr double kOrderLo = 1.9;
  constexpr double kOrderHi = 2.1;
  const bool orders_ok = std::all_of(study.orders.begin(), study.orders.end(),
                                     [](double p) { return p >= kOrderLo && p <= kOrderHi; });
  const bool passed = residual < cfg.eigen_tol && orders_ok && slit.max_mismatch == 0.0;
  Json result{{"residual", residual},
              {"convergence", report::to_json(study)},
              {"orders_ok", orders_ok},
              {"slit", report::to_json(slit)}};
  return finish(cfg, "eigen", passed, std::move(result), out);
}

int cmd_admissible(const RunConfig& cfg, std::ostream& out) {
  const ConeAngleSpec spec = ConeAngleSpec::make(cfg.alpha, cfg.beta);
  const auto v = admissibility::family_vector(spec);
  const auto odd_sum = admissibility::nearest_odd_point(v);
  const auto all_odd = admissibility::nearest_odd_point(v, admissibility::OddLattice::all_odd);
  const double chi = admissibility::chi(v);
  const double area = total_area(glued_football({spec, require_slit(cfg.t)}));
  constexpr double kDistanceTol = 1e-12;
  constexpr double kChiTol = 1e-10;
  const double chi_expected = (cfg.alpha + cfg.beta) / kPi;
  const bool passed = std::abs(odd_sum.distance - 1.0) < kDistanceTol &&
                      std::abs(chi - chi_expected) < kChiTol && std::abs(area - kTwoPi * chi) < kChiTol;
  Json result{{"beta_vector", v.beta},
              {"mp_distance", odd_sum.distance},
              {"nearest_odd_sum_point", odd_sum.point},
              {"all_odd", report::to_json(all_odd)},
              {"chi", chi},
              {"total_area", area},
              {"two_pi_chi", kTwoPi * chi}};
  return finish(cfg, "admissible", passed, std::move(result), out);
}

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> keys;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table{
      {"construct", "write the glued-football metric document", {"alpha", "beta", "t", "out"}},
      {"check", "validate a metric document", {"out"}},
      {"rigidity",
       "multi-start local rigidity scan around g_t",
       {"alpha", "beta", "t", "radius", "samples", "seed", "workers", "res_tol", "rank_tol", "dist_tol",
        "fd_step", "step_tol", "max_iter", "out"}},
      {"scan",
       "C-defect scan over (l3, l4, eps) around g_t; --out receives the CSV",
       {"alpha", "beta", "t", "grid", "scan_width", "eps_max", "eps_count", "workers", "out"}},
      {"lemmas",
       "lemma suites",
       {"suite", "alpha", "beta", "ell", "beta_angle", "eps", "regime", "ell_nodes", "lemma3_n", "caseb_nodes",
        "workers", "out"}},
      {"eigen", "radial eigenfunction check", {"n", "delta", "alpha", "beta", "t", "eigen_levels", "eigen_tol", "out"}},
      {"admissible", "angle-data checks for the family", {"alpha", "beta", "t", "out"}},
  };
  return table;
}

const std::vector<std::string>& command_keys(const std::string& name) {
  for (const auto& c : commands()) {
    if (name == c.name) return c.keys;
  }
  throw std::logic_error("unknown command " + name);
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json j = Json::object();
  for (const auto& f : fields()) {
    std::visit([&](auto p) { j[f.key] = c.*p; }, f.ptr);
  }
  return j;
}

void apply_json(RunConfig& c, const Json& j) {
  if (!j.is_object()) throw ParseError("config is not an object", "root");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto match = std::find_if(fields().begin(), fields().end(),
                                    [&](const Field& f) { return it.key() == f.key; });
    if (match == fields().end()) throw ParseError("unknown config key \"" + it.key() + "\"", it.key());
    const Json& v = it.value();
    std::visit(
        [&](auto p) {
          using T = std::remove_reference_t<decltype(c.*p)>;
          bool ok = false;
          if constexpr (std::is_same_v<T, double>) {
            ok = v.is_number();
          } else if constexpr (std::is_same_v<T, int>) {
            ok = v.is_number_integer() && v.template get<long long>() >= std::numeric_limits<int>::min() &&
                 v.template get<long long>() <= std::numeric_limits<int>::max();
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            ok = v.is_number_unsigned();
          } else {
            ok = v.is_string();
          }
          if (!ok) throw ParseError("config key \"" + it.key() + "\" has the wrong type", it.key());
          c.*p = v.template get<T>();
        },
        match->ptr);
  }
}

void validate(const RunConfig& c) {
  require_positive(c.radius, "radius");
  require_positive(c.res_tol, "res_tol");
  require_positive(c.rank_tol, "rank_tol");
  require_positive(c.dist_tol, "dist_tol");
  require_positive(c.fd_step, "fd_step");
  require_positive(c.step_tol, "step_tol");
  require_positive(c.scan_width, "scan_width");
  require_positive(c.delta, "delta");
  require_positive(c.eigen_tol, "eigen_tol");
  if (!(c.eps_max >= 0.0)) throw RangeError("eps_max must be non-negative");
  require_at_least(c.samples, 1, "samples");
  require_at_least(c.max_iter, 1, "max_iter");
  require_at_least(c.workers, 1, "workers");
  require_at_least(c.grid, 1, "grid");
  require_at_least(c.eps_count, 1, "eps_count");
  require_at_least(c.ell_nodes, 1, "ell_nodes");
  require_at_least(c.lemma3_n, 5, "lemma3_n");
  require_at_least(c.caseb_nodes, 1, "caseb_nodes");
  require_at_least(c.n, 3, "n");
  require_at_least(c.eigen_levels, 2, "eigen_levels");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical cone metrics near the glued-football family"};
  app.name("sphcone");
  app.require_subcommand(1);
  app.set_version_flag("--version", report::kVersion);

  RunConfig from_flags;
  std::string config_path;
  std::string check_path;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> bound;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "JSON config file");
    if (std::string(cmd.name) == "check") sub->add_option("metric", check_path, "metric document")->required();
    for (const auto& key : cmd.keys) {
      const Field& f = field(key);
      CLI::Option* opt = std::visit(
          [&](auto p) { return sub->add_option(flag_name(key), from_flags.*p, f.help); }, f.ptr);
      bound[cmd.name].emplace_back(key, opt);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      Json j;
      try {
        j = Json::parse(read_file(config_path));
      } catch (const Json::parse_error& e) {
        throw ParseError(e.what(), config_path + ": byte " + std::to_string(e.byte));
      }
      apply_json(cfg, j);
    }
    for (const auto& [key, opt] : bound[name]) {
      if (opt->count() > 0) copy_field(cfg, from_flags, field(key));
    }
    validate(cfg);

    if (name == "construct") return cmd_construct(cfg, out, err);
    if (name == "check") return cmd_check(cfg, check_path, out);
    if (name == "rigidity") return cmd_rigidity(cfg, out);
    if (name == "scan") return cmd_scan(cfg, out);
    if (name == "lemmas") return cmd_lemmas(cfg, out);
    if (name == "eigen") return cmd_eigen(cfg, out);
    if (name == "admissible") return cmd_admissible(cfg, out);
    err << "unknown command " << name << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const RangeError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace sphcone::cli
