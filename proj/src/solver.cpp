#include "sphcone/solver.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "sphcone/errors.hpp"
#include "sphcone/parallel.hpp"

namespace sphcone::solver {

namespace {

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec4 as_vector(const ConstraintResidual& r) { return Vec4(r.r[0], r.r[1], r.r[2], r.r[3]); }

bool is_valid(const TriangulatedMetric& m) { return validate(m).empty(); }

TriangulatedMetric shifted(const TriangulatedMetric& m, const Vec6& step) {
  TriangulatedMetric out = m;
  for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] += step[i];
  return out;
}

}  // namespace

double ConstraintResidual::norm() const {
  return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
}

ConstraintResidual residual(const TriangulatedMetric& m, const ConeAngleSpec& spec) {
  const ConeAngles a = cone_angles(m);
  const auto target = spec.cone_vector();
  return ConstraintResidual{{a.theta_A - target[0], a.theta_B - target[1], a.theta_D - target[2],
                             a.theta_C - target[3]}};
}

Jacobian jacobian(const TriangulatedMetric& m, const ConeAngleSpec& spec, double h) {
  if (!(h > 0.0)) throw RangeError("finite-difference step must be positive");
  Jacobian J;
  for (std::size_t i = 0; i < 6; ++i) {
    double step = h;
    bool done = false;
    for (int attempt = 0; attempt < 4 && !done; ++attempt, step /= 10.0) {
      TriangulatedMetric plus = m;
      TriangulatedMetric minus = m;
      plus[i] += step;
      minus[i] -= step;
      try {
        const Vec4 rp = as_vector(residual(plus, spec));
        const Vec4 rm = as_vector(residual(minus, spec));
        J.col(static_cast<Eigen::Index>(i)) = (rp - rm) / (2.0 * step);
        done = true;
      } catch (const ValidityError&) {
      }
    }
    if (!done) {
      throw ValidityError("jacobian: finite-difference probe in l" + std::to_string(i + 1) +
                          " crosses the validity boundary");
    }
  }
  return J;
}

RankResult numerical_rank(const Eigen::MatrixXd& J, double rel_tol) {
  RankResult out;
  if (J.size() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  if (s.size() == 0 || !(s[0] > 0.0)) return out;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] >= rel_tol * s[0]) ++out.rank;
  }
  return out;
}

std::string to_string(GaussNewtonStatus s) {
  switch (s) {
    case GaussNewtonStatus::converged: return "converged";
    case GaussNewtonStatus::max_iter: return "max_iter";
    case GaussNewtonStatus::boundary: return "boundary";
    case GaussNewtonStatus::stalled: return "stalled";
  }
  return "unknown";
}

GaussNewtonResult gauss_newton(const TriangulatedMetric& start, const ConeAngleSpec& spec,
                               const GaussNewtonOptions& opts) {
  GaussNewtonResult out;
  out.metric = start;
  if (!is_valid(start)) {
    out.status = GaussNewtonStatus::boundary;
    out.residual_norm = kNaN;
    return out;
  }

  constexpr double kLambdaMin = 1e-15;
  constexpr double kLambdaMax = 1e25;
  constexpr double kSingularCut = 1e-14;

  TriangulatedMetric x = start;
  Vec4 r = as_vector(residual(x, spec));
  double norm = r.norm();
  double lambda = opts.lambda0;
  out.status = GaussNewtonStatus::max_iter;

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    Jacobian J;
    try {
      J = jacobian(x, spec, opts.fd_step);
    } catch (const ValidityError&) {
      out.status = GaussNewtonStatus::boundary;
      break;
    }
    Eigen::JacobiSVD<Jacobian> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec4 s = svd.singularValues();
    const Vec4 ur = svd.matrixU().transpose() * r;

    auto damped_step = [&](double lam) {
      Vec6 step = Vec6::Zero();
      for (int k = 0; k < 4; ++k) {
        if (s[k] > kSingularCut * s[0]) {
          step -= svd.matrixV().col(k) * (s[k] / (s[k] * s[k] + lam) * ur[k]);
        }
      }
      return step;
    };

    bool accepted = false;
    bool hit_boundary = false;
    double step_norm = 0.0;
    while (!accepted && lambda <= kLambdaMax) {
      Vec6 step = damped_step(lambda);
      TriangulatedMetric trial = shifted(x, step);
      int halvings = 0;
      while (!is_valid(trial) && halvings < 30) {
        hit_boundary = true;
        step *= 0.5;
        trial = shifted(x, step);
        ++halvings;
      }
      if (halvings == 30) {
        lambda *= 10.0;
        continue;
      }
      const Vec4 r_trial = as_vector(residual(trial, spec));
      const double n_trial = r_trial.norm();
      if (n_trial < norm) {
        x = trial;
        r = r_trial;
        norm = n_trial;
        step_norm = step.norm();
        lambda = std::max(lambda / 10.0, kLambdaMin);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }

    if (!accepted) {
      // No descent direction left at working precision.
      if (norm < opts.res_tol) {
        out.status = GaussNewtonStatus::converged;
      } else {
        out.status = hit_boundary ? GaussNewtonStatus::boundary : GaussNewtonStatus::stalled;
      }
      break;
    }
    // Allow further decrease on the next pass.
    lambda = std::max(lambda, kLambdaMin);
    if (norm < opts.res_tol && step_norm < opts.step_tol) {
      ++iter;
      out.status = GaussNewtonStatus::converged;
      break;
    }
  }
  if (out.status == GaussNewtonStatus::max_iter && norm < opts.res_tol) {
    out.status = GaussNewtonStatus::converged;
  }
  out.metric = x;
  out.residual_norm = norm;
  out.iterations = iter;
  return out;
}

Lengths family_tangent(const GluedFootballParams& p) {
  const double s = p.t;
  auto chord_rate = [s](double angle) {
    const double k = std::sin(0.5 * angle);
    const double x = std::sin(s) * k;
    return 2.0 * std::cos(s) * k / std::sqrt(1.0 - x * x);
  };
  return {-1.0, -1.0, 1.0, 1.0, chord_rate(p.spec.alpha), chord_rate(p.spec.beta)};
}

FamilyFit family_distance(const TriangulatedMetric& m, const ConeAngleSpec& spec) {
  auto sq_dist = [&](double s) {
    try {
      const TriangulatedMetric g = glued_football({spec, s});
      double d = 0.0;
      for (std::size_t i = 0; i < 6; ++i) d += (m[i] - g[i]) * (m[i] - g[i]);
      return d;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  constexpr int kCoarse = 200;
  constexpr double kCell = kPi / kCoarse;
  double best_s = 0.5 * kCell;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kCoarse; ++k) {
    const double s = (k + 0.5) * kCell;
    const double f = sq_dist(s);
    if (f < best_f) {
      best_f = f;
      best_s = s;
    }
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(best_s - kCell, 1e-9);
  double hi = std::min(best_s + kCell, kPi - 1e-9);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = sq_dist(x1);
  double f2 = sq_dist(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    // Ties keep the left interval (smaller s).
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = sq_dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = sq_dist(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  double s_star = mid;
  double f_star = sq_dist(mid);
  if (best_f < f_star) {
    s_star = best_s;
    f_star = best_f;
  }
  return FamilyFit{s_star, std::sqrt(f_star)};
}

double max_feasible_radius(const TriangulatedMetric& m) {
  // Each constraint is w . l <= c with integer w; on the max-norm ball the
  // worst corner adds r * |w|_1.
  constexpr std::array<std::array<int, 3>, 4> kTriangles{{{0, 0, 4}, {2, 3, 4}, {1, 1, 5}, {3, 2, 5}}};
  const double margin = sphtrig::kValidityMargin;
  double radius = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::array<int, 6>& w, double c) {
    double lhs = 0.0;
    int l1 = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      lhs += w[i] * m[i];
      l1 += std::abs(w[i]);
    }
    if (l1 == 0) return;
    radius = std::min(radius, (c - lhs) / l1);
  };
  for (std::size_t i = 0; i < 6; ++i) {
    std::array<int, 6> w{};
    w[i] = -1;
    consider(w, -margin);
    w[i] = 1;
    consider(w, kPi - margin);
  }
  for (const auto& tri : kTriangles) {
    for (int r = 0; r < 3; ++r) {
      std::array<int, 6> w{};
      w[tri[r]] += 1;
      w[tri[(r + 1) % 3]] -= 1;
      w[tri[(r + 2) % 3]] -= 1;
      consider(w, -margin);
    }
    std::array<int, 6> w{};
    for (int idx : tri) w[idx] += 1;
    consider(w, kTwoPi - margin);
  }
  return radius;
}

bool RigidityReport::rigid() const {
  return converged > 0 && max_family_distance < options.dist_tol;
}

double RigidityReport::convergence_rate() const {
  return starts > 0 ? static_cast<double>(converged) / starts : 0.0;
}

RigidityReport rigidity_scan(const GluedFootballParams& p, const RigidityOptions& opts) {
  const TriangulatedMetric base = glued_football(p);
  const double max_radius = max_feasible_radius(base);
  if (!(opts.radius > 0.0) || !(opts.radius < max_radius)) {
    std::ostringstream os;
    os.precision(17);
    os << "sampling radius " << opts.radius << " must lie in (0, " << max_radius
       << "), the largest ball around g_t inside the valid region";
    throw RangeError(os.str());
  }
  if (opts.samples < 1) throw RangeError("rigidity scan needs at least one sample");

  RigidityReport report;
  report.params = p;
  report.options = opts;
  const RankResult rank = numerical_rank(jacobian(base, p.spec, opts.gn.fd_step), opts.rank_tol);
  report.singular_values = rank.singular_values;
  report.rank = rank.rank;
  report.kernel_dim = 6 - rank.rank;

  // Starts are drawn sequentially so they do not depend on the worker count.
  std::mt19937_64 rng(opts.seed);
  std::vector<TriangulatedMetric> starts(static_cast<std::size_t>(opts.samples), base);
  for (auto& s : starts) {
    for (std::size_t i = 0; i < 6; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      s[i] = base[i] + opts.radius * (2.0 * u - 1.0);
    }
  }

  struct Outcome {
    GaussNewtonResult gn;
    FamilyFit fit;
  };
  std::vector<Outcome> outcomes(starts.size());
  parallel_for(starts.size(), opts.workers, [&](std::size_t i) {
    outcomes[i].gn = gauss_newton(starts[i], p.spec, opts.gn);
    if (outcomes[i].gn.converged()) outcomes[i].fit = family_distance(outcomes[i].gn.metric, p.spec);
  });

  report.starts = opts.samples;
  for (const auto& o : outcomes) {
    switch (o.gn.status) {
      case GaussNewtonStatus::converged: {
        ++report.converged;
        report.max_family_distance = std::max(report.max_family_distance, o.fit.distance);
        report.solutions.push_back(SolutionRecord{o.gn.metric.lengths(), o.gn.residual_norm,
                                                  o.fit.s_star, o.fit.distance, o.gn.iterations});
        break;
      }
      case GaussNewtonStatus::boundary: ++report.failed_boundary; break;
      case GaussNewtonStatus::max_iter: ++report.failed_max_iter; break;
      case GaussNewtonStatus::stalled: ++report.failed_stalled; break;
    }
  }
  return report;
}

std::vector<DefectRow> defect_scan(const ConeAngleSpec& spec, const DefectGrid& grid, int workers) {
  const std::size_t n3 = grid.l3.size();
  const std::size_t n4 = grid.l4.size();
  const std::size_t ne = grid.eps.size();
  std::vector<DefectRow> rows(n3 * n4 * ne);
  parallel_for(rows.size(), workers, [&](std::size_t idx) {
    DefectRow& row = rows[idx];
    row.l3 = grid.l3[idx / (n4 * ne)];
    row.l4 = grid.l4[(idx / ne) % n4];
    row.eps = grid.eps[idx % ne];
    row.lengths = {kNaN, kNaN, row.l3, row.l4, kNaN, kNaN};
    row.residual.r = {kNaN, kNaN, kNaN, kNaN};
    try {
      const double d1 = spec.alpha - 2.0 * row.eps;
      const double d2 = spec.beta + 2.0 * row.eps;
      row.lengths[4] = sphtrig::side_from_sas(row.l3, row.l4, d1);
      row.lengths[5] = sphtrig::side_from_sas(row.l4, row.l3, d2);
      row.lengths[0] = sphtrig::sine_rule_side(0.5 * spec.alpha, 0.5 * row.lengths[4], 0.5 * kPi, grid.branch);
      row.lengths[1] = sphtrig::sine_rule_side(0.5 * spec.beta, 0.5 * row.lengths[5], 0.5 * kPi, grid.branch);
      row.residual = residual(TriangulatedMetric(row.lengths), spec);
      row.feasible = true;
    } catch (const Error&) {
      row.feasible = false;
      row.residual.r = {kNaN, kNaN, kNaN, kNaN};
    }
  });
  return rows;
}

std::string defect_csv(const std::vector<DefectRow>& rows) {
  std::string out = kDefectCsvHeader;
  out += '\n';
  char buf[64];
  for (const auto& row : rows) {
    for (double x : row.lengths) {
      std::snprintf(buf, sizeof buf, "%.17g,", x);
      out += buf;
    }
    for (double x : row.residual.r) {
      std::snprintf(buf, sizeof buf, "%.17g,", x);
      out += buf;
    }
    out += row.feasible ? "1\n" : "0\n";
  }
  return out;
}

}  // namespace sphcone::solver
