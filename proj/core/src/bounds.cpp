#include "polybound/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace polybound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> resolve_radii(std::size_t n, std::vector<double> radii) {
  if (radii.empty()) radii.assign(n, 1.0);
  return radii;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// f_{d,i} * N_i^d, computed one way everywhere so that c_j - f_{d,i} N_i^d is exactly 0 at the maximizer.
double scaled_diag(const SupportProfile& profile, const ConstraintSystem& cs, std::size_t i) {
  return profile.diag[i] * std::pow(cs.radii[i], cs.d);
}

std::string z_name(const ExponentVector& alpha, std::size_t i) {
  std::string s = "z[";
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(alpha[k]);
  }
  return s + "]_" + std::to_string(i + 1);
}

/// Adds z_{alpha,i} for every alpha in delta and i with alpha_i > 0.
std::vector<std::vector<VariableId>> add_z_variables(const SupportProfile& profile, GeometricProgram& gp) {
  std::vector<std::vector<VariableId>> z(profile.delta.size(), std::vector<VariableId>(profile.n, kNoVariable));
  for (std::size_t k = 0; k < profile.delta.size(); ++k) {
    const auto& alpha = profile.delta[k].alpha;
    for (std::size_t i = 0; i < profile.n; ++i) {
      if (alpha[i] > 0) z[k][i] = gp.add_variable(z_name(alpha, i));
    }
  }
  return z;
}

/// sum_i alpha_i log alpha_i over alpha_i > 0.
double alpha_log_alpha(const ExponentVector& alpha) {
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0) s += alpha[i] * std::log(static_cast<double>(alpha[i]));
  }
  return s;
}

/// Objective terms (d-|a|) [ (f_a/d)^d (a/z_a)^a ]^{1/(d-|a|)} for |a| < d, and
/// monomial equalities (z_a/a)^a (f_a/d)^{-d} = 1 for |a| = d. d is even, so
/// (f_a/d)^d = |f_a/d|^d.
void add_delta_terms(const SupportProfile& profile, const std::vector<std::vector<VariableId>>& z,
                     GeometricProgram& gp) {
  const int d = profile.d;
  for (std::size_t k = 0; k < profile.delta.size(); ++k) {
    const auto& [alpha, coeff] = profile.delta[k];
    const int deg = alpha.degree();
    const double log_fd = d * std::log(std::fabs(coeff) / d);
    const double a_log_a = alpha_log_alpha(alpha);
    if (deg < d) {
      const double gap = static_cast<double>(d - deg);
      std::vector<std::pair<VariableId, double>> exps;
      for (std::size_t i = 0; i < profile.n; ++i) {
        if (alpha[i] > 0) exps.emplace_back(z[k][i], -alpha[i] / gap);
      }
      gp.add_objective_term(MonomialTerm::with_log_coefficient(std::log(gap) + (log_fd + a_log_a) / gap, std::move(exps)));
    } else {
      std::vector<std::pair<VariableId, double>> exps;
      for (std::size_t i = 0; i < profile.n; ++i) {
        if (alpha[i] > 0) exps.emplace_back(z[k][i], static_cast<double>(alpha[i]));
      }
      gp.add_equality(MonomialTerm::with_log_coefficient(-a_log_a - log_fd, std::move(exps)));
    }
  }
}

GpStats stats_of(const GeometricProgram& gp) {
  GpStats s;
  s.variables = gp.num_variables();
  s.inequalities = gp.inequalities().size();
  s.equalities = gp.equalities().size();
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConstraintSystem

ConstraintSystem ConstraintSystem::singletons(std::size_t n, int d, std::vector<double> radii) {
  ConstraintSystem cs{n, d, resolve_radii(n, std::move(radii)), {}};
  for (std::size_t i = 0; i < n; ++i) cs.blocks.push_back({i});
  return cs;
}

ConstraintSystem ConstraintSystem::one_block(std::size_t n, int d, std::vector<double> radii) {
  ConstraintSystem cs{n, d, resolve_radii(n, std::move(radii)), {}};
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (n > 0) cs.blocks.push_back(std::move(all));
  return cs;
}

ConstraintSystem ConstraintSystem::unconstrained(std::size_t n, int d) {
  return ConstraintSystem{n, d, std::vector<double>(n, 1.0), {}};
}

void ConstraintSystem::validate() const {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("d must be an even integer >= 2");
  if (radii.size() != n) throw std::invalid_argument("expected " + std::to_string(n) + " radii");
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("radii must be positive and finite");
  }
  if (blocks.empty()) return;
  std::vector<int> seen(n, 0);
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("partition blocks must be nonempty");
    for (std::size_t i : block) {
      if (i >= n) throw std::invalid_argument("partition index " + std::to_string(i + 1) + " out of range");
      if (seen[i]++) throw std::invalid_argument("index " + std::to_string(i + 1) + " appears in two blocks");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw std::invalid_argument("index " + std::to_string(i + 1) + " missing from the partition");
  }
}

bool ConstraintSystem::refines(const ConstraintSystem& coarser) const {
  std::vector<std::size_t> owner(n, coarser.blocks.size());
  for (std::size_t q = 0; q < coarser.blocks.size(); ++q) {
    for (std::size_t i : coarser.blocks[q]) {
      if (i < n) owner[i] = q;
    }
  }
  for (const auto& block : blocks) {
    for (std::size_t i : block) {
      if (i >= n || owner[i] != owner[block.front()]) return false;
    }
  }
  return true;
}

bool ConstraintSystem::contains(std::span<const double> x, double tol) const {
  if (x.size() != n) return false;
  for (const auto& block : blocks) {
    double s = 0.0;
    for (std::size_t i : block) s += std::pow(std::fabs(x[i]) / radii[i], d);
    if (s > 1.0 + tol) return false;
  }
  return true;
}

const char* to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::Finite: return "Finite";
    case BoundStatus::MinusInfinity: return "MinusInfinity";
    case BoundStatus::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::GpRn: return "GpRn";
    case BoundKind::Ellipsoid: return "Ellipsoid";
    case BoundKind::Trivial: return "Trivial";
    case BoundKind::Hypercube: return "Hypercube";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Unconstrained bound

LwProgram build_lw(const SupportProfile& profile) {
  LwProgram out;
  for (std::size_t i = 0; i < profile.n; ++i) {
    if (profile.diag[i] < 0.0) {
      out.verdict = LwVerdict::EmptyFeasible;
      out.reason = "coefficient of x" + std::to_string(i + 1) + "^d is negative";
      return out;
    }
  }
  if (profile.delta.empty()) {
    out.verdict = LwVerdict::NoDeltaTerms;
    out.reason = "every non-diagonal term is a square";
    return out;
  }
  for (std::size_t i = 0; i < profile.n; ++i) {
    if (profile.diag[i] != 0.0) continue;
    for (const auto& term : profile.delta) {
      if (term.alpha[i] > 0) {
        out.verdict = LwVerdict::EmptyFeasible;
        out.reason = "x" + std::to_string(i + 1) + "^d is absent but a non-square term involves x" +
                     std::to_string(i + 1);
        return out;
      }
    }
  }

  out.z_vars = add_z_variables(profile, out.gp);
  add_delta_terms(profile, out.z_vars, out.gp);
  for (std::size_t i = 0; i < profile.n; ++i) {
    Posynomial row;
    for (std::size_t k = 0; k < profile.delta.size(); ++k) {
      if (out.z_vars[k][i] == kNoVariable) continue;
      row.terms.push_back(MonomialTerm::with_log_coefficient(-std::log(profile.diag[i]), {{out.z_vars[k][i], 1.0}}));
    }
    if (!row.empty()) out.gp.add_inequality(std::move(row));
  }
  return out;
}

BoundReport gp_lower_bound(const Polynomial& f, int d, const BoundOptions& options) {
  return gp_lower_bound(classify_support(f, d), options);
}

BoundReport gp_lower_bound(const SupportProfile& profile, const BoundOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  BoundReport report;
  report.kind = BoundKind::GpRn;
  LwProgram lw = build_lw(profile);
  if (lw.verdict == LwVerdict::EmptyFeasible) {
    report.bound = -kInf;
    report.status = BoundStatus::MinusInfinity;
    report.certificate_note = "empty feasible set: " + lw.reason;
    report.gp_stats.wall_ms = elapsed_ms(start);
    return report;
  }
  if (lw.verdict == LwVerdict::NoDeltaTerms) {
    report.bound = profile.constant;
    report.certificate_note = "f - f(0) is a sum of squares of monomials; " + lw.reason;
    report.gp_stats.wall_ms = elapsed_ms(start);
    return report;
  }

  report.gp_stats = stats_of(lw.gp);
  const GpSolution sol = solve(lw.gp, options.solver);
  report.solver_status = sol.status;
  report.gp_stats.iterations = sol.iterations;
  switch (sol.status) {
    case GpStatus::Optimal:
      report.bound = profile.constant - *sol.optimum;
      report.certificate_note = "f - f(0) + rho is a sum of binomial squares, rho = " + format_real(*sol.optimum);
      break;
    case GpStatus::Infeasible:
      report.bound = -kInf;
      report.status = BoundStatus::MinusInfinity;
      report.certificate_note = "empty feasible set: " + sol.message;
      break;
    default:
      report.bound = std::numeric_limits<double>::quiet_NaN();
      report.status = BoundStatus::SolverFailure;
      report.certificate_note = std::string("solver failed: ") + to_string(sol.status) + ", " + sol.message;
      break;
  }
  report.gp_stats.wall_ms = elapsed_ms(start);
  return report;
}

// ---------------------------------------------------------------------------
// Product of hyperellipsoids

std::vector<double> compute_cj(const SupportProfile& profile, const ConstraintSystem& cs) {
  std::vector<double> c(cs.blocks.size(), 0.0);
  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    for (std::size_t i : cs.blocks[j]) c[j] = std::max(c[j], scaled_diag(profile, cs, i));
  }
  return c;
}

Lw3Program build_lw3(const SupportProfile& profile, const ConstraintSystem& cs) {
  if (cs.blocks.empty()) throw std::invalid_argument("the constrained program needs at least one block");
  if (cs.n != profile.n) throw std::invalid_argument("constraint system and polynomial disagree on n");
  if (cs.d != profile.d) throw std::invalid_argument("constraint system and support profile disagree on d");

  Lw3Program out;
  out.c = compute_cj(profile, cs);
  out.z_vars = add_z_variables(profile, out.gp);

  std::vector<bool> has_z(profile.n, false);
  for (const auto& zk : out.z_vars) {
    for (std::size_t i = 0; i < profile.n; ++i) has_z[i] = has_z[i] || zk[i] != kNoVariable;
  }

  out.mu_vars.assign(cs.blocks.size(), std::nullopt);
  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    bool constrained = out.c[j] > 0.0;
    for (std::size_t i : cs.blocks[j]) {
      constrained = constrained || has_z[i] || out.c[j] - scaled_diag(profile, cs, i) > 0.0;
    }
    if (constrained) out.mu_vars[j] = out.gp.add_variable("mu_" + std::to_string(j + 1));
  }

  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    if (out.mu_vars[j]) out.gp.add_objective_term(MonomialTerm::with_log_coefficient(0.0, {{*out.mu_vars[j], 1.0}}));
  }
  add_delta_terms(profile, out.z_vars, out.gp);

  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    if (!out.mu_vars[j]) continue;
    const VariableId mu = *out.mu_vars[j];
    for (std::size_t i : cs.blocks[j]) {
      // N_i^d mu^-1 sum_a z_{a,i} + (c_j - f_{d,i} N_i^d) mu^-1 <= 1
      Posynomial row;
      const double log_nd = cs.d * std::log(cs.radii[i]);
      for (const auto& zk : out.z_vars) {
        if (zk[i] == kNoVariable) continue;
        row.terms.push_back(MonomialTerm::with_log_coefficient(log_nd, {{zk[i], 1.0}, {mu, -1.0}}));
      }
      const double slack = out.c[j] - scaled_diag(profile, cs, i);
      if (slack > 0.0) row.terms.push_back(MonomialTerm::with_coefficient(slack, {{mu, -1.0}}));
      if (!row.empty()) out.gp.add_inequality(std::move(row));
    }
    if (out.c[j] > 0.0) {
      out.gp.add_inequality(Posynomial{{MonomialTerm::with_coefficient(out.c[j], {{mu, -1.0}})}});
    }
  }
  return out;
}

BoundReport ellipsoid_lower_bound(const Polynomial& f, const ConstraintSystem& cs, const BoundOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  cs.validate();
  if (cs.n != f.num_variables()) throw std::invalid_argument("constraint system and polynomial disagree on n");
  if (cs.blocks.empty()) throw std::invalid_argument("the constrained bound needs at least one block");
  const SupportProfile profile = classify_support(f, cs.d);
  const Lw3Program lw3 = build_lw3(profile, cs);

  BoundReport report;
  report.kind = BoundKind::Ellipsoid;
  report.c = lw3.c;
  report.gp_stats = stats_of(lw3.gp);
  const double c_sum = std::accumulate(lw3.c.begin(), lw3.c.end(), 0.0);

  if (profile.delta.empty()) {
    // Only mu_j remain, each bounded below by monomials: mu_j = max(c_j, c_j - f_{d,i} N_i^d).
    double rho = 0.0;
    report.lambda.assign(cs.blocks.size(), 0.0);
    for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
      if (!lw3.mu_vars[j]) continue;
      double mu = lw3.c[j];
      for (std::size_t i : cs.blocks[j]) mu = std::max(mu, lw3.c[j] - scaled_diag(profile, cs, i));
      rho += mu;
      report.lambda[j] = mu - lw3.c[j];
    }
    report.bound = profile.constant + c_sum - rho;
    report.certificate_note = "no delta terms: the program is solved in closed form; rho = " + format_real(rho);
    report.gp_stats.wall_ms = elapsed_ms(start);
    return report;
  }

  const GpSolution sol = solve(lw3.gp, options.solver);
  report.solver_status = sol.status;
  report.gp_stats.iterations = sol.iterations;
  if (!sol.optimal()) {
    report.bound = std::numeric_limits<double>::quiet_NaN();
    report.status = BoundStatus::SolverFailure;
    report.certificate_note = std::string("solver failed: ") + to_string(sol.status) + ", " + sol.message;
    report.gp_stats.wall_ms = elapsed_ms(start);
    return report;
  }
  report.bound = profile.constant + c_sum - *sol.optimum;
  report.lambda.assign(cs.blocks.size(), 0.0);
  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    if (lw3.mu_vars[j]) report.lambda[j] = std::max(0.0, sol.point[*lw3.mu_vars[j]] - lw3.c[j]);
  }
  report.certificate_note = "sup over lambda >= 0 of the unconstrained bound of f - sum_j lambda_j g_j; rho = " +
                            format_real(*sol.optimum);
  report.gp_stats.wall_ms = elapsed_ms(start);
  return report;
}

// ---------------------------------------------------------------------------
// Hypercube

double trivial_bound(const Polynomial& f, std::span<const double> radii) {
  if (radii.size() != f.num_variables()) throw std::invalid_argument("expected one radius per variable");
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
  }
  double bound = f.constant_term();
  for (const auto& [alpha, coeff] : delta_prime(f)) {
    double power = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0) power *= std::pow(radii[i], alpha[i]);
    }
    bound -= std::fabs(coeff) * power;
  }
  return bound;
}

BoundReport hypercube_lower_bound(const Polynomial& f, int d, std::span<const double> radii,
                                  const BoundOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ConstraintSystem cs = ConstraintSystem::singletons(f.num_variables(), d, {radii.begin(), radii.end()});
  cs.validate();
  const SupportProfile profile = classify_support(f, d);
  const bool nonpositive_diag =
      std::all_of(profile.diag.begin(), profile.diag.end(), [](double v) { return v <= 0.0; });
  if (options.hypercube_shortcut && nonpositive_diag) {
    BoundReport report;
    report.kind = BoundKind::Hypercube;
    report.bound = trivial_bound(f, radii);
    report.c = compute_cj(profile, cs);
    report.lambda.assign(cs.blocks.size(), 0.0);
    report.shortcut_applied = true;
    report.certificate_note = "all x_i^d coefficients are <= 0, so the bound equals the trivial bound";
    report.gp_stats.wall_ms = elapsed_ms(start);
    return report;
  }
  BoundReport report = ellipsoid_lower_bound(f, cs, options);
  report.kind = BoundKind::Hypercube;
  return report;
}

Polynomial scale_variables(const Polynomial& f, std::span<const double> radii) {
  if (radii.size() != f.num_variables()) throw std::invalid_argument("expected one radius per variable");
  Polynomial out(f.num_variables());
  for (const auto& [alpha, coeff] : f.terms()) {
    double c = coeff;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0) c *= std::pow(radii[i], alpha[i]);
    }
    out.add_term(alpha, c);
  }
  return out;
}

SupportProfile lagrangian_profile(const SupportProfile& profile, const ConstraintSystem& cs,
                                  std::span<const double> lambda) {
  if (lambda.size() != cs.blocks.size()) throw std::invalid_argument("expected one multiplier per block");
  SupportProfile out = profile;
  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    if (lambda[j] < 0.0) throw std::invalid_argument("multipliers must be nonnegative");
    out.constant -= lambda[j];
    for (std::size_t i : cs.blocks[j]) {
      const double shift = lambda[j] / std::pow(cs.radii[i], cs.d);
      const double shifted = profile.diag[i] + shift;
      // Cancellation down to rounding noise means the coefficient is exactly zero.
      out.diag[i] = std::fabs(shifted) <= 1e-13 * (std::fabs(profile.diag[i]) + shift) ? 0.0 : shifted;
    }
  }
  return out;
}

}  // namespace polybound
