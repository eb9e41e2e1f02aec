#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polybound {

using VariableId = std::size_t;

/// c * prod_k x_k^{a_k} with c > 0, stored as log c so that coefficients
/// such as (f/d)^d for d = 60 neither overflow nor underflow.
struct MonomialTerm {
  double log_coeff = 0.0;
  std::vector<std::pair<VariableId, double>> exponents;

  /// Throws std::invalid_argument unless coeff > 0.
  static MonomialTerm with_coefficient(double coeff, std::vector<std::pair<VariableId, double>> exponents = {});
  static MonomialTerm with_log_coefficient(double log_coeff,
                                           std::vector<std::pair<VariableId, double>> exponents = {});
};

struct Posynomial {
  std::vector<MonomialTerm> terms;

  bool empty() const { return terms.empty(); }
};

/// minimize objective(x)  s.t.  p(x) <= 1 for each inequality p,  m(x) = 1 for each equality m,
/// over x in (0, inf)^k. An empty objective makes this a pure feasibility problem with optimum 0.
class GeometricProgram {
 public:
  VariableId add_variable(std::string name);

  void add_objective_term(MonomialTerm term) { objective_.terms.push_back(std::move(term)); }
  void add_inequality(Posynomial p) { inequalities_.push_back(std::move(p)); }
  void add_equality(MonomialTerm m) { equalities_.push_back(std::move(m)); }

  std::size_t num_variables() const { return names_.size(); }
  const std::vector<std::string>& variable_names() const { return names_; }
  const Posynomial& objective() const { return objective_; }
  const std::vector<Posynomial>& inequalities() const { return inequalities_; }
  const std::vector<MonomialTerm>& equalities() const { return equalities_; }

  /// Throws std::invalid_argument on references to undeclared variables,
  /// empty inequality posynomials or non-finite data.
  void validate() const;

 private:
  std::vector<std::string> names_;
  Posynomial objective_;
  std::vector<Posynomial> inequalities_;
  std::vector<MonomialTerm> equalities_;
};

/// log of the posynomial at x = exp(u), evaluated with max-subtraction.
double log_posynomial(const Posynomial& p, std::span<const double> log_point);
/// log of the monomial at x = exp(u).
double log_monomial(const MonomialTerm& m, std::span<const double> log_point);
/// Value of the posynomial at x (x > 0).
double evaluate_posynomial(const Posynomial& p, std::span<const double> point);

// ---------------------------------------------------------------------------
// Log-space form. With u = log x a monomial becomes exp(a.u + b), a posynomial
// becomes a log-sum-exp of affine functions, and a monomial equality becomes
// the affine equation a.u = -b.

struct AffineTerm {
  std::vector<std::pair<std::size_t, double>> coeffs;  // sparse, sorted by index
  double offset = 0.0;

  double value(std::span<const double> u) const;
};

struct LogSumExp {
  std::vector<AffineTerm> terms;
};

struct LogSpaceProblem {
  std::size_t dimension = 0;
  LogSumExp objective;
  std::vector<LogSumExp> inequalities;  // each lse(...) <= 0
};

/// Solution set of the log-space equalities parametrized as u = lift(w).
struct EqualityElimination {
  bool consistent = true;
  std::size_t rank = 0;
  /// Largest violated right-hand side when inconsistent.
  double inconsistency = 0.0;
  /// u_k = map[k].value(w) for every original variable k.
  std::vector<AffineTerm> map;
  /// Original variables kept as free coordinates, in w order.
  std::vector<std::size_t> free_variables;
  /// Objective and inequalities rewritten in w.
  LogSpaceProblem reduced;

  std::vector<double> lift(std::span<const double> w) const;
};

/// Eliminates A u = b by Gauss-Jordan reduction with complete pivoting.
/// Rank deficiency is detected with the relative pivot threshold
/// rank_tol * max|A|; zero rows with |b| > eq_tol mark the system inconsistent.
EqualityElimination eliminate_equalities(const GeometricProgram& gp, double eq_tol = 1e-10,
                                         double rank_tol = 1e-12);

/// Log-space form without elimination (equalities ignored).
LogSpaceProblem to_log_space(const GeometricProgram& gp);

/// Debug text of the log-space problem: equality matrix and term exponent tables.
void dump_log_space(const GeometricProgram& gp, std::ostream& os);

// ---------------------------------------------------------------------------

enum class GpStatus { Optimal, Infeasible, UnboundedBelow, MaxIterations };

const char* to_string(GpStatus status);

struct SolverOptions {
  double feas_tol = 1e-8;
  double eq_tol = 1e-10;
  /// Target bound on the relative suboptimality of the objective (barrier gap).
  double opt_tol = 1e-8;
  /// Newton steps allowed per centering problem.
  int max_iter = 200;
  /// UnboundedBelow once log(objective) drops to this value.
  double objective_floor = -1e12;
};

struct GpSolution {
  GpStatus status = GpStatus::MaxIterations;
  std::optional<double> optimum;
  /// Positive point, one entry per variable; empty unless Optimal.
  std::vector<double> point;
  int iterations = 0;
  double equality_residual = 0.0;
  double kkt_residual = 0.0;
  /// Largest log(p(x)) over inequalities at the returned point.
  double max_inequality = 0.0;
  std::string message;

  bool optimal() const { return status == GpStatus::Optimal; }
};

/// Solves the GP through its convex log-space form: equalities are eliminated,
/// a phase-1 problem finds a strictly feasible point, then a log-barrier
/// method with damped Newton centering minimizes log(objective).
/// Throws std::invalid_argument for malformed programs.
GpSolution solve(const GeometricProgram& gp, const SolverOptions& options = {});

/// As solve(), starting the barrier from the given log-space point when it is
/// strictly feasible (it is projected onto the equality set first).
GpSolution solve_from(const GeometricProgram& gp, std::span<const double> log_start,
                      const SolverOptions& options = {});

}  // namespace polybound
