#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polybound/gp.hpp"
#include "polybound/polynomial.hpp"
#include "polybound/support.hpp"

namespace polybound {

/// Product of hyperellipsoids K = { x : sum_{i in I_j} (x_i / N_i)^d <= 1, j = 1..m }.
/// Blocks hold 0-based variable indices. With no blocks K is all of R^n.
struct ConstraintSystem {
  std::size_t n = 0;
  int d = 2;
  std::vector<double> radii;
  std::vector<std::vector<std::size_t>> blocks;

  static ConstraintSystem singletons(std::size_t n, int d, std::vector<double> radii = {});
  static ConstraintSystem one_block(std::size_t n, int d, std::vector<double> radii = {});
  static ConstraintSystem unconstrained(std::size_t n, int d);

  std::size_t num_blocks() const { return blocks.size(); }
  /// Throws std::invalid_argument when the blocks are not a partition of
  /// {0..n-1}, a radius is not positive, or d is not an even integer >= 2.
  void validate() const;
  /// True when every block of this system lies inside a block of coarser.
  bool refines(const ConstraintSystem& coarser) const;
  /// True when x lies in K up to tol on each block constraint.
  bool contains(std::span<const double> x, double tol = 0.0) const;
};

enum class BoundStatus { Finite, MinusInfinity, SolverFailure };
enum class BoundKind { GpRn, Ellipsoid, Trivial, Hypercube };

const char* to_string(BoundStatus status);
const char* to_string(BoundKind kind);

struct GpStats {
  std::size_t variables = 0;
  std::size_t inequalities = 0;
  std::size_t equalities = 0;
  int iterations = 0;
  double wall_ms = 0.0;

  bool operator==(const GpStats&) const = default;
};

struct BoundReport {
  double bound = 0.0;
  BoundStatus status = BoundStatus::Finite;
  BoundKind kind = BoundKind::GpRn;
  /// c_j per block (Ellipsoid and Hypercube kinds).
  std::vector<double> c;
  /// Multipliers lambda_j = mu_j - c_j recovered from the solution.
  std::vector<double> lambda;
  GpStats gp_stats;
  /// Solver outcome when a program was solved.
  std::optional<GpStatus> solver_status;
  /// Hypercube kind: the closed-form shortcut for nonpositive diagonal was used.
  bool shortcut_applied = false;
  std::string certificate_note;

  bool finite() const { return status == BoundStatus::Finite; }
  bool operator==(const BoundReport&) const = default;
};

struct BoundOptions {
  /// Bounds are reported in absolute terms, so the barrier gap is driven
  /// well below the solver's default relative tolerance.
  SolverOptions solver = [] {
    SolverOptions s;
    s.opt_tol = 1e-11;
    return s;
  }();
  /// Hypercube bound: return the trivial bound directly when every x_i^d coefficient is <= 0.
  bool hypercube_shortcut = true;
};

inline constexpr VariableId kNoVariable = static_cast<VariableId>(-1);

/// Outcome of constructing the unconstrained program.
enum class LwVerdict { Program, EmptyFeasible, NoDeltaTerms };

struct LwProgram {
  LwVerdict verdict = LwVerdict::Program;
  std::string reason;
  GeometricProgram gp;
  /// z_vars[k][i] is the variable z_{alpha,i} of profile.delta[k], or kNoVariable when alpha_i = 0.
  std::vector<std::vector<VariableId>> z_vars;
};

struct Lw3Program {
  GeometricProgram gp;
  std::vector<std::vector<VariableId>> z_vars;
  /// mu_j per block; empty when the block has no constraint, so mu_j -> 0 is optimal.
  std::vector<std::optional<VariableId>> mu_vars;
  std::vector<double> c;
};

/// Program for rho(f): structural verdicts are decided analytically before any GP is built.
LwProgram build_lw(const SupportProfile& profile);

/// Lower bound f(0) - rho(f) on R^n.
BoundReport gp_lower_bound(const Polynomial& f, int d, const BoundOptions& options = {});
BoundReport gp_lower_bound(const SupportProfile& profile, const BoundOptions& options = {});

/// c_j = max({0} U { f_{d,i} N_i^d : i in I_j }).
std::vector<double> compute_cj(const SupportProfile& profile, const ConstraintSystem& cs);

Lw3Program build_lw3(const SupportProfile& profile, const ConstraintSystem& cs);

/// Lower bound f(0) + sum_j c_j - rho on the product of hyperellipsoids.
BoundReport ellipsoid_lower_bound(const Polynomial& f, const ConstraintSystem& cs, const BoundOptions& options = {});

/// f(0) - sum_{alpha in delta'(f)} |f_alpha| N^alpha, valid on prod [-N_i, N_i].
double trivial_bound(const Polynomial& f, std::span<const double> radii);

/// Bound on prod [-N_i, N_i] through the singleton partition.
BoundReport hypercube_lower_bound(const Polynomial& f, int d, std::span<const double> radii,
                                  const BoundOptions& options = {});

/// f(N_1 x_1, ..., N_n x_n).
Polynomial scale_variables(const Polynomial& f, std::span<const double> radii);

/// Support profile of G(lambda) = f - sum_j lambda_j g_j: the x_i^d coefficients
/// grow by lambda_j / N_i^d and the constant drops by sum_j lambda_j.
SupportProfile lagrangian_profile(const SupportProfile& profile, const ConstraintSystem& cs,
                                  std::span<const double> lambda);

}  // namespace polybound
