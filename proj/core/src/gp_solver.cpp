// Log-barrier interior-point method for geometric programs in log space.
//
// After equality elimination the problem is
//   minimize f0(w) = lse(A0 w + b0)   s.t.  fi(w) = lse(Ai w + bi) <= 0,
// with every lse convex. Phase 1 minimizes a slack s with fi(w) <= s to find a
// strictly feasible point; phase 2 follows the central path of
//   t * f0(w) - sum_i log(-fi(w))
// until the duality gap m / t falls below the requested tolerance.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "polybound/gp.hpp"

namespace polybound {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One log-sum-exp function with its terms compressed to the variables it touches.
class Lse {
 public:
  explicit Lse(const LogSumExp& lse) {
    for (const auto& t : lse.terms) {
      for (const auto& [idx, c] : t.coeffs) support_.push_back(idx);
    }
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    terms_.reserve(lse.terms.size());
    for (const auto& t : lse.terms) {
      Term local;
      local.offset = t.offset;
      for (const auto& [idx, c] : t.coeffs) {
        const auto pos = std::lower_bound(support_.begin(), support_.end(), idx) - support_.begin();
        local.coeffs.emplace_back(static_cast<Index>(pos), c);
      }
      terms_.push_back(std::move(local));
    }
    y_.resize(terms_.size());
    p_.resize(terms_.size());
    grad_.resize(static_cast<Index>(support_.size()));
  }

  bool empty() const { return terms_.empty(); }

  double value(const VectorXd& x) const {
    if (terms_.empty()) return -kInf;
    double peak = -kInf;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      y_[k] = affine(terms_[k], x);
      peak = std::max(peak, y_[k]);
    }
    if (!std::isfinite(peak)) return peak;
    double sum = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) sum += std::exp(y_[k] - peak);
    return peak + std::log(sum);
  }

  /// Evaluates value and local gradient; must precede accumulate().
  double evaluate(const VectorXd& x) {
    const double v = value(x);
    grad_.setZero();
    if (!std::isfinite(v)) return v;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      p_[k] = std::exp(y_[k] - v);
      for (const auto& [j, c] : terms_[k].coeffs) grad_(j) += p_[k] * c;
    }
    return v;
  }

  /// grad += sg * g;  H += sh * hess(lse) + sgg * g g^T.
  void accumulate(double sg, double sh, double sgg, VectorXd& grad, MatrixXd& hess) const {
    const auto s = static_cast<Index>(support_.size());
    for (Index a = 0; a < s; ++a) grad(static_cast<Index>(support_[a])) += sg * grad_(a);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const double w = sh * p_[k];
      if (w == 0.0) continue;
      const auto& cs = terms_[k].coeffs;
      for (const auto& [ja, ca] : cs) {
        const auto ga = static_cast<Index>(support_[ja]);
        for (const auto& [jb, cb] : cs) hess(ga, static_cast<Index>(support_[jb])) += w * ca * cb;
      }
    }
    const double outer = sgg - sh;
    if (outer != 0.0) {
      for (Index a = 0; a < s; ++a) {
        const double ga = grad_(a);
        if (ga == 0.0) continue;
        const auto ia = static_cast<Index>(support_[a]);
        for (Index b = 0; b < s; ++b) hess(ia, static_cast<Index>(support_[b])) += outer * ga * grad_(b);
      }
    }
  }

 private:
  struct Term {
    std::vector<std::pair<Index, double>> coeffs;
    double offset = 0.0;
  };

  double affine(const Term& t, const VectorXd& x) const {
    double v = t.offset;
    for (const auto& [j, c] : t.coeffs) v += c * x(static_cast<Index>(support_[static_cast<std::size_t>(j)]));
    return v;
  }

  std::vector<std::size_t> support_;
  std::vector<Term> terms_;
  mutable std::vector<double> y_;
  std::vector<double> p_;
  VectorXd grad_;
};

/// Problem data prepared for repeated evaluation.
struct CompiledProblem {
  Index dimension = 0;
  Lse objective;
  std::vector<Lse> inequalities;

  explicit CompiledProblem(const LogSpaceProblem& p) : dimension(static_cast<Index>(p.dimension)), objective(p.objective) {
    inequalities.reserve(p.inequalities.size());
    for (const auto& l : p.inequalities) inequalities.emplace_back(l);
  }

  /// max_i fi(x), -inf without inequalities.
  double max_inequality(const VectorXd& x) const {
    double worst = -kInf;
    for (const auto& l : inequalities) worst = std::max(worst, l.value(x));
    return worst;
  }
};

enum class PathStatus { Converged, Unbounded, MaxIterations, EarlyStop };

struct PathResult {
  PathStatus status = PathStatus::MaxIterations;
  VectorXd x;
  double gap = kInf;
  double grad_norm = 0.0;
  int iterations = 0;
};

struct PathSettings {
  double gap_target = 1e-8;
  int max_newton = 200;
  double floor = -1e12;
  /// Stop as soon as x(early_index) < early_threshold.
  std::optional<Index> early_index;
  double early_threshold = 0.0;
};

class BarrierPath {
 public:
  BarrierPath(CompiledProblem& problem, const PathSettings& settings) : pb_(problem), settings_(settings) {}

  PathResult run(VectorXd x) {
    PathResult result;
    const auto m = static_cast<double>(pb_.inequalities.size());
    double t = 1.0;
    if (m > 0) {
      // Start near the central path: balance the objective and barrier gradients.
      const double f0 = std::abs(pb_.objective.value(x));
      t = std::clamp(m / std::max(f0, 1.0), 1e-3, 1e3);
    }
    while (true) {
      const CenterStatus cs = center(x, t, result);
      if (cs == CenterStatus::Unbounded) {
        result.status = PathStatus::Unbounded;
        break;
      }
      if (cs == CenterStatus::EarlyStop) {
        result.status = PathStatus::EarlyStop;
        break;
      }
      if (cs == CenterStatus::MaxIterations) {
        result.status = PathStatus::MaxIterations;
        break;
      }
      result.gap = m / t;
      if (m == 0 || result.gap <= settings_.gap_target) {
        result.status = PathStatus::Converged;
        break;
      }
      t *= result.gap > 100.0 * settings_.gap_target ? 20.0 : 10.0;
    }
    result.x = std::move(x);
    return result;
  }

 private:
  enum class CenterStatus { Converged, Stalled, Unbounded, EarlyStop, MaxIterations };

  double barrier_value(const VectorXd& x, double t) const {
    const double f0 = pb_.objective.empty() ? 0.0 : pb_.objective.value(x);
    if (!std::isfinite(f0)) return f0 < 0 ? -kInf : kInf;
    double phi = t * f0;
    for (const auto& l : pb_.inequalities) {
      const double fi = l.value(x);
      if (!(fi < 0.0)) return kInf;
      phi -= std::log(-fi);
    }
    return phi;
  }

  bool early(const VectorXd& x) const {
    return settings_.early_index && x(*settings_.early_index) < settings_.early_threshold;
  }

  CenterStatus center(VectorXd& x, double t, PathResult& result) {
    const Index k = pb_.dimension;
    VectorXd grad(k);
    MatrixXd hess(k, k);
    VectorXd step(k);
    double phi = barrier_value(x, t);
    double previous_decrement = kInf;
    for (int it = 0; it < settings_.max_newton; ++it) {
      if (early(x)) return CenterStatus::EarlyStop;
      grad.setZero();
      hess.setZero();
      if (!pb_.objective.empty()) {
        const double f0 = pb_.objective.evaluate(x);
        if (f0 <= settings_.floor) return CenterStatus::Unbounded;
        pb_.objective.accumulate(t, t, 0.0, grad, hess);
      }
      for (auto& l : pb_.inequalities) {
        const double fi = l.evaluate(x);
        const double inv = 1.0 / (-fi);
        l.accumulate(inv, inv, inv * inv, grad, hess);
      }
      result.grad_norm = grad.lpNorm<Eigen::Infinity>() / t;
      if (k == 0) return CenterStatus::Converged;

      solve_newton(hess, grad, step);
      const double slope = grad.dot(step);
      if (!(slope < 0.0)) {
        // Not a descent direction: fall back to steepest descent.
        step = -grad;
      }
      // Singular Hessians (linear programs in log space) give unbounded steps.
      const double length = step.lpNorm<Eigen::Infinity>();
      const bool capped = length > step_cap_;
      if (capped) step *= step_cap_ / length;
      const double decrement_sq = -grad.dot(step);
      if (decrement_sq / 2.0 <= kNewtonTol) return CenterStatus::Converged;
      // Quadratic convergence has hit the rounding floor of the gradient.
      if (decrement_sq < kQuadraticRegion && decrement_sq > 0.25 * previous_decrement) return CenterStatus::Converged;
      previous_decrement = decrement_sq;

      double s = 1.0;
      VectorXd trial(k);
      double trial_phi = kInf;
      bool accepted = false;
      // Near the center phi is too large to resolve the predicted decrease,
      // so a strictly feasible full step is taken without the Armijo test.
      const bool quadratic = !capped && decrement_sq < kQuadraticRegion;
      for (int ls = 0; ls < 80; ++ls) {
        trial = x + s * step;
        trial_phi = barrier_value(trial, t);
        if (trial_phi == -kInf || trial_phi <= phi - kArmijo * s * decrement_sq ||
            (quadratic && s == 1.0 && trial_phi < kInf)) {
          accepted = true;
          break;
        }
        s *= 0.5;
      }
      ++result.iterations;
      if (!accepted) return CenterStatus::Stalled;
      // Repeated full capped steps point along a recession direction.
      step_cap_ = capped && s == 1.0 ? 2.0 * step_cap_ : kStepCap;
      x.swap(trial);
      if (trial_phi == -kInf) return CenterStatus::Unbounded;
      phi = trial_phi;
      if (!pb_.objective.empty() && pb_.objective.value(x) <= settings_.floor) return CenterStatus::Unbounded;
    }
    if (early(x)) return CenterStatus::EarlyStop;
    return CenterStatus::MaxIterations;
  }

  static void solve_newton(const MatrixXd& hess, const VectorXd& grad, VectorXd& step) {
    Eigen::LLT<MatrixXd> llt(hess);
    if (llt.info() == Eigen::Success) {
      step = llt.solve(-grad);
      if (step.allFinite()) return;
    }
    const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
    MatrixXd ridged = hess;
    for (double ridge = 1e-12; ridge <= 1e-4; ridge *= 100.0) {
      ridged.diagonal() = hess.diagonal().array() + ridge * scale;
      Eigen::LDLT<MatrixXd> ldlt(ridged);
      if (ldlt.info() == Eigen::Success) {
        step = ldlt.solve(-grad);
        if (step.allFinite() && grad.dot(step) < 0.0) return;
      }
    }
    step = -grad;
  }

  static constexpr double kNewtonTol = 1e-12;
  static constexpr double kStepCap = 20.0;
  static constexpr double kQuadraticRegion = 1e-2;
  static constexpr double kArmijo = 0.01;

  CompiledProblem& pb_;
  PathSettings settings_;
  double step_cap_ = kStepCap;
};

LogSpaceProblem phase_one_problem(const LogSpaceProblem& p) {
  const std::size_t slack = p.dimension;
  LogSpaceProblem out;
  out.dimension = p.dimension + 1;
  AffineTerm s_term;
  s_term.coeffs.emplace_back(slack, 1.0);
  out.objective.terms.push_back(s_term);
  for (const auto& l : p.inequalities) {
    LogSumExp shifted = l;
    for (auto& t : shifted.terms) t.coeffs.emplace_back(slack, -1.0);
    out.inequalities.push_back(std::move(shifted));
  }
  return out;
}

LogSpaceProblem relaxed(const LogSpaceProblem& p, double delta) {
  LogSpaceProblem out = p;
  for (auto& l : out.inequalities) {
    for (auto& t : l.terms) t.offset -= delta;
  }
  return out;
}

GpSolution finish(const GeometricProgram& gp, const EqualityElimination& elim, const VectorXd& w,
                  const SolverOptions& options, GpSolution sol) {
  const std::vector<double> wv(w.data(), w.data() + w.size());
  const std::vector<double> u = elim.lift(wv);
  double eq_res = 0.0;
  for (const auto& m : gp.equalities()) eq_res = std::max(eq_res, std::abs(log_monomial(m, u)));
  double worst = -kInf;
  for (const auto& p : gp.inequalities()) worst = std::max(worst, log_posynomial(p, u));
  sol.equality_residual = eq_res;
  sol.max_inequality = gp.inequalities().empty() ? 0.0 : worst;
  double u_scale = 1.0;
  for (double v : u) u_scale = std::max(u_scale, std::abs(v));
  if (eq_res > options.eq_tol * u_scale || sol.max_inequality > options.feas_tol) {
    sol.status = GpStatus::MaxIterations;
    sol.message = "final point violates constraints beyond tolerance";
    return sol;
  }
  sol.point.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) sol.point[k] = std::exp(u[k]);
  sol.optimum = gp.objective().empty() ? 0.0 : std::exp(log_posynomial(gp.objective(), u));
  sol.status = GpStatus::Optimal;
  return sol;
}

GpSolution solve_impl(const GeometricProgram& gp, std::optional<std::span<const double>> log_start,
                      const SolverOptions& options) {
  gp.validate();
  GpSolution sol;
  const EqualityElimination elim = eliminate_equalities(gp, options.eq_tol);
  if (!elim.consistent) {
    sol.status = GpStatus::Infeasible;
    sol.equality_residual = elim.inconsistency;
    sol.message = "monomial equalities are inconsistent";
    return sol;
  }

  const auto dim = static_cast<Index>(elim.reduced.dimension);
  VectorXd w = VectorXd::Zero(dim);
  if (log_start) {
    if (log_start->size() != gp.num_variables()) throw std::invalid_argument("start point has wrong dimension");
    for (Index q = 0; q < dim; ++q) w(q) = (*log_start)[elim.free_variables[static_cast<std::size_t>(q)]];
  }

  LogSpaceProblem problem = elim.reduced;
  CompiledProblem compiled(problem);

  // Phase 1.
  const double start_violation = compiled.max_inequality(w);
  if (!compiled.inequalities.empty() && !(start_violation < 0.0)) {
    const LogSpaceProblem p1 = phase_one_problem(problem);
    CompiledProblem c1(p1);
    VectorXd x1(dim + 1);
    x1.head(dim) = w;
    x1(dim) = start_violation + 1.0;
    PathSettings s1;
    s1.gap_target = 0.1 * options.feas_tol;
    s1.max_newton = options.max_iter;
    s1.floor = -kInf;
    s1.early_index = dim;
    s1.early_threshold = -1e-6;
    BarrierPath path(c1, s1);
    const PathResult r1 = path.run(x1);
    sol.iterations += r1.iterations;
    const double slack = r1.x(dim);
    w = r1.x.head(dim);
    const bool early = r1.status == PathStatus::EarlyStop || r1.status == PathStatus::Unbounded;
    if (!early && r1.status == PathStatus::MaxIterations && slack >= 0.0) {
      sol.status = GpStatus::MaxIterations;
      sol.message = "phase 1 did not converge";
      return sol;
    }
    if (!(slack < 0.0)) {
      const double lower = slack - (std::isfinite(r1.gap) ? r1.gap : 0.0);
      if (lower > options.feas_tol || slack >= options.feas_tol) {
        sol.status = GpStatus::Infeasible;
        sol.max_inequality = slack;
        sol.message = "phase 1 minimum slack " + std::to_string(slack) + " exceeds feas_tol";
        return sol;
      }
      // Feasible set without interior: work on constraints relaxed by feas_tol.
      problem = relaxed(problem, options.feas_tol);
      compiled = CompiledProblem(problem);
      sol.message = "feasible set has empty interior; inequalities relaxed by feas_tol";
    }
  }

  if (gp.objective().empty()) return finish(gp, elim, w, options, sol);

  PathSettings s2;
  s2.gap_target = options.opt_tol;
  s2.max_newton = options.max_iter;
  s2.floor = options.objective_floor;
  BarrierPath path(compiled, s2);
  const PathResult r2 = path.run(w);
  sol.iterations += r2.iterations;
  sol.kkt_residual = (std::isfinite(r2.gap) ? r2.gap : 0.0) + r2.grad_norm;
  if (r2.status == PathStatus::Unbounded) {
    sol.status = GpStatus::UnboundedBelow;
    sol.message = "objective driven below floor along a feasible path";
    return sol;
  }
  if (r2.status == PathStatus::MaxIterations) {
    sol.status = GpStatus::MaxIterations;
    sol.message = "centering did not converge within max_iter Newton steps";
    return sol;
  }
  return finish(gp, elim, r2.x, options, sol);
}

}  // namespace

GpSolution solve(const GeometricProgram& gp, const SolverOptions& options) {
  return solve_impl(gp, std::nullopt, options);
}

GpSolution solve_from(const GeometricProgram& gp, std::span<const double> log_start, const SolverOptions& options) {
  return solve_impl(gp, log_start, options);
}

}  // namespace polybound
