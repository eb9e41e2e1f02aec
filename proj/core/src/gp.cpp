#include "polybound/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

namespace polybound {

MonomialTerm MonomialTerm::with_coefficient(double coeff, std::vector<std::pair<VariableId, double>> exponents) {
  if (!(coeff > 0.0) || !std::isfinite(coeff)) {
    throw std::invalid_argument("monomial coefficient must be positive and finite");
  }
  return {std::log(coeff), std::move(exponents)};
}

MonomialTerm MonomialTerm::with_log_coefficient(double log_coeff,
                                                std::vector<std::pair<VariableId, double>> exponents) {
  if (!std::isfinite(log_coeff)) throw std::invalid_argument("monomial log-coefficient must be finite");
  return {log_coeff, std::move(exponents)};
}

VariableId GeometricProgram::add_variable(std::string name) {
  names_.push_back(std::move(name));
  return names_.size() - 1;
}

namespace {

void validate_term(const MonomialTerm& t, std::size_t num_vars, const char* where) {
  if (!std::isfinite(t.log_coeff)) throw std::invalid_argument(std::string(where) + ": non-finite coefficient");
  for (const auto& [var, exponent] : t.exponents) {
    if (var >= num_vars) {
      throw std::invalid_argument(std::string(where) + ": undeclared variable id " + std::to_string(var));
    }
    if (!std::isfinite(exponent)) throw std::invalid_argument(std::string(where) + ": non-finite exponent");
  }
}

AffineTerm to_affine(const MonomialTerm& t) {
  std::map<std::size_t, double> merged;
  for (const auto& [var, exponent] : t.exponents) merged[var] += exponent;
  AffineTerm a;
  a.offset = t.log_coeff;
  for (const auto& [var, exponent] : merged) {
    if (exponent != 0.0) a.coeffs.emplace_back(var, exponent);
  }
  return a;
}

LogSumExp to_lse(const Posynomial& p) {
  LogSumExp l;
  l.terms.reserve(p.terms.size());
  for (const auto& t : p.terms) l.terms.push_back(to_affine(t));
  return l;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

}  // namespace

void GeometricProgram::validate() const {
  const std::size_t k = names_.size();
  for (const auto& t : objective_.terms) validate_term(t, k, "objective");
  for (const auto& p : inequalities_) {
    if (p.terms.empty()) throw std::invalid_argument("inequality posynomial has no terms");
    for (const auto& t : p.terms) validate_term(t, k, "inequality");
  }
  for (const auto& m : equalities_) validate_term(m, k, "equality");
}

double log_monomial(const MonomialTerm& m, std::span<const double> log_point) {
  double v = m.log_coeff;
  for (const auto& [var, exponent] : m.exponents) v += exponent * log_point[var];
  return v;
}

double log_posynomial(const Posynomial& p, std::span<const double> log_point) {
  std::vector<double> values;
  values.reserve(p.terms.size());
  for (const auto& t : p.terms) values.push_back(log_monomial(t, log_point));
  return log_sum_exp(values);
}

double evaluate_posynomial(const Posynomial& p, std::span<const double> point) {
  std::vector<double> log_point(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) log_point[i] = std::log(point[i]);
  return std::exp(log_posynomial(p, log_point));
}

double AffineTerm::value(std::span<const double> u) const {
  double v = offset;
  for (const auto& [idx, c] : coeffs) v += c * u[idx];
  return v;
}

std::vector<double> EqualityElimination::lift(std::span<const double> w) const {
  std::vector<double> u(map.size());
  for (std::size_t k = 0; k < map.size(); ++k) u[k] = map[k].value(w);
  return u;
}

LogSpaceProblem to_log_space(const GeometricProgram& gp) {
  LogSpaceProblem out;
  out.dimension = gp.num_variables();
  out.objective = to_lse(gp.objective());
  for (const auto& p : gp.inequalities()) out.inequalities.push_back(to_lse(p));
  return out;
}

namespace {

AffineTerm substitute(const AffineTerm& term, const std::vector<AffineTerm>& map) {
  std::map<std::size_t, double> acc;
  AffineTerm out;
  out.offset = term.offset;
  for (const auto& [var, c] : term.coeffs) {
    const AffineTerm& m = map[var];
    out.offset += c * m.offset;
    for (const auto& [w, mc] : m.coeffs) acc[w] += c * mc;
  }
  for (const auto& [w, c] : acc) {
    if (c != 0.0) out.coeffs.emplace_back(w, c);
  }
  return out;
}

LogSumExp substitute(const LogSumExp& l, const std::vector<AffineTerm>& map) {
  LogSumExp out;
  out.terms.reserve(l.terms.size());
  for (const auto& t : l.terms) out.terms.push_back(substitute(t, map));
  return out;
}

}  // namespace

EqualityElimination eliminate_equalities(const GeometricProgram& gp, double eq_tol, double rank_tol) {
  gp.validate();
  const std::size_t k = gp.num_variables();
  const std::size_t p = gp.equalities().size();

  // Row r reads sum_k A(r,k) u_k = rhs(r), from c * x^a = 1.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < p; ++r) {
    const auto& m = gp.equalities()[r];
    for (const auto& [var, exponent] : m.exponents) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(var)) += exponent;
    rhs(static_cast<Eigen::Index>(r)) = -m.log_coeff;
  }

  EqualityElimination out;
  const double scale = p > 0 && k > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
  const double rhs_scale = p > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0;
  const double pivot_tol = rank_tol * std::max(scale, 1.0);

  std::vector<bool> is_pivot_col(k, false);
  std::vector<std::size_t> pivot_col_of_row;
  const auto P = static_cast<Eigen::Index>(p);
  Eigen::Index row = 0;
  for (; row < P; ++row) {
    Eigen::Index best_r = -1, best_c = -1;
    double best = pivot_tol;
    for (Eigen::Index r = row; r < P; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        if (is_pivot_col[c]) continue;
        const double v = std::fabs(a(r, static_cast<Eigen::Index>(c)));
        if (v > best) {
          best = v;
          best_r = r;
          best_c = static_cast<Eigen::Index>(c);
        }
      }
    }
    if (best_r < 0) break;
    a.row(row).swap(a.row(best_r));
    std::swap(rhs(row), rhs(best_r));
    const double piv = a(row, best_c);
    a.row(row) /= piv;
    rhs(row) /= piv;
    a(row, best_c) = 1.0;
    for (Eigen::Index r = 0; r < P; ++r) {
      if (r == row) continue;
      const double factor = a(r, best_c);
      if (factor == 0.0) continue;
      a.row(r) -= factor * a.row(row);
      a(r, best_c) = 0.0;
      rhs(r) -= factor * rhs(row);
    }
    is_pivot_col[static_cast<std::size_t>(best_c)] = true;
    pivot_col_of_row.push_back(static_cast<std::size_t>(best_c));
  }
  out.rank = static_cast<std::size_t>(row);

  for (Eigen::Index r = row; r < P; ++r) {
    const double bound = eq_tol * std::max(1.0, rhs_scale);
    const double v = std::fabs(rhs(r));
    if (v > bound) {
      out.consistent = false;
      out.inconsistency = std::max(out.inconsistency, v);
    }
  }

  std::vector<std::size_t> free_index(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    if (!is_pivot_col[c]) {
      free_index[c] = out.free_variables.size();
      out.free_variables.push_back(c);
    }
  }

  out.map.assign(k, AffineTerm{});
  for (std::size_t c = 0; c < k; ++c) {
    if (!is_pivot_col[c]) out.map[c].coeffs.emplace_back(free_index[c], 1.0);
  }
  for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) {
    const auto R = static_cast<Eigen::Index>(r);
    AffineTerm& m = out.map[pivot_col_of_row[r]];
    m.offset = rhs(R);
    for (std::size_t c = 0; c < k; ++c) {
      if (is_pivot_col[c]) continue;
      const double v = a(R, static_cast<Eigen::Index>(c));
      if (v != 0.0) m.coeffs.emplace_back(free_index[c], -v);
    }
  }

  const LogSpaceProblem full = to_log_space(gp);
  out.reduced.dimension = out.free_variables.size();
  out.reduced.objective = substitute(full.objective, out.map);
  for (const auto& ineq : full.inequalities) out.reduced.inequalities.push_back(substitute(ineq, out.map));
  return out;
}

void dump_log_space(const GeometricProgram& gp, std::ostream& os) {
  const LogSpaceProblem l = to_log_space(gp);
  os << "variables " << gp.num_variables() << "\n";
  for (std::size_t k = 0; k < gp.num_variables(); ++k) os << "  u" << k << " = log " << gp.variable_names()[k] << "\n";
  auto dump_lse = [&os](const LogSumExp& lse) {
    for (const auto& t : lse.terms) {
      os << "    exp(" << t.offset;
      for (const auto& [idx, c] : t.coeffs) os << (c < 0 ? " - " : " + ") << std::fabs(c) << "*u" << idx;
      os << ")\n";
    }
  };
  os << "objective log-sum-exp terms " << l.objective.terms.size() << "\n";
  dump_lse(l.objective);
  for (std::size_t i = 0; i < l.inequalities.size(); ++i) {
    os << "inequality " << i << " log-sum-exp <= 0, terms " << l.inequalities[i].terms.size() << "\n";
    dump_lse(l.inequalities[i]);
  }
  os << "equalities " << gp.equalities().size() << " (A u = b)\n";
  for (const auto& m : gp.equalities()) {
    const AffineTerm a = to_affine(m);
    os << "   ";
    for (const auto& [idx, c] : a.coeffs) os << " " << c << "*u" << idx;
    os << " = " << -a.offset << "\n";
  }
}

const char* to_string(GpStatus status) {
  switch (status) {
    case GpStatus::Optimal: return "Optimal";
    case GpStatus::Infeasible: return "Infeasible";
    case GpStatus::UnboundedBelow: return "UnboundedBelow";
    case GpStatus::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

}  // namespace polybound
