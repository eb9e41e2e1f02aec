#include "polybound/support.hpp"

#include <stdexcept>
#include <string>

namespace polybound {

bool is_square_term(const ExponentVector& alpha, double coeff) { return coeff > 0.0 && alpha.all_even(); }

SupportProfile classify_support(const Polynomial& f, int d) {
  if (d < 2) throw std::invalid_argument("degree bound d must be at least 2, got " + std::to_string(d));
  if (d % 2 != 0) throw std::invalid_argument("degree bound d must be even, got " + std::to_string(d));
  if (d < f.degree()) {
    throw std::invalid_argument("degree bound d = " + std::to_string(d) + " is below deg f = " +
                                std::to_string(f.degree()));
  }

  SupportProfile profile;
  profile.n = f.num_variables();
  profile.d = d;
  profile.diag.assign(profile.n, 0.0);
  profile.constant = f.constant_term();

  for (const auto& [alpha, coeff] : f.terms()) {
    if (alpha.is_zero()) continue;
    const std::size_t i = alpha.pure_power_index();
    if (i < alpha.size() && alpha[i] == d) {
      profile.diag[i] = coeff;
      continue;
    }
    SupportTerm term{alpha, coeff};
    profile.omega.push_back(term);
    if (is_square_term(alpha, coeff)) continue;
    profile.delta.push_back(term);
    if (alpha.degree() < d) {
      profile.delta_lt.push_back(std::move(term));
    } else {
      profile.delta_eq.push_back(std::move(term));
    }
  }
  return profile;
}

std::vector<SupportTerm> delta_prime(const Polynomial& f) {
  std::vector<SupportTerm> out;
  for (const auto& [alpha, coeff] : f.terms()) {
    if (alpha.is_zero() || is_square_term(alpha, coeff)) continue;
    out.push_back({alpha, coeff});
  }
  return out;
}

int default_even_degree(const Polynomial& f) {
  const int deg = f.degree();
  const int d = deg % 2 == 0 ? deg : deg + 1;
  return d < 2 ? 2 : d;
}

}  // namespace polybound
