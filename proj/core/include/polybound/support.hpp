#pragma once

#include <vector>

#include "polybound/polynomial.hpp"

namespace polybound {

/// One monomial of f, c * x^alpha.
struct SupportTerm {
  ExponentVector alpha;
  double coeff = 0.0;

  bool operator==(const SupportTerm&) const = default;
};

/// True iff c * x^alpha is the square of a real polynomial: c > 0 and every
/// exponent even. The constant term with c > 0 counts as a square.
bool is_square_term(const ExponentVector& alpha, double coeff);

/// Support sets of f relative to an even degree bound d.
///
/// omega excludes the constant and the pure powers x_i^d. delta holds the
/// omega terms that are not squares; it splits into delta_lt (|alpha| < d)
/// and delta_eq (|alpha| == d). All sets are in ascending graded-lex order.
struct SupportProfile {
  std::size_t n = 0;
  int d = 2;
  std::vector<SupportTerm> omega;
  std::vector<SupportTerm> delta;
  std::vector<SupportTerm> delta_lt;
  std::vector<SupportTerm> delta_eq;
  /// diag[i] is the coefficient of x_i^d.
  std::vector<double> diag;
  double constant = 0.0;
};

/// Throws std::invalid_argument unless d is even, d >= 2 and d >= deg f.
SupportProfile classify_support(const Polynomial& f, int d);

/// All terms with |alpha| > 0 that are not squares. Unlike SupportProfile::delta
/// this keeps x_i^d terms with negative coefficient.
std::vector<SupportTerm> delta_prime(const Polynomial& f);

/// Smallest even d with d >= max(2, deg f).
int default_even_degree(const Polynomial& f);

}  // namespace polybound
