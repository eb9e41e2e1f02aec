#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polybound {

/// Dense exponent vector alpha in N^n, one entry per variable.
class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::size_t n) : entries_(n, 0) {}
  ExponentVector(std::initializer_list<int> entries);
  explicit ExponentVector(std::vector<int> entries);

  /// The pure power x_i^d, i.e. epsilon_i scaled by d.
  static ExponentVector pure_power(std::size_t n, std::size_t i, int d);

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, int value);
  std::span<const int> entries() const { return entries_; }

  /// |alpha|, the total degree.
  int degree() const;
  bool is_zero() const { return degree() == 0; }
  bool all_even() const;
  /// Index i when alpha == d * e_i for some d > 0, otherwise size().
  std::size_t pure_power_index() const;

  bool operator==(const ExponentVector&) const = default;

 private:
  std::vector<int> entries_;
};

/// Graded lexicographic order: total degree first, then lexicographic with
/// x1 most significant.
struct GradedLexLess {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const;
};

/// Thrown by parse_polynomial. position is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Sparse real polynomial in n variables. Zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<ExponentVector, double, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}

  static Polynomial constant(std::size_t n, double value);

  /// Adds c * x^alpha, merging with an existing term. Terms that cancel are removed.
  void add_term(const ExponentVector& alpha, double c);

  std::size_t num_variables() const { return n_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Coefficient of x^alpha, 0 if absent.
  double coefficient(const ExponentVector& alpha) const;
  /// f(0).
  double constant_term() const;
  /// max |alpha| over stored terms, 0 for the zero polynomial.
  int degree() const;

  /// Throws std::invalid_argument if x.size() != num_variables(). Uses 0^0 = 1.
  double evaluate(std::span<const double> x) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial scaled(double factor) const;

  /// Canonical text in descending graded-lex order, e.g. "3.5*x1^2*x2 - x3^4 + 5".
  /// parse_polynomial(to_string(), n) reproduces the polynomial exactly.
  std::string to_string() const;

  bool operator==(const Polynomial&) const = default;

 private:
  std::size_t n_ = 0;
  TermMap terms_;
};

/// Parses the ASCII grammar
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := coeff | [coeff ['*']] factor ('*' factor)*
///   factor := 'x' index ['^' exponent]
/// with 1-based variable indices and nonnegative integer exponents.
/// Whitespace is ignored. Throws ParseError.
Polynomial parse_polynomial(std::string_view text, std::size_t n);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_real(double value);

}  // namespace polybound
