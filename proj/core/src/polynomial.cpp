#include "polybound/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

namespace polybound {

ExponentVector::ExponentVector(std::initializer_list<int> entries) : entries_(entries) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("exponent entries must be nonnegative");
  }
}

ExponentVector::ExponentVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("exponent entries must be nonnegative");
  }
}

ExponentVector ExponentVector::pure_power(std::size_t n, std::size_t i, int d) {
  ExponentVector alpha(n);
  alpha.set(i, d);
  return alpha;
}

void ExponentVector::set(std::size_t i, int value) {
  if (value < 0) throw std::invalid_argument("exponent entries must be nonnegative");
  entries_.at(i) = value;
}

int ExponentVector::degree() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

bool ExponentVector::all_even() const {
  return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e % 2 == 0; });
}

std::size_t ExponentVector::pure_power_index() const {
  std::size_t found = entries_.size();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] == 0) continue;
    if (found != entries_.size()) return entries_.size();
    found = i;
  }
  return found;
}

bool GradedLexLess::operator()(const ExponentVector& a, const ExponentVector& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  const auto ea = a.entries();
  const auto eb = b.entries();
  // Larger power of x1 ranks higher, so it compares as "greater".
  return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

Polynomial Polynomial::constant(std::size_t n, double value) {
  Polynomial p(n);
  p.add_term(ExponentVector(n), value);
  return p;
}

void Polynomial::add_term(const ExponentVector& alpha, double c) {
  if (alpha.size() != n_) {
    throw std::invalid_argument("exponent vector has length " + std::to_string(alpha.size()) +
                                ", expected " + std::to_string(n_));
  }
  if (!std::isfinite(c)) throw std::invalid_argument("coefficient must be finite");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::coefficient(const ExponentVector& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const { return coefficient(ExponentVector(n_)); }

int Polynomial::degree() const {
  // The map is graded, so the last key has maximal degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

namespace {

double int_power(double base, int e) {
  double result = 1.0;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

}  // namespace

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != n_) {
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n_));
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double term = c;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha[i] != 0) term *= int_power(x[i], alpha[i]);
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.n_ != n_) throw std::invalid_argument("variable count mismatch");
  Polynomial result = *this;
  for (const auto& [alpha, c] : other.terms_) result.add_term(alpha, c);
  return result;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other.scaled(-1.0); }

Polynomial Polynomial::scaled(double factor) const {
  Polynomial result(n_);
  if (factor == 0.0) return result;
  for (const auto& [alpha, c] : terms_) result.add_term(alpha, c * factor);
  return result;
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format real");
  return std::string(buf, end);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [alpha, c] = *it;
    const bool negative = std::signbit(c);
    const double magnitude = std::fabs(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;

    std::string monomial;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha[i] == 0) continue;
      if (!monomial.empty()) monomial += "*";
      monomial += "x" + std::to_string(i + 1);
      if (alpha[i] != 1) monomial += "^" + std::to_string(alpha[i]);
    }
    if (monomial.empty()) {
      out += format_real(magnitude);
    } else if (magnitude == 1.0) {
      out += monomial;
    } else {
      out += format_real(magnitude) + "*" + monomial;
    }
  }
  return out;
}

namespace {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, std::size_t n) : text_(text), n_(n), result_(n) {}

  Polynomial parse() {
    skip_space();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    bool first = true;
    while (true) {
      skip_space();
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      parse_term(sign);
      skip_space();
      if (at_end()) break;
    }
    return std::move(result_);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool starts_number(char ch) { return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.'; }

  void parse_term(double sign) {
    skip_space();
    double coeff = 1.0;
    bool have_coeff = false;
    if (starts_number(peek())) {
      coeff = parse_coefficient();
      have_coeff = true;
      skip_space();
      if (peek() == '*') {
        ++pos_;
        skip_space();
        if (peek() != 'x') throw ParseError("expected variable after '*'", pos_);
      }
    }
    ExponentVector alpha(n_);
    bool have_factor = false;
    while (peek() == 'x') {
      parse_factor(alpha);
      have_factor = true;
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      skip_space();
      if (peek() != 'x') throw ParseError("expected variable after '*'", pos_);
    }
    if (!have_coeff && !have_factor) throw ParseError("expected coefficient or variable", pos_);
    result_.add_term(alpha, sign * coeff);
  }

  double parse_coefficient() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value,
                                     std::chars_format::general);
    if (ec != std::errc() || ptr == text_.data() + pos_) throw ParseError("malformed coefficient", start);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    if (!std::isfinite(value)) throw ParseError("coefficient out of range", start);
    return value;
  }

  long parse_unsigned(const char* what) {
    const std::size_t start = pos_;
    long value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc() || ptr == text_.data() + pos_) throw ParseError(std::string("expected ") + what, start);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  void parse_factor(ExponentVector& alpha) {
    const std::size_t var_pos = pos_;
    ++pos_;  // 'x'
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected variable index", pos_);
    const long index = parse_unsigned("variable index");
    if (index < 1 || static_cast<std::size_t>(index) > n_) {
      throw ParseError("variable index x" + std::to_string(index) + " out of range 1.." + std::to_string(n_),
                       var_pos);
    }
    long exponent = 1;
    skip_space();
    if (peek() == '^') {
      ++pos_;
      skip_space();
      const std::size_t exp_pos = pos_;
      if (peek() == '-') throw ParseError("negative exponent", exp_pos);
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected integer exponent", exp_pos);
      exponent = parse_unsigned("integer exponent");
      if (peek() == '.' || peek() == 'e' || peek() == 'E') throw ParseError("non-integer exponent", exp_pos);
      if (exponent > 1'000'000) throw ParseError("exponent too large", exp_pos);
    }
    const std::size_t i = static_cast<std::size_t>(index - 1);
    alpha.set(i, alpha[i] + static_cast<int>(exponent));
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
  Polynomial result_;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t n) { return PolynomialParser(text, n).parse(); }

}  // namespace polybound
