#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "polybound/oracle.hpp"
#include "polybound/polynomial.hpp"
#include "polybound/support.hpp"

using namespace polybound;

namespace {

std::vector<ExponentVector> exponents_of(const std::vector<SupportTerm>& terms) {
  std::vector<ExponentVector> out;
  for (const auto& t : terms) out.push_back(t.alpha);
  return out;
}

Polynomial random_polynomial(std::size_t n, int d, std::size_t t, std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = n;
  spec.d = d;
  spec.t = t;
  spec.seed = seed;
  return generate_instance(spec).f;
}

}  // namespace

TEST(Parse, WorkedExample) {
  const Polynomial f = parse_polynomial("x1^2 - x1", 1);
  EXPECT_EQ(f.num_terms(), 2u);
  EXPECT_EQ(f.coefficient(ExponentVector{2}), 1.0);
  EXPECT_EQ(f.coefficient(ExponentVector{1}), -1.0);
  EXPECT_EQ(f.degree(), 2);
}

TEST(Parse, Zero) {
  const Polynomial f = parse_polynomial("0", 3);
  EXPECT_TRUE(f.is_zero());
  EXPECT_EQ(f.degree(), 0);
  EXPECT_EQ(f.num_variables(), 3u);
}

TEST(Parse, MotivatingExample) {
  const Polynomial f = parse_polynomial("x1^40 + x2^40 + x3^40 - x1*x2*x3", 3);
  EXPECT_EQ(f.num_terms(), 4u);
  EXPECT_EQ(f.degree(), 40);
  EXPECT_EQ(f.coefficient(ExponentVector{1, 1, 1}), -1.0);
}

TEST(Parse, GrammarForms) {
  const Polynomial f = parse_polynomial("3.5*x1^2*x2 - x3^4 + 5", 3);
  EXPECT_EQ(f.coefficient(ExponentVector{2, 1, 0}), 3.5);
  EXPECT_EQ(f.coefficient(ExponentVector{0, 0, 4}), -1.0);
  EXPECT_EQ(f.constant_term(), 5.0);

  EXPECT_EQ(parse_polynomial(" 2 x1 ", 1), parse_polynomial("2*x1", 1));
  EXPECT_EQ(parse_polynomial("-x1+x1", 1).num_terms(), 0u);
  EXPECT_EQ(parse_polynomial("x1*x1", 1).coefficient(ExponentVector{2}), 1.0);
  EXPECT_EQ(parse_polynomial("x1^0", 1).constant_term(), 1.0);
  EXPECT_EQ(parse_polynomial("1e-3*x2", 2).coefficient(ExponentVector{0, 1}), 1e-3);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_polynomial("x1^-2", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x1^1.5", 1), ParseError);
  EXPECT_THROW(parse_polynomial("x3", 2), ParseError);
  EXPECT_THROW(parse_polynomial("x0", 2), ParseError);
  EXPECT_THROW(parse_polynomial("x1 +", 1), ParseError);
  EXPECT_THROW(parse_polynomial("", 1), ParseError);
  EXPECT_THROW(parse_polynomial("y1", 1), ParseError);
  try {
    parse_polynomial("x1 + * x1", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(Evaluate, Examples) {
  const Polynomial f = parse_polynomial("x1^2 - x1", 1);
  EXPECT_EQ(f.evaluate(std::vector<double>{1.0}), 0.0);
  EXPECT_EQ(f.evaluate(std::vector<double>{0.5}), -0.25);
  const Polynomial g = parse_polynomial("x1^40 + x2^40 + x3^40 - x1*x2*x3", 3);
  EXPECT_EQ(g.evaluate(std::vector<double>{1.0, 1.0, 1.0}), 2.0);
  EXPECT_EQ(parse_polynomial("x1^0 + 2", 1).evaluate(std::vector<double>{0.0}), 3.0);
}

TEST(Evaluate, DimensionMismatch) {
  const Polynomial f = parse_polynomial("x1 + x2", 2);
  EXPECT_THROW(f.evaluate(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Evaluate, LinearInCoefficients) {
  Rng rng(11);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Polynomial f = random_polynomial(4, 6, 12, 2 * s);
    const Polynomial g = random_polynomial(4, 6, 12, 2 * s + 1);
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-1.5, 1.5);
    const double lhs = (f + g).evaluate(x);
    const double rhs = f.evaluate(x) + g.evaluate(x);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Print, Canonical) {
  EXPECT_EQ(parse_polynomial("-x1 + x1^2", 1).to_string(), "x1^2 - x1");
  EXPECT_EQ(parse_polynomial("5 - x3^4 + 3.5*x2*x1^2", 3).to_string(), "-x3^4 + 3.5*x1^2*x2 + 5");
  EXPECT_EQ(Polynomial(2).to_string(), "0");
}

TEST(Print, ParseRoundTrip) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Polynomial f = random_polynomial(1 + s % 6, 2 + 2 * static_cast<int>(s % 5), 1 + s % 25, s);
    EXPECT_EQ(parse_polynomial(f.to_string(), f.num_variables()), f) << f.to_string();
  }
}

TEST(Support, WorkedExample) {
  const SupportProfile p = classify_support(parse_polynomial("x1^2 - x1", 1), 2);
  EXPECT_EQ(exponents_of(p.omega), (std::vector<ExponentVector>{ExponentVector{1}}));
  EXPECT_EQ(exponents_of(p.delta), (std::vector<ExponentVector>{ExponentVector{1}}));
  EXPECT_EQ(exponents_of(p.delta_lt), (std::vector<ExponentVector>{ExponentVector{1}}));
  EXPECT_TRUE(p.delta_eq.empty());
  EXPECT_EQ(p.diag, std::vector<double>{1.0});
  EXPECT_EQ(p.constant, 0.0);
}

TEST(Support, Constant) {
  const SupportProfile p = classify_support(parse_polynomial("5", 1), 2);
  EXPECT_TRUE(p.omega.empty());
  EXPECT_TRUE(p.delta.empty());
  EXPECT_EQ(p.constant, 5.0);
}

TEST(Support, MotivatingExample) {
  const SupportProfile p = classify_support(parse_polynomial("x1^40 + x2^40 + x3^40 - x1*x2*x3", 3), 40);
  EXPECT_EQ(exponents_of(p.delta), (std::vector<ExponentVector>{ExponentVector{1, 1, 1}}));
  EXPECT_EQ(exponents_of(p.delta_lt), exponents_of(p.delta));
  EXPECT_EQ(p.diag, (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(Support, DegreeErrors) {
  const Polynomial f = parse_polynomial("x1^4", 1);
  EXPECT_THROW(classify_support(f, 3), std::invalid_argument);
  EXPECT_THROW(classify_support(f, 2), std::invalid_argument);
  EXPECT_THROW(classify_support(parse_polynomial("1", 1), 0), std::invalid_argument);
  EXPECT_NO_THROW(classify_support(f, 6));
}

TEST(Support, DefaultDegree) {
  EXPECT_EQ(default_even_degree(parse_polynomial("7", 1)), 2);
  EXPECT_EQ(default_even_degree(parse_polynomial("x1^3", 1)), 4);
  EXPECT_EQ(default_even_degree(parse_polynomial("x1^40", 1)), 40);
}

TEST(DeltaPrime, Examples) {
  EXPECT_EQ(exponents_of(delta_prime(parse_polynomial("x1^2 - x1", 1))),
            (std::vector<ExponentVector>{ExponentVector{1}}));
  EXPECT_EQ(exponents_of(delta_prime(parse_polynomial("-x1^2", 1))),
            (std::vector<ExponentVector>{ExponentVector{2}}));
  EXPECT_TRUE(delta_prime(parse_polynomial("3", 1)).empty());
}

// Recomputes every set from the definitions and compares.
TEST(Support, MatchesDefinitionsOnRandomPolynomials) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t n = 1 + s % 5;
    const int d = 2 + 2 * static_cast<int>(s % 4);
    const Polynomial f = random_polynomial(n, d, 1 + s % 20, 1000 + s);
    const SupportProfile p = classify_support(f, d);

    std::vector<ExponentVector> omega, delta, lt, eq, dprime;
    std::vector<double> diag(n, 0.0);
    for (const auto& [alpha, c] : f.terms()) {
      const int deg = alpha.degree();
      const bool square = c > 0 && alpha.all_even();
      bool pure = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (alpha == ExponentVector::pure_power(n, i, d)) {
          diag[i] = c;
          pure = true;
        }
      }
      if (deg > 0 && !square) dprime.push_back(alpha);
      if (deg == 0 || pure) continue;
      omega.push_back(alpha);
      if (square) continue;
      delta.push_back(alpha);
      (deg < d ? lt : eq).push_back(alpha);
    }
    EXPECT_EQ(exponents_of(p.omega), omega);
    EXPECT_EQ(exponents_of(p.delta), delta);
    EXPECT_EQ(exponents_of(p.delta_lt), lt);
    EXPECT_EQ(exponents_of(p.delta_eq), eq);
    EXPECT_EQ(p.diag, diag);
    EXPECT_EQ(p.constant, f.constant_term());
    EXPECT_EQ(exponents_of(delta_prime(f)), dprime);

    // delta is contained in delta', and the difference holds only negative x_i^d terms.
    for (const auto& alpha : delta) {
      EXPECT_NE(std::find(dprime.begin(), dprime.end(), alpha), dprime.end());
    }
    for (const auto& alpha : dprime) {
      if (std::find(delta.begin(), delta.end(), alpha) != delta.end()) continue;
      const std::size_t i = alpha.pure_power_index();
      ASSERT_LT(i, n);
      EXPECT_EQ(alpha[i], d);
      EXPECT_LT(f.coefficient(alpha), 0.0);
    }
  }
}
