#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "polybound/gp.hpp"
#include "polybound/oracle.hpp"

using namespace polybound;

namespace {

MonomialTerm mono(double c, std::vector<std::pair<VariableId, double>> e = {}) {
  return MonomialTerm::with_coefficient(c, std::move(e));
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Solve, EqualityConstrainedLemmaCase) {
  // minimize z1 + z2  s.t.  (1/2)^2 * 1 * 1 * z1^-1 z2^-1 = 1
  GeometricProgram gp;
  const auto z1 = gp.add_variable("z1");
  const auto z2 = gp.add_variable("z2");
  gp.add_objective_term(mono(1.0, {{z1, 1.0}}));
  gp.add_objective_term(mono(1.0, {{z2, 1.0}}));
  gp.add_equality(mono(0.25, {{z1, -1.0}, {z2, -1.0}}));
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal()) << s.message;
  EXPECT_NEAR(*s.optimum, 1.0, 1e-8);
  EXPECT_NEAR(s.point[0], 0.5, 1e-6);
  EXPECT_NEAR(s.point[1], 0.5, 1e-6);
  EXPECT_LE(s.equality_residual, 1e-10);
}

TEST(Solve, UnconstrainedMonomialIsUnbounded) {
  GeometricProgram gp;
  const auto z = gp.add_variable("z1");
  gp.add_objective_term(mono(1.0, {{z, 1.0}}));
  const GpSolution s = solve(gp);
  EXPECT_EQ(s.status, GpStatus::UnboundedBelow);
  EXPECT_FALSE(s.optimum.has_value());
}

TEST(Solve, AmGm) {
  GeometricProgram gp;
  const auto z = gp.add_variable("z1");
  gp.add_objective_term(mono(1.0, {{z, 1.0}}));
  gp.add_objective_term(mono(1.0, {{z, -1.0}}));
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(*s.optimum, 2.0, 1e-8);
  EXPECT_NEAR(s.point[0], 1.0, 1e-4);
}

TEST(Solve, InequalityConstrained) {
  // minimize 1/(4z) s.t. z <= 1: optimum 1/4 at z = 1.
  GeometricProgram gp;
  const auto z = gp.add_variable("z");
  gp.add_objective_term(mono(0.25, {{z, -1.0}}));
  gp.add_inequality({{mono(1.0, {{z, 1.0}})}});
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(*s.optimum, 0.25, 1e-9);
  EXPECT_NEAR(s.point[0], 1.0, 1e-8);
  EXPECT_LE(s.max_inequality, 1e-8);
}

TEST(Solve, InfeasibleInequalities) {
  // z <= 1/2 and 1/z <= 1 cannot both hold.
  GeometricProgram gp;
  const auto z = gp.add_variable("z");
  gp.add_objective_term(mono(1.0, {{z, 1.0}}));
  gp.add_inequality({{mono(2.0, {{z, 1.0}})}});
  gp.add_inequality({{mono(1.0, {{z, -1.0}})}});
  EXPECT_EQ(solve(gp).status, GpStatus::Infeasible);
}

TEST(Solve, InconsistentEqualities) {
  GeometricProgram gp;
  const auto z = gp.add_variable("z");
  gp.add_objective_term(mono(1.0, {{z, 1.0}}));
  gp.add_equality(mono(1.0, {{z, 1.0}}));
  gp.add_equality(mono(2.0, {{z, 1.0}}));
  const GpSolution s = solve(gp);
  EXPECT_EQ(s.status, GpStatus::Infeasible);
}

TEST(Solve, FeasibleSetWithoutInterior) {
  // z <= 1 and 1/z <= 1 leave only z = 1.
  GeometricProgram gp;
  const auto z = gp.add_variable("z");
  gp.add_objective_term(mono(3.0, {{z, 2.0}}));
  gp.add_inequality({{mono(1.0, {{z, 1.0}})}});
  gp.add_inequality({{mono(1.0, {{z, -1.0}})}});
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal()) << s.message;
  EXPECT_NEAR(*s.optimum, 3.0, 1e-6);
}

TEST(Solve, FeasibilityOnly) {
  GeometricProgram gp;
  const auto z = gp.add_variable("z");
  gp.add_inequality({{mono(4.0, {{z, 1.0}})}});
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal());
  EXPECT_EQ(*s.optimum, 0.0);
  EXPECT_LE(4.0 * s.point[0], 1.0 + 1e-8);
}

TEST(Solve, UndeclaredVariableThrows) {
  GeometricProgram gp;
  gp.add_variable("z");
  gp.add_objective_term(mono(1.0, {{3, 1.0}}));
  EXPECT_THROW(solve(gp), std::invalid_argument);
  EXPECT_THROW(MonomialTerm::with_coefficient(0.0), std::invalid_argument);
}

TEST(Solve, HugeAndTinyCoefficients) {
  // minimize z + c/z with c = (1/60)^60: optimum 2 sqrt(c) far below double-range products.
  GeometricProgram gp;
  const auto z = gp.add_variable("z");
  const double log_c = 60.0 * std::log(1.0 / 60.0);
  gp.add_objective_term(mono(1.0, {{z, 1.0}}));
  gp.add_objective_term(MonomialTerm::with_log_coefficient(log_c, {{z, -1.0}}));
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal());
  EXPECT_LT(rel_err(std::log(*s.optimum), std::log(2.0) + 0.5 * log_c), 1e-8);
}

TEST(Solve, Determinism) {
  const GeometricProgram gp = lemma_program(ExponentVector{1, 2, 1}, -3.5, 8);
  const GpSolution a = solve(gp);
  const GpSolution b = solve(gp);
  ASSERT_TRUE(a.optimal() && b.optimal());
  EXPECT_NEAR(*a.optimum, *b.optimum, 1e-9);
  EXPECT_EQ(a.point, b.point);
}

TEST(Solve, StartingPointIndependence) {
  const GeometricProgram gp = lemma_program(ExponentVector{2, 1}, 4.0, 6);
  const GpSolution ref = solve(gp);
  ASSERT_TRUE(ref.optimal());
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> start(gp.num_variables());
    for (double& u : start) u = rng.uniform(-3.0, 3.0);
    const GpSolution s = solve_from(gp, start);
    ASSERT_TRUE(s.optimal());
    EXPECT_NEAR(*s.optimum, *ref.optimum, 1e-8 * *ref.optimum);
  }
}

TEST(Solve, ScaleCovariance) {
  const ExponentVector alpha{1, 1, 2};
  const GeometricProgram gp = lemma_program(alpha, 2.5, 6);
  const GpSolution base = solve(gp);
  ASSERT_TRUE(base.optimal());
  for (double kappa : {1e-3, 0.5, 7.0, 1e4}) {
    GeometricProgram scaled;
    for (const auto& name : gp.variable_names()) scaled.add_variable(name);
    for (MonomialTerm t : gp.objective().terms) {
      t.log_coeff += std::log(kappa);
      scaled.add_objective_term(t);
    }
    for (const auto& p : gp.inequalities()) scaled.add_inequality(p);
    for (const auto& e : gp.equalities()) scaled.add_equality(e);
    const GpSolution s = solve(scaled);
    ASSERT_TRUE(s.optimal());
    EXPECT_LT(rel_err(*s.optimum, kappa * *base.optimum), 1e-9);
    for (std::size_t k = 0; k < s.point.size(); ++k) EXPECT_NEAR(s.point[k], base.point[k], 1e-6);
  }
}

TEST(Solve, OptimumMatchesObjectiveAtPoint) {
  const GeometricProgram gp = lemma_program(ExponentVector{3, 1}, -6.0, 10);
  const GpSolution s = solve(gp);
  ASSERT_TRUE(s.optimal());
  EXPECT_LT(rel_err(*s.optimum, evaluate_posynomial(gp.objective(), s.point)), 1e-10);
}

TEST(Eliminate, NoEqualitiesIsIdentity) {
  GeometricProgram gp;
  gp.add_variable("a");
  gp.add_variable("b");
  const EqualityElimination e = eliminate_equalities(gp);
  EXPECT_TRUE(e.consistent);
  EXPECT_EQ(e.rank, 0u);
  EXPECT_EQ(e.reduced.dimension, 2u);
  const std::vector<double> w{0.3, -1.2};
  EXPECT_EQ(e.lift(w), w);
}

TEST(Eliminate, SingleEquality) {
  GeometricProgram gp;
  const auto a = gp.add_variable("a");
  const auto b = gp.add_variable("b");
  gp.add_equality(mono(4.0, {{a, 1.0}, {b, 1.0}}));  // u1 + u2 = log(1/4)
  const EqualityElimination e = eliminate_equalities(gp);
  EXPECT_TRUE(e.consistent);
  EXPECT_EQ(e.rank, 1u);
  EXPECT_EQ(e.reduced.dimension, 1u);
  const std::vector<double> u = e.lift(std::vector<double>{0.7});
  EXPECT_NEAR(u[0] + u[1], std::log(0.25), 1e-14);
}

TEST(Eliminate, ProportionalEqualitiesHaveRankOne) {
  GeometricProgram gp;
  const auto a = gp.add_variable("a");
  const auto b = gp.add_variable("b");
  const auto c = gp.add_variable("c");
  gp.add_equality(mono(2.0, {{a, 1.0}, {b, -1.0}}));
  gp.add_equality(mono(4.0, {{a, 2.0}, {b, -2.0}}));
  const EqualityElimination e = eliminate_equalities(gp);
  EXPECT_TRUE(e.consistent);
  EXPECT_EQ(e.rank, 1u);
  EXPECT_EQ(e.reduced.dimension, 2u);
  (void)c;
}

TEST(Eliminate, InconsistentDetected) {
  GeometricProgram gp;
  const auto a = gp.add_variable("a");
  gp.add_equality(mono(2.0, {{a, 1.0}}));
  gp.add_equality(mono(3.0, {{a, 1.0}}));
  EXPECT_FALSE(eliminate_equalities(gp).consistent);
}

TEST(Dump, ListsVariablesAndTerms) {
  const GeometricProgram gp = lemma_program(ExponentVector{1, 1}, -2.0, 4);
  std::ostringstream os;
  dump_log_space(gp, os);
  EXPECT_NE(os.str().find("variables 2"), std::string::npos);
  EXPECT_NE(os.str().find("objective"), std::string::npos);
}

TEST(LogSpace, PosynomialEvaluation) {
  Posynomial p{{mono(2.0, {{0, 1.0}}), mono(3.0, {{1, -2.0}})}};
  const std::vector<double> x{1.5, 0.5};
  const std::vector<double> u{std::log(1.5), std::log(0.5)};
  EXPECT_NEAR(evaluate_posynomial(p, x), 2.0 * 1.5 + 3.0 * 4.0, 1e-12);
  EXPECT_NEAR(std::exp(log_posynomial(p, u)), 15.0, 1e-12);
}
