#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "polybound/bounds.hpp"
#include "polybound/gp.hpp"
#include "polybound/polynomial.hpp"

namespace polybound {

/// mt19937_64 with portable real and integer draws, so that instances are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Combines a base seed with cell coordinates into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

enum class PartitionPolicy { Random, Singletons, OneBlock, Given };

const char* to_string(PartitionPolicy policy);

struct InstanceSpec {
  std::size_t n = 1;
  int d = 2;
  /// Number of drawn terms; duplicates merge, so the result may have fewer.
  std::size_t t = 1;
  double coeff_lo = -10.0;
  double coeff_hi = 10.0;
  PartitionPolicy partition = PartitionPolicy::Random;
  std::vector<std::vector<std::size_t>> given_blocks;
  /// Empty means all radii 1.
  std::vector<double> radii;
  std::uint64_t seed = 0;
};

struct Instance {
  Polynomial f;
  ConstraintSystem cs;
};

/// Random f with t terms, exponents uniform over { alpha : |alpha| <= d },
/// coefficients uniform in [coeff_lo, coeff_hi]. Random partitions give each
/// index an independent uniform label in 1..n and drop empty blocks.
/// Deterministic in spec.seed.
Instance generate_instance(const InstanceSpec& spec);

/// Uniform draw from { alpha in N^n : |alpha| <= d } by stars and bars.
ExponentVector random_exponent(std::size_t n, int d, Rng& rng);

/// Replaces every positive x_i^d coefficient by its negation.
Polynomial force_nonpositive_diagonal(const Polynomial& f, int d);

/// f(0) + sum_i f_{d,i} x_i^d with random coefficients; the partition follows spec.
Instance generate_diagonal_instance(const InstanceSpec& spec);

/// Best value of f found on K; an upper estimate of inf_K f.
struct SampleEstimate {
  double value = 0.0;
  std::vector<double> argmin;
  std::size_t samples = 0;
  std::string scheme;
};

/// Best of: the origin and the points +-N_i e_i, `budget` random points of K
/// (rejection sampling per block in the unit d-ball), and a projected
/// coordinate-descent polish from the best five. Requires at least one block.
SampleEstimate sample_minimize(const Polynomial& f, const ConstraintSystem& cs, std::size_t budget,
                               std::uint64_t seed);

/// Closed-form value of the constrained bound for diagonal f:
/// f(0) + sum_j min(0, min_{i in I_j} f_{d,i} N_i^d).
double diagonal_closed_form(const Polynomial& f, const ConstraintSystem& cs);

struct LambdaScanResult {
  /// Best unconstrained bound of G(lambda) found: the grid maximum refined by
  /// golden-section search between its grid neighbours; -inf if none is finite.
  double value = 0.0;
  /// Maximum over the grid points alone.
  double grid_value = 0.0;
  double best_lambda = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

/// Grid for single-block multiplier scans: `steps` points split evenly
/// between an arithmetic grid on [0, 1] and a geometric grid on [1, lambda_max],
/// merged with `breakpoints` and sorted.
std::vector<double> lambda_grid(double lambda_max, std::size_t steps, std::vector<double> breakpoints = {});

/// Heuristic scan ceiling 10 (1 + sum_alpha |f_alpha| N^alpha), i.e. the
/// coefficient mass of f after rescaling every variable to radius 1.
double default_lambda_max(const Polynomial& f, std::span<const double> radii);

/// Scans lambda >= 0 for a single-block system. The grid also contains every
/// lambda where some x_i^d coefficient of G(lambda) crosses zero.
LambdaScanResult lambda_scan(const Polynomial& f, const ConstraintSystem& cs, std::size_t steps,
                             const BoundOptions& options = {});

struct LemmaOptimum {
  double value = 0.0;
  std::vector<double> argmin;
  /// f_alpha == 0: the program is not a GP and nothing is solved.
  bool degenerate = false;
};

/// min sum_i z_i + (d-|a|) [ (f/d)^d prod a_i^{a_i} z_i^{-a_i} ]^{1/(d-|a|)} for |a| < d, or
/// min sum_i z_i s.t. (|f|/d)^d prod a_i^{a_i} z_i^{-a_i} = 1 for |a| = d:
/// value |f|, argmin z_i = a_i |f| / d. Throws std::invalid_argument if some
/// a_i <= 0 or |a| > d.
LemmaOptimum lemma_optimum(const ExponentVector& alpha, double f_alpha, int d);

/// The geometric program whose optimum lemma_optimum() predicts. Variable i is z_i.
GeometricProgram lemma_program(const ExponentVector& alpha, double f_alpha, int d);

}  // namespace polybound
