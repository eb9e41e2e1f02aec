#include "polybound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polybound/support.hpp"

namespace polybound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<std::size_t>> make_blocks(const InstanceSpec& spec, Rng& rng) {
  std::vector<std::vector<std::size_t>> blocks;
  switch (spec.partition) {
    case PartitionPolicy::Singletons:
      for (std::size_t i = 0; i < spec.n; ++i) blocks.push_back({i});
      break;
    case PartitionPolicy::OneBlock: {
      std::vector<std::size_t> all(spec.n);
      std::iota(all.begin(), all.end(), std::size_t{0});
      blocks.push_back(std::move(all));
      break;
    }
    case PartitionPolicy::Given:
      blocks = spec.given_blocks;
      break;
    case PartitionPolicy::Random: {
      std::vector<std::vector<std::size_t>> by_label(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) by_label[rng.below(spec.n)].push_back(i);
      for (auto& b : by_label) {
        if (!b.empty()) blocks.push_back(std::move(b));
      }
      break;
    }
  }
  return blocks;
}

ConstraintSystem make_system(const InstanceSpec& spec, Rng& rng) {
  ConstraintSystem cs;
  cs.n = spec.n;
  cs.d = spec.d;
  cs.radii = spec.radii.empty() ? std::vector<double>(spec.n, 1.0) : spec.radii;
  cs.blocks = make_blocks(spec, rng);
  cs.validate();
  return cs;
}

void check_spec(const InstanceSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("instance needs n >= 1");
  if (spec.d < 2 || spec.d % 2 != 0) throw std::invalid_argument("instance needs even d >= 2");
  if (spec.t == 0) throw std::invalid_argument("instance needs t >= 1");
  if (!(spec.coeff_lo <= spec.coeff_hi)) throw std::invalid_argument("empty coefficient range");
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  // splitmix64 finalizer over the sequence.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (std::uint64_t p : parts) h = mix(h ^ mix(p));
  return h;
}

const char* to_string(PartitionPolicy policy) {
  switch (policy) {
    case PartitionPolicy::Random: return "random";
    case PartitionPolicy::Singletons: return "singletons";
    case PartitionPolicy::OneBlock: return "one-block";
    case PartitionPolicy::Given: return "given";
  }
  return "unknown";
}

ExponentVector random_exponent(std::size_t n, int d, Rng& rng) {
  // Weak compositions of d into n + 1 parts (the last is slack) correspond to
  // choosing n bar positions among n + d slots.
  const std::size_t slots = n + static_cast<std::size_t>(d);
  std::vector<std::size_t> pool(slots);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(slots - k));
    std::swap(pool[k], pool[pick]);
  }
  std::vector<std::size_t> bars(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(bars.begin(), bars.end());
  ExponentVector alpha(n);
  std::size_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t stars = bars[i] - prev;
    alpha.set(i, static_cast<int>(stars));
    prev = bars[i] + 1;
  }
  return alpha;
}

Instance generate_instance(const InstanceSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  Polynomial f(spec.n);
  for (std::size_t k = 0; k < spec.t; ++k) {
    ExponentVector alpha = random_exponent(spec.n, spec.d, rng);
    f.add_term(alpha, rng.uniform(spec.coeff_lo, spec.coeff_hi));
  }
  ConstraintSystem cs = make_system(spec, rng);
  return {std::move(f), std::move(cs)};
}

Polynomial force_nonpositive_diagonal(const Polynomial& f, int d) {
  Polynomial out(f.num_variables());
  for (const auto& [alpha, coeff] : f.terms()) {
    const std::size_t i = alpha.pure_power_index();
    const bool diagonal = i < alpha.size() && alpha[i] == d;
    out.add_term(alpha, diagonal && coeff > 0.0 ? -coeff : coeff);
  }
  return out;
}

Instance generate_diagonal_instance(const InstanceSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  Polynomial f(spec.n);
  f.add_term(ExponentVector(spec.n), rng.uniform(spec.coeff_lo, spec.coeff_hi));
  for (std::size_t i = 0; i < spec.n; ++i) {
    f.add_term(ExponentVector::pure_power(spec.n, i, spec.d), rng.uniform(spec.coeff_lo, spec.coeff_hi));
  }
  ConstraintSystem cs = make_system(spec, rng);
  return {std::move(f), std::move(cs)};
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

/// Point of the unit d-ball in |block| coordinates, scaled by the radii.
void sample_block(const ConstraintSystem& cs, const std::vector<std::size_t>& block, Rng& rng,
                  std::vector<double>& x) {
  const double d = cs.d;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double norm = 0.0;
    for (std::size_t i : block) {
      x[i] = rng.uniform(-1.0, 1.0);
      norm += std::pow(std::fabs(x[i]), d);
    }
    if (norm <= 1.0) {
      for (std::size_t i : block) x[i] *= cs.radii[i];
      return;
    }
  }
  // Low acceptance (large blocks, small d): radial scaling instead.
  double norm = 0.0;
  for (std::size_t i : block) {
    x[i] = rng.uniform(-1.0, 1.0);
    norm += std::pow(std::fabs(x[i]), d);
  }
  const double radius = std::pow(rng.uniform01(), 1.0 / static_cast<double>(block.size()));
  const double scale = norm > 0.0 ? radius / std::pow(norm, 1.0 / d) : 0.0;
  for (std::size_t i : block) x[i] *= scale * cs.radii[i];
}

void project_block(const ConstraintSystem& cs, const std::vector<std::size_t>& block, std::vector<double>& x) {
  double norm = 0.0;
  for (std::size_t i : block) norm += std::pow(std::fabs(x[i]) / cs.radii[i], cs.d);
  if (norm <= 1.0) return;
  const double scale = std::pow(norm, -1.0 / cs.d);
  for (std::size_t i : block) x[i] *= scale;
}

double polish(const Polynomial& f, const ConstraintSystem& cs, const std::vector<std::size_t>& block_of,
              std::vector<double>& x) {
  const std::size_t n = cs.n;
  double best = f.evaluate(x);
  double step = 0.25;
  std::vector<double> trial;
  for (int sweep = 0; sweep < 4000 && step > 1e-10; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (double dir : {1.0, -1.0}) {
        trial = x;
        trial[i] += dir * step * cs.radii[i];
        project_block(cs, cs.blocks[block_of[i]], trial);
        const double v = f.evaluate(trial);
        if (v < best) {
          best = v;
          x.swap(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

SampleEstimate sample_minimize(const Polynomial& f, const ConstraintSystem& cs, std::size_t budget,
                               std::uint64_t seed) {
  cs.validate();
  if (cs.blocks.empty()) throw std::invalid_argument("sampling needs a compact set (at least one block)");
  if (cs.n != f.num_variables()) throw std::invalid_argument("constraint system and polynomial disagree on n");
  if (budget == 0) throw std::invalid_argument("sampling budget must be >= 1");

  const std::size_t n = cs.n;
  std::vector<std::size_t> block_of(n);
  for (std::size_t j = 0; j < cs.blocks.size(); ++j) {
    for (std::size_t i : cs.blocks[j]) block_of[i] = j;
  }

  struct Candidate {
    double value;
    std::vector<double> x;
  };
  constexpr std::size_t kPolish = 5;
  std::vector<Candidate> top;
  auto offer = [&](std::vector<double> x) {
    const double v = f.evaluate(x);
    if (top.size() < kPolish || v < top.back().value) {
      top.push_back({v, std::move(x)});
      std::sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      if (top.size() > kPolish) top.pop_back();
    }
  };

  SampleEstimate est;
  est.scheme = "extremes+rejection-ball+coordinate-polish";
  offer(std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> x(n, 0.0);
      x[i] = sign * cs.radii[i];
      offer(std::move(x));
    }
  }
  est.samples = 1 + 2 * n;

  Rng rng(seed);
  std::vector<double> x(n, 0.0);
  for (std::size_t s = 0; s < budget; ++s) {
    for (const auto& block : cs.blocks) sample_block(cs, block, rng, x);
    offer(x);
  }
  est.samples += budget;

  est.value = kInf;
  for (auto& c : top) {
    std::vector<double> y = c.x;
    polish(f, cs, block_of, y);
    const double v = f.evaluate(y);
    if (v < est.value) {
      est.value = v;
      est.argmin = std::move(y);
    }
  }
  return est;
}

double diagonal_closed_form(const Polynomial& f, const ConstraintSystem& cs) {
  const SupportProfile profile = classify_support(f, cs.d);
  if (!profile.omega.empty()) throw std::invalid_argument("polynomial is not diagonal");
  double value = profile.constant;
  for (const auto& block : cs.blocks) {
    double lowest = 0.0;
    for (std::size_t i : block) lowest = std::min(lowest, profile.diag[i] * std::pow(cs.radii[i], cs.d));
    value += lowest;
  }
  return value;
}

// ---------------------------------------------------------------------------
// Multiplier scan

std::vector<double> lambda_grid(double lambda_max, std::size_t steps, std::vector<double> breakpoints) {
  std::vector<double> grid;
  if (steps == 0) return grid;
  const std::size_t arith = std::max<std::size_t>(1, steps / 2);
  const std::size_t geo = steps - arith;
  grid.reserve(steps + breakpoints.size());
  for (std::size_t k = 0; k < arith; ++k) {
    grid.push_back(arith == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(arith - 1));
  }
  if (lambda_max > 1.0 && geo > 0) {
    const double ratio = std::log(lambda_max);
    for (std::size_t k = 1; k <= geo; ++k) {
      grid.push_back(std::exp(ratio * static_cast<double>(k) / static_cast<double>(geo)));
    }
  }
  for (double b : breakpoints) {
    if (b >= 0.0 && b <= std::max(lambda_max, 1.0)) grid.push_back(b);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double default_lambda_max(const Polynomial& f, std::span<const double> radii) {
  double total = 0.0;
  for (const auto& [alpha, coeff] : f.terms()) {
    double scale = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) scale *= std::pow(radii[i], alpha[i]);
    total += std::fabs(coeff) * scale;
  }
  return 10.0 * (1.0 + total);
}

LambdaScanResult lambda_scan(const Polynomial& f, const ConstraintSystem& cs, std::size_t steps,
                             const BoundOptions& options) {
  cs.validate();
  if (cs.blocks.size() != 1) throw std::invalid_argument("lambda scan needs exactly one block");
  const SupportProfile profile = classify_support(f, cs.d);

  std::vector<double> breakpoints;
  for (std::size_t i = 0; i < cs.n; ++i) {
    const double crossing = -profile.diag[i] * std::pow(cs.radii[i], cs.d);
    if (crossing > 0.0) breakpoints.push_back(crossing);
  }

  const auto bound_at = [&](double lambda) {
    const double lam[] = {lambda};
    const BoundReport r = gp_lower_bound(lagrangian_profile(profile, cs, lam), options);
    return r.finite() ? r.bound : -kInf;
  };

  LambdaScanResult result;
  result.value = -kInf;
  const std::vector<double> grid = lambda_grid(default_lambda_max(f, cs.radii), steps, breakpoints);
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = bound_at(grid[k]);
    if (v == -kInf) {
      ++result.skipped;
      continue;
    }
    ++result.evaluated;
    if (v > result.value) {
      result.value = v;
      result.best_lambda = grid[k];
      best = k;
    }
  }
  result.grid_value = result.value;
  if (result.evaluated == 0) return result;

  // G(lambda) is concave with an interval domain, so golden-section search on
  // the neighbours of the best grid point cannot move away from the maximum.
  const double centre = grid[best];
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
    const double a = hi - ratio * (hi - lo);
    const double b = lo + ratio * (hi - lo);
    const double va = bound_at(a);
    const double vb = bound_at(b);
    for (auto [lambda, v] : {std::pair{a, va}, std::pair{b, vb}}) {
      if (v > result.value) {
        result.value = v;
        result.best_lambda = lambda;
      }
    }
    const bool both_outside = va == -kInf && vb == -kInf;
    if (va < vb || (both_outside && b <= centre)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Closed-form optimum of the single-term programs

namespace {

void check_lemma_args(const ExponentVector& alpha, int d) {
  if (alpha.size() == 0) throw std::invalid_argument("alpha must be nonempty");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= 0) throw std::invalid_argument("every alpha_i must be positive");
  }
  if (alpha.degree() > d) throw std::invalid_argument("|alpha| must not exceed d");
}

}  // namespace

LemmaOptimum lemma_optimum(const ExponentVector& alpha, double f_alpha, int d) {
  check_lemma_args(alpha, d);
  LemmaOptimum out;
  out.argmin.resize(alpha.size());
  const double magnitude = std::fabs(f_alpha);
  out.degenerate = magnitude == 0.0;
  out.value = magnitude;
  for (std::size_t i = 0; i < alpha.size(); ++i) out.argmin[i] = alpha[i] * magnitude / d;
  return out;
}

GeometricProgram lemma_program(const ExponentVector& alpha, double f_alpha, int d) {
  check_lemma_args(alpha, d);
  if (f_alpha == 0.0) throw std::invalid_argument("f_alpha = 0 does not give a geometric program");
  GeometricProgram gp;
  const std::size_t n = alpha.size();
  for (std::size_t i = 0; i < n; ++i) gp.add_variable("z" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) gp.add_objective_term(MonomialTerm::with_coefficient(1.0, {{i, 1.0}}));

  // log of (|f|/d)^d prod alpha_i^alpha_i
  double log_c = d * std::log(std::fabs(f_alpha) / d);
  for (std::size_t i = 0; i < n; ++i) log_c += alpha[i] * std::log(static_cast<double>(alpha[i]));

  const int deg = alpha.degree();
  if (deg < d) {
    const double gap = static_cast<double>(d - deg);
    std::vector<std::pair<VariableId, double>> exps;
    for (std::size_t i = 0; i < n; ++i) exps.emplace_back(i, -alpha[i] / gap);
    gp.add_objective_term(MonomialTerm::with_log_coefficient(std::log(gap) + log_c / gap, std::move(exps)));
  } else {
    std::vector<std::pair<VariableId, double>> exps;
    for (std::size_t i = 0; i < n; ++i) exps.emplace_back(i, -static_cast<double>(alpha[i]));
    gp.add_equality(MonomialTerm::with_log_coefficient(log_c, std::move(exps)));
  }
  return gp;
}

}  // namespace polybound
