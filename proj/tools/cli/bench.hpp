#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polybound/bounds.hpp"
#include "polybound/oracle.hpp"

namespace polybound::cli {

struct BenchSpec {
  std::vector<std::size_t> ns;
  std::vector<int> ds;
  std::vector<std::size_t> ts;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  /// Sampling budget for sample_min; 0 skips sampling.
  std::size_t budget = 1000;
  PartitionPolicy partition = PartitionPolicy::Random;
  BoundOptions options;
};

struct BenchRow {
  std::size_t n = 0;
  int d = 0;
  std::size_t t = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  double bound = 0.0;
  BoundStatus status = BoundStatus::Finite;
  int iterations = 0;
  double wall_ms = 0.0;
  std::optional<double> sample_min;
  std::optional<double> gap;
};

/// Seed of instance `rep` in cell (n, d, t).
std::uint64_t instance_seed(std::uint64_t base, std::size_t n, int d, std::size_t t, std::size_t rep);

/// Worker count: hardware concurrency capped by POLYBOUND_THREADS, at least 1.
std::size_t worker_count();

/// Rows in cell order (n, then d, then t, then rep) whatever the thread count.
std::vector<BenchRow> run_bench(const BenchSpec& spec, std::size_t threads);

inline constexpr const char* kBenchCsvHeader = "n,d,t,rep,seed,m,bound,status,iterations,wall_ms,sample_min,gap";

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

/// Per-cell mean and standard deviation of wall time and bound.
void write_bench_summary(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace polybound::cli
