#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "report_io.hpp"

namespace polybound::cli {

namespace {

struct Task {
  std::size_t n;
  int d;
  std::size_t t;
  std::size_t rep;
};

BenchRow run_one(const BenchSpec& spec, const Task& task) {
  InstanceSpec is;
  is.n = task.n;
  is.d = task.d;
  is.t = task.t;
  is.partition = spec.partition;
  is.seed = instance_seed(spec.seed, task.n, task.d, task.t, task.rep);
  const Instance inst = generate_instance(is);

  BenchRow row;
  row.n = task.n;
  row.d = task.d;
  row.t = task.t;
  row.rep = task.rep;
  row.seed = is.seed;
  row.m = inst.cs.num_blocks();
  const BoundReport report = ellipsoid_lower_bound(inst.f, inst.cs, spec.options);
  row.bound = report.bound;
  row.status = report.status;
  row.iterations = report.gp_stats.iterations;
  row.wall_ms = report.gp_stats.wall_ms;
  if (spec.budget > 0) {
    const SampleEstimate est = sample_minimize(inst.f, inst.cs, spec.budget, derive_seed(is.seed, {1}));
    row.sample_min = est.value;
    if (report.finite()) row.gap = est.value - report.bound;
  }
  return row;
}

std::string optional_value(const std::optional<double>& v) { return v ? format_value(*v) : std::string(); }

}  // namespace

std::uint64_t instance_seed(std::uint64_t base, std::size_t n, int d, std::size_t t, std::size_t rep) {
  return derive_seed(base, {n, static_cast<std::uint64_t>(d), t, rep});
}

std::size_t worker_count() {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("POLYBOUND_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) workers = std::min(workers, static_cast<std::size_t>(cap));
  }
  return workers;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec, std::size_t threads) {
  std::vector<Task> tasks;
  for (std::size_t n : spec.ns) {
    for (int d : spec.ds) {
      for (std::size_t t : spec.ts) {
        for (std::size_t rep = 0; rep < spec.repetitions; ++rep) tasks.push_back({n, d, t, rep});
      }
    }
  }
  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        rows[k] = run_one(spec, tasks[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t count = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, tasks.size()));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kBenchCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    os << r.n << ',' << r.d << ',' << r.t << ',' << r.rep << ',' << r.seed << ',' << r.m << ','
       << format_value(r.bound) << ',' << to_string(r.status) << ',' << r.iterations << ','
       << format_value(r.wall_ms) << ',' << optional_value(r.sample_min) << ',' << optional_value(r.gap) << '\n';
  }
}

void write_bench_summary(std::ostream& os, const std::vector<BenchRow>& rows) {
  struct Acc {
    std::size_t count = 0;
    std::size_t finite = 0;
    double sum_ms = 0.0, sum_ms2 = 0.0;
    double sum_bound = 0.0, sum_bound2 = 0.0;
  };
  std::map<std::tuple<std::size_t, int, std::size_t>, Acc> cells;
  std::vector<std::tuple<std::size_t, int, std::size_t>> order;
  for (const BenchRow& r : rows) {
    const auto key = std::make_tuple(r.n, r.d, r.t);
    if (!cells.count(key)) order.push_back(key);
    Acc& a = cells[key];
    ++a.count;
    a.sum_ms += r.wall_ms;
    a.sum_ms2 += r.wall_ms * r.wall_ms;
    if (r.status == BoundStatus::Finite) {
      ++a.finite;
      a.sum_bound += r.bound;
      a.sum_bound2 += r.bound * r.bound;
    }
  }
  auto stdev = [](double s, double s2, std::size_t k) {
    if (k < 2) return 0.0;
    const double mean = s / static_cast<double>(k);
    return std::sqrt(std::max(0.0, (s2 - static_cast<double>(k) * mean * mean) / static_cast<double>(k - 1)));
  };
  os << "n d t reps finite mean_ms stdev_ms mean_bound stdev_bound\n";
  for (const auto& key : order) {
    const Acc& a = cells[key];
    const auto [n, d, t] = key;
    os << n << ' ' << d << ' ' << t << ' ' << a.count << ' ' << a.finite << ' '
       << format_value(a.sum_ms / static_cast<double>(a.count)) << ' ' << format_value(stdev(a.sum_ms, a.sum_ms2, a.count))
       << ' ' << (a.finite ? format_value(a.sum_bound / static_cast<double>(a.finite)) : std::string("nan")) << ' '
       << format_value(stdev(a.sum_bound, a.sum_bound2, a.finite)) << '\n';
  }
}

}  // namespace polybound::cli
