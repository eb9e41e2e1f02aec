#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "polybound/bounds.hpp"
#include "polybound/gp.hpp"
#include "polybound/polynomial.hpp"

namespace polybound::cli {

/// Bad flags, config files or polynomial text. Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Human, Json, Csv };

OutputFormat parse_format(const std::string& text);
const char* to_string(OutputFormat format);

/// Unresolved run settings as read from a config file and flags.
struct RunConfig {
  std::optional<std::string> polynomial;
  std::optional<std::string> file;
  std::optional<std::size_t> n;
  std::optional<int> d;
  /// Empty means all radii 1.
  std::vector<double> radii;
  /// "singletons", "one-block", "none" or blocks such as "1,2;3".
  std::string partition = "one-block";
  SolverOptions solver = BoundOptions{}.solver;
  OutputFormat format = OutputFormat::Human;
  std::size_t budget = 10000;
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
};

/// RunConfig fields present in `j` replace those in `base`. Unknown keys are errors.
RunConfig merge_config(RunConfig base, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// A config with text, n, d and the constraint system resolved.
struct ResolvedConfig {
  Polynomial f;
  int d = 2;
  ConstraintSystem cs;
  BoundOptions options;
  RunConfig raw;
};

ResolvedConfig resolve(const RunConfig& config);

/// Largest k with x<k> in the text; 0 if no variable occurs.
std::size_t infer_num_variables(const std::string& text);

/// Blocks of a partition spec, 0-based. "none" gives no blocks.
std::vector<std::vector<std::size_t>> parse_partition(const std::string& spec, std::size_t n);

std::vector<double> parse_real_list(const std::string& text);
std::vector<long long> parse_int_list(const std::string& text);

}  // namespace polybound::cli
