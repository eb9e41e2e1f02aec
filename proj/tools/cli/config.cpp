#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "polybound/support.hpp"

namespace polybound::cli {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

template <class T>
T parse_number(const std::string& token, const char* what) {
  T value{};
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ConfigError(std::string("invalid ") + what + " '" + token + "'");
  }
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string partition_from_json(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_array()) throw ConfigError("partition must be a string or a list of blocks");
  std::string out;
  for (const auto& block : j) {
    if (!block.is_array()) throw ConfigError("partition blocks must be lists of 1-based indices");
    if (!out.empty()) out += ';';
    bool first = true;
    for (const auto& idx : block) {
      if (!idx.is_number_integer()) throw ConfigError("partition indices must be integers");
      if (!first) out += ',';
      out += std::to_string(idx.get<long long>());
      first = false;
    }
  }
  return out;
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "human") return OutputFormat::Human;
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  throw ConfigError("unknown format '" + text + "' (expected human, json or csv)");
}

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Human: return "human";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
  }
  return "human";
}

RunConfig merge_config(RunConfig base, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "polynomial") {
        base.polynomial = value.get<std::string>();
      } else if (key == "file") {
        base.file = value.get<std::string>();
      } else if (key == "n") {
        base.n = value.get<std::size_t>();
      } else if (key == "d") {
        base.d = value.get<int>();
      } else if (key == "radii" || key == "N") {
        base.radii = value.get<std::vector<double>>();
      } else if (key == "partition") {
        base.partition = partition_from_json(value);
      } else if (key == "format") {
        base.format = parse_format(value.get<std::string>());
      } else if (key == "budget") {
        base.budget = value.get<std::size_t>();
      } else if (key == "steps") {
        base.steps = value.get<std::size_t>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "solver") {
        if (!value.is_object()) throw ConfigError("solver must be an object");
        for (const auto& [skey, sval] : value.items()) {
          if (skey == "feas_tol") {
            base.solver.feas_tol = sval.get<double>();
          } else if (skey == "eq_tol") {
            base.solver.eq_tol = sval.get<double>();
          } else if (skey == "opt_tol") {
            base.solver.opt_tol = sval.get<double>();
          } else if (skey == "max_iter") {
            base.solver.max_iter = sval.get<int>();
          } else if (skey == "objective_floor") {
            base.solver.objective_floor = sval.get<double>();
          } else {
            throw ConfigError("unknown solver option '" + skey + "'");
          }
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return merge_config(std::move(base), j);
}

std::size_t infer_num_variables(const std::string& text) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 'x') continue;
    std::size_t j = i + 1;
    std::size_t k = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      k = k * 10 + static_cast<std::size_t>(text[j] - '0');
      ++j;
    }
    if (j > i + 1) best = std::max(best, k);
  }
  return best;
}

std::vector<std::vector<std::size_t>> parse_partition(const std::string& spec, std::size_t n) {
  const std::string s = trim(spec);
  std::vector<std::vector<std::size_t>> blocks;
  if (s == "none") return blocks;
  if (s == "singletons") {
    for (std::size_t i = 0; i < n; ++i) blocks.push_back({i});
    return blocks;
  }
  if (s == "one-block") {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    blocks.push_back(std::move(all));
    return blocks;
  }
  for (const std::string& part : split(s, ';')) {
    std::vector<std::size_t> block;
    for (const std::string& tok : split(part, ',')) {
      const auto k = parse_number<long long>(tok, "partition index");
      if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw ConfigError("partition index " + tok + " is outside 1.." + std::to_string(n));
      }
      block.push_back(static_cast<std::size_t>(k - 1));
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split(text, ',')) out.push_back(parse_number<double>(tok, "number"));
  return out;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  for (const std::string& tok : split(text, ',')) out.push_back(parse_number<long long>(tok, "integer"));
  return out;
}

ResolvedConfig resolve(const RunConfig& config) {
  if (config.polynomial && config.file) throw ConfigError("give either a polynomial or a file, not both");
  std::string text;
  if (config.polynomial) {
    text = *config.polynomial;
  } else if (config.file) {
    text = read_file(*config.file);
  } else {
    throw ConfigError("no polynomial given (use -f or --file)");
  }

  const std::size_t n = config.n ? *config.n : std::max<std::size_t>(1, infer_num_variables(text));
  if (n == 0) throw ConfigError("n must be at least 1");

  ResolvedConfig out{Polynomial(n), 2, {}, {}, config};
  try {
    out.f = parse_polynomial(text, n);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("polynomial: ") + e.what());
  }
  out.d = config.d ? *config.d : default_even_degree(out.f);
  if (out.d < 2 || out.d % 2 != 0) throw ConfigError("d must be an even integer >= 2");
  if (out.d < out.f.degree()) {
    throw ConfigError("d = " + std::to_string(out.d) + " is below deg f = " + std::to_string(out.f.degree()));
  }

  std::vector<double> radii = config.radii;
  if (radii.empty()) radii.assign(n, 1.0);
  if (radii.size() == 1 && n > 1) radii.assign(n, radii.front());
  if (radii.size() != n) throw ConfigError("expected " + std::to_string(n) + " radii, got " + std::to_string(radii.size()));

  out.cs.n = n;
  out.cs.d = out.d;
  out.cs.radii = std::move(radii);
  out.cs.blocks = parse_partition(config.partition, n);
  try {
    out.cs.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out.options.solver = config.solver;
  return out;
}

}  // namespace polybound::cli
