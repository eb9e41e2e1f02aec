#include "report_io.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "polybound/polynomial.hpp"

namespace polybound {

void to_json(nlohmann::json& j, const GpStats& stats) {
  j = nlohmann::json{{"variables", stats.variables},
                     {"inequalities", stats.inequalities},
                     {"equalities", stats.equalities},
                     {"iterations", stats.iterations},
                     {"wall_ms", stats.wall_ms}};
}

void from_json(const nlohmann::json& j, GpStats& stats) {
  j.at("variables").get_to(stats.variables);
  j.at("inequalities").get_to(stats.inequalities);
  j.at("equalities").get_to(stats.equalities);
  j.at("iterations").get_to(stats.iterations);
  stats.wall_ms = cli::real_from_json(j.at("wall_ms"));
}

void to_json(nlohmann::json& j, const BoundReport& report) {
  j = nlohmann::json{{"bound", cli::real_to_json(report.bound)},
                     {"status", to_string(report.status)},
                     {"kind", to_string(report.kind)},
                     {"c", report.c},
                     {"lambda", report.lambda},
                     {"gp_stats", report.gp_stats},
                     {"solver_status", report.solver_status ? nlohmann::json(to_string(*report.solver_status))
                                                            : nlohmann::json(nullptr)},
                     {"shortcut_applied", report.shortcut_applied},
                     {"certificate_note", report.certificate_note}};
}

void from_json(const nlohmann::json& j, BoundReport& report) {
  report.bound = cli::real_from_json(j.at("bound"));
  report.status = cli::parse_bound_status(j.at("status").get<std::string>());
  report.kind = cli::parse_bound_kind(j.at("kind").get<std::string>());
  report.c.clear();
  for (const auto& v : j.at("c")) report.c.push_back(cli::real_from_json(v));
  report.lambda.clear();
  for (const auto& v : j.at("lambda")) report.lambda.push_back(cli::real_from_json(v));
  j.at("gp_stats").get_to(report.gp_stats);
  const auto& ss = j.at("solver_status");
  if (ss.is_null()) {
    report.solver_status.reset();
  } else {
    report.solver_status = cli::parse_gp_status(ss.get<std::string>());
  }
  j.at("shortcut_applied").get_to(report.shortcut_applied);
  j.at("certificate_note").get_to(report.certificate_note);
}

}  // namespace polybound

namespace polybound::cli {

nlohmann::json real_to_json(double value) {
  if (std::isfinite(value)) return value;
  return format_value(value);
}

double real_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number or one of -inf, inf, nan");
}

BoundStatus parse_bound_status(const std::string& text) {
  for (auto s : {BoundStatus::Finite, BoundStatus::MinusInfinity, BoundStatus::SolverFailure}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown bound status '" + text + "'");
}

BoundKind parse_bound_kind(const std::string& text) {
  for (auto k : {BoundKind::GpRn, BoundKind::Ellipsoid, BoundKind::Trivial, BoundKind::Hypercube}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown bound kind '" + text + "'");
}

GpStatus parse_gp_status(const std::string& text) {
  for (auto s : {GpStatus::Optimal, GpStatus::Infeasible, GpStatus::UnboundedBelow, GpStatus::MaxIterations}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown solver status '" + text + "'");
}

std::string format_value(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  return format_real(value);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void print_report_human(std::ostream& os, const BoundReport& report) {
  os << "bound: " << format_value(report.bound) << '\n';
  os << "status: " << to_string(report.status) << '\n';
  os << "kind: " << to_string(report.kind) << '\n';
  if (!report.c.empty()) {
    os << "c:";
    for (double v : report.c) os << ' ' << format_value(v);
    os << '\n';
  }
  if (!report.lambda.empty()) {
    os << "lambda:";
    for (double v : report.lambda) os << ' ' << format_value(v);
    os << '\n';
  }
  if (report.solver_status) os << "solver: " << to_string(*report.solver_status) << '\n';
  const GpStats& g = report.gp_stats;
  os << "program: " << g.variables << " variables, " << g.inequalities << " inequalities, " << g.equalities
     << " equalities, " << g.iterations << " iterations\n";
  os << "wall time: " << format_value(g.wall_ms) << " ms\n";
  if (report.shortcut_applied) os << "shortcut: applied\n";
  if (!report.certificate_note.empty()) os << "note: " << report.certificate_note << '\n';
}

}  // namespace polybound::cli
