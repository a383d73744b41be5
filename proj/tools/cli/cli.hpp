#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nadeg/filtration.hpp"
#include "nadeg/measure.hpp"

namespace nadeg::cli {

enum class Command { dh, report, soliton, rescale, twist_opt, degenerate, distance, cone, check };

std::optional<Command> command_from_string(const std::string& s);
const char* to_string(Command c);

struct JobSpec {
  Command command = Command::check;
  std::string input_path;
  std::string output_path;  // empty: write to the output stream
  std::vector<double> a_values;
  std::optional<std::pair<int, int>> degree_range;
  double tol = 1e-10;
  int threads = 1;
  std::string format = "json";
};

/// Exit status 0 on success, 1 on a domain error, 2 on an input error.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

/// "m1..m2" or a single degree.
std::pair<int, int> parse_degree_range(const std::string& text);

struct ConvergenceRow {
  int m = 0;
  double w1 = 0;
  double q_error = 0;
  double psi_error = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool q_error_monotone = false;  // |Q_m - Q| non-increasing in m
};

/// ν_m (normalized) against `limit` for each degree; n is the ambient dimension.
ConvergenceReport convergence_report(const GradedFiltration& f, const DHMeasure& limit, const std::vector<int>& degrees, int n);
std::string to_csv(const ConvergenceReport& r);

}  // namespace nadeg::cli
