#include <CLI11.hpp>

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nadeg: non-Archimedean functionals and optimal degenerations"};
  app.require_subcommand(1);

  nadeg::cli::JobSpec job;
  std::string degrees;

  for (const char* name : {"dh", "report", "soliton", "rescale", "twist-opt", "degenerate", "distance", "cone", "check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--input", job.input_path, "JSON input document")->required();
    sub->add_option("--output", job.output_path, "write the result here instead of stdout");
    sub->add_option("--a", job.a_values, "exponent a for Q^(a); repeatable");
    sub->add_option("--degrees", degrees, "degree range m1..m2");
    sub->add_option("--tol", job.tol, "tolerance");
    sub->add_option("--threads", job.threads, "worker threads for cell integrals");
    sub->add_option("--format", job.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  job.command = *nadeg::cli::command_from_string(app.get_subcommands().front()->get_name());
  if (!degrees.empty()) {
    try {
      job.degree_range = nadeg::cli::parse_degree_range(degrees);
    } catch (const std::exception& e) {
      std::cerr << "nadeg: " << e.what() << "\n";
      return 2;
    }
  }
  return nadeg::cli::run(job, std::cout, std::cerr);
}
