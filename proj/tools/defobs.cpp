// Command line front end: defobs <task> [scenario] [--seed N] [--max-candidates N] [--time-budget S] [--out PATH]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "defobs/scenario.hpp"

namespace {

struct Args {
  std::string input;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_candidates;
  std::optional<double> time_budget;
  std::string out;
};

int execute(defobs::Task task, const Args& args) {
  using namespace defobs;
  std::string text;
  if (args.input.empty() || args.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(args.input);
    if (!in) {
      std::cerr << "error: cannot open " << args.input << "\n";
      return 2;
    }
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    Scenario sc = parse_scenario(text);
    if (args.seed) sc.options.seed = args.seed;
    if (args.max_candidates) sc.options.max_candidates = *args.max_candidates;
    if (args.time_budget) sc.options.time_budget = *args.time_budget;
    if (!args.out.empty()) sc.options.out = args.out;
    std::string report = run_scenario(sc, task);
    if (sc.options.out.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(sc.options.out);
      if (!out) {
        std::cerr << "error: cannot write " << sc.options.out << "\n";
        return 1;
      }
      out << report;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformation obstructions for maps of complexes over small extensions"};
  app.require_subcommand(1);
  Args args;
  std::optional<defobs::Task> chosen;
  for (defobs::Task t : {defobs::Task::Check, defobs::Task::Lift, defobs::Task::Classify, defobs::Task::Oracle,
                         defobs::Task::Tower, defobs::Task::DemoSod}) {
    CLI::App* sub = app.add_subcommand(defobs::to_string(t));
    sub->add_option("scenario", args.input, "scenario file; standard input if omitted or '-'");
    sub->add_option("--seed", args.seed, "seed for the randomized graded lift");
    sub->add_option("--max-candidates", args.max_candidates, "oracle candidate bound");
    sub->add_option("--time-budget", args.time_budget, "oracle time budget in seconds");
    sub->add_option("--out", args.out, "write the report here instead of standard output");
    sub->callback([&chosen, t] { chosen = t; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return execute(*chosen, args);
}
