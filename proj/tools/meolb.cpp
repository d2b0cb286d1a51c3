#include <CLI11.hpp>

#include <iostream>

#include "meolb/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = meolb::cli;
  CLI::App app{"MEO constellation download load balancing simulator"};
  app.require_subcommand(1);

  cli::RunFlags flags;
  std::string scenario;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "scenario JSON file")->required();
    sub->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
    sub->add_flag("--seedless-deterministic", flags.deterministic, "evaluate slots on a single thread");
    sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
  };

  CLI::App* run = app.add_subcommand("run", "simulate one arm and write results");
  add_common(run);
  run->add_flag("--no-isl", flags.no_isl, "drop the inter-satellite links");

  CLI::App* compare = app.add_subcommand("compare", "simulate with and without ISL and compare");
  add_common(compare);

  CLI::App* plot = app.add_subcommand("plot", "render SVG figures from a results directory");
  std::string results_dir;
  std::string kind_text;
  std::string plot_out;
  plot->add_option("results_dir", results_dir, "directory written by run or compare")->required();
  plot->add_option("--kind", kind_text, "timeseries, histogram or rain-attenuation")
      ->required()
      ->check(CLI::IsMember({"timeseries", "histogram", "rain-attenuation"}));
  plot->add_option("--out", plot_out, "output directory (default: results_dir)");

  CLI::App* dump = app.add_subcommand("dump-lp", "print one slot's LP in CPLEX LP format");
  int slot = 0;
  bool dump_no_isl = false;
  dump->add_option("scenario", scenario, "scenario JSON file")->required();
  dump->add_option("--slot", slot, "slot index")->capture_default_str();
  dump->add_flag("--no-isl", dump_no_isl, "drop the inter-satellite links");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kBadInput;
  }

  if (*run) return cli::cmd_run(scenario, flags, std::cout, std::cerr);
  if (*compare) return cli::cmd_compare(scenario, flags, std::cout, std::cerr);
  if (*plot) {
    std::optional<std::filesystem::path> out;
    if (!plot_out.empty()) out = plot_out;
    return cli::cmd_plot(results_dir, *cli::parse_plot_kind(kind_text), out, std::cout, std::cerr);
  }
  if (*dump) return cli::cmd_dump_lp(scenario, slot, dump_no_isl, std::cout, std::cerr);
  return cli::kFailure;
}
