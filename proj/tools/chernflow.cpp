// chernflow: run, verify, super-solution and sweep front end.

#include <CLI11.hpp>

#include <iostream>

#include "chernflow/commands.hpp"
#include "chernflow/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Prescribed Chern scalar curvature flow on flat tori"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Kernel variant: scalar or avx2 (default: best available)");

  chernflow::CommandOptions opts;
  std::string level;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opts.config, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", opts.out_dir, "Output directory (default: <config stem>.out)");
  };

  auto* run = app.add_subcommand("run", "Run the flow for one scenario");
  add_config(run);
  run->add_flag("--strict", opts.strict, "Treat certificate failures as check failures");
  run->add_flag("--canonical", opts.canonical, "Omit timing from the summary");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suites");
  verify->add_option("level", level, "quick or full")->required();

  auto* super = app.add_subcommand("supersolution", "Construct a super-solution certificate");
  add_config(super);

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over several runs");
  add_config(sweep);
  sweep->add_option("-j,--jobs", opts.jobs, "Worker threads (default: hardware concurrency)");
  sweep->add_flag("--strict", opts.strict, "Treat certificate failures as check failures");
  sweep->add_flag("--canonical", opts.canonical, "Omit timing from the summaries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!isa.empty()) {
    namespace k = chernflow::kernels;
    if (isa == "scalar") k::select_isa(k::Isa::Scalar);
    else if (isa == "avx2" && k::isa_available(k::Isa::Avx2)) k::select_isa(k::Isa::Avx2);
    else {
      std::cerr << "error: kernel variant '" << isa << "' is not available\n";
      return 1;
    }
  }

  if (*run) return chernflow::cmd_run(opts, std::cout, std::cerr);
  if (*verify) return chernflow::cmd_verify(level, std::cout, std::cerr);
  if (*super) return chernflow::cmd_supersolution(opts, std::cout, std::cerr);
  return chernflow::cmd_sweep(opts, std::cout, std::cerr);
}
