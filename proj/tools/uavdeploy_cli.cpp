// Batch driver: run a scenario, compare it with the large-n predictions, or dump plot tables.
//
//   uavdeploy run        --config configs/example1_zero.json [--out DIR] [--seed S] [--resolution R] [-v]
//   uavdeploy compare    --config ... [--out DIR]    exit 1 when a gated comparison fails
//   uavdeploy emit-plots --config ... [--out DIR]
//
// compare and emit-plots reuse records.json from the output directory and run the
// scenario first when it is missing.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uavdeploy/harness/compare.hpp"
#include "uavdeploy/harness/config.hpp"
#include "uavdeploy/harness/plots.hpp"
#include "uavdeploy/harness/records.hpp"
#include "uavdeploy/harness/run.hpp"

namespace fs = std::filesystem;
using namespace uavdeploy;
using namespace uavdeploy::harness;

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("-c,--config", a.config, "scenario config file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", a.out, "output directory (default: $UAVDEPLOY_OUTPUT_ROOT/<id> or ./out/<id>)");
  cmd->add_option("-s,--seed", a.seed, "override solver.seed");
  cmd->add_option("-r,--resolution", a.resolution, "override solver.resolution")->check(CLI::Range(8, 4096));
  cmd->add_flag("-v,--verbose", a.verbosity, "progress on stderr (repeat for more)");
}

RunOptions to_options(const CommonArgs& a) {
  RunOptions o;
  o.out_dir = a.out;
  o.seed = a.seed;
  o.resolution = a.resolution;
  o.verbosity = a.verbosity;
  return o;
}

struct Loaded {
  ScenarioConfig config;
  std::vector<ResultRecord> records;
  fs::path dir;
};

// Records from a previous run in the output directory, or a fresh run.
Loaded load_or_run(const CommonArgs& a) {
  Loaded l;
  l.config = load_config(a.config);
  const RunOptions opt = to_options(a);
  apply_overrides(l.config, opt);
  l.dir = resolve_output_dir(opt.out_dir, l.config.id);
  const fs::path rec = l.dir / "records.json";
  if (fs::exists(rec)) {
    std::ifstream in(rec);
    l.records = read_records_json(in);
    if (a.verbosity > 0) std::cerr << "using " << rec.string() << '\n';
    return l;
  }
  RunOutput out = run_scenario(l.config, opt);
  l.records = std::move(out.records);
  return l;
}

int cmd_run(const CommonArgs& a) {
  const RunOutput out = run_scenario(load_config(a.config), to_options(a));
  std::cout << out.records.size() << " records (" << out.failed << " failed) written to " << out.out_dir.string()
            << '\n';
  return 0;
}

int cmd_compare(const CommonArgs& a) {
  const Loaded l = load_or_run(a);
  AsymptoticPredictor pred(l.config);
  const ComparisonReport rep = compare_with_asymptotics(l.records, pred);
  fs::create_directories(l.dir);
  std::ofstream f(l.dir / "comparison.tsv");
  write_comparison_tsv(f, rep);
  write_comparison_tsv(std::cout, rep);
  if (rep.rows.empty()) std::cout << "no records with a large-n prediction\n";
  return rep.all_pass() ? 0 : 1;
}

int cmd_plots(const CommonArgs& a) {
  const Loaded l = load_or_run(a);
  if (l.records.empty()) {
    std::cerr << "no records to plot\n";
    return 0;
  }
  for (const auto& name : emit_plot_data(l.records, l.dir)) std::cout << (l.dir / name).string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV deployment and trajectory experiments"};
  app.require_subcommand(1);
  CommonArgs run_args, cmp_args, plot_args;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write result tables");
  CLI::App* cmp = app.add_subcommand("compare", "compare results with the large-n predictions");
  CLI::App* plots = app.add_subcommand("emit-plots", "write plot-ready tables");
  add_common(run, run_args);
  add_common(cmp, cmp_args);
  add_common(plots, plot_args);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the exit code of bad configs; --help still exits 0
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (cmp->parsed()) return cmd_compare(cmp_args);
    if (plots->parsed()) return cmd_plots(plot_args);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
