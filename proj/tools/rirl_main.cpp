#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rirl/errors.hpp"
#include "rirl/experiment.hpp"
#include "rirl/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

struct RunArgs {
  std::string config_path;
  std::string seed_range;
  std::string out_dir;
};

void apply_seed_range(rirl::ExperimentConfig& config, const std::string& range) {
  const auto sep = range.find("..");
  if (sep == std::string::npos) throw rirl::ConfigError("seed range must look like a..b");
  const std::uint64_t lo = std::stoull(range.substr(0, sep));
  const std::uint64_t hi = std::stoull(range.substr(sep + 2));
  if (hi < lo) throw rirl::ConfigError("seed range must be nondecreasing");
  config.seeds.clear();
  for (std::uint64_t s = lo; s <= hi; ++s) config.seeds.push_back(s);
}

int run_kind(rirl::ExperimentKind kind, const RunArgs& args) {
  rirl::ExperimentConfig config =
      rirl::config_from_json(rirl::load_json_file(args.config_path));
  if (config.kind != kind) config.kind = kind;
  if (!args.seed_range.empty()) apply_seed_range(config, args.seed_range);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;

  const rirl::RunReport report = rirl::run_experiment(config);
  const int status = rirl::check_bounds(report);
  if (kind == rirl::ExperimentKind::kSpread && !report.rows.empty()) {
    std::printf("spread = %.17g\n", report.rows.front().bound);
  } else {
    std::printf("%s: %zu runs, mean mistakes %.6g, max mistakes %ld, "
                "bounds satisfied %.1f%%, max final error %.6g\n",
                rirl::kind_name(kind).c_str(), report.rows.size(), report.mean_mistakes(),
                report.max_mistakes(), 100.0 * report.fraction_bound_satisfied(),
                report.max_final_error());
  }
  if (!config.out_dir.empty()) {
    std::printf("wrote %s/summary.csv and %s/report.json\n", config.out_dir.c_str(),
                config.out_dir.c_str());
  }
  if (status != 0) std::printf("bound violation detected\n");
  return status == 0 ? kExitOk : kExitBoundViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated inverse reinforcement learning simulation harness"};
  app.require_subcommand(1);

  RunArgs args;
  std::string report_path;

  const std::vector<std::string> kinds = {"identify", "mistakes", "lowerbound", "fixedenv",
                                          "trajectory", "convert", "spread"};
  std::vector<CLI::App*> run_commands;
  for (const std::string& kind : kinds) {
    CLI::App* cmd = app.add_subcommand(kind, "Run the " + kind + " experiment");
    cmd->add_option("--config", args.config_path, "Experiment config (JSON)")->required();
    cmd->add_option("--seed-range", args.seed_range, "Inclusive seed range a..b");
    cmd->add_option("--out", args.out_dir, "Output directory override");
    run_commands.push_back(cmd);
  }
  CLI::App* check_cmd = app.add_subcommand("check", "Re-check bounds of a stored report");
  check_cmd->add_option("--report", report_path, "report.json from a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (check_cmd->parsed()) {
      const rirl::RunReport report =
          rirl::report_from_json(rirl::load_json_file(report_path));
      const int status = rirl::check_bounds(report);
      std::printf("%s\n", status == 0 ? "all bounds satisfied" : "bound violation");
      return status == 0 ? kExitOk : kExitBoundViolation;
    }
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (run_commands[i]->parsed()) {
        return run_kind(rirl::kind_from_name(kinds[i]), args);
      }
    }
    return kExitConfigError;
  } catch (const rirl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const rirl::NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumericalFailure;
  }
}
