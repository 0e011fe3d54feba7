// hardygap: weighted Hardy constants, spectral gaps, and minimizer decay on
// radial model domains.
//
// Subcommands: constants | indicial | hardy | gap | verify | sweep.
// Exit codes: 0 success, 1 config error, 2 solver non-convergence,
// 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "../vendor/CLI11.hpp"
#include "hardygap/hardygap.hpp"

namespace {

namespace fs = std::filesystem;

struct CliArgs {
  std::string config_path;
  std::string out_dir;
  std::string format = "json";
  bool plots = false;
  int jobs = 1;
  std::optional<unsigned long> seed;
  bool no_timestamp = false;
};

hardygap::RunConfig load_or_default(const CliArgs& args) {
  if (!args.config_path.empty()) return hardygap::load_config(args.config_path);
  return hardygap::RunConfig{};
}

/// Writes the report (and artifacts) under --out, or prints to stdout.
void emit_result(const hardygap::CommandResult& result, const CliArgs& args,
                 const std::string& command) {
  const std::string text = args.format == "csv"
                               ? hardygap::report_csv(result.doc)
                               : result.doc.body.dump(2) + "\n";
  if (args.out_dir.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(args.out_dir);
    const std::string ext = args.format == "csv" ? ".csv" : ".json";
    const fs::path path = fs::path(args.out_dir) / (command + ext);
    std::ofstream(path) << text;
    std::cout << "wrote " << path.string() << "\n";
  }
  for (const hardygap::Artifact& a : result.doc.artifacts) {
    if (args.out_dir.empty()) {
      // Without an output directory only the primary document is printed;
      // artifacts need somewhere to live.
      std::cerr << "note: artifact '" << a.filename
                << "' skipped (no --out directory)\n";
      continue;
    }
    const fs::path path = fs::path(args.out_dir) / a.filename;
    std::ofstream(path) << a.content;
    std::cout << "wrote " << path.string() << "\n";
  }
}

void print_verify_summary(const hardygap::CommandResult& result) {
  const auto& r = result.doc.body.at("results");
  for (const auto& c : r.at("checks")) {
    std::cerr << (c.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ")
              << c.at("suite").get<std::string>() << ": "
              << c.at("name").get<std::string>() << " — "
              << c.at("detail").get<std::string>() << "\n";
  }
  std::cerr << r.at("failed").get<int>() << "/" << r.at("total").get<int>()
            << " checks failed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "weighted Hardy constants, spectral gaps, and minimizer decay on radial "
      "model domains"};
  app.require_subcommand(1);

  CliArgs args;
  app.add_option("--config", args.config_path, "configuration file (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", args.out_dir, "output directory for reports/plots");
  app.add_option("--format", args.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--plots", args.plots, "emit SVG plot artifacts");
  app.add_option("--jobs", args.jobs, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  unsigned long seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value,
                                  "seed for the sampling verification suites");
  app.add_flag("--no-timestamp", args.no_timestamp,
               "omit the timestamp for byte-stable reports");

  auto* c_constants = app.add_subcommand("constants", "closed-form constants");
  auto* c_indicial = app.add_subcommand("indicial", "indicial roots");
  auto* c_hardy = app.add_subcommand(
      "hardy", "extrapolated Hardy bound with refinement study and decay fit");
  auto* c_gap = app.add_subcommand("gap", "full gap/existence verdict");
  auto* c_verify = app.add_subcommand("verify", "property verification suites");
  auto* c_sweep = app.add_subcommand("sweep", "batch over an (alpha, p) grid");
  // Global options may be given after the subcommand name.
  for (CLI::App* sub :
       {c_constants, c_indicial, c_hardy, c_gap, c_verify, c_sweep})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) args.seed = seed_value;

  try {
    const hardygap::RunConfig cfg = load_or_default(args);
    hardygap::CommandOptions opt;
    opt.plots = args.plots;
    opt.jobs = args.jobs;
    opt.timestamp = !args.no_timestamp;
    opt.seed_override = args.seed;

    hardygap::CommandResult result;
    std::string name;
    if (c_constants->parsed()) {
      name = "constants";
      result = hardygap::cmd_constants(cfg, opt);
    } else if (c_indicial->parsed()) {
      name = "indicial";
      result = hardygap::cmd_indicial(cfg, opt);
    } else if (c_hardy->parsed()) {
      name = "hardy";
      result = hardygap::cmd_hardy(cfg, opt);
    } else if (c_gap->parsed()) {
      name = "gap";
      result = hardygap::cmd_gap(cfg, opt);
    } else if (c_verify->parsed()) {
      name = "verify";
      result = hardygap::cmd_verify(cfg, opt);
    } else if (c_sweep->parsed()) {
      name = "sweep";
      result = hardygap::cmd_sweep(cfg, opt);
    }

    emit_result(result, args, name);
    if (name == "verify") print_verify_summary(result);
    if (result.exit_code == hardygap::kExitSolver)
      std::cerr << "solver did not converge; see the report diagnostics\n";
    return result.exit_code;
  } catch (const hardygap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hardygap::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hardygap::kExitSolver;
  }
}
