// Command-line driver: run, darcy-study, verify.

#include "aquifer/cli.hpp"
#include "aquifer/error.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace {

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("AQUIFER_LOG_LEVEL")) {
    const auto parsed = spdlog::level::from_str(level);
    if (parsed == spdlog::level::off && std::string(level) != "off") {
      spdlog::warn("unknown AQUIFER_LOG_LEVEL '{}', using info", level);
    } else {
      spdlog::set_level(parsed);
    }
  }
}

aquifer::ScenarioConfig load(const std::string& path, const std::string& output_dir) {
  auto config = aquifer::parse_config(path);
  if (!output_dir.empty()) config.output_dir = output_dir;
  spdlog::debug("configuration:\n{}", aquifer::echo_config(config));
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Groundwater flow and contaminant transport with mixed finite elements"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output_dir;
  std::uint64_t seed = 20240601;
  app.add_option("--output-dir", output_dir, "Directory for output files (overrides output.dir)");
  app.add_option("--seed", seed, "Seed of the randomized property suites");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Solve Darcy, then step the transport scheme");
  run->add_option("config", run_config, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string study_config;
  auto* study = app.add_subcommand("darcy-study", "Manufactured Darcy convergence study");
  study->add_option("config", study_config, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string filter;
  auto* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("--filter", filter, "Only suites whose name contains this text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? aquifer::kExitOk : aquifer::kExitConfig;
  }

  try {
    if (*run) {
      const auto config = load(run_config, output_dir);
      const auto report = aquifer::cmd_run(config);
      spdlog::info("{} steps, tau = {:.6g}, min c = {:.3g}, max mass residual = {:.3g}", report.rows.size(),
                   report.tau, report.summary.min_c, report.summary.max_mass_residual);
      for (const auto& t : report.timings) spdlog::debug("{}: {:.3f} s", t.phase, t.seconds);
      spdlog::info("wrote {} files to {}", report.written.size(), config.output_dir.string());
    } else if (*study) {
      const auto config = load(study_config, output_dir);
      const auto result = aquifer::cmd_darcy_study(config);
      std::cout << result.table.to_csv();
      for (const auto& w : result.warnings) spdlog::warn("{}", w);
    } else if (*verify) {
      return aquifer::cmd_verify(seed, filter, std::cout) ? aquifer::kExitOk : aquifer::kExitVerify;
    }
  } catch (const aquifer::ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return aquifer::kExitConfig;
  } catch (const aquifer::MeshError& e) {
    spdlog::error("mesh: {}", e.what());
    return aquifer::kExitConfig;
  } catch (const aquifer::InvalidArgument& e) {
    spdlog::error("invalid scenario: {}", e.what());
    return aquifer::kExitConfig;
  } catch (const aquifer::SolverError& e) {
    spdlog::error("solver: {}", e.what());
    return aquifer::kExitSolver;
  } catch (const aquifer::IoError& e) {
    spdlog::error("output: {}", e.what());
    return aquifer::kExitIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return aquifer::kExitOther;
  }
  return aquifer::kExitOk;
}
