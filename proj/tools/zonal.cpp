// Batch driver: one subcommand per verification, flat key = value configs,
// CSV reports. Exit codes: 0 pass, 1 malformed config, 2 mathematical
// assertion failed, 3 numerical budget not met.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "zonal/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"zonal - numerical workbench for spherical functions on SL(n,R)"};
  app.set_help_flag("--help", "print usage");

  std::string command;
  std::string config_path;
  std::string out_dir = "zonal-out";
  int threads = zonal::default_thread_count();
  std::string seed;

  app.add_option("command", command,
                 "verification to run ('all' or one of the subcommands; see README)");
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_dir, "report/cache output directory");
  app.add_option("--threads", threads, "worker threads for grid scans")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the random-stream seed");

  CLI11_PARSE(app, argc, argv);

  try {
    zonal::RunConfig cfg;
    if (!config_path.empty()) cfg = zonal::RunConfig::load(config_path);

    // CLI flags override config, config fills in what flags omitted
    if (command.empty()) command = cfg.get_string("command", "");
    else cfg.get_string("command", "");  // consume if present
    if (command.empty()) throw zonal::invalid_input("no command given (argument or config key)");
    if (cfg.has("out") && out_dir == "zonal-out") out_dir = cfg.get_string("out", out_dir);
    else cfg.get_string("out", "");
    threads = cfg.has("threads") ? cfg.get_int("threads", threads) : threads;
    if (!seed.empty()) cfg.set("seed", seed);

    if (command == "all") {
      zonal::SuiteOutcome suite = zonal::execute_all(cfg, out_dir, threads);
      for (const std::string& line : suite.summaries) std::printf("%s\n", line.c_str());
      std::printf("all: exit %d\n", suite.exit_code);
      return suite.exit_code;
    }
    zonal::CommandOutcome out = zonal::execute_command(command, cfg, out_dir, threads);
    std::printf("%s\n", out.summary.c_str());
    return out.exit_code;
  } catch (const zonal::invalid_input& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const zonal::numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
