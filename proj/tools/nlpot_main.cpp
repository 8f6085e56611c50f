// Command-line experiment runner: every subcommand reads a declarative JSON
// config, writes CSV/JSON artifacts plus a manifest, and is reproducible from
// (config, seed).
//
// Exit codes: 0 success, 1 validation or runtime failure, 2 solver
// non-convergence (partial artifacts retained).

#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlpot/config.hpp"
#include "nlpot/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nlpot: nonlocal (s,p) potential-theory laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0; // 0: defer to the config's seed
  int threads = 0;

  for (const char* name : {"solve", "capacity", "wiener", "probe", "ineq", "scaling"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed override (0 keeps the config seed)");
    sub->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) nlpot::set_num_threads(threads);

  std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 1;
    }
    nlpot::json config = nlpot::json::parse(in);
    int status = nlpot::run_subcommand(subcommand, config, out_dir, seed);
    if (status == 2) std::cerr << "warning: solver did not converge; artifacts retained\n";
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
